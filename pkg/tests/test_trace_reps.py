"""Operator integral representations and the trace formulas for Q_alpha."""
import numpy as np
import pytest

from divergences import q_alpha
from errors import BadArgument, NotPositiveDefinite
from linalg_core import frechet_dlog, hermitian_function
from oracles import random_full_rank_pair, sandwiched_q
from trace_reps import (change_of_variables_pair, dlog_layer_cake, log_difference_projint,
                        log_difference_resolvent, order_identity_residual, q_alpha_trace)


class TestOperatorIntegrals:

    def test_dlog_layer_cake_matches_loewner(self, full_rank_pairs):
        rng = np.random.default_rng(42)
        for rho, _ in full_rank_pairs:
            d = rho.shape[0]
            B = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            B = 0.5 * (B + B.conj().T)
            res = dlog_layer_cake(rho, B)
            np.testing.assert_allclose(res.op.entries, frechet_dlog(rho, B), atol=1e-6)

    def test_dlog_needs_positive_definite_base(self):
        with pytest.raises(NotPositiveDefinite):
            dlog_layer_cake(np.diag([1.0, 0.0]), np.eye(2))

    def test_change_of_variables(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs[:2]:
            lhs, rhs = change_of_variables_pair(rho, sigma, lambda g: g ** 0.5, h_power_at_0=0.5)
            np.testing.assert_allclose(lhs.op.entries, rhs.op.entries, atol=1e-6)

    def test_log_difference_of_scaled_operator(self):
        B = np.diag([0.6, 0.4])
        res = log_difference_projint(2.0 * B, B)
        np.testing.assert_allclose(res.op.entries, np.log(2.0) * np.eye(2), atol=1e-9)

    def test_log_difference_forms_agree(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            exact = hermitian_function(rho, np.log) - hermitian_function(sigma, np.log)
            np.testing.assert_allclose(log_difference_projint(rho, sigma).op.entries, exact, atol=1e-6)
            np.testing.assert_allclose(log_difference_resolvent(rho, sigma).op.entries, exact, atol=1e-6)


class TestTraceFormulas:

    def test_commuting_order_two(self, commuting_pair):
        assert q_alpha_trace(*commuting_pair, 2.0).value == pytest.approx(1.25, abs=1e-6)

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
    def test_above_one_matches_layercake(self, full_rank_pairs, alpha):
        for rho, sigma in full_rank_pairs:
            assert q_alpha_trace(rho, sigma, alpha).value == pytest.approx(
                q_alpha(rho, sigma, alpha).value, abs=1e-5)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 0.9, 0.95])
    def test_below_one_matches_layercake(self, full_rank_pairs, alpha):
        for rho, sigma in full_rank_pairs:
            assert q_alpha_trace(rho, sigma, alpha).value == pytest.approx(
                q_alpha(rho, sigma, alpha).value, abs=1e-4)

    @pytest.mark.parametrize("alpha", [0.8, 0.9, 0.95])
    def test_slow_tail_near_one_on_qutrits(self, alpha):
        rng = np.random.default_rng(11)
        for _ in range(3):
            rho, sigma = random_full_rank_pair(3, rng)
            res = q_alpha_trace(rho, sigma, alpha)
            assert np.isfinite(res.value)
            assert res.value == pytest.approx(q_alpha(rho, sigma, alpha).value, abs=1e-4)

    def test_singular_rho_is_regularized(self, plus_pair):
        res = q_alpha_trace(*plus_pair, 0.5)
        assert res.details['regularized']
        assert res.value == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-3)

    def test_below_sandwiched(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            assert q_alpha_trace(rho, sigma, 2.0).value <= sandwiched_q(rho, sigma, 2.0) + 1e-6

    def test_order_identity(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs[:2]:
            out = order_identity_residual(rho, sigma, 2.0, full_output=True)
            assert out['residual'] < 1e-6

    def test_order_identity_needs_alpha_above_one(self, commuting_pair):
        with pytest.raises(BadArgument):
            order_identity_residual(*commuting_pair, 0.5)
