"""Quasi Renyi divergences, f-divergences and the relative entropy by every method."""
from dataclasses import replace

import numpy as np
import pytest

import config as qconfig
from convex_functions import (chi_squared, hellinger, hockey, power_kernel, relative_entropy as kl,
                              squared_hellinger, total_variation)
from divergences import (F_METHODS, Q_METHODS, RELENT_METHODS, RenyiOrder, d_alpha,
                         f_divergence, hellinger_alpha, q_alpha, q_alpha_sweep,
                         relative_entropy, skew_symmetry_residual)
from errors import BadArgument, MissingSecondDerivative, SupportViolation
from oracles import classical_divergence, petz_q, random_channel, umegaki

KL_COMMUTING = 0.75 * np.log(1.5) + 0.25 * np.log(0.5)


class TestRenyiOrder:

    def test_alpha_one_needs_limit(self):
        with pytest.raises(BadArgument, match="renyi_limit"):
            RenyiOrder(1.0)

    @pytest.mark.parametrize("alpha", [0.0, -1.0, np.inf, np.nan])
    def test_invalid_orders(self, alpha):
        with pytest.raises(BadArgument):
            RenyiOrder(alpha)

    def test_regime(self):
        assert RenyiOrder(0.5).regime == 'below_one'
        assert RenyiOrder(2.0).regime == 'above_one'


class TestQAlpha:

    @pytest.mark.parametrize("method", ['layercake', 'hs_integral', 'onesided'])
    def test_commuting_order_two(self, commuting_pair, method):
        res = q_alpha(*commuting_pair, 2.0, method)
        assert res.value == pytest.approx(1.25, abs=1e-8)
        assert res.converged

    @pytest.mark.parametrize("method", Q_METHODS)
    def test_commuting_order_half_is_petz(self, commuting_pair, method):
        assert q_alpha(*commuting_pair, 0.5, method).value == pytest.approx(0.965926, abs=1e-6)

    def test_d_alpha_commuting(self, commuting_pair):
        assert d_alpha(*commuting_pair, 2.0).value == pytest.approx(np.log(1.25), abs=1e-8)

    def test_pure_state_values(self, plus_pair):
        assert q_alpha(*plus_pair, 0.5).value == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-7)
        assert d_alpha(*plus_pair, 3.0).value == pytest.approx(np.log(2.0), abs=1e-7)

    @pytest.mark.parametrize("alpha", [0.3, 0.7, 1.5, 2.5])
    def test_methods_agree_on_random_pairs(self, full_rank_pairs, alpha):
        methods = [m for m in Q_METHODS if m != 'swapped' or alpha < 1]
        for rho, sigma in full_rank_pairs:
            values = [q_alpha(rho, sigma, alpha, m).value for m in methods]
            assert max(values) - min(values) < 1e-6

    def test_commuting_reduces_to_classical(self, commuting_pairs):
        for rho, sigma in commuting_pairs:
            _, V = np.linalg.eigh(rho)
            p = np.real(np.diag(V.conj().T @ rho @ V))
            q = np.real(np.diag(V.conj().T @ sigma @ V))
            for alpha in (0.5, 2.0):
                assert d_alpha(rho, sigma, alpha).value == pytest.approx(
                    classical_divergence(p, q, alpha), abs=1e-8)

    def test_below_one_without_support(self):
        rho = 0.5 * np.eye(2)
        sigma = np.diag([1.0, 0.0])
        # Q_a = sum over the common support only: 0.5^a * 1^(1-a)
        for method in ('layercake', 'hs_integral', 'onesided', 'swapped'):
            assert q_alpha(rho, sigma, 0.5, method).value == pytest.approx(np.sqrt(0.5), abs=1e-6)

    def test_above_one_without_support(self):
        with pytest.raises(SupportViolation):
            q_alpha(0.5 * np.eye(2), np.diag([1.0, 0.0]), 2.0)

    def test_swapped_needs_order_below_one(self, commuting_pair):
        with pytest.raises(BadArgument):
            q_alpha(*commuting_pair, 2.0, 'swapped')

    def test_unknown_method(self, commuting_pair):
        with pytest.raises(BadArgument):
            q_alpha(*commuting_pair, 2.0, 'simpson')

    def test_hellinger_alpha(self, commuting_pair):
        assert hellinger_alpha(*commuting_pair, 2.0).value == pytest.approx(0.25, abs=1e-8)

    def test_sweep_keeps_input_order(self, commuting_pair):
        rows = q_alpha_sweep(*commuting_pair, [2.0, 0.5], ['layercake', 'onesided'])
        assert [(a, m) for a, m, _ in rows] == [(2.0, 'layercake'), (2.0, 'onesided'),
                                                (0.5, 'layercake'), (0.5, 'onesided')]

    def test_sweep_threaded_matches_serial(self, full_rank_pairs):
        rho, sigma = full_rank_pairs[1]
        serial = q_alpha_sweep(rho, sigma, [0.5, 2.0], ['layercake'])
        threaded = q_alpha_sweep(rho, sigma, [0.5, 2.0], ['layercake'],
                                 qconfig.Config(threads=2))
        for (_, _, a), (_, _, b) in zip(serial, threaded):
            assert a.value == pytest.approx(b.value, abs=1e-12)

    def test_layercake_below_petz_for_alpha_below_one(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            assert q_alpha(rho, sigma, 0.5).value <= petz_q(rho, sigma, 0.5) + 1e-9

    def test_skew_symmetry(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            assert skew_symmetry_residual(rho, sigma, 0.3) < 1e-7


class TestFDivergence:

    @pytest.mark.parametrize("method", F_METHODS)
    def test_kl_commuting(self, commuting_pair, method):
        assert f_divergence(*commuting_pair, kl(), method).value == pytest.approx(KL_COMMUTING, abs=1e-7)

    @pytest.mark.parametrize("method", F_METHODS)
    def test_chi2_commuting(self, commuting_pair, method):
        assert f_divergence(*commuting_pair, chi_squared(), method).value == pytest.approx(0.25, abs=1e-7)

    @pytest.mark.parametrize("method", ['layercake', 'hs_integral', 'shifted'])
    def test_total_variation_commuting(self, commuting_pair, method):
        assert f_divergence(*commuting_pair, total_variation(), method).value == pytest.approx(0.25, abs=1e-9)

    def test_hellinger_two_on_pure_state(self, plus_pair):
        assert f_divergence(*plus_pair, hellinger(2.0)).value == pytest.approx(1.0, abs=1e-7)

    def test_hockey_is_e_gamma(self, commuting_pair):
        # E_1.2 = Tr(rho - 1.2 sigma)_+ = 0.75 - 0.6
        assert f_divergence(*commuting_pair, hockey(1.2)).value == pytest.approx(0.15, abs=1e-10)

    def test_power_kernel_is_q_alpha(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            assert f_divergence(rho, sigma, power_kernel(2.0)).value == pytest.approx(
                q_alpha(rho, sigma, 2.0).value, abs=1e-7)

    @pytest.mark.parametrize("shift", [0.5, 1.0, 2.0])
    def test_shift_invariance(self, full_rank_pairs, shift):
        for rho, sigma in full_rank_pairs:
            base = f_divergence(rho, sigma, squared_hellinger()).value
            assert f_divergence(rho, sigma, squared_hellinger(), 'shifted', shift=shift).value == \
                pytest.approx(base, abs=1e-7)

    def test_data_processing(self, full_rank_pairs):
        rng = np.random.default_rng(42)
        for rho, sigma in full_rank_pairs:
            channel = random_channel(rho.shape[0], 2, 2, rng)
            before = f_divergence(rho, sigma, chi_squared()).value
            after = f_divergence(channel.apply(rho), channel.apply(sigma), chi_squared()).value
            assert after <= before + 1e-8

    def test_nonnegative(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            for f in (kl(), chi_squared(), total_variation(), squared_hellinger()):
                assert f_divergence(rho, sigma, f).value >= -1e-9

    def test_identical_states(self, full_rank_pairs):
        rho, _ = full_rank_pairs[0]
        assert f_divergence(rho, rho, kl()).value == pytest.approx(0.0, abs=1e-10)

    def test_missing_second_derivative(self, commuting_pair):
        spec = total_variation()
        with pytest.raises(MissingSecondDerivative):
            f_divergence(*commuting_pair, replace(spec, second_atoms=()), 'hs_integral')

    def test_support_violation(self):
        with pytest.raises(SupportViolation):
            f_divergence(0.5 * np.eye(2), np.diag([1.0, 0.0]), kl())


class TestRelativeEntropy:

    @pytest.mark.parametrize("method", RELENT_METHODS)
    def test_commuting(self, commuting_pair, method):
        tol = 1e-5 if method == 'renyi_limit' else 1e-8
        assert relative_entropy(*commuting_pair, method).value == pytest.approx(KL_COMMUTING, abs=tol)

    @pytest.mark.parametrize("method", ['projection', 'frenkel', 'layercake'])
    def test_matches_umegaki(self, full_rank_pairs, method):
        for rho, sigma in full_rank_pairs:
            assert relative_entropy(rho, sigma, method).value == pytest.approx(umegaki(rho, sigma), abs=1e-7)

    def test_pure_state(self, plus_pair):
        assert relative_entropy(*plus_pair).value == pytest.approx(np.log(2.0), abs=1e-7)

    def test_generalized_adds_trace_gap(self):
        rho = np.diag([0.5, 0.25])
        sigma = 0.5 * np.eye(2)
        plain = relative_entropy(rho, sigma, 'projection').value
        general = relative_entropy(rho, sigma, 'projection', generalized=True).value
        assert general - plain == pytest.approx(0.25, abs=1e-12)

    def test_unknown_method(self, commuting_pair):
        with pytest.raises(BadArgument):
            relative_entropy(*commuting_pair, 'rs')
