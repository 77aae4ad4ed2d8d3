"""Riemann-Stieltjes distributions P and Q of a state pair."""
import numpy as np
import pytest

from convex_functions import chi_squared, relative_entropy, total_variation
from divergences import f_divergence, q_alpha
from errors import BadArgument, SupportViolation
from oracles import umegaki
from quadrature import rs_integrate
from rs_dist import (build_rs_distribution, change_of_measure_residual, f_div_rs,
                     q_alpha_rs, relative_entropy_rs, rs_table)


class TestDistributions:

    def test_commuting_jumps(self, commuting_pair):
        P = build_rs_distribution(*commuting_pair, 'rho')
        Q = build_rs_distribution(*commuting_pair, 'sigma')
        np.testing.assert_allclose(P.jumps, [(0.5, 0.25), (1.5, 0.75)], atol=1e-12)
        np.testing.assert_allclose(Q.jumps, [(0.5, 0.5), (1.5, 0.5)], atol=1e-12)

    def test_step_values(self, commuting_pair):
        P = build_rs_distribution(*commuting_pair, 'rho')
        assert P(0.4) == pytest.approx(0.0, abs=1e-12)
        assert P(0.5) == pytest.approx(0.25)
        assert P(1.0) == pytest.approx(0.25)
        assert P(1.5) == pytest.approx(1.0)

    def test_total_mass(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            for weight in ('rho', 'sigma'):
                dist = build_rs_distribution(rho, sigma, weight)
                assert dist.total_mass == pytest.approx(1.0, abs=1e-9)
                assert dist(dist.support_max) == pytest.approx(1.0, abs=1e-9)
                assert rs_integrate(lambda g: 1.0, dist) == pytest.approx(dist.total_mass, abs=1e-8)

    def test_commuting_mass_is_all_jumps(self, commuting_pairs):
        for rho, sigma in commuting_pairs:
            for weight in ('rho', 'sigma'):
                assert build_rs_distribution(rho, sigma, weight).jump_mass == pytest.approx(1.0, abs=1e-9)

    def test_monotone(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            Q = build_rs_distribution(rho, sigma, 'sigma')
            values = [Q(g) for g in np.linspace(0.0, 1.1 * Q.support_max, 60)]
            assert np.all(np.diff(values) >= -1e-10)

    def test_without_support_sigma_mass_is_complete(self):
        Q = build_rs_distribution(0.5 * np.eye(2), np.diag([1.0, 0.0]), 'sigma')
        assert Q.total_mass == pytest.approx(1.0)
        assert Q(Q.support_max) == pytest.approx(1.0)

    def test_bad_weight(self, commuting_pair):
        with pytest.raises(BadArgument):
            build_rs_distribution(*commuting_pair, 'tau')


class TestIntegrals:

    def test_relative_entropy_commuting(self, commuting_pair):
        assert relative_entropy_rs(*commuting_pair).value == pytest.approx(0.130812, abs=1e-6)

    def test_relative_entropy_pure_state(self, plus_pair):
        assert relative_entropy_rs(*plus_pair).value == pytest.approx(np.log(2.0), abs=1e-9)

    def test_q_alpha_commuting(self, commuting_pair):
        assert q_alpha_rs(*commuting_pair, 2.0).value == pytest.approx(1.25, abs=1e-10)

    @pytest.mark.parametrize("f", [relative_entropy(), chi_squared(), total_variation()],
                             ids=lambda f: f.name)
    def test_f_div_matches_layercake(self, full_rank_pairs, f):
        for rho, sigma in full_rank_pairs:
            assert f_div_rs(rho, sigma, f).value == pytest.approx(
                f_divergence(rho, sigma, f).value, abs=1e-6)

    def test_kl_p_form(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            res = f_div_rs(rho, sigma, relative_entropy())
            assert res.details['p_form'] == pytest.approx(res.value, abs=1e-7)
            assert res.value == pytest.approx(umegaki(rho, sigma), abs=1e-6)

    def test_q_alpha_matches_layercake(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            for a in (0.5, 2.0):
                assert q_alpha_rs(rho, sigma, a).value == pytest.approx(
                    q_alpha(rho, sigma, a).value, abs=1e-6)

    def test_change_of_measure(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            assert change_of_measure_residual(rho, sigma, np.sqrt) < 1e-8

    def test_needs_finite_dmax(self):
        with pytest.raises(SupportViolation):
            f_div_rs(0.5 * np.eye(2), np.diag([1.0, 0.0]), chi_squared())


class TestTable:

    def test_rows_include_jumps(self, commuting_pair):
        rows = rs_table(*commuting_pair, n_grid=10)
        at_half = min(rows, key=lambda row: abs(row['gamma'] - 0.5))
        at_top = min(rows, key=lambda row: abs(row['gamma'] - 1.5))
        assert at_half['jump_P'] == pytest.approx(0.25)
        assert at_top['jump_Q'] == pytest.approx(0.5)
        gammas = [row['gamma'] for row in rows]
        assert gammas == sorted(gammas)
        assert rows[-1]['P'] == pytest.approx(1.0)
        assert set(rows[0]) == {'gamma', 'P', 'Q', 'jump_P', 'jump_Q'}
