"""Variational lower bounds int g dP - int f*(g) dQ."""
import numpy as np
import pytest

from convex_functions import (chi_squared, hellinger, hockey, power_kernel, relative_entropy,
                              total_variation)
from divergences import f_divergence
from duality import (DualWitness, derivative_witness, duality_objective, duality_optimum,
                     random_witness, weak_duality_gap)
from errors import BadArgument
from linalg_core import spectral_profile
from rs_dist import f_div_rs


class TestDualityObjective:

    def test_derivative_witness_commuting(self, commuting_pair):
        obj = duality_objective(*commuting_pair, relative_entropy(),
                                derivative_witness(relative_entropy()))
        assert obj.feasible
        assert obj.value == pytest.approx(0.130812, abs=1e-6)

    def test_zero_witness(self, commuting_pair):
        obj = duality_objective(*commuting_pair, relative_entropy(), DualWitness(lambda g: 0.0))
        assert obj.value == pytest.approx(-np.exp(-1.0), abs=1e-10)

    def test_identical_states(self, full_rank_pairs):
        rho, _ = full_rank_pairs[0]
        assert duality_optimum(rho, rho, relative_entropy()).value == pytest.approx(0.0, abs=1e-9)

    def test_witness_outside_domain_is_minus_infinity(self, commuting_pair):
        obj = duality_objective(*commuting_pair, total_variation(), DualWitness(lambda g: 2.0))
        assert obj.is_minus_infinity
        assert obj.at_most(-1e300)
        assert obj.to_dict()['value'] == '-inf'
        assert obj.violation.value == 2.0

    def test_missing_conjugate(self, commuting_pair):
        with pytest.raises(BadArgument):
            duality_objective(*commuting_pair, power_kernel(0.5), DualWitness(lambda g: 0.0))


class TestDualityOptimum:

    @pytest.mark.parametrize("f,expected", [
        (relative_entropy(), 0.75 * np.log(1.5) + 0.25 * np.log(0.5)),
        (chi_squared(), 0.25),
        (total_variation(), 0.25),
    ], ids=['kl', 'chi2', 'tv'])
    def test_commuting(self, commuting_pair, f, expected):
        assert duality_optimum(*commuting_pair, f).value == pytest.approx(expected, abs=1e-8)

    @pytest.mark.parametrize("f", [relative_entropy(), chi_squared(), hellinger(2.0)],
                             ids=lambda f: f.name)
    def test_strong_duality(self, full_rank_pairs, f):
        for rho, sigma in full_rank_pairs:
            assert duality_optimum(rho, sigma, f).value == pytest.approx(
                f_div_rs(rho, sigma, f).value, abs=1e-6)

    @pytest.mark.parametrize("f", [total_variation(), hockey(1.0), hockey(1.5)],
                             ids=lambda f: f.name)
    def test_strong_duality_through_kink(self, full_rank_pairs, f):
        for rho, sigma in full_rank_pairs:
            target = f_divergence(rho, sigma, f).value
            assert f_div_rs(rho, sigma, f).value == pytest.approx(target, abs=1e-6)
            assert duality_optimum(rho, sigma, f).value == pytest.approx(target, abs=1e-6)

    def test_hellinger_two_is_shifted_chi2(self, full_rank_pairs):
        """Hellinger order 2 equals chi^2, with the chi^2 witness moved up by 2"""
        chi2 = chi_squared()
        for rho, sigma in full_rank_pairs:
            shifted = derivative_witness(chi2).shifted(2.0)
            via_hellinger = duality_objective(rho, sigma, hellinger(2.0), shifted).value
            via_chi2 = duality_optimum(rho, sigma, chi2).value
            assert via_hellinger == pytest.approx(via_chi2, abs=1e-8)


class TestWeakDuality:

    @pytest.mark.parametrize("f", [relative_entropy(), chi_squared(), total_variation()],
                             ids=lambda f: f.name)
    def test_random_witnesses_stay_below(self, full_rank_pairs, f):
        rng = np.random.default_rng(42)
        for rho, sigma in full_rank_pairs[:2]:
            top = spectral_profile(rho, sigma).lambda_max
            witnesses = [random_witness(f, top, rng) for _ in range(10)]
            report = weak_duality_gap(rho, sigma, f, witnesses)
            assert report['min_gap'] >= -1e-8

    def test_random_witness_respects_domain(self):
        f = total_variation()
        w = random_witness(f, 3.0, seed=1)
        assert all(f.in_conjugate_domain(w(g)) for g in np.linspace(0.0, 3.0, 31))
