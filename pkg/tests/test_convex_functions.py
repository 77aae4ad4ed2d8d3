"""Built-in convex generators, their derivatives and conjugates."""
import numpy as np
import pytest

from convex_functions import (BUILTIN_NAMES, chi_squared, get_convex_function, hellinger,
                              hockey, power_kernel, relative_entropy, squared_hellinger,
                              total_variation)
from errors import BadArgument

NORMALIZED = [relative_entropy(), chi_squared(), total_variation(), hockey(1.0), hockey(1.5),
              hellinger(0.5), hellinger(2.0), hellinger(3.0), squared_hellinger()]


class TestGenerators:

    @pytest.mark.parametrize("spec", NORMALIZED, ids=lambda s: s.name)
    def test_normalized_and_convex(self, spec):
        assert abs(float(spec.f(1.0))) <= 1e-12
        assert spec.check_convexity()

    @pytest.mark.parametrize("spec", NORMALIZED, ids=lambda s: s.name)
    def test_fenchel_young(self, spec):
        assert spec.check_fenchel_young()

    @pytest.mark.parametrize("spec", [relative_entropy(), chi_squared(), hellinger(0.5),
                                      hellinger(2.0), squared_hellinger()],
                             ids=lambda s: s.name)
    def test_derivative_matches_finite_difference(self, spec):
        x = np.linspace(0.2, 4.0, 39)
        h = 1e-6
        fd = (spec.f(x + h) - spec.f(x - h)) / (2 * h)
        np.testing.assert_allclose(spec.f_prime(x), fd, rtol=1e-6, atol=1e-8)

    def test_f_at_zero(self):
        assert relative_entropy().f_at_0 == 0.0
        assert chi_squared().f_at_0 == 1.0
        assert total_variation().f_at_0 == 0.5
        assert hellinger(0.5).f_at_0 == pytest.approx(2.0)
        assert hellinger(2.0).f_at_0 == pytest.approx(-1.0)

    def test_conjugate_at_derivative_is_tight(self):
        """f(x) + f*(f'(x)) = x f'(x) for differentiable f"""
        for spec in (relative_entropy(), chi_squared(), hellinger(2.0)):
            x = np.linspace(0.5, 3.0, 11)
            y = spec.f_prime(x)
            np.testing.assert_allclose(spec.f(x) + spec.conjugate(y), x * y, atol=1e-12)

    def test_hockey_kink_atom(self):
        spec = hockey(1.5)
        assert spec.kinks == (1.5,)
        assert spec.second_atoms == ((1.5, 1.0),)
        assert spec.nondecreasing

    def test_power_kernel_is_not_normalized(self):
        spec = power_kernel(2.0)
        assert float(spec.f(1.0)) == 1.0
        assert not spec.normalized

    def test_conjugate_domain_checks(self):
        tv = total_variation()
        assert tv.in_conjugate_domain(0.5)
        assert not tv.in_conjugate_domain(0.6)
        sq = squared_hellinger()
        assert not sq.in_conjugate_domain(1.0)
        np.testing.assert_array_less(sq.clip_to_conjugate_domain(np.array([2.0])), 1.0)


class TestLookup:

    @pytest.mark.parametrize("name", ['kl', 'chi2', 'tv', 'positive_part', 'hockey:2',
                                      'hellinger:2', 'sq_hellinger', 'power:0.5'])
    def test_builtin_names(self, name):
        assert get_convex_function(name).name.split(':')[0] in BUILTIN_NAMES

    def test_missing_order(self):
        with pytest.raises(BadArgument):
            get_convex_function('hellinger')

    def test_unknown_name(self):
        with pytest.raises(BadArgument):
            get_convex_function('js')

    def test_bad_parameters(self):
        with pytest.raises(BadArgument):
            hellinger(1.0)
        with pytest.raises(BadArgument):
            hockey(0.5)
