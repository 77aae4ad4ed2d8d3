"""Validation, spectral projectors, breakpoint profiles and the Dlog derivative."""
import numpy as np
import pytest

from errors import BadArgument, NonSquare, NotHermitian, NotPositiveDefinite, NotPSD, TraceMismatch
from linalg_core import (QuantumState, eigh_hermitian, frechet_dlog, hermitian_function,
                         merge_points, projector_positive, spectral_profile, support_projector,
                         validate_operator)


class TestValidateOperator:

    def test_eigenvalues_of_real_symmetric_state(self):
        state = validate_operator([[0.5, 0.4], [0.4, 0.5]], require_state=True)
        assert isinstance(state, QuantumState)
        w, _ = eigh_hermitian(state)
        np.testing.assert_allclose(w, [0.1, 0.9], atol=1e-14)
        assert state.min_eig == pytest.approx(0.1)

    def test_not_hermitian_reports_location(self):
        with pytest.raises(NotHermitian) as excinfo:
            validate_operator([[1, 1j], [1j, 1]])
        assert excinfo.value.details['deviation'] == pytest.approx(2.0)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            validate_operator(np.zeros((2, 3)))

    def test_non_finite(self):
        with pytest.raises(BadArgument):
            validate_operator([[np.nan, 0], [0, 1]])

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            validate_operator(np.diag([1.2, -0.2]), require_state=True)

    def test_trace_mismatch(self):
        with pytest.raises(TraceMismatch):
            validate_operator(np.diag([0.5, 0.4]), require_state=True)

    def test_subnormalized_flag(self):
        state = validate_operator(np.diag([0.5, 0.4]), require_state=True,
                                  allow_subnormalized=True)
        assert state.subnormalized
        assert state.trace == pytest.approx(0.9)

    def test_renormalize(self):
        state = validate_operator(np.diag([2.0, 2.0]), require_state=True, renormalize=True)
        np.testing.assert_allclose(state.entries, 0.5 * np.eye(2))

    def test_entries_are_read_only(self):
        state = validate_operator(np.eye(2) / 2, require_state=True)
        with pytest.raises(ValueError):
            state.entries[0, 0] = 1.0


class TestProjectorPositive:

    def test_commuting_ranks(self, commuting_pair):
        rho, sigma = commuting_pair
        assert projector_positive(rho, sigma, 1.0).rank == 1
        assert projector_positive(rho, sigma, 0.4).rank == 2
        assert projector_positive(rho, sigma, 1.6).rank == 0

    def test_strict_and_closed_differ_at_breakpoint(self, commuting_pair):
        rho, sigma = commuting_pair
        assert projector_positive(rho, sigma, 1.5, strict=True).rank == 0
        assert projector_positive(rho, sigma, 1.5, strict=False).rank == 1

    def test_projector_is_idempotent(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            P = projector_positive(rho, sigma, 1.0).op
            np.testing.assert_allclose(P @ P, P, atol=1e-12)

    def test_support_projector(self, plus_pair):
        P = support_projector(plus_pair[0])
        np.testing.assert_allclose(P, 0.5 * np.ones((2, 2)), atol=1e-12)
        np.testing.assert_allclose(support_projector(plus_pair[1]), np.eye(2), atol=1e-12)

    def test_infinite_gamma_rejected(self, commuting_pair):
        with pytest.raises(BadArgument):
            projector_positive(*commuting_pair, np.inf)


class TestSpectralProfile:

    def test_commuting_breakpoints(self, commuting_pair):
        prof = spectral_profile(*commuting_pair)
        np.testing.assert_allclose(prof.breakpoints, [0.5, 1.5], atol=1e-14)
        assert prof.d_max == pytest.approx(np.log(1.5))
        assert prof.support_ok

    def test_support_violation_gives_infinite_dmax(self):
        rho = 0.5 * np.eye(2)
        sigma = np.diag([1.0, 0.0])
        prof = spectral_profile(rho, sigma)
        assert not prof.support_ok
        assert prof.d_max == np.inf

    def test_breakpoints_are_singular_points(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            for g in spectral_profile(rho, sigma).breakpoints:
                assert abs(np.linalg.det(rho - g * sigma)) < 1e-10

    def test_crossings_match_breakpoints_on_support(self, full_rank_pairs):
        for rho, sigma in full_rank_pairs:
            prof = spectral_profile(rho, sigma)
            np.testing.assert_allclose(prof.crossings, prof.breakpoints, rtol=1e-8)

    def test_shape_mismatch(self):
        with pytest.raises(BadArgument):
            spectral_profile(np.eye(2) / 2, np.eye(3) / 3)

    def test_merge_points(self):
        assert merge_points([0.5, 0.5 + 1e-16, 2.0, -1.0], 1e-12) == [0.5, 2.0]


class TestFrechetDlog:

    def test_diagonal_direction(self):
        A = np.diag([1.0, np.e])
        np.testing.assert_allclose(frechet_dlog(A, np.eye(2)), np.diag([1.0, 1.0 / np.e]),
                                   atol=1e-14)

    def test_off_diagonal_loewner_entry(self):
        A = np.diag([1.0, np.e])
        D = frechet_dlog(A, np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(D[0, 1], 1.0 / (np.e - 1.0), atol=1e-14)

    def test_identity_direction_is_inverse(self, full_rank_pairs):
        for rho, _ in full_rank_pairs:
            np.testing.assert_allclose(frechet_dlog(rho, rho), np.eye(rho.shape[0]), atol=1e-10)

    def test_matches_finite_difference(self):
        rng = np.random.default_rng(42)
        A = np.diag([0.3, 0.7])
        B = rng.normal(size=(2, 2))
        B = B + B.T
        h = 1e-6
        fd = (hermitian_function(A + h * B, np.log) - hermitian_function(A - h * B, np.log)) / (2 * h)
        np.testing.assert_allclose(frechet_dlog(A, B), fd, atol=1e-7)

    def test_singular_base_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            frechet_dlog(np.diag([1.0, 0.0]), np.eye(2))
