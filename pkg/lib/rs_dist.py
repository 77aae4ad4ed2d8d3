"""
Riemann-Stieltjes distributions of a state pair.

P(gamma) = Tr[rho {rho <= gamma sigma}] and Q(gamma) = Tr[sigma {rho <= gamma sigma}]
are right-continuous nondecreasing staircases (plus a continuous part when
the pair does not commute). Divergences become Stieltjes integrals against them.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

import config as qconfig
from convex_functions import ConvexFunctionSpec
from divergences import DivergenceResult, RenyiOrder
from errors import BadArgument, SupportViolation
from linalg_core import (Operand, SpectralProfile, as_matrix, projector_positive,
                         spectral_profile)
from quadrature import rs_integrate

logger = logging.getLogger(__name__)

WEIGHTS = ('rho', 'sigma')


@dataclass(frozen=True)
class RSDistribution:
    weight: str
    jumps: Tuple[Tuple[float, float], ...]
    smooth_curve: Callable[[float], float]
    support_max: float
    total_mass: float
    knots: Tuple[float, ...]

    def __call__(self, gamma: float) -> float:
        return self.smooth_curve(gamma)

    @property
    def jump_mass(self) -> float:
        return float(sum(m for _, m in self.jumps))

    def jump_at(self, gamma: float) -> float:
        for g, m in self.jumps:
            if g == gamma:
                return m
        return 0.0


def _group_breakpoints(points: np.ndarray, tol: float) -> List[Tuple[float, np.ndarray]]:
    """Clusters of numerically equal breakpoints as (location, member indices)"""
    groups: List[List[int]] = []
    for i, g in enumerate(points):
        if groups and g - points[groups[-1][-1]] <= tol * (1.0 + g):
            groups[-1].append(i)
        else:
            groups.append([i])
    return [(float(np.mean(points[idx])), np.asarray(idx)) for idx in groups]


def _pencil_jumps(R: np.ndarray, S: np.ndarray, prof: SpectralProfile,
                  X: np.ndarray, jump_threshold: float) -> List[Tuple[float, float]]:
    """Jump masses Tr[X Pi_k], Pi_k the projector onto the generalized eigenvectors at gamma_k"""
    jumps = []
    for gamma, idx in _group_breakpoints(np.asarray(prof.breakpoints), prof.merge_tol):
        U, _ = np.linalg.qr(prof.pencil_vectors[:, idx])
        mass = float(np.real(np.einsum('ij,ik,kj->', U.conj(), X, U)))
        if gamma <= prof.merge_tol:
            gamma = 0.0
        if mass > jump_threshold:
            jumps.append((gamma, mass))
    return jumps


def _band_jumps(R: np.ndarray, S: np.ndarray, prof: SpectralProfile, X: np.ndarray,
                cfg: qconfig.Config) -> List[Tuple[float, float]]:
    """Jumps at crossings from the difference of non-strict and strict projectors"""
    jumps = []
    for gamma in prof.partition_points(lo=-1.0):
        strict = projector_positive(R, S, gamma, strict=True, config=cfg).op
        loose = projector_positive(R, S, gamma, strict=False, config=cfg).op
        mass = float(np.real(np.trace(X @ (loose - strict))))
        if mass > cfg.jump_threshold:
            jumps.append((float(gamma), mass))
    return jumps


def build_rs_distribution(rho: Operand, sigma: Operand, weight: str = 'sigma',
                          config: Optional[qconfig.Config] = None,
                          profile: Optional[SpectralProfile] = None) -> RSDistribution:
    """P (weight='rho') or Q (weight='sigma') as a jump list plus a pointwise curve"""
    if weight not in WEIGHTS:
        raise BadArgument(f"weight must be one of {WEIGHTS}, got {weight!r}")
    cfg = qconfig.resolve(config)
    R, S = as_matrix(rho), as_matrix(sigma)
    prof = profile or spectral_profile(R, S, config=cfg)
    X = R if weight == 'rho' else S
    total = float(np.real(np.trace(X)))

    if prof.support_ok:
        jumps = _pencil_jumps(R, S, prof, X, cfg.jump_threshold)
    else:
        jumps = _band_jumps(R, S, prof, X, cfg)
        logger.debug("supp(rho) not within supp(sigma): curve keeps rising past the last crossing")

    def curve(gamma: float) -> float:
        if gamma < 0:
            return 0.0
        P = projector_positive(R, S, gamma, strict=True, config=cfg).op
        return total - float(np.real(np.trace(X @ P)))

    knots = tuple(sorted(g for g, _ in jumps))
    return RSDistribution(weight, tuple(sorted(jumps)), curve,
                          float(prof.upper_support), total, knots)


def _require_finite_dmax(prof: SpectralProfile, what: str) -> None:
    if not prof.support_ok:
        raise SupportViolation(f"{what} needs a finite D_max (supp(rho) within supp(sigma))")


def _rs_result(value: float, err: float, converged: bool, prof: SpectralProfile,
               **details) -> DivergenceResult:
    return DivergenceResult(float(value), 'rs', float(err), prof, converged, details)


def f_div_rs(rho: Operand, sigma: Operand, f: ConvexFunctionSpec,
             config: Optional[qconfig.Config] = None) -> DivergenceResult:
    """int f dQ; for the relative entropy generator also int ln(g) dP in details"""
    cfg = qconfig.resolve(config)
    prof = spectral_profile(rho, sigma, config=cfg)
    _require_finite_dmax(prof, f"D_{f.name}")
    Q = build_rs_distribution(rho, sigma, 'sigma', cfg, prof)
    value, err, ok = rs_integrate(lambda g: float(f.f(g)), Q, config=cfg, full_output=True,
                              kinks=f.kinks)
    details = {}
    if f.name == 'kl':
        details['p_form'] = relative_entropy_rs(rho, sigma, cfg, prof).value
    return _rs_result(value, err, ok, prof, **details)


def relative_entropy_rs(rho: Operand, sigma: Operand,
                        config: Optional[qconfig.Config] = None,
                        profile: Optional[SpectralProfile] = None) -> DivergenceResult:
    """int ln(gamma) dP"""
    cfg = qconfig.resolve(config)
    prof = profile or spectral_profile(rho, sigma, config=cfg)
    _require_finite_dmax(prof, "relative entropy")
    P = build_rs_distribution(rho, sigma, 'rho', cfg, prof)
    value, err, ok = rs_integrate(_safe_log, P, config=cfg, full_output=True)
    return _rs_result(value, err, ok, prof)


def q_alpha_rs(rho: Operand, sigma: Operand, alpha,
               config: Optional[qconfig.Config] = None) -> DivergenceResult:
    """int gamma^alpha dQ"""
    cfg = qconfig.resolve(config)
    a = RenyiOrder.coerce(alpha).alpha
    prof = spectral_profile(rho, sigma, config=cfg)
    _require_finite_dmax(prof, "Q_alpha")
    Q = build_rs_distribution(rho, sigma, 'sigma', cfg, prof)
    value, err, ok = rs_integrate(lambda g: g ** a, Q, config=cfg, full_output=True)
    return _rs_result(value, err, ok, prof)


def _safe_log(gamma: float) -> float:
    # P carries no mass at gamma = 0
    return float(np.log(gamma)) if gamma > 0 else 0.0


def change_of_measure_residual(rho: Operand, sigma: Operand, g: Callable[[float], float],
                               config: Optional[qconfig.Config] = None) -> float:
    """|int g dP - int gamma g(gamma) dQ|"""
    cfg = qconfig.resolve(config)
    prof = spectral_profile(rho, sigma, config=cfg)
    P = build_rs_distribution(rho, sigma, 'rho', cfg, prof)
    Q = build_rs_distribution(rho, sigma, 'sigma', cfg, prof)

    def g_p(gamma: float) -> float:
        return float(g(gamma)) if gamma > 0 else 0.0

    def g_q(gamma: float) -> float:
        return gamma * float(g(gamma)) if gamma > 0 else 0.0

    lhs = rs_integrate(g_p, P, config=cfg)
    rhs = rs_integrate(g_q, Q, config=cfg)
    return float(abs(lhs - rhs))


def rs_table(rho: Operand, sigma: Operand, n_grid: int = 200,
             extra: Sequence[float] = (),
             config: Optional[qconfig.Config] = None) -> List[Dict[str, float]]:
    """Rows gamma, P, Q, jump_P, jump_Q on a uniform grid merged with the jump locations"""
    cfg = qconfig.resolve(config)
    prof = spectral_profile(rho, sigma, config=cfg)
    P = build_rs_distribution(rho, sigma, 'rho', cfg, prof)
    Q = build_rs_distribution(rho, sigma, 'sigma', cfg, prof)
    top = 1.1 * max(P.support_max, 1.0)
    grid = set(np.linspace(0.0, top, n_grid + 1).tolist())
    grid.update(P.knots)
    grid.update(Q.knots)
    grid.update(float(x) for x in extra)
    rows = []
    for gamma in sorted(grid):
        rows.append({
            'gamma': gamma,
            'P': P(gamma),
            'Q': Q(gamma),
            'jump_P': P.jump_at(gamma),
            'jump_Q': Q.jump_at(gamma),
        })
    return rows
