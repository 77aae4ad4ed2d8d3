"""
Operator-valued layer cakes and trace formulas.

Matrix-valued integrands go through quadrature.integrate_matrix; traces of
powers of A (B+t)^{-1} are taken on the similar Hermitian form
(B+t)^{-1/2} A (B+t)^{-1/2}, restricted to the support of B.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

import config as qconfig
from divergences import DivergenceResult, RenyiOrder
from errors import BadArgument, NotPositiveDefinite, SlowDecayWarning, SupportViolation
from linalg_core import (HermitianOperator, Operand, as_matrix, eigh_hermitian,
                         hermitize, projector_positive, spectral_profile, zero_band)
from oracles import regularize_state
from quadrature import IntegralTask, integrate, integrate_matrix, warn_numerical

logger = logging.getLogger(__name__)

# orders below this have slowly decaying trace-formula tails
SLOW_TAIL_ALPHA = 1.2


@dataclass(frozen=True)
class OperatorIntegralResult:
    op: HermitianOperator
    err_estimate: float
    converged: bool = True


def _operator_result(value: np.ndarray, err: float, converged: bool) -> OperatorIntegralResult:
    return OperatorIntegralResult(HermitianOperator(hermitize(value)), float(err), converged)


def _require_positive_definite(M: np.ndarray, name: str,
                               config: Optional[qconfig.Config]) -> None:
    w, _ = eigh_hermitian(M)
    if w[0] <= zero_band(w, len(w), config):
        raise NotPositiveDefinite(f"{name} must be positive definite (min eigenvalue {w[0]:.3e})")


def _compressed(A: np.ndarray, B: np.ndarray, config) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(basis of supp B, eigenvalues of B there, A in that basis)"""
    prof = spectral_profile(A, B, config=config)
    if not prof.support_ok:
        raise SupportViolation("supp(A) is not contained in supp(B)")
    basis, b = prof.support_basis, prof.support_eigs
    return basis, b, basis.conj().T @ A @ basis


def _sandwich_eigs(A_c: np.ndarray, b: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of (B+t)^{-1/2} A (B+t)^{-1/2} with B = diag(b)"""
    inv_sqrt = 1.0 / np.sqrt(b + t)
    w, V = eigh_hermitian(inv_sqrt[:, None] * A_c * inv_sqrt[None, :])
    return np.clip(w, 0.0, None), V


def dlog_layer_cake(A: Operand, B: Operand,
                    config: Optional[qconfig.Config] = None) -> OperatorIntegralResult:
    """D log[A](B) = int_0^{u+} {uA < B} du - int_{u-}^0 {uA > B} du"""
    cfg = qconfig.resolve(config)
    Am, Bm = as_matrix(A), as_matrix(B)
    _require_positive_definite(Am, "A", cfg)
    d = Am.shape[0]

    w, V = eigh_hermitian(Am)
    inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
    ks, _ = eigh_hermitian(inv_sqrt @ Bm @ inv_sqrt)
    u_plus, u_minus = max(0.0, float(ks[-1])), min(0.0, float(ks[0]))

    above = integrate_matrix(IntegralTask.from_config(
        lambda u: projector_positive(Bm, Am, u, strict=True, config=cfg).op,
        0.0, u_plus, ks, cfg, label="dlog positive"), d)
    below = integrate_matrix(IntegralTask.from_config(
        lambda u: projector_positive(-Bm, -Am, u, strict=True, config=cfg).op,
        u_minus, 0.0, ks, cfg, label="dlog negative"), d)
    return _operator_result(above.value - below.value,
                            above.err_estimate + below.err_estimate,
                            above.converged and below.converged)


def change_of_variables_pair(A: Operand, B: Operand, h: Callable[[float], float],
                             h_kinks=(), h_power_at_0: float = 0.0,
                             config: Optional[qconfig.Config] = None
                             ) -> Tuple[OperatorIntegralResult, OperatorIntegralResult]:
    """int_0^lambda_max {A > gB} h(g) dg against int_0^inf S X h(X) S dt,
    S = (B+t)^{-1/2}, X = S A S.

    h_power_at_0 declares h(x) ~ x^p near 0, which fixes the decay of the
    right-hand integrand.
    """
    cfg = qconfig.resolve(config)
    Am, Bm = as_matrix(A), as_matrix(B)
    d = Am.shape[0]
    prof = spectral_profile(Am, Bm, config=cfg)
    if not prof.support_ok:
        raise SupportViolation("change of variables needs supp(A) within supp(B)")

    lhs = integrate_matrix(IntegralTask.from_config(
        lambda g: projector_positive(Am, Bm, g, strict=True, config=cfg).op * h(g),
        0.0, prof.lambda_max, prof.partition_points(h_kinks, hi=prof.lambda_max), cfg,
        label="change of variables lhs"), d)

    basis, b = prof.support_basis, prof.support_eigs
    A_c = basis.conj().T @ Am @ basis

    def rhs_integrand(t: float) -> np.ndarray:
        inv_sqrt = 1.0 / np.sqrt(b + t)
        w, V = _sandwich_eigs(A_c, b, t)
        hx = np.array([h(x) for x in w], dtype=float)
        core = (V * (w * hx)) @ V.conj().T
        return basis @ (inv_sqrt[:, None] * core * inv_sqrt[None, :]) @ basis.conj().T

    rhs = integrate_matrix(IntegralTask.from_config(
        rhs_integrand, 0.0, np.inf, (), cfg, tail_decay=2.0 + h_power_at_0,
        label="change of variables rhs"), d)
    return (_operator_result(lhs.value, lhs.err_estimate, lhs.converged),
            _operator_result(rhs.value, rhs.err_estimate, rhs.converged))


def q_alpha_trace(rho: Operand, sigma: Operand, alpha,
                  config: Optional[qconfig.Config] = None) -> DivergenceResult:
    """Q_alpha from a single t-integral of sandwiched traces.

    alpha > 1: (alpha-1) int_0^inf Tr[((sigma+t)^{-1/2} rho (sigma+t)^{-1/2})^alpha] dt.
    alpha < 1: (1-alpha) int_0^inf Tr[rho(rho+t)^{-1} Z^{1-alpha}] dt with
    Z = (rho+t)^{-1/2} sigma (rho+t)^{-1/2}; a singular rho is replaced by
    (1-eps) rho + eps I/d.
    """
    cfg = qconfig.resolve(config)
    a = RenyiOrder.coerce(alpha).alpha
    R, S = as_matrix(rho), as_matrix(sigma)

    if a > 1.0:
        basis, s, rho_c = _compressed(R, S, cfg)
        if a < SLOW_TAIL_ALPHA:
            warn_numerical(SlowDecayWarning, f"trace formula tail decays like t^-{a:.3g}")

        def integrand(t: float) -> float:
            w, _ = _sandwich_eigs(rho_c, s, t)
            return float(np.sum(w ** a))

        res = integrate(IntegralTask.from_config(
            integrand, 0.0, np.inf, s, cfg, tail_decay=a, label=f"trace Q_{a:g}"))
        return DivergenceResult(float((a - 1.0) * res.value), 'trace',
                                (a - 1.0) * res.err_estimate, None, res.converged)

    R_reg = regularize_state(R, cfg.trace_reg_eps, cfg)
    if R_reg is not R:
        logger.debug("rho is singular, mixing in eps=%g of I/d for Q_%g", cfg.trace_reg_eps, a)
    basis, r, sigma_c = _compressed(S, R_reg, cfg)
    beta = 1.0 - a

    def integrand(t: float) -> float:
        w, V = _sandwich_eigs(sigma_c, r, t)
        y = r / (r + t)
        weights = np.einsum('i,ij->j', y, np.abs(V) ** 2)
        return float(np.dot(weights, w ** beta))

    res = integrate(IntegralTask.from_config(
        integrand, 0.0, np.inf, r, cfg, tail_decay=2.0 - a, label=f"trace Q_{a:g}"))
    return DivergenceResult(float(beta * res.value), 'trace', beta * res.err_estimate,
                            None, res.converged, {'regularized': R_reg is not R})


def order_identity_residual(A: Operand, B: Operand, alpha: float,
                            config: Optional[qconfig.Config] = None,
                            full_output: bool = False) -> Union[float, Dict[str, float]]:
    """|int Tr[B(B+t)^{-1}(A(B+t)^{-1})^a] dt - (a-1)/a int Tr[(A(B+t)^{-1})^a] dt|"""
    cfg = qconfig.resolve(config)
    a = float(alpha)
    if a <= 1.0:
        raise BadArgument(f"order identity needs alpha > 1, got {a}")
    basis, b, A_c = _compressed(as_matrix(A), as_matrix(B), cfg)

    def weighted(t: float) -> float:
        w, V = _sandwich_eigs(A_c, b, t)
        weights = np.einsum('i,ij->j', b / (b + t), np.abs(V) ** 2)
        return float(np.dot(weights, w ** a))

    def plain(t: float) -> float:
        w, _ = _sandwich_eigs(A_c, b, t)
        return float(np.sum(w ** a))

    lhs = integrate(IntegralTask.from_config(weighted, 0.0, np.inf, b, cfg,
                                             tail_decay=1.0 + a, label="order identity lhs"))
    rhs = integrate(IntegralTask.from_config(plain, 0.0, np.inf, b, cfg,
                                             tail_decay=a, label="order identity rhs"))
    rhs_value = (a - 1.0) / a * rhs.value
    residual = abs(lhs.value - rhs_value)
    if full_output:
        return {'lhs': float(lhs.value), 'rhs': float(rhs_value), 'residual': float(residual)}
    return float(residual)


def log_difference_projint(A: Operand, B: Operand,
                           config: Optional[qconfig.Config] = None) -> OperatorIntegralResult:
    """ln A - ln B = int_1^inf ({A > gB} - {B > gA}) dg / g"""
    cfg = qconfig.resolve(config)
    Am, Bm = as_matrix(A), as_matrix(B)
    _require_positive_definite(Am, "A", cfg)
    _require_positive_definite(Bm, "B", cfg)
    d = Am.shape[0]
    forward = spectral_profile(Am, Bm, config=cfg)
    backward = spectral_profile(Bm, Am, config=cfg)

    up = integrate_matrix(IntegralTask.from_config(
        lambda g: projector_positive(Am, Bm, g, strict=True, config=cfg).op / g,
        1.0, max(1.0, forward.lambda_max),
        forward.partition_points(lo=1.0, hi=forward.lambda_max), cfg,
        label="log difference forward"), d)
    down = integrate_matrix(IntegralTask.from_config(
        lambda g: projector_positive(Bm, Am, g, strict=True, config=cfg).op / g,
        1.0, max(1.0, backward.lambda_max),
        backward.partition_points(lo=1.0, hi=backward.lambda_max), cfg,
        label="log difference backward"), d)
    return _operator_result(up.value - down.value, up.err_estimate + down.err_estimate,
                            up.converged and down.converged)


def log_difference_resolvent(A: Operand, B: Operand,
                             config: Optional[qconfig.Config] = None) -> OperatorIntegralResult:
    """ln A - ln B = int_0^inf (B+t)^{-1} (A - B) (A+t)^{-1} dt"""
    cfg = qconfig.resolve(config)
    Am, Bm = as_matrix(A), as_matrix(B)
    _require_positive_definite(Am, "A", cfg)
    _require_positive_definite(Bm, "B", cfg)
    d = Am.shape[0]
    wa, Va = eigh_hermitian(Am)
    wb, Vb = eigh_hermitian(Bm)
    diff = Am - Bm

    def integrand(t: float) -> np.ndarray:
        left = (Vb / (wb + t)) @ Vb.conj().T
        right = (Va / (wa + t)) @ Va.conj().T
        return left @ diff @ right

    res = integrate_matrix(IntegralTask.from_config(
        integrand, 0.0, np.inf, np.concatenate([wa, wb]), cfg, tail_decay=2.0,
        label="log difference resolvent"), d)
    return _operator_result(res.value, res.err_estimate, res.converged)
