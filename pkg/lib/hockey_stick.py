"""
Quantum Hockey-Stick divergence and the noncommutative minimum
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

import config as qconfig
from errors import BadArgument
from linalg_core import (Operand, as_matrix, eigh_hermitian, frechet_dlog,
                         hermitize, psd_power, projector_positive,
                         spectral_profile, zero_band)
from quadrature import IntegralTask, integrate_piecewise

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HockeyStickValue:
    """E_gamma(A||B) = Tr[(A - gamma B)_+] with both one-sided derivatives in gamma"""
    gamma: float
    value: float
    right_deriv: float
    left_deriv: float


def e_gamma(A: Operand, B: Operand, gamma: float, eta: Optional[float] = None,
            config: Optional[qconfig.Config] = None) -> HockeyStickValue:
    """Value and semi-derivatives from one eigendecomposition of A - gamma B"""
    if gamma < 0 or not np.isfinite(gamma):
        raise BadArgument(f"gamma must be finite and >= 0, got {gamma}")
    Am, Bm = as_matrix(A), as_matrix(B)
    w, V = eigh_hermitian(Am - gamma * Bm)
    if eta is None:
        eta = zero_band(w, len(w), config)

    value = float(np.sum(w[w > 0]))
    # Tr[B P] for spectral projectors P = V_s V_s^dagger
    b_diag = np.real(np.einsum('ij,ik,kj->j', V.conj(), Bm, V))
    right = -float(np.sum(b_diag[w > eta]))
    left = -float(np.sum(b_diag[w >= -eta]))
    return HockeyStickValue(float(gamma), max(value, 0.0), right, left)


def e_gamma_curve(A: Operand, B: Operand, gammas: Iterable[float],
                  config: Optional[qconfig.Config] = None) -> List[HockeyStickValue]:
    return [e_gamma(A, B, g, config=config) for g in gammas]


def trace_norm(M: Operand) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix"""
    w, _ = eigh_hermitian(M)
    return float(np.sum(np.abs(w)))


def nc_min_operator(A: Operand, B: Operand,
                    config: Optional[qconfig.Config] = None) -> np.ndarray:
    """A{A <= B} + B{B < A}"""
    Am, Bm = as_matrix(A), as_matrix(B)
    below = np.eye(Am.shape[0]) - projector_positive(Am, Bm, 1.0, strict=True, config=config).op
    above = projector_positive(Am, Bm, 1.0, strict=True, config=config).op
    return Am @ below + Bm @ above


def nc_min_trace(A: Operand, B: Operand) -> float:
    """Tr[A ^ B] = (Tr[A + B] - ||A - B||_1) / 2"""
    Am, Bm = as_matrix(A), as_matrix(B)
    total = float(np.real(np.trace(Am + Bm)))
    return 0.5 * (total - trace_norm(Am - Bm))


def nc_min_chain(A: Operand, B: Operand,
                 config: Optional[qconfig.Config] = None) -> Dict[str, float]:
    """Tr[A ^ B] = int_0^1 Tr[A{uA < B}] du >= Tr[A Dlog[A+B](B)]
    >= Tr[A (A+B)^{-1/2} B (A+B)^{-1/2}].

    The Dlog and sandwich terms are evaluated on supp(A + B).
    """
    Am, Bm = as_matrix(A), as_matrix(B)
    crossings = spectral_profile(Bm, Am, config=config).crossings

    def layer(u: float) -> float:
        P = projector_positive(Bm, Am, u, strict=True, config=config).op
        return float(np.real(np.trace(Am @ P)))

    layer_cake = integrate_piecewise(IntegralTask.from_config(
        layer, 0.0, 1.0, [c for c in crossings if 0 < c < 1], config,
        label="nc_min layer cake")).value

    S = Am + Bm
    w, V = eigh_hermitian(S)
    keep = w > zero_band(w, len(w), config)
    Vk = V[:, keep]
    Ac = hermitize(Vk.conj().T @ Am @ Vk)
    Bc = hermitize(Vk.conj().T @ Bm @ Vk)
    Sc = np.diag(w[keep]).astype(complex)

    dlog_term = float(np.real(np.trace(Ac @ frechet_dlog(Sc, Bc, config))))
    inv_sqrt = psd_power(Sc, -0.5)
    sandwich = float(np.real(np.trace(Ac @ inv_sqrt @ Bc @ inv_sqrt)))
    return {
        'nc_min': nc_min_trace(Am, Bm),
        'layer_cake': float(layer_cake),
        'dlog': dlog_term,
        'sandwich': sandwich,
    }
