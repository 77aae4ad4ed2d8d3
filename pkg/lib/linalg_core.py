"""
Dense Hermitian linear-algebra kernels.

Validation of operators and states, spectral projectors onto the positive part
of A - gamma*B, the breakpoint profile of a state pair and the Frechet
derivative of the matrix logarithm. Everything here is a pure function of its
inputs; returned arrays are marked read-only.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

import config as qconfig
from errors import (BadArgument, EigSolverFailure, NonSquare, NotHermitian,
                    NotPositiveDefinite, NotPSD, TraceMismatch)

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HermitianOperator:
    """Dense complex Hermitian matrix"""
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'entries', _frozen(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class QuantumState(HermitianOperator):
    """PSD operator with unit trace, or a flagged subnormalized positive operator"""
    trace: float = 1.0
    min_eig: float = 0.0
    subnormalized: bool = False


@dataclass(frozen=True)
class Projector:
    op: np.ndarray
    rank: int

    def __post_init__(self):
        object.__setattr__(self, 'op', _frozen(self.op))


Operand = Union[HermitianOperator, np.ndarray]


def as_matrix(x: Operand) -> np.ndarray:
    """Plain complex ndarray view of an operator argument"""
    if isinstance(x, HermitianOperator):
        return x.entries
    return np.asarray(x, dtype=complex)


def hermitize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def eigh_hermitian(M: Operand) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of the Hermitian part"""
    M = as_matrix(M)
    if not np.all(np.isfinite(M)):
        raise EigSolverFailure("Matrix has non-finite entries")
    try:
        w, V = scipy.linalg.eigh(hermitize(M))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        raise EigSolverFailure(f"Hermitian eigensolver failed: {e}")
    return w, V


def zero_band(eigenvalues: np.ndarray, dim: int,
              config: Optional[qconfig.Config] = None) -> float:
    """Default eta: eta_scale * dim * eps * spectral norm"""
    cfg = qconfig.resolve(config)
    norm = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return cfg.eta_scale * dim * EPS * norm


def hermitian_function(M: Operand, fn: Callable[[np.ndarray], np.ndarray],
                       support_only: bool = False,
                       eta: Optional[float] = None) -> np.ndarray:
    """Functional calculus V fn(w) V^dagger.

    With support_only, eigenvalues at or below eta are sent to zero and fn is
    never evaluated on them (pseudo-inverse convention).
    """
    w, V = eigh_hermitian(M)
    if support_only:
        if eta is None:
            eta = zero_band(w, len(w))
        mask = w > eta
        fw = np.zeros_like(w)
        if np.any(mask):
            fw[mask] = fn(w[mask])
    else:
        fw = fn(w)
    return (V * fw) @ V.conj().T


def psd_power(M: Operand, p: float, eta: Optional[float] = None) -> np.ndarray:
    """M^p on the support of a PSD matrix (negative eigenvalues clipped)"""
    return hermitian_function(M, lambda w: np.power(np.clip(w, 0.0, None), p),
                              support_only=True, eta=eta)


def support_projector(M: Operand, eta: Optional[float] = None) -> np.ndarray:
    w, V = eigh_hermitian(M)
    if eta is None:
        eta = zero_band(w, len(w))
    Vs = V[:, w > eta]
    return Vs @ Vs.conj().T


def validate_operator(raw, require_state: bool = False,
                      config: Optional[qconfig.Config] = None,
                      renormalize: bool = False,
                      allow_subnormalized: bool = False
                      ) -> Union[HermitianOperator, QuantumState]:
    """Validate a raw matrix as a Hermitian operator or a quantum state"""
    cfg = qconfig.resolve(config)
    try:
        arr = np.asarray(raw, dtype=complex)
    except (TypeError, ValueError) as e:
        raise NonSquare(f"Cannot interpret input as a complex matrix: {e}")

    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise NonSquare(f"Expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise BadArgument("Matrix has non-finite entries")

    deviation = np.abs(arr - arr.conj().T)
    worst = float(deviation.max())
    if worst > cfg.hermiticity_tol:
        row, col = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
        raise NotHermitian(
            f"Matrix is not Hermitian: |M - M^dagger| = {worst:.3e} at ({row}, {col})",
            row=int(row), col=int(col), deviation=worst)

    arr = hermitize(arr)
    if not require_state:
        return HermitianOperator(arr)

    eigs = scipy.linalg.eigvalsh(arr)
    min_eig = float(eigs[0])
    if min_eig < -cfg.psd_tol:
        raise NotPSD(f"Matrix is not PSD: min eigenvalue {min_eig:.3e}", min_eig=min_eig)

    trace = float(np.real(np.trace(arr)))
    subnormalized = False
    if renormalize:
        if trace <= 0:
            raise TraceMismatch("Cannot renormalize a matrix with zero trace", trace=trace)
        arr = arr / trace
        min_eig /= trace
        trace = 1.0
    elif abs(trace - 1.0) > cfg.trace_tol:
        if allow_subnormalized and 0.0 < trace < 1.0:
            subnormalized = True
        else:
            raise TraceMismatch(f"Trace is {trace:.12g}, expected 1", trace=trace)

    return QuantumState(arr, trace=trace, min_eig=max(min_eig, 0.0),
                        subnormalized=subnormalized)


def projector_positive(A: Operand, B: Operand, gamma: float, strict: bool = True,
                       eta: Optional[float] = None,
                       config: Optional[qconfig.Config] = None) -> Projector:
    """{A > gamma B} (strict) or {A >= gamma B} (non-strict).

    The two differ exactly by the eigenspace of A - gamma B with
    |eigenvalue| <= eta.
    """
    if not np.isfinite(gamma):
        raise BadArgument(f"gamma must be finite, got {gamma}")
    M = as_matrix(A) - gamma * as_matrix(B)
    w, V = eigh_hermitian(M)
    if eta is None:
        eta = zero_band(w, len(w), config)
    mask = w > eta if strict else w >= -eta
    Vs = V[:, mask]
    return Projector(Vs @ Vs.conj().T, int(mask.sum()))


@dataclass(frozen=True)
class SpectralProfile:
    """Breakpoint data of a pair (rho, sigma).

    breakpoints are the eigenvalues of sigma^{-1/2} rho sigma^{-1/2} on
    supp(sigma), ascending with multiplicity. pencil_vectors holds the matching
    generalized eigenvectors v_i (rho v_i = gamma_i sigma v_i, v_i^dagger sigma
    v_j = delta_ij) as columns. crossings are the finite gamma >= 0 at which
    rho - gamma sigma is singular on supp(rho + sigma); they coincide with the
    breakpoints when support_ok.
    """
    breakpoints: np.ndarray
    d_max: float
    support_ok: bool
    beta2: float
    lambda_max: float
    eta: float
    dim: int
    support_basis: np.ndarray
    support_eigs: np.ndarray
    pencil_vectors: np.ndarray
    reverse_support_ok: bool
    crossings: np.ndarray
    merge_tol: float = field(default=0.0)

    @property
    def upper_support(self) -> float:
        """Largest finite crossing; projectors {rho > gamma sigma} are constant beyond it"""
        if self.support_ok:
            return self.lambda_max
        return float(self.crossings[-1]) if len(self.crossings) else 0.0

    def partition_points(self, extra: Iterable[float] = (), lo: float = 0.0,
                         hi: Optional[float] = None) -> List[float]:
        """Sorted breakpoints (plus extras) inside (lo, hi), merged within merge_tol*(1+gamma)"""
        source = self.breakpoints if self.support_ok else self.crossings
        return merge_points(list(source) + list(extra), self.merge_tol, lo, hi)


def merge_points(points: Iterable[float], tol: float, lo: float = 0.0,
                 hi: Optional[float] = None) -> List[float]:
    merged: List[float] = []
    for g in sorted(float(p) for p in points if np.isfinite(p)):
        if g <= lo or (hi is not None and g >= hi):
            continue
        if merged and g - merged[-1] <= tol * (1.0 + g):
            continue
        merged.append(g)
    return merged


def _compressed_ratio(num: np.ndarray, den_basis: np.ndarray,
                      den_eigs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of D^{-1/2} V^dagger num V D^{-1/2}"""
    inv_sqrt = 1.0 / np.sqrt(den_eigs)
    K = inv_sqrt[:, None] * (den_basis.conj().T @ num @ den_basis) * inv_sqrt[None, :]
    return eigh_hermitian(K)


def spectral_profile(rho: Operand, sigma: Operand, eta: Optional[float] = None,
                     config: Optional[qconfig.Config] = None) -> SpectralProfile:
    """Breakpoints, D_max and support data for the pair (rho, sigma)"""
    cfg = qconfig.resolve(config)
    R, S = as_matrix(rho), as_matrix(sigma)
    if R.shape != S.shape:
        raise BadArgument(f"Shape mismatch: {R.shape} vs {S.shape}")
    d = R.shape[0]

    ws, Vs = eigh_hermitian(S)
    wr, Vr = eigh_hermitian(R)
    if eta is None:
        eta = zero_band(np.concatenate([ws, wr]), d, cfg)
    merge_tol = cfg.eta_scale * d * EPS

    keep = ws > eta
    basis, s = Vs[:, keep], ws[keep]
    if len(s):
        kw, kv = _compressed_ratio(R, basis, s)
        breakpoints = np.clip(kw, 0.0, None)
        pencil = basis @ (kv / np.sqrt(s)[:, None])
    else:
        breakpoints = np.zeros(0)
        pencil = np.zeros((d, 0), dtype=complex)

    comp = np.eye(d) - basis @ basis.conj().T
    leak = comp @ R @ comp
    leak_norm = float(np.max(np.abs(scipy.linalg.eigvalsh(hermitize(leak)))))
    support_ok = leak_norm <= eta

    lambda_max = float(breakpoints[-1]) if len(breakpoints) else 0.0
    if not support_ok:
        d_max = float('inf')
    elif lambda_max > 0:
        d_max = float(np.log(lambda_max))
    else:
        d_max = float('-inf')

    # reverse pencil: exp(-D_max(sigma||rho))
    keep_r = wr > eta
    comp_r = np.eye(d) - Vr[:, keep_r] @ Vr[:, keep_r].conj().T
    leak_r = comp_r @ S @ comp_r
    reverse_ok = float(np.max(np.abs(scipy.linalg.eigvalsh(hermitize(leak_r))))) <= eta
    beta2 = 0.0
    if reverse_ok and np.any(keep_r):
        rw, _ = _compressed_ratio(S, Vr[:, keep_r], wr[keep_r])
        if rw[-1] > 0:
            beta2 = float(1.0 / rw[-1])

    crossings = _crossings(R, S, eta)

    profile = SpectralProfile(
        breakpoints=breakpoints, d_max=d_max, support_ok=bool(support_ok),
        beta2=beta2, lambda_max=lambda_max, eta=float(eta), dim=d,
        support_basis=basis, support_eigs=s, pencil_vectors=pencil,
        reverse_support_ok=bool(reverse_ok), crossings=crossings,
        merge_tol=merge_tol)
    for name in ('breakpoints', 'support_basis', 'support_eigs',
                 'pencil_vectors', 'crossings'):
        getattr(profile, name).setflags(write=False)
    logger.debug("profile dim=%d breakpoints=%s support_ok=%s", d,
                 np.array2string(breakpoints, precision=6), support_ok)
    return profile


def _crossings(R: np.ndarray, S: np.ndarray, eta: float) -> np.ndarray:
    """Finite gamma >= 0 where R - gamma S is singular on supp(R + S).

    On that support T = R + S is positive definite, so the Hermitian-definite
    pencil (S, T) has eigenvalues mu in [0, 1] and R - gamma S = T - (1+gamma) S
    is singular exactly at gamma = 1/mu - 1.
    """
    wt, Vt = eigh_hermitian(R + S)
    keep = wt > eta
    if not np.any(keep):
        return np.zeros(0)
    Vk = Vt[:, keep]
    St = hermitize(Vk.conj().T @ S @ Vk)
    Tt = np.diag(wt[keep]).astype(complex)
    try:
        mu = scipy.linalg.eigh(St, Tt, eigvals_only=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        raise EigSolverFailure(f"Generalized eigensolver failed: {e}")
    mu = mu[mu > max(eta, 1e-300)]
    return np.sort(np.clip(1.0 / mu - 1.0, 0.0, None))


def frechet_dlog(A: Operand, B: Operand,
                 config: Optional[qconfig.Config] = None) -> np.ndarray:
    """D log[A](B) through the Loewner matrix of ln on A's eigenbasis"""
    w, V = eigh_hermitian(A)
    eta = zero_band(w, len(w), config)
    if w[0] <= eta:
        raise NotPositiveDefinite(f"A must be positive definite, min eigenvalue {w[0]:.3e}")

    log_w = np.log(w)
    diff = w[:, None] - w[None, :]
    scale = np.maximum(w[:, None], w[None, :])
    near = np.abs(diff) <= 1e-8 * scale
    with np.errstate(divide='ignore', invalid='ignore'):
        loewner = np.where(near, 2.0 / (w[:, None] + w[None, :]),
                           (log_w[:, None] - log_w[None, :]) / diff)

    Bt = V.conj().T @ as_matrix(B) @ V
    return hermitize(V @ (loewner * Bt) @ V.conj().T)
