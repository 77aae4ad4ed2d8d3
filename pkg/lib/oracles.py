"""
Ground-truth divergences by direct functional calculus, and seeded random
states, channels and pairs for the property checks.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

import config as qconfig
from convex_functions import ConvexFunctionSpec
from errors import BadArgument, BadDimensions, SupportViolation
from hockey_stick import trace_norm
from linalg_core import (Operand, QuantumState, as_matrix, eigh_hermitian,
                         hermitian_function, hermitize, psd_power,
                         spectral_profile, validate_operator, zero_band)

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator, None]


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(qconfig.DEFAULT_SEED if seed is None else seed)


@dataclass(frozen=True)
class ChannelSpec:
    """CPTP map rho -> sum_k K_k rho K_k^dagger"""
    kraus_ops: Tuple[np.ndarray, ...]
    completeness_residual: float
    label: str = 'channel'

    @classmethod
    def from_kraus(cls, kraus: Sequence[np.ndarray], label: str = 'channel') -> "ChannelSpec":
        ops = tuple(np.asarray(K, dtype=complex) for K in kraus)
        if not ops:
            raise BadDimensions("A channel needs at least one Kraus operator")
        shapes = {K.shape for K in ops}
        if len(shapes) != 1:
            raise BadDimensions(f"Kraus operators have mixed shapes {sorted(shapes)}")
        d_in = ops[0].shape[1]
        total = sum(K.conj().T @ K for K in ops)
        residual = float(np.linalg.norm(total - np.eye(d_in)))
        return cls(ops, residual, label)

    @property
    def dim_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus_ops[0].shape[0]

    def apply(self, rho: Operand) -> np.ndarray:
        R = as_matrix(rho)
        if R.shape != (self.dim_in, self.dim_in):
            raise BadDimensions(f"{self.label} expects {self.dim_in}x{self.dim_in} input, got {R.shape}")
        return hermitize(sum(K @ R @ K.conj().T for K in self.kraus_ops))


# Divergence oracles

def _require_support(rho: Operand, sigma: Operand, config) -> None:
    if not spectral_profile(rho, sigma, config=config).support_ok:
        raise SupportViolation("supp(rho) is not contained in supp(sigma)")


def umegaki(rho: Operand, sigma: Operand, config: Optional[qconfig.Config] = None) -> float:
    """Tr[rho (ln rho - ln sigma)] with 0 ln 0 = 0"""
    _require_support(rho, sigma, config)
    R, S = as_matrix(rho), as_matrix(sigma)
    log_r = hermitian_function(R, np.log, support_only=True)
    log_s = hermitian_function(S, np.log, support_only=True)
    return float(np.real(np.trace(R @ (log_r - log_s))))


def petz_q(rho: Operand, sigma: Operand, alpha: float,
           config: Optional[qconfig.Config] = None) -> float:
    """Tr[rho^alpha sigma^{1-alpha}]"""
    a = float(alpha)
    if a > 1.0:
        _require_support(rho, sigma, config)
    R, S = as_matrix(rho), as_matrix(sigma)
    return float(np.real(np.trace(psd_power(R, a) @ psd_power(S, 1.0 - a))))


def sandwiched_q(rho: Operand, sigma: Operand, alpha: float,
                 config: Optional[qconfig.Config] = None) -> float:
    """Tr[(sigma^{(1-a)/2a} rho sigma^{(1-a)/2a})^a]"""
    a = float(alpha)
    if a > 1.0:
        _require_support(rho, sigma, config)
    R, S = as_matrix(rho), as_matrix(sigma)
    side = psd_power(S, (1.0 - a) / (2.0 * a))
    w, _ = eigh_hermitian(side @ R @ side)
    return float(np.sum(np.power(np.clip(w, 0.0, None), a)))


def petz_limit(rho: Operand, sigma: Operand, eps: float = 1e-3,
               config: Optional[qconfig.Config] = None) -> float:
    """Central estimate of (Q_Petz(a) - 1)/(a - 1) at a = 1 +- eps"""
    up = (petz_q(rho, sigma, 1.0 + eps, config) - 1.0) / eps
    down = (1.0 - petz_q(rho, sigma, 1.0 - eps, config)) / eps
    return 0.5 * (up + down)


def classical_divergence(p: Sequence[float], q: Sequence[float],
                         kind: Union[ConvexFunctionSpec, float],
                         tol: float = 1e-9) -> float:
    """sum_i q_i f(p_i/q_i), or the classical Renyi divergence when kind is an order"""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise BadDimensions(f"Probability vectors must match: {p.shape} vs {q.shape}")
    if np.any(p < -tol) or np.any(q < -tol):
        raise BadArgument("Probability vectors must be nonnegative")
    if abs(p.sum() - 1.0) > tol or abs(q.sum() - 1.0) > tol:
        raise BadArgument(f"Probability vectors must sum to 1 ({p.sum():.12g}, {q.sum():.12g})")
    p = np.clip(p, 0.0, None)
    q = np.clip(q, 0.0, None)
    off_support = (q <= 0) & (p > 0)

    if isinstance(kind, ConvexFunctionSpec):
        f = kind
        total = 0.0
        for pi, qi in zip(p, q):
            if qi > 0:
                total += qi * float(f.f(pi / qi))
        if np.any(off_support):
            if not np.isfinite(f.slope_at_infinity):
                raise SupportViolation(f"D_{f.name} is infinite: p has mass where q vanishes")
            total += f.slope_at_infinity * float(p[off_support].sum())
        return total

    a = float(kind)
    if a <= 0 or a == 1.0:
        raise BadArgument(f"Renyi order must be positive and != 1, got {a}")
    if a > 1.0 and np.any(off_support):
        raise SupportViolation("Renyi divergence with alpha > 1 is infinite off the support of q")
    both = (p > 0) & (q > 0)
    Q = float(np.sum(p[both] ** a * q[both] ** (1.0 - a)))
    if Q <= 0:
        return float('inf')
    return float(np.log(Q) / (a - 1.0))


def trace_distance(rho: Operand, sigma: Operand) -> float:
    """(1/2) ||rho - sigma||_1"""
    return 0.5 * trace_norm(as_matrix(rho) - as_matrix(sigma))


def fidelity(rho: Operand, sigma: Operand) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2"""
    root = psd_power(as_matrix(rho), 0.5)
    w, _ = eigh_hermitian(root @ as_matrix(sigma) @ root)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


# Random instances

def random_unitary(dim: int, seed: Seed = None) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix"""
    rng = make_rng(seed)
    Z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(Z)
    phases = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * phases


def random_hermitian(dim: int, seed: Seed = None, scale: float = 1.0) -> np.ndarray:
    rng = make_rng(seed)
    Z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * hermitize(Z)


def random_state(dim: int, rank: Optional[int] = None, seed: Seed = None) -> QuantumState:
    """G G^dagger / Tr with G a complex Gaussian dim x rank block"""
    rank = dim if rank is None else rank
    if dim < 1 or not 1 <= rank <= dim:
        raise BadDimensions(f"Need dim >= 1 and 1 <= rank <= dim, got dim={dim}, rank={rank}")
    rng = make_rng(seed)
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    M = G @ G.conj().T
    return validate_operator(hermitize(M / np.real(np.trace(M))), require_state=True)


def random_channel(dim_in: int, dim_out: int, kraus_rank: int,
                   seed: Seed = None) -> ChannelSpec:
    """Kraus slices of a random isometry C^dim_in -> C^(dim_out * kraus_rank)"""
    if min(dim_in, dim_out, kraus_rank) < 1:
        raise BadDimensions("Channel dimensions and Kraus rank must be >= 1")
    if dim_out * kraus_rank < dim_in:
        raise BadDimensions(
            f"dim_out * kraus_rank = {dim_out * kraus_rank} is too small for an isometry from dim {dim_in}")
    rng = make_rng(seed)
    rows = dim_out * kraus_rank
    Z = rng.normal(size=(rows, dim_in)) + 1j * rng.normal(size=(rows, dim_in))
    V, _ = np.linalg.qr(Z)
    kraus = [V[k * dim_out:(k + 1) * dim_out, :] for k in range(kraus_rank)]
    return ChannelSpec.from_kraus(kraus, label=f'random({dim_in}->{dim_out}, r={kraus_rank})')


def random_commuting_pair(dim: int, seed: Seed = None) -> Tuple[QuantumState, QuantumState]:
    """Dirichlet(1,...,1) spectra in a shared random eigenbasis"""
    if dim < 1:
        raise BadDimensions(f"dim must be >= 1, got {dim}")
    rng = make_rng(seed)
    U = random_unitary(dim, rng)
    p = rng.dirichlet(np.ones(dim))
    q = rng.dirichlet(np.ones(dim))
    rho = (U * p) @ U.conj().T
    sigma = (U * q) @ U.conj().T
    return (validate_operator(hermitize(rho), require_state=True),
            validate_operator(hermitize(sigma), require_state=True))


def random_full_rank_pair(dim: int, seed: Seed = None) -> Tuple[QuantumState, QuantumState]:
    rng = make_rng(seed)
    return random_state(dim, dim, rng), random_state(dim, dim, rng)


def random_instance(kind: str, seed: Seed = None, **params):
    """Dispatch on kind: 'state', 'channel', 'commuting_pair' or 'full_rank_pair'"""
    if kind == 'state':
        return random_state(params.get('dim', 2), params.get('rank'), seed)
    if kind == 'channel':
        d_in = params.get('dim_in', 2)
        return random_channel(d_in, params.get('dim_out', d_in),
                              params.get('kraus_rank', 2), seed)
    if kind == 'commuting_pair':
        return random_commuting_pair(params.get('dim', 2), seed)
    if kind == 'full_rank_pair':
        return random_full_rank_pair(params.get('dim', 2), seed)
    raise BadArgument(f"Unknown random instance kind {kind!r}")


# Standard channels

def depolarizing_channel(dim: int, p: float) -> ChannelSpec:
    """rho -> (1-p) rho + p Tr[rho] I/dim"""
    if not 0.0 <= p <= 1.0:
        raise BadArgument(f"Depolarizing probability must be in [0, 1], got {p}")
    kraus = [np.sqrt(1.0 - p) * np.eye(dim)]
    for i in range(dim):
        for j in range(dim):
            K = np.zeros((dim, dim))
            K[i, j] = np.sqrt(p / dim)
            kraus.append(K)
    return ChannelSpec.from_kraus(kraus, label=f'depolarizing({p:g})')


def amplitude_damping_channel(damping: float) -> ChannelSpec:
    if not 0.0 <= damping <= 1.0:
        raise BadArgument(f"Damping must be in [0, 1], got {damping}")
    K0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - damping)]])
    K1 = np.array([[0.0, np.sqrt(damping)], [0.0, 0.0]])
    return ChannelSpec.from_kraus([K0, K1], label=f'amplitude_damping({damping:g})')


def partial_trace_channel(dim_keep: int, dim_traced: int) -> ChannelSpec:
    """Trace out the second tensor factor"""
    kraus = []
    for j in range(dim_traced):
        e = np.zeros((1, dim_traced))
        e[0, j] = 1.0
        kraus.append(np.kron(np.eye(dim_keep), e))
    return ChannelSpec.from_kraus(kraus, label=f'partial_trace({dim_keep}x{dim_traced})')


def regularize_state(rho: Operand, eps: float,
                     config: Optional[qconfig.Config] = None) -> np.ndarray:
    """(1 - eps) rho + eps I/dim when rho is singular, rho unchanged otherwise"""
    R = as_matrix(rho)
    w, _ = eigh_hermitian(R)
    if w[0] > zero_band(w, len(w), config):
        return R
    d = R.shape[0]
    return (1.0 - eps) * R + eps * np.eye(d) / d
