"""
Neyman-Pearson tests on tensor powers and the finite-n error bounds they
obey in terms of the layer-cake Renyi divergence of the product pair.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config as qconfig
from convex_functions import ConvexFunctionSpec
from divergences import RenyiOrder, d_alpha, f_divergence
from errors import (BadArgument, BadThreshold, DimensionCapExceeded,
                    NonPositiveDenominator, SupportViolation)
from linalg_core import Operand, as_matrix, projector_positive, spectral_profile
from oracles import petz_q, sandwiched_q

logger = logging.getLogger(__name__)

# relative slack used by every holds flag
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class TestSpec:
    """Copies n, log threshold a (nats), order alpha, type-II rate r and prior p"""
    __test__ = False

    n: int
    a: float
    alpha: float
    r: float = 0.0
    p: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise BadArgument(f"n must be >= 1, got {self.n}")
        RenyiOrder.coerce(self.alpha)
        if self.r < 0:
            raise BadArgument(f"r must be >= 0, got {self.r}")
        if not 0.0 < self.p < 1.0:
            raise BadArgument(f"prior p must be in (0, 1), got {self.p}")


@dataclass(frozen=True)
class BoundReport:
    type1_error: float
    type2_error: float
    type1_success: float
    bound_type2: float
    bound_type1_success: Optional[float]
    bound_type1_error: Optional[float]
    holds: Tuple[Optional[bool], Optional[bool], Optional[bool]]
    d_alpha: float

    @property
    def all_hold(self) -> bool:
        return all(h for h in self.holds if h is not None)


@dataclass(frozen=True)
class ExponentReport:
    hoeffding_a: float
    hoeffding_type1: float
    hoeffding_type2: float
    hoeffding_bound_type1: float
    hoeffding_bound_type2: float
    hoeffding_printed_type1: float
    hoeffding_holds: Tuple[bool, bool]
    chernoff_a: float
    chernoff_error: float
    chernoff_bound: float
    chernoff_best_bound: float
    chernoff_best_alpha: float
    chernoff_holds: bool

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def _exp(x: float) -> float:
    return float('inf') if x > 700 else float(np.exp(x))


def _holds(measured: float, bound: Optional[float]) -> Optional[bool]:
    if bound is None:
        return None
    return bool(measured <= bound * (1.0 + BOUND_SLACK) + 1e-12)


def tensor_power(M: Operand, n: int, config: Optional[qconfig.Config] = None) -> np.ndarray:
    """M^{(x)n}, refused beyond the configured dimension cap"""
    cfg = qconfig.resolve(config)
    A = as_matrix(M)
    if A.shape[0] ** n > cfg.dim_cap:
        raise DimensionCapExceeded(
            f"dim^n = {A.shape[0]}^{n} = {A.shape[0] ** n} exceeds the cap {cfg.dim_cap}")
    return reduce(np.kron, [A] * n)


def np_errors(rho: Operand, sigma: Operand, n: int, a: float,
              config: Optional[qconfig.Config] = None) -> Tuple[float, float]:
    """(type-I error, type-II error) of S_n(a) = {rho^n - e^{na} sigma^n > 0}"""
    cfg = qconfig.resolve(config)
    Rn, Sn = tensor_power(rho, n, cfg), tensor_power(sigma, n, cfg)
    S = projector_positive(Rn, Sn, float(np.exp(n * a)), strict=True, config=cfg).op
    accept = float(np.real(np.trace(Rn @ S)))
    type2 = float(np.real(np.trace(Sn @ S)))
    return 1.0 - accept, type2


def product_d_alpha(rho: Operand, sigma: Operand, n: int, alpha: float,
                    config: Optional[qconfig.Config] = None) -> float:
    """D_alpha(rho^n || sigma^n) on the product pair; +inf off the support for alpha > 1"""
    cfg = qconfig.resolve(config)
    try:
        return d_alpha(tensor_power(rho, n, cfg), tensor_power(sigma, n, cfg), alpha,
                       config=cfg).value
    except SupportViolation:
        return float('inf')


def prop_bounds(rho: Operand, sigma: Operand, spec: TestSpec,
                config: Optional[qconfig.Config] = None,
                d_value: Optional[float] = None) -> BoundReport:
    """The three threshold-test bounds against the measured errors of S_n(a)"""
    cfg = qconfig.resolve(config)
    n, a, alpha = spec.n, spec.a, spec.alpha
    type1, type2 = np_errors(rho, sigma, n, a, cfg)
    success = 1.0 - type1
    D = product_d_alpha(rho, sigma, n, alpha, cfg) if d_value is None else d_value

    gap = n * a - D
    bound2 = _exp(-n * a - (alpha - 1.0) * gap)
    bound1s = _exp(-(alpha - 1.0) * gap) if alpha > 1.0 else None
    bound1e = _exp(-(alpha - 1.0) * gap) if alpha < 1.0 else None
    holds = (_holds(type2, bound2), _holds(success, bound1s), _holds(type1, bound1e))
    if not all(h for h in holds if h is not None):
        logger.warning("Bound violated: n=%d a=%g alpha=%g holds=%s", n, a, alpha, holds)
    return BoundReport(type1, type2, success, bound2, bound1s, bound1e, holds, D)


def chernoff_bound(p: float, alpha: float, D: float) -> float:
    """2 p^a (1-p)^{1-a} e^{-(1-a) D}"""
    return 2.0 * p ** alpha * (1.0 - p) ** (1.0 - alpha) * _exp(-(1.0 - alpha) * D)


def asym_exponents(rho: Operand, sigma: Operand, spec: TestSpec,
                   config: Optional[qconfig.Config] = None,
                   alpha_grid: Sequence[float] = qconfig.ALPHA_GRID) -> ExponentReport:
    """Hoeffding-type and Chernoff-type bounds at their prescribed thresholds"""
    cfg = qconfig.resolve(config)
    alpha, n, r, p = spec.alpha, spec.n, spec.r, spec.p
    if not 0.0 < alpha < 1.0:
        raise BadArgument(f"error exponents need alpha in (0, 1), got {alpha}")
    D = product_d_alpha(rho, sigma, n, alpha, cfg)

    a_h = (r + (alpha - 1.0) * D / n) / alpha
    t1_h, t2_h = np_errors(rho, sigma, n, a_h, cfg)
    bound1_h = _exp(n * (alpha - 1.0) / alpha * (D / n - r))
    printed1_h = _exp(-n * (alpha - 1.0) / alpha * (D / n - r))
    bound2_h = _exp(-n * r)
    hoeffding_holds = (bool(_holds(t1_h, bound1_h)), bool(_holds(t2_h, bound2_h)))

    a_c = float(np.log((1.0 - p) / p)) / n
    t1_c, t2_c = np_errors(rho, sigma, n, a_c, cfg)
    error_c = p * t1_c + (1.0 - p) * t2_c
    bound_c = chernoff_bound(p, alpha, D)

    best_bound, best_alpha = bound_c, alpha
    for s in alpha_grid:
        b = chernoff_bound(p, s, product_d_alpha(rho, sigma, n, s, cfg))
        if b < best_bound:
            best_bound, best_alpha = b, s

    return ExponentReport(
        hoeffding_a=a_h, hoeffding_type1=t1_h, hoeffding_type2=t2_h,
        hoeffding_bound_type1=bound1_h, hoeffding_bound_type2=bound2_h,
        hoeffding_printed_type1=printed1_h, hoeffding_holds=hoeffding_holds,
        chernoff_a=a_c, chernoff_error=error_c, chernoff_bound=bound_c,
        chernoff_best_bound=best_bound, chernoff_best_alpha=best_alpha,
        chernoff_holds=bool(_holds(error_c, best_bound)),
    )


def markov_bound(rho: Operand, sigma: Operand, f: ConvexFunctionSpec, c: float,
                 config: Optional[qconfig.Config] = None) -> Tuple[float, float, bool]:
    """Tr[sigma {rho > c sigma}] <= D_f(rho||sigma) / f(c)"""
    cfg = qconfig.resolve(config)
    if not f.nondecreasing or f.f_at_0 < 0:
        raise BadArgument(f"{f.name} must be nondecreasing with f(0) >= 0")
    prof = spectral_profile(rho, sigma, config=cfg)
    upper = float(np.exp(prof.d_max)) if np.isfinite(prof.d_max) else float('inf')
    if not 0.0 < c < upper:
        raise BadThreshold(f"threshold c={c} must lie in (0, e^D_max) = (0, {upper:.6g})")
    fc = float(f.f(c))
    if fc < 0:
        raise NonPositiveDenominator(f"f({c}) = {fc} is negative")
    if fc <= 1e-15:
        raise BadThreshold(f"f({c}) = 0, the bound is vacuous")

    lhs = float(np.real(np.trace(as_matrix(sigma) @ projector_positive(
        rho, sigma, c, strict=True, config=cfg).op)))
    rhs = f_divergence(rho, sigma, f, config=cfg, profile=prof).value / fc
    return lhs, rhs, bool(lhs <= rhs + 1e-12)


def optimized_type2_bounds(rho: Operand, sigma: Operand, n: int, a: float,
                           s_grid: Sequence[float] = (0.25, 0.5, 1.0, 1.5, 2.0),
                           config: Optional[qconfig.Config] = None) -> Dict[str, object]:
    """min over s of e^{-na - s(na - D_{1+s})}, layer cake against sandwiched"""
    cfg = qconfig.resolve(config)
    Rn, Sn = tensor_power(rho, n, cfg), tensor_power(sigma, n, cfg)
    rows = []
    for s in s_grid:
        alpha = 1.0 + s
        d_lc = d_alpha(Rn, Sn, alpha, config=cfg).value
        d_sw = float(np.log(sandwiched_q(Rn, Sn, alpha, cfg)) / s)
        rows.append({
            's': s,
            'layercake': _exp(-n * a - s * (n * a - d_lc)),
            'sandwiched': _exp(-n * a - s * (n * a - d_sw)),
        })
    return {
        'layercake': min(r['layercake'] for r in rows),
        'sandwiched': min(r['sandwiched'] for r in rows),
        'rows': rows,
    }


def petz_relaxed_chernoff(rho: Operand, sigma: Operand, p: float = 0.5, n: int = 1,
                          alpha_grid: Sequence[float] = qconfig.ALPHA_GRID,
                          config: Optional[qconfig.Config] = None) -> Dict[str, float]:
    """Best Chernoff-type bound over the grid with layer-cake and with Petz divergences"""
    cfg = qconfig.resolve(config)
    Rn, Sn = tensor_power(rho, n, cfg), tensor_power(sigma, n, cfg)
    best_lc = best_petz = float('inf')
    for alpha in alpha_grid:
        d_lc = d_alpha(Rn, Sn, alpha, config=cfg).value
        d_petz = float(np.log(petz_q(Rn, Sn, alpha, cfg)) / (alpha - 1.0))
        best_lc = min(best_lc, chernoff_bound(p, alpha, d_lc))
        best_petz = min(best_petz, chernoff_bound(p, alpha, d_petz))
    return {'layercake': best_lc, 'petz': best_petz}


def exponent_grid(rho: Operand, sigma: Operand, ns: Sequence[int], thresholds: Sequence[float],
                  alphas: Sequence[float],
                  config: Optional[qconfig.Config] = None) -> List[Dict[str, object]]:
    """prop_bounds over every (n, a, alpha) cell, rows in grid order"""
    cfg = qconfig.resolve(config)
    divergences = {(n, alpha): product_d_alpha(rho, sigma, n, alpha, cfg)
                   for n in ns for alpha in alphas}
    cells = [(n, a, alpha) for n in ns for a in thresholds for alpha in alphas]

    def run(cell) -> Dict[str, object]:
        n, a, alpha = cell
        report = prop_bounds(rho, sigma, TestSpec(n, a, alpha), cfg, divergences[(n, alpha)])
        return {
            'n': n, 'a': a, 'alpha': alpha,
            'type1': report.type1_error, 'type2': report.type2_error,
            'bound2': report.bound_type2,
            'bound1s': report.bound_type1_success,
            'bound1e': report.bound_type1_error,
            'holds': report.all_hold,
        }

    if cfg.threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]
