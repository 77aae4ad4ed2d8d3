"""
Property-based verification suite.

Every identity, inequality and cross-representation agreement the toolkit
relies on is registered as a PropertyCheck. A check draws seeded random
instances, returns one violation number per sample (a residual, or the amount
by which an inequality fails) and passes when the worst one is within its
tolerance.
"""
import logging
import math
import sys
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

import config as qconfig
from convex_functions import (chi_squared, get_convex_function, hellinger, hockey,
                              relative_entropy as kl_function, squared_hellinger,
                              total_variation, BUILTIN_NAMES)
from divergences import (d_alpha, f_divergence, q_alpha, relative_entropy,
                         skew_symmetry_residual)
from duality import (duality_objective, duality_optimum, random_witness,
                     weak_duality_gap)
from errors import BadArgument, PropertySuiteFailure, QdivError
from hockey_stick import e_gamma, nc_min_chain, nc_min_trace
from linalg_core import (as_matrix, eigh_hermitian, frechet_dlog,
                         hermitian_function, projector_positive, spectral_profile)
from oracles import (classical_divergence, fidelity, petz_limit, petz_q, random_channel,
                     random_commuting_pair, random_full_rank_pair, random_hermitian,
                     sandwiched_q, umegaki)
from quadrature import (IntegralTask, darboux_bounds, integrate, integrate_piecewise,
                        rs_integrate)
from rs_dist import build_rs_distribution, change_of_measure_residual, f_div_rs
from testing_exponents import (BOUND_SLACK, TestSpec, asym_exponents, markov_bound,
                               np_errors, optimized_type2_bounds, petz_relaxed_chernoff,
                               prop_bounds)
from trace_reps import (change_of_variables_pair, dlog_layer_cake, log_difference_projint,
                        log_difference_resolvent, order_identity_residual, q_alpha_trace)

logger = logging.getLogger(__name__)

Pair = Tuple[int, np.ndarray, np.ndarray]


@dataclass
class SuiteContext:
    """Trial budget, dimensions, seed and tolerances shared by all checks"""
    trials: int = qconfig.VERIFY_TRIALS
    dims: Tuple[int, ...] = qconfig.VERIFY_DIMS
    seed: int = qconfig.DEFAULT_SEED
    witnesses: int = qconfig.VERIFY_WITNESSES
    config: qconfig.Config = field(default_factory=lambda: qconfig.DEFAULT_CONFIG)

    def rng(self, salt: str) -> np.random.Generator:
        """Independent stream per check, so --only reproduces the full-run samples"""
        return np.random.default_rng([self.seed, zlib.crc32(salt.encode())])

    def pairs(self, salt: str, kind: str = 'full_rank', dims: Optional[Sequence[int]] = None,
              trials: Optional[int] = None) -> Iterator[Pair]:
        rng = self.rng(salt)
        dims = tuple(dims or self.dims)
        make = random_commuting_pair if kind == 'commuting' else random_full_rank_pair
        for k in range(self.trials if trials is None else trials):
            d = dims[k % len(dims)]
            rho, sigma = make(d, rng)
            yield d, as_matrix(rho), as_matrix(sigma)

    @property
    def tight(self) -> qconfig.Config:
        """Tolerances for checks compared against closed forms at 1e-10 and below"""
        return self.config.replace(quad_abs_tol=1e-13, quad_rel_tol=1e-12, rs_abs_tol=1e-12)


@dataclass
class CheckResult:
    name: str
    group: str
    passed: bool
    worst: float
    tolerance: float
    trials: int
    elapsed: float
    message: str = ''

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass
class SuiteReport:
    results: List[CheckResult]
    seed: int
    trials: int
    dims: Tuple[int, ...]
    elapsed: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict[str, object]:
        return {
            'seed': self.seed,
            'trials': self.trials,
            'dims': list(self.dims),
            'elapsed': self.elapsed,
            'all_passed': self.all_passed,
            'results': [r.to_dict() for r in self.results],
        }

    def raise_on_failure(self) -> None:
        if not self.all_passed:
            names = ', '.join(r.name for r in self.failures)
            raise PropertySuiteFailure(f"{len(self.failures)} properties failed: {names}",
                                       failed=[r.name for r in self.failures])


class PropertyCheck:
    """A named property the suite can run"""

    def __init__(self, name: str, description: str,
                 function: Callable[[SuiteContext], Iterable[float]],
                 tolerance: float, group: str):
        self.name = name
        self.description = description
        self.function = function
        self.tolerance = tolerance
        self.group = group

    def run(self, ctx: SuiteContext) -> CheckResult:
        start = time.time()
        worst, count, message = 0.0, 0, ''
        try:
            for violation in self.function(ctx):
                count += 1
                v = float(violation)
                if math.isnan(v):
                    v = math.inf
                worst = max(worst, v)
        except QdivError as e:
            worst, message = math.inf, f"{type(e).__name__}: {e.message}"
        passed = worst <= self.tolerance
        if not passed and not message:
            message = f"worst violation {worst:.3e} exceeds {self.tolerance:.1e}"
        return CheckResult(self.name, self.group, passed, worst, self.tolerance,
                           count, time.time() - start, message)

    def to_dict(self) -> Dict:
        return {"name": self.name, "description": self.description,
                "tolerance": self.tolerance, "group": self.group}


class VerificationSuite:
    """Registry and runner for property checks"""

    def __init__(self, name: str = 'VerifySuite', verbose: bool = False,
                 show_progress: bool = qconfig.PROGRESS_BAR):
        self.name = name
        self.verbose = verbose
        self.show_progress = show_progress
        self.checks: Dict[str, PropertyCheck] = {}

    def register_check(self, check: PropertyCheck):
        self.checks[check.name] = check
        if self.verbose:
            print(f"  [{self.name}] Registered check: {check.name}", file=sys.stderr)

    def select(self, only: Optional[Sequence[str]] = None) -> List[PropertyCheck]:
        """Checks whose name or group matches one of the filters (all when empty)"""
        if not only:
            return list(self.checks.values())
        wanted = set(only)
        unknown = wanted - set(self.checks) - {c.group for c in self.checks.values()}
        if unknown:
            raise BadArgument(f"Unknown checks or groups: {', '.join(sorted(unknown))}")
        return [c for c in self.checks.values() if c.name in wanted or c.group in wanted]

    def run(self, ctx: SuiteContext, only: Optional[Sequence[str]] = None) -> SuiteReport:
        checks = self.select(only)
        print("=" * 60, file=sys.stderr)
        print(f"{self.name}: {len(checks)} checks, trials={ctx.trials}, "
              f"dims={','.join(map(str, ctx.dims))}, seed={ctx.seed}", file=sys.stderr)
        print("=" * 60, file=sys.stderr)

        start = time.time()
        results = []
        for check in tqdm(checks, desc="Properties", disable=not self.show_progress):
            result = check.run(ctx)
            if result.passed:
                logger.debug("%s passed (worst %.3e)", check.name, result.worst)
            else:
                logger.warning("%s failed: %s", check.name, result.message)
            results.append(result)

        report = SuiteReport(results, ctx.seed, ctx.trials, tuple(ctx.dims), time.time() - start)
        print("=" * 60, file=sys.stderr)
        return report


# Helpers

def _fro(M) -> float:
    return float(np.linalg.norm(as_matrix(M)))


def _tr(M) -> float:
    return float(np.real(np.trace(as_matrix(M))))


def _shared_spectra(rho: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalue vectors of a commuting pair in a common eigenbasis"""
    _, V = eigh_hermitian(rho + math.sqrt(2.0) * sigma)
    p = np.real(np.einsum('ij,ik,kj->j', V.conj(), rho, V))
    q = np.real(np.einsum('ij,ik,kj->j', V.conj(), sigma, V))
    return np.clip(p, 0.0, None), np.clip(q, 0.0, None)


def _gamma_grid(top: float, n: int) -> np.ndarray:
    return np.linspace(0.0, 1.2 * max(top, 1.0), n)


def _midpoints(points: Sequence[float]) -> List[float]:
    pts = sorted(set(float(p) for p in points))
    return [0.5 * (a + b) for a, b in zip(pts[:-1], pts[1:])]


# Linear algebra

def _shrinking_gap(distance: Callable[[float], float], delta: float) -> float:
    """Distance left once the offset shrinks 100-fold, net of a linear decay.

    A continuous side moves the projector by O(delta); a jump leaves a
    distance of at least 1 at every offset.
    """
    coarse, fine = distance(delta), distance(1e-2 * delta)
    return max(0.0, fine - 0.1 * coarse)


def check_projector_continuity(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('projector_continuity'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        points = sorted(prof.breakpoints)
        for i, g in enumerate(points):
            # stay clear of the neighbouring breakpoints
            neighbours = [abs(g - h) for h in points[max(i - 1, 0):i + 2]
                          if abs(g - h) > 1e-9 * (1.0 + g)]
            delta = min([1e-5 * (1.0 + g)] + [0.25 * d for d in neighbours])
            at = projector_positive(rho, sigma, g, strict=True, config=ctx.config).op
            yield _shrinking_gap(lambda d: _fro(at - projector_positive(
                rho, sigma, g + d, strict=True, config=ctx.config).op), delta)
            if g > delta:
                loose = projector_positive(rho, sigma, g, strict=False, config=ctx.config).op
                yield _shrinking_gap(lambda d: _fro(loose - projector_positive(
                    rho, sigma, g - d, strict=True, config=ctx.config).op), delta)


def check_rank_monotone(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('rank_monotone'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        ranks = [projector_positive(rho, sigma, g, config=ctx.config).rank
                 for g in _gamma_grid(prof.lambda_max, 200)]
        yield float(max(0, max(b - a for a, b in zip(ranks[:-1], ranks[1:]))))
        # rank changes only across breakpoints
        for lo, hi in zip([0.0] + list(prof.breakpoints), list(prof.breakpoints) + [2 * prof.lambda_max]):
            if hi - lo > 1e-6:
                inner = np.linspace(lo, hi, 7)[1:-1]
                rs = {projector_positive(rho, sigma, g, config=ctx.config).rank for g in inner}
                yield float(len(rs) - 1)


def check_projector_complement(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('projector_complement_gamma')
    for d, rho, sigma in ctx.pairs('projector_complement'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        gammas = list(prof.breakpoints) + list(rng.uniform(0.0, 1.5 * prof.lambda_max, 3))
        for g in gammas:
            above = projector_positive(rho, sigma, g, strict=True, config=ctx.config).op
            below = projector_positive(-rho, -sigma, g, strict=False, config=ctx.config).op
            yield _fro(above + below - np.eye(d))


def check_frechet_identity(ctx: SuiteContext) -> Iterator[float]:
    for d, rho, _ in ctx.pairs('frechet_identity'):
        yield _fro(frechet_dlog(rho, rho, ctx.config) - np.eye(d))


def check_breakpoint_determinant(ctx: SuiteContext) -> Iterator[float]:
    for d, rho, sigma in ctx.pairs('breakpoint_determinant'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        for g in prof.breakpoints:
            scale = (np.linalg.norm(rho, 2) + g * np.linalg.norm(sigma, 2)) ** d
            yield abs(np.linalg.det(rho - g * sigma)) / scale


# Hockey-Stick divergence

def check_e1_trace_distance(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('e1_trace_distance'):
        half_norm = 0.5 * float(np.sum(np.abs(eigh_hermitian(rho - sigma)[0])))
        yield abs(e_gamma(rho, sigma, 1.0, config=ctx.config).value - half_norm)


def check_e_gamma_shape(ctx: SuiteContext) -> Iterator[float]:
    """Nonincreasing and midpoint convex on a grid"""
    for _, rho, sigma in ctx.pairs('e_gamma_shape'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        grid = _gamma_grid(prof.lambda_max, 101)
        vals = np.array([e_gamma(rho, sigma, g, config=ctx.config).value for g in grid])
        yield float(max(0.0, np.max(np.diff(vals))))
        mids = np.array([e_gamma(rho, sigma, 0.5 * (a + b), config=ctx.config).value
                         for a, b in zip(grid[:-2], grid[2:])])
        yield float(max(0.0, np.max(mids - 0.5 * (vals[:-2] + vals[2:]))))


def check_e_gamma_nc_min(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('e_gamma_nc_min_gamma')
    for _, rho, sigma in ctx.pairs('e_gamma_nc_min'):
        for g in rng.uniform(0.0, 3.0, 3):
            expected = _tr(rho) - nc_min_trace(rho, g * sigma)
            yield abs(e_gamma(rho, sigma, g, config=ctx.config).value - expected)


def check_e_gamma_dpi(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('e_gamma_dpi_channel')
    for d, rho, sigma in ctx.pairs('e_gamma_dpi'):
        channel = random_channel(d, d, 2, rng)
        r_out, s_out = channel.apply(rho), channel.apply(sigma)
        for g in (0.5, 1.0, 1.7):
            before = e_gamma(rho, sigma, g, config=ctx.config).value
            after = e_gamma(r_out, s_out, g, config=ctx.config).value
            yield after - before


def check_e_gamma_derivative_integral(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('e_gamma_derivative_integral'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        res = integrate_piecewise(IntegralTask.from_config(
            lambda g: -e_gamma(rho, sigma, g, config=ctx.config).right_deriv,
            0.0, prof.lambda_max, prof.partition_points(), ctx.config))
        yield abs(res.value - _tr(rho))


def check_e_gamma_semi_derivative(ctx: SuiteContext) -> Iterator[float]:
    h = 1e-7
    for _, rho, sigma in ctx.pairs('e_gamma_semi_derivative'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        for g in _midpoints([0.0] + list(prof.breakpoints)):
            v0 = e_gamma(rho, sigma, g, config=ctx.config)
            v1 = e_gamma(rho, sigma, g + h, config=ctx.config)
            yield abs((v1.value - v0.value) / h - v0.right_deriv)


def check_nc_min_chain(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('nc_min_chain'):
        chain = nc_min_chain(rho, sigma, ctx.config)
        yield abs(chain['layer_cake'] - chain['nc_min'])
        yield chain['dlog'] - chain['layer_cake']
        yield chain['sandwich'] - chain['dlog']


# Quadrature

def check_polynomial_exactness(ctx: SuiteContext) -> Iterator[float]:
    poly = np.polynomial.polynomial
    rng = ctx.rng('polynomial_exactness')
    for degree in range(0, 21, 2):
        coeffs = rng.normal(size=degree + 1)
        exact = float(poly.polyval(2.0, poly.polyint(coeffs)))
        scale = float(poly.polyval(2.0, poly.polyint(np.abs(coeffs))))
        res = integrate_piecewise(IntegralTask.from_config(
            lambda x: float(poly.polyval(x, coeffs)), 0.0, 2.0, (0.5, 1.3), ctx.config))
        yield abs(res.value - exact) / max(1.0, scale)


def check_darboux_bracket(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('darboux_bracket'):
        Q = build_rs_distribution(rho, sigma, 'sigma', ctx.config)
        value = rs_integrate(lambda g: g, Q, config=ctx.config)
        lower, upper = darboux_bounds(lambda g: g, Q, config=ctx.config)
        yield max(lower - value, value - upper)


def check_semi_infinite_consistency(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('semi_infinite_consistency')
    for p in rng.uniform(1.5, 3.0, 5):
        exact = 1.0 / (p - 1.0)
        full = integrate(IntegralTask.from_config(
            lambda t: (1.0 + t) ** (-p), 0.0, np.inf, (), ctx.config, tail_decay=p))
        T = 50.0
        head = integrate_piecewise(IntegralTask.from_config(
            lambda t: (1.0 + t) ** (-p), 0.0, T, (), ctx.config))
        tail = (1.0 + T) ** (1.0 - p) / (p - 1.0)
        yield abs(full.value - exact)
        yield abs(head.value + tail - full.value)


# Divergences

def check_q_representations(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('q_representations'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        for a in qconfig.VERIFY_ALPHAS:
            base = q_alpha(rho, sigma, a, 'layercake', ctx.config, prof).value
            methods = ('hs_integral', 'onesided') + (('swapped',) if a < 1 else ())
            for m in methods:
                yield abs(q_alpha(rho, sigma, a, m, ctx.config,
                                  prof if m != 'swapped' else None).value - base)


def check_f_representations(ctx: SuiteContext) -> Iterator[float]:
    functions = (kl_function(), chi_squared(), hellinger(0.5), hellinger(2.0))
    for _, rho, sigma in ctx.pairs('f_representations'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        for f in functions:
            base = f_divergence(rho, sigma, f, 'layercake', ctx.config, prof).value
            for m in ('hs_integral', 'trace'):
                yield abs(f_divergence(rho, sigma, f, m, ctx.config, prof).value - base)
            yield abs(f_divergence(rho, sigma, f, 'shifted', ctx.config, prof, shift=0.7).value - base)


def check_relative_entropy_methods(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('relative_entropy_methods'):
        reference = umegaki(rho, sigma, ctx.config)
        prof = spectral_profile(rho, sigma, config=ctx.config)
        for m in ('projection', 'frenkel', 'layercake', 'renyi_limit'):
            yield abs(relative_entropy(rho, sigma, m, ctx.config, prof).value - reference)


def check_classical_reduction(ctx: SuiteContext) -> Iterator[float]:
    cfg = ctx.tight
    functions = (kl_function(), chi_squared(), total_variation())
    for _, rho, sigma in ctx.pairs('classical_reduction', kind='commuting'):
        p, q = _shared_spectra(rho, sigma)
        prof = spectral_profile(rho, sigma, config=cfg)
        for f in functions:
            expected = classical_divergence(p, q, f)
            for m in ('layercake', 'hs_integral'):
                yield abs(f_divergence(rho, sigma, f, m, cfg, prof).value - expected)
            yield abs(f_div_rs(rho, sigma, f, cfg).value - expected)
        for a in (0.5, 2.0):
            expected = classical_divergence(p, q, a)
            for m in ('layercake', 'hs_integral', 'onesided'):
                yield abs(d_alpha(rho, sigma, a, m, cfg, prof).value - expected)
        yield abs(relative_entropy(rho, sigma, 'layercake', cfg, prof).value
                  - classical_divergence(p, q, kl_function()))


def check_petz_sandwiched_commuting(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('petz_sandwiched_commuting', kind='commuting'):
        p, q = _shared_spectra(rho, sigma)
        for a in (0.5, 2.0):
            expected = float(np.sum(p ** a * q ** (1.0 - a)))
            yield abs(petz_q(rho, sigma, a, ctx.config) - expected)
            yield abs(sandwiched_q(rho, sigma, a, ctx.config) - expected)


def check_fidelity_half_order(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('fidelity_half_order'):
        yield abs(sandwiched_q(rho, sigma, 0.5, ctx.config) ** 2 - fidelity(rho, sigma))


def check_orderings(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('orderings'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        for a in (0.3, 0.5, 0.9):
            yield q_alpha(rho, sigma, a, config=ctx.config, profile=prof).value - petz_q(rho, sigma, a, ctx.config)
        for a in (1.5, 2.0, 3.0):
            yield q_alpha(rho, sigma, a, config=ctx.config, profile=prof).value - sandwiched_q(rho, sigma, a, ctx.config)


def check_data_processing(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('data_processing_channel')
    functions = (kl_function(), chi_squared(), total_variation())
    for d, rho, sigma in ctx.pairs('data_processing'):
        channel = random_channel(d, d, 2, rng)
        r_out, s_out = channel.apply(rho), channel.apply(sigma)
        for f in functions:
            yield (f_divergence(r_out, s_out, f, config=ctx.config).value
                   - f_divergence(rho, sigma, f, config=ctx.config).value)
        for a in (0.5, 2.0):
            yield (d_alpha(r_out, s_out, a, config=ctx.config).value
                   - d_alpha(rho, sigma, a, config=ctx.config).value)


def check_nonnegativity(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('nonnegativity'):
        for f in (kl_function(), chi_squared(), total_variation(), squared_hellinger()):
            yield -f_divergence(rho, sigma, f, config=ctx.config).value
        for a in qconfig.VERIFY_ALPHAS:
            yield -d_alpha(rho, sigma, a, config=ctx.config).value


def check_skew_symmetry(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('skew_symmetry'):
        for a in (0.25, 0.5, 0.75):
            yield skew_symmetry_residual(rho, sigma, a, ctx.tight)


# Trace representations

def check_dlog_layer_cake(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('dlog_layer_cake_direction')
    for d, rho, _ in ctx.pairs('dlog_layer_cake'):
        B = random_hermitian(d, rng)
        yield _fro(dlog_layer_cake(rho, B, ctx.config).op.entries - frechet_dlog(rho, B, ctx.config))


def check_change_of_variables(ctx: SuiteContext) -> Iterator[float]:
    kernels = ((lambda g: 1.0, 0.0), (lambda g: g, 1.0), (lambda g: g * g, 2.0))
    for _, rho, sigma in ctx.pairs('change_of_variables'):
        for h, power in kernels:
            lhs, rhs = change_of_variables_pair(rho, sigma, h, h_power_at_0=power, config=ctx.config)
            yield _fro(lhs.op.entries - rhs.op.entries)


def check_trace_renyi_above_one(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('trace_renyi_above_one'):
        for a in (1.5, 2.0, 3.0):
            yield abs(q_alpha_trace(rho, sigma, a, ctx.config).value
                      - q_alpha(rho, sigma, a, config=ctx.config).value)


def check_trace_renyi_below_one(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('trace_renyi_below_one'):
        for a in (0.3, 0.5):
            yield abs(q_alpha_trace(rho, sigma, a, ctx.config).value
                      - q_alpha(rho, sigma, a, config=ctx.config).value)


def check_trace_sandwiched_order(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('trace_sandwiched_order'):
        for a in (1.5, 2.0, 3.0):
            yield q_alpha_trace(rho, sigma, a, ctx.config).value - sandwiched_q(rho, sigma, a, ctx.config)


def check_order_identity(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('order_identity'):
        for a in (1.5, 2.0, 2.5, 3.0):
            yield order_identity_residual(rho, sigma, a, ctx.config)


def check_log_difference(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('log_difference'):
        exact = hermitian_function(rho, np.log) - hermitian_function(sigma, np.log)
        yield _fro(log_difference_projint(rho, sigma, ctx.config).op.entries - exact)
        yield _fro(log_difference_resolvent(rho, sigma, ctx.config).op.entries - exact)


# Oracles

def check_petz_limit(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('petz_limit'):
        yield abs(petz_limit(rho, sigma, 1e-3, ctx.config) - umegaki(rho, sigma, ctx.config))


def check_channels(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('channels_instances')
    for d, rho, _ in ctx.pairs('channels'):
        channel = random_channel(d, d + 1, 3, rng)
        out = channel.apply(rho)
        yield channel.completeness_residual
        yield abs(_tr(out) - 1.0)
        yield max(0.0, -float(eigh_hermitian(out)[0][0]))


# Riemann-Stieltjes distributions

def check_rs_total_mass(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('rs_total_mass'):
        for weight in ('rho', 'sigma'):
            dist = build_rs_distribution(rho, sigma, weight, ctx.config)
            top = 2.0 * max(dist.support_max, 1.0)
            yield abs(dist(top) - dist.total_mass)
            yield abs(rs_integrate(lambda g: 1.0, dist, config=ctx.config) - dist.total_mass)


def check_rs_f_divergence(ctx: SuiteContext) -> Iterator[float]:
    functions = (kl_function(), total_variation(), chi_squared())
    for _, rho, sigma in ctx.pairs('rs_f_divergence'):
        for f in functions:
            yield abs(f_div_rs(rho, sigma, f, ctx.config).value
                      - f_divergence(rho, sigma, f, config=ctx.config).value)


def check_change_of_measure(ctx: SuiteContext) -> Iterator[float]:
    kernels = (lambda g: 1.0, lambda g: g, lambda g: math.log(g))
    for _, rho, sigma in ctx.pairs('change_of_measure'):
        for g in kernels:
            yield change_of_measure_residual(rho, sigma, g, ctx.config)


def check_rs_monotone(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('rs_monotone'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        grid = _gamma_grid(prof.lambda_max, 1000)
        for weight in ('rho', 'sigma'):
            dist = build_rs_distribution(rho, sigma, weight, ctx.config, prof)
            values = np.array([dist(g) for g in grid])
            yield float(max(0.0, -np.min(np.diff(values))))


def check_rs_commuting_steps(ctx: SuiteContext) -> Iterator[float]:
    """Commuting pairs have pure step curves"""
    for _, rho, sigma in ctx.pairs('rs_commuting_steps', kind='commuting'):
        prof = spectral_profile(rho, sigma, config=ctx.config)
        knots = [0.0] + list(prof.breakpoints) + [2.0 * max(prof.lambda_max, 1.0)]
        for weight in ('rho', 'sigma'):
            dist = build_rs_distribution(rho, sigma, weight, ctx.config, prof)
            for lo, hi in zip(knots[:-1], knots[1:]):
                if hi - lo < 1e-6:
                    continue
                inner = np.linspace(lo, hi, 6)[1:-1]
                values = [dist(g) for g in inner]
                yield max(values) - min(values)


# Hypothesis testing

def _bound_excess(measured: float, bound: Optional[float]) -> float:
    if bound is None:
        return 0.0
    return max(0.0, measured - bound * (1.0 + BOUND_SLACK) - 1e-12)


def check_threshold_test_bounds(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('threshold_test_bounds', dims=(2,)):
        for n in (1, 2, 3):
            for alpha in (0.5, 2.0):
                for a in (-0.2, 0.0, 0.2):
                    r = prop_bounds(rho, sigma, TestSpec(n, a, alpha), ctx.config)
                    yield max(_bound_excess(r.type2_error, r.bound_type2),
                              _bound_excess(r.type1_success, r.bound_type1_success),
                              _bound_excess(r.type1_error, r.bound_type1_error))


def check_threshold_test_hand_cell(ctx: SuiteContext) -> Iterator[float]:
    rho = np.diag([0.75, 0.25]).astype(complex)
    sigma = 0.5 * np.eye(2, dtype=complex)
    r = prop_bounds(rho, sigma, TestSpec(1, 0.3, 2.0), ctx.config)
    yield abs(r.bound_type2 - 0.686)
    yield abs(r.type2_error - 0.5)


def check_markov_inequality(ctx: SuiteContext) -> Iterator[float]:
    f = hockey(1.0)
    for _, rho, sigma in ctx.pairs('markov_inequality', dims=(2,)):
        upper = math.exp(spectral_profile(rho, sigma, config=ctx.config).d_max)
        if upper <= 1.0 + 1e-6:
            continue
        for c in (1.0 + 0.25 * (upper - 1.0), 1.0 + 0.75 * (upper - 1.0)):
            lhs, rhs, _ = markov_bound(rho, sigma, f, c, ctx.config)
            yield lhs - rhs


def check_error_exponents(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('error_exponents', dims=(2,)):
        for alpha in (0.3, 0.7):
            rep = asym_exponents(rho, sigma, TestSpec(2, 0.0, alpha, r=0.1, p=0.4), ctx.config)
            yield max(_bound_excess(rep.hoeffding_type1, rep.hoeffding_bound_type1),
                      _bound_excess(rep.hoeffding_type2, rep.hoeffding_bound_type2),
                      _bound_excess(rep.chernoff_error, rep.chernoff_best_bound))


def check_optimized_bound_tightness(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('optimized_bound_tightness', dims=(2,)):
        for n in (1, 2):
            for a in (0.0, 0.2):
                res = optimized_type2_bounds(rho, sigma, n, a, config=ctx.config)
                yield res['layercake'] - res['sandwiched'] * (1.0 + BOUND_SLACK)
                type2 = np_errors(rho, sigma, n, a, ctx.config)[1]
                yield _bound_excess(type2, res['layercake'])


def check_petz_relaxation(ctx: SuiteContext) -> Iterator[float]:
    for _, rho, sigma in ctx.pairs('petz_relaxation', dims=(2,)):
        res = petz_relaxed_chernoff(rho, sigma, 0.5, 1, config=ctx.config)
        yield res['layercake'] - res['petz'] * (1.0 + BOUND_SLACK)


# Duality

def check_strong_duality(ctx: SuiteContext) -> Iterator[float]:
    functions = (kl_function(), chi_squared(), total_variation(), squared_hellinger())
    for _, rho, sigma in ctx.pairs('strong_duality'):
        for f in functions:
            yield abs(duality_optimum(rho, sigma, f, ctx.config).value
                      - f_div_rs(rho, sigma, f, ctx.config).value)


def check_weak_duality(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('weak_duality_witnesses')
    functions = (kl_function(), chi_squared(), total_variation(), squared_hellinger())
    for _, rho, sigma in ctx.pairs('weak_duality', trials=max(1, ctx.trials // 4)):
        top = spectral_profile(rho, sigma, config=ctx.config).lambda_max
        for f in functions:
            witnesses = [random_witness(f, top, rng) for _ in range(ctx.witnesses)]
            gap = weak_duality_gap(rho, sigma, f, witnesses, ctx.config)
            yield -gap['min_gap']


def check_hellinger_chi2_duality(ctx: SuiteContext) -> Iterator[float]:
    rng = ctx.rng('hellinger_chi2_witnesses')
    chi2, hel2 = chi_squared(), hellinger(2.0)
    for _, rho, sigma in ctx.pairs('hellinger_chi2_duality'):
        top = spectral_profile(rho, sigma, config=ctx.config).lambda_max
        for _ in range(3):
            w = random_witness(chi2, top, rng)
            a = duality_objective(rho, sigma, chi2, w, ctx.config)
            b = duality_objective(rho, sigma, hel2, w.shifted(2.0), ctx.config)
            if a.feasible and b.feasible:
                yield abs(a.value - b.value)
            else:
                yield 0.0 if a.feasible == b.feasible else math.inf


def check_convex_functions(ctx: SuiteContext) -> Iterator[float]:
    for name in BUILTIN_NAMES:
        f = get_convex_function(name, 1.5 if name in ('hellinger', 'power') else None)
        yield 0.0 if f.check_convexity() else 1.0
        if f.conjugate is not None:
            yield 0.0 if f.check_fenchel_young() else 1.0


CHECKS = (
    ('projector_continuity', 'linalg', 1e-8, check_projector_continuity,
     "strict projector is right-continuous, non-strict left-continuous at breakpoints"),
    ('rank_monotone', 'linalg', 0.0, check_rank_monotone,
     "rank of {rho > g sigma} is nonincreasing and changes only at breakpoints"),
    ('projector_complement', 'linalg', 1e-8, check_projector_complement,
     "{A > gB} + {A <= gB} = I"),
    ('frechet_identity', 'linalg', 1e-10, check_frechet_identity,
     "D log[A](A) = I"),
    ('breakpoint_determinant', 'linalg', 1e-8, check_breakpoint_determinant,
     "det(rho - g sigma) vanishes at breakpoints"),
    ('e1_trace_distance', 'hockey_stick', 1e-10, check_e1_trace_distance,
     "E_1 equals the trace distance for states"),
    ('e_gamma_shape', 'hockey_stick', 1e-12, check_e_gamma_shape,
     "E_g is nonincreasing and convex in g"),
    ('e_gamma_nc_min', 'hockey_stick', 1e-10, check_e_gamma_nc_min,
     "E_g(A||B) = Tr A - Tr[A ^ gB]"),
    ('e_gamma_dpi', 'hockey_stick', 1e-8, check_e_gamma_dpi,
     "E_g does not increase under channels"),
    ('e_gamma_derivative_integral', 'hockey_stick', 1e-7, check_e_gamma_derivative_integral,
     "-int right derivative of E_g = Tr A"),
    ('e_gamma_semi_derivative', 'hockey_stick', 1e-4, check_e_gamma_semi_derivative,
     "finite differences match the right derivative away from breakpoints"),
    ('nc_min_chain', 'hockey_stick', 1e-7, check_nc_min_chain,
     "noncommutative minimum chain of inequalities"),
    ('polynomial_exactness', 'quadrature', 1e-12, check_polynomial_exactness,
     "piecewise quadrature integrates polynomials exactly"),
    ('darboux_bracket', 'quadrature', 1e-9, check_darboux_bracket,
     "Darboux sums bracket the Riemann-Stieltjes integral"),
    ('semi_infinite_consistency', 'quadrature', 1e-7, check_semi_infinite_consistency,
     "semi-infinite integration agrees with truncation plus analytic tail"),
    ('q_representations', 'divergences', 1e-6, check_q_representations,
     "Q_alpha layer cake = Hockey-Stick integral = one-sided = swapped"),
    ('f_representations', 'divergences', 1e-6, check_f_representations,
     "D_f layer cake = Hockey-Stick integral = trace = shifted layer cake"),
    ('relative_entropy_methods', 'divergences', 1e-5, check_relative_entropy_methods,
     "all relative entropy methods agree with Umegaki"),
    ('classical_reduction', 'divergences', 1e-10, check_classical_reduction,
     "commuting pairs reduce to classical divergences"),
    ('orderings', 'divergences', 1e-9, check_orderings,
     "Q_alpha <= Petz for alpha < 1 and <= sandwiched for alpha > 1"),
    ('data_processing', 'divergences', 1e-8, check_data_processing,
     "D_f and D_alpha do not increase under channels"),
    ('nonnegativity', 'divergences', 1e-9, check_nonnegativity,
     "D_f >= 0 and D_alpha >= 0 for states"),
    ('skew_symmetry', 'divergences', 1e-8, check_skew_symmetry,
     "D_a(rho||sigma) = a/(1-a) D_{1-a}(sigma||rho)"),
    ('dlog_layer_cake', 'trace_reps', 1e-6, check_dlog_layer_cake,
     "layer-cake D log agrees with divided differences"),
    ('change_of_variables', 'trace_reps', 1e-6, check_change_of_variables,
     "projector integral against h equals the resolvent integral"),
    ('trace_renyi_above_one', 'trace_reps', 1e-5, check_trace_renyi_above_one,
     "trace formula matches the layer cake for alpha > 1"),
    ('trace_renyi_below_one', 'trace_reps', 1e-4, check_trace_renyi_below_one,
     "trace formula matches the layer cake for alpha < 1"),
    ('trace_sandwiched_order', 'trace_reps', 1e-9, check_trace_sandwiched_order,
     "trace formula stays below sandwiched Q_alpha"),
    ('order_identity', 'trace_reps', 1e-6, check_order_identity,
     "weighted and plain resolvent integrals agree for alpha > 1"),
    ('log_difference', 'trace_reps', 1e-6, check_log_difference,
     "projector and resolvent integrals give ln A - ln B"),
    ('petz_sandwiched_commuting', 'oracles', 1e-10, check_petz_sandwiched_commuting,
     "Petz and sandwiched coincide classically on commuting pairs"),
    ('petz_limit', 'oracles', 1e-3, check_petz_limit,
     "Petz divergence tends to Umegaki at alpha = 1"),
    ('fidelity_half_order', 'oracles', 1e-10, check_fidelity_half_order,
     "sandwiched Q_1/2 squared is the fidelity"),
    ('channels', 'oracles', 1e-10, check_channels,
     "random channels are trace preserving and positive"),
    ('rs_total_mass', 'rs_dist', 1e-9, check_rs_total_mass,
     "jump plus continuous variation of P and Q equals the total mass"),
    ('rs_f_divergence', 'rs_dist', 1e-6, check_rs_f_divergence,
     "int f dQ equals the layer-cake D_f"),
    ('change_of_measure', 'rs_dist', 1e-8, check_change_of_measure,
     "int g dP = int g(gamma) gamma dQ"),
    ('rs_monotone', 'rs_dist', 1e-10, check_rs_monotone,
     "P and Q curves are nondecreasing"),
    ('rs_commuting_steps', 'rs_dist', 1e-10, check_rs_commuting_steps,
     "commuting pairs give pure step curves"),
    ('threshold_test_bounds', 'testing', 0.0, check_threshold_test_bounds,
     "finite-n threshold test bounds hold"),
    ('threshold_test_hand_cell', 'testing', 1e-3, check_threshold_test_hand_cell,
     "hand-checked threshold test cell"),
    ('markov_inequality', 'testing', 1e-12, check_markov_inequality,
     "quantum Markov inequality for (x-1)_+"),
    ('error_exponents', 'testing', 0.0, check_error_exponents,
     "Hoeffding and Chernoff type bounds hold"),
    ('optimized_bound_tightness', 'testing', 1e-12, check_optimized_bound_tightness,
     "optimized layer-cake bound is no looser than the sandwiched one"),
    ('petz_relaxation', 'testing', 1e-12, check_petz_relaxation,
     "Petz-relaxed Chernoff bound is no tighter"),
    ('strong_duality', 'duality', 1e-6, check_strong_duality,
     "duality objective at g = f' equals D_f"),
    ('weak_duality', 'duality', 1e-8, check_weak_duality,
     "no witness exceeds D_f"),
    ('hellinger_chi2_duality', 'duality', 1e-8, check_hellinger_chi2_duality,
     "Hellinger alpha=2 objective with shifted witness equals the chi^2 objective"),
    ('convex_functions', 'convex_functions', 0.0, check_convex_functions,
     "built-in generators are convex and satisfy Fenchel-Young"),
)


def build_suite(verbose: bool = False, show_progress: bool = qconfig.PROGRESS_BAR) -> VerificationSuite:
    suite = VerificationSuite(verbose=verbose, show_progress=show_progress)
    for name, group, tol, fn, description in CHECKS:
        suite.register_check(PropertyCheck(name, description, fn, tol, group))
    return suite


def run_suite(trials: int = qconfig.VERIFY_TRIALS, dims: Sequence[int] = qconfig.VERIFY_DIMS,
              seed: int = qconfig.DEFAULT_SEED, only: Optional[Sequence[str]] = None,
              config: Optional[qconfig.Config] = None, verbose: bool = False,
              show_progress: bool = qconfig.PROGRESS_BAR,
              witnesses: int = qconfig.VERIFY_WITNESSES) -> SuiteReport:
    ctx = SuiteContext(trials, tuple(dims), seed, witnesses, qconfig.resolve(config))
    return build_suite(verbose, show_progress).run(ctx, only)
