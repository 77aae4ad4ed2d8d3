"""
Breakpoint-aware adaptive quadrature.

Scalar or matrix-valued integrands are integrated with a 7-point Gauss /
15-point Kronrod pair on panels aligned to the caller's breakpoints. Panels
whose error exceeds their share of the tolerance are bisected in rounds; the
accumulation order is fixed so that threaded and sequential runs agree.
"""
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

import config as qconfig
from errors import (BadArgument, NonFiniteIntegrand, NotMonotone, SlowDecayWarning,
                    ToleranceNotMet)

logger = logging.getLogger(__name__)

_TINY = np.finfo(float).tiny

# Kronrod abscissae (descending, last is the centre) and weights; Gauss weights
# belong to the odd-indexed abscissae and the centre.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes in ascending order: -x0..-x6, 0, x6..x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS_W = np.zeros(15)
for _k, _w in zip((1, 3, 5), _WG[:3]):
    _GAUSS_W[_k] = _w
    _GAUSS_W[14 - _k] = _w
_GAUSS_W[7] = _WG[3]


@dataclass
class IntegralTask:
    """One definite integral with its breakpoints and tolerances.

    lo_exponent / hi_exponent declare integrable endpoint behaviour
    integrand ~ (gamma - lo)^p or (hi - gamma)^p with p > -1; the end panels are
    graded so the rule sees a smooth function. tail_decay d declares
    integrand ~ t^{-d} for semi-infinite tasks.
    """
    integrand: Callable[[float], Any]
    lo: float
    hi: float
    breakpoints: Sequence[float] = ()
    abs_tol: float = qconfig.QUAD_ABS_TOL
    rel_tol: float = qconfig.QUAD_REL_TOL
    max_panels: int = qconfig.MAX_PANELS
    lo_exponent: float = 0.0
    hi_exponent: float = 0.0
    tail_decay: Optional[float] = None
    workers: int = 1
    label: str = ""

    @classmethod
    def from_config(cls, integrand: Callable[[float], Any], lo: float, hi: float,
                    breakpoints: Sequence[float] = (),
                    config: Optional[qconfig.Config] = None, **kwargs) -> "IntegralTask":
        cfg = qconfig.resolve(config)
        kwargs.setdefault('abs_tol', cfg.quad_abs_tol)
        kwargs.setdefault('rel_tol', cfg.quad_rel_tol)
        kwargs.setdefault('max_panels', cfg.max_panels)
        kwargs.setdefault('workers', cfg.threads)
        return cls(integrand, lo, hi, tuple(breakpoints), **kwargs)

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise BadArgument(f"Integration limits out of order: [{self.lo}, {self.hi}]")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise BadArgument("Tolerances must be positive")


@dataclass
class IntegralResult:
    value: Any
    err_estimate: float
    panels_used: int
    converged: bool


def warn_numerical(category, message: str, label: str = "") -> None:
    """Log and emit a non-fatal numerical condition"""
    text = f"{message} ({label})" if label else message
    logger.warning("%s: %s", category.__name__, text)
    warnings.warn(text, category, stacklevel=3)


def _slow_decay(message: str, label: str = "") -> None:
    warn_numerical(SlowDecayWarning, message, label)


def _norm(x: Any) -> float:
    if np.ndim(x) == 0:
        return float(abs(x))
    return float(np.linalg.norm(x))


@dataclass
class _Panel:
    a: float
    b: float
    fn: Callable[[float], Any]
    order: int
    value: Any = None
    err: float = 0.0


def _gk15(fn: Callable[[float], Any], a: float, b: float) -> Tuple[Any, float]:
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    xs = c + h * _NODES
    vals = []
    for x in xs:
        v = fn(x)
        if not np.all(np.isfinite(v)):
            raise NonFiniteIntegrand(f"Integrand is not finite at {x!r}", at=float(x))
        vals.append(v)
    vals = np.asarray(vals)
    kronrod = h * np.tensordot(_KRONROD_W, vals, axes=1)
    gauss = h * np.tensordot(_GAUSS_W, vals, axes=1)
    return kronrod, _norm(kronrod - gauss)


def _graded(fn: Callable[[float], Any], a: float, b: float, exponent: float,
            at_lo: bool) -> Callable[[float], Any]:
    """Map s in [0,1] onto [a,b] with density q s^{q-1}, q = ceil(p+1)/(p+1), so
    (gamma - a)^p * dgamma becomes s^{ceil(p+1)-1} times a smooth function of s."""
    q = np.ceil(exponent + 1.0) / (exponent + 1.0)
    span = b - a

    def g(s: float):
        step = span * s ** q
        x = a + step if at_lo else b - step
        return fn(x) * (span * q * s ** (q - 1.0))

    return g


def _evaluate(panels: List[_Panel], workers: int) -> None:
    todo = [p for p in panels if p.value is None]
    if workers > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda p: _gk15(p.fn, p.a, p.b), todo))
    else:
        results = [_gk15(p.fn, p.a, p.b) for p in todo]
    for p, (value, err) in zip(todo, results):
        p.value, p.err = value, err


def _initial_panels(task: IntegralTask) -> List[_Panel]:
    cuts = [task.lo]
    for g in sorted(task.breakpoints):
        if task.lo < g < task.hi and g > cuts[-1]:
            cuts.append(float(g))
    cuts.append(task.hi)

    lo_graded = task.lo_exponent < 0 or (0 < task.lo_exponent < 1)
    hi_graded = task.hi_exponent < 0 or (0 < task.hi_exponent < 1)
    if len(cuts) == 2 and lo_graded and hi_graded:
        cuts.insert(1, 0.5 * (task.lo + task.hi))

    panels = []
    last = len(cuts) - 2
    for i, (a, b) in enumerate(zip(cuts[:-1], cuts[1:])):
        if b <= a:
            continue
        if i == 0 and lo_graded:
            panels.append(_Panel(0.0, 1.0, _graded(task.integrand, a, b, task.lo_exponent, True), i))
        elif i == last and hi_graded:
            panels.append(_Panel(0.0, 1.0, _graded(task.integrand, a, b, task.hi_exponent, False), i))
        else:
            panels.append(_Panel(a, b, task.integrand, i))
    return panels


def _accumulate(panels: List[_Panel]) -> Tuple[Any, float]:
    panels.sort(key=lambda p: (p.order, p.a))
    total = None
    err = 0.0
    for p in panels:
        total = p.value if total is None else total + p.value
        err += p.err
    return (0.0 if total is None else total), err


def integrate_piecewise(task: IntegralTask) -> IntegralResult:
    """Adaptive GK15 on panels split at the task's breakpoints"""
    panels = _initial_panels(task)
    if not panels:
        return IntegralResult(0.0, 0.0, 0, True)
    _evaluate(panels, task.workers)

    while True:
        value, err = _accumulate(panels)
        tol = max(task.abs_tol, task.rel_tol * _norm(value))
        if err <= tol:
            return IntegralResult(value, err, len(panels), True)
        room = task.max_panels - len(panels)
        if room <= 0:
            warn_numerical(ToleranceNotMet, f"err {err:.3e} > tol {tol:.3e} after {len(panels)} panels",
                           task.label)
            return IntegralResult(value, err, len(panels), False)

        share = tol / len(panels)
        candidates = sorted((p for p in panels if p.err > share),
                            key=lambda p: (-p.err, p.order, p.a))
        if not candidates:
            candidates = [max(panels, key=lambda p: p.err)]
        chosen = candidates[:room]
        chosen_ids = {id(p) for p in chosen}

        refined: List[_Panel] = []
        for p in panels:
            if id(p) in chosen_ids:
                mid = 0.5 * (p.a + p.b)
                if not p.a < mid < p.b:
                    # cannot split further in floating point
                    refined.append(p)
                    continue
                refined.append(_Panel(p.a, mid, p.fn, p.order))
                refined.append(_Panel(mid, p.b, p.fn, p.order))
            else:
                refined.append(p)
        if len(refined) == len(panels):
            warn_numerical(ToleranceNotMet, "panels cannot be refined further", task.label)
            return IntegralResult(value, err, len(panels), False)
        panels = refined
        _evaluate(panels, task.workers)


def integrate_semi_infinite(task: IntegralTask) -> IntegralResult:
    """Integrate over [lo, inf) as [lo, lo+1] plus the tail through t = lo + 1/w.

    The tail variable w runs over (0, 1] with the decaying end at w = 0, so the
    graded nodes there are exact small numbers rather than 1 - tiny.
    """
    lo = task.lo
    f = task.integrand
    split = lo + 1.0

    def tail(w: float):
        w2 = w * w
        if w2 < _TINY:
            # graded node underflowed onto the decaying end
            return 0.0 * f(split)
        return f(lo + 1.0 / w) / w2

    w_breaks = [1.0 / (g - lo) for g in task.breakpoints if np.isfinite(g) and g > split]
    tail_exp = 0.0
    if task.tail_decay is not None:
        if task.tail_decay <= 1.0:
            _slow_decay(f"tail decay t^-{task.tail_decay:.3g} is not integrable", task.label)
        tail_exp = max(task.tail_decay - 2.0, -0.999)

    share = 0.5 * task.abs_tol
    head = integrate_piecewise(IntegralTask(f, lo, split, task.breakpoints, share, task.rel_tol,
                                            task.max_panels, task.lo_exponent, 0.0, None,
                                            task.workers, task.label))
    rest = integrate_piecewise(IntegralTask(tail, 0.0, 1.0, w_breaks, share, task.rel_tol,
                                            task.max_panels, tail_exp, 0.0, None,
                                            task.workers, task.label))
    if not rest.converged:
        _slow_decay(f"tail did not converge (err {rest.err_estimate:.3e})", task.label)
    return IntegralResult(head.value + rest.value, head.err_estimate + rest.err_estimate,
                          head.panels_used + rest.panels_used, head.converged and rest.converged)


def integrate(task: IntegralTask) -> IntegralResult:
    """Dispatch on a finite or infinite upper limit"""
    if np.isinf(task.hi):
        return integrate_semi_infinite(task)
    return integrate_piecewise(task)


def integrate_matrix(task: IntegralTask, dim: int) -> IntegralResult:
    """Entrywise integral of a matrix-valued integrand; errors are Frobenius norms"""
    if task.hi <= task.lo:
        return IntegralResult(np.zeros((dim, dim), dtype=complex), 0.0, 0, True)
    result = integrate(task)
    value = np.asarray(result.value, dtype=complex)
    if value.ndim == 0:
        value = np.full((dim, dim), value, dtype=complex)
    return IntegralResult(value, result.err_estimate, result.panels_used, result.converged)


# Riemann-Stieltjes integration against monotone curves

def _romberg_midpoint(f: Callable[[float], float], curve: Callable[[float], float],
                      a: float, b: float, c_a: float, c_b: float,
                      abs_tol: float, max_level: int, mono_tol: float
                      ) -> Tuple[float, float, bool]:
    """Smooth part of int f dC on the open interval (a, b).

    c_a is the curve value at a (right limit), c_b the left limit at b. Midpoint
    Stieltjes sums on dyadic partitions have an even error expansion in the
    mesh, so a Richardson table accelerates them.
    """
    cache = {0: c_a}
    n_max = 2 ** max_level

    def c_at(k: int, n: int) -> float:
        key = k * (n_max // n)
        if key == n_max:
            return c_b
        if key not in cache:
            cache[key] = curve(a + (b - a) * key / n_max)
        return cache[key]

    table: List[List[float]] = []
    prev_diag = None
    for level in range(max_level + 1):
        n = 2 ** level
        total = 0.0
        for k in range(n):
            lo_c, hi_c = c_at(k, n), c_at(k + 1, n)
            inc = hi_c - lo_c
            if inc < -mono_tol:
                raise NotMonotone(
                    f"Curve decreases by {-inc:.3e} on [{a + (b - a) * k / n}, {a + (b - a) * (k + 1) / n}]")
            total += f(a + (b - a) * (k + 0.5) / n) * inc
        row = [total]
        for j in range(level):
            factor = 4.0 ** (j + 1)
            row.append((factor * row[j] - table[level - 1][j]) / (factor - 1.0))
        table.append(row)
        diag = row[-1]
        if level >= 3 and abs(diag - prev_diag) < abs_tol:
            return diag, abs(diag - prev_diag), True
        prev_diag = diag
    return prev_diag, abs(table[-1][-1] - table[-2][-2]) if len(table) > 1 else 0.0, False


def _rs_knots(curve, kinks: Sequence[float]) -> List[float]:
    knots = {0.0, *(k for k in curve.knots if k > 0.0)}
    knots.update(float(k) for k in kinks if 0.0 < k < curve.support_max)
    if curve.support_max > max(knots):
        knots.add(float(curve.support_max))
    return sorted(knots)


def rs_integrate(f: Callable[[float], float], curve, abs_tol: Optional[float] = None,
                 config: Optional[qconfig.Config] = None,
                 full_output: bool = False, kinks: Sequence[float] = ()):
    """Riemann-Stieltjes integral of f against a distribution with jumps.

    curve needs .jumps [(gamma, mass)], .smooth_curve (right-continuous curve
    value), .knots (sorted breakpoints) and .support_max. Jumps contribute
    f(gamma_k) * mass_k; between knots the remaining continuous variation is
    integrated with refined breakpoint-aligned sums.
    Points where f itself is not smooth go in kinks and become extra knots.
    """
    cfg = qconfig.resolve(config)
    tol = cfg.rs_abs_tol if abs_tol is None else abs_tol
    mono_tol = 1e3 * cfg.jump_threshold

    value = 0.0
    for gamma, mass in curve.jumps:
        if mass > cfg.jump_threshold:
            value += f(gamma) * mass

    knots = _rs_knots(curve, kinks)
    jump_at = {g: m for g, m in curve.jumps}
    intervals = list(zip(knots[:-1], knots[1:]))
    share = tol / max(len(intervals), 1)

    err_total = 0.0
    converged = True
    for a, b in intervals:
        c_a = curve.smooth_curve(a)
        c_b = curve.smooth_curve(b) - jump_at.get(b, 0.0)
        if c_b - c_a < -mono_tol:
            raise NotMonotone(f"Curve decreases across ({a}, {b}): {c_a} -> {c_b}")
        if abs(c_b - c_a) <= cfg.jump_threshold:
            continue
        part, err, ok = _romberg_midpoint(f, curve.smooth_curve, a, b, c_a, c_b,
                                          share, qconfig.RS_MAX_LEVEL, mono_tol)
        value += part
        err_total += err
        converged = converged and ok
    if not converged:
        warn_numerical(ToleranceNotMet, f"Riemann-Stieltjes refinement stopped at err {err_total:.3e}")
    if full_output:
        return value, err_total, converged
    return value


def darboux_bounds(f: Callable[[float], float], curve, n: int = 64,
                   config: Optional[qconfig.Config] = None,
                   kinks: Sequence[float] = ()) -> Tuple[float, float]:
    """Lower and upper Stieltjes sums on n breakpoint-aligned cells per interval.

    Cell extrema of f are taken over the cell endpoints and midpoint, which is
    exact for f monotone on each cell.
    """
    cfg = qconfig.resolve(config)
    lower = upper = 0.0
    for gamma, mass in curve.jumps:
        if mass > cfg.jump_threshold:
            lower += f(gamma) * mass
            upper += f(gamma) * mass

    knots = _rs_knots(curve, kinks)
    jump_at = {g: m for g, m in curve.jumps}
    for a, b in zip(knots[:-1], knots[1:]):
        c_a = curve.smooth_curve(a)
        c_b = curve.smooth_curve(b) - jump_at.get(b, 0.0)
        if abs(c_b - c_a) <= cfg.jump_threshold:
            continue
        xs = np.linspace(a, b, n + 1)
        cs = [c_a] + [curve.smooth_curve(x) for x in xs[1:-1]] + [c_b]
        for k in range(n):
            inc = cs[k + 1] - cs[k]
            # open interval: endpoints of the interval are sampled just inside
            x0 = xs[k] if k > 0 else a + 1e-12 * (b - a)
            x1 = xs[k + 1] if k < n - 1 else b - 1e-12 * (b - a)
            samples = (f(x0), f(0.5 * (xs[k] + xs[k + 1])), f(x1))
            lower += min(samples) * inc
            upper += max(samples) * inc
    return lower, upper
