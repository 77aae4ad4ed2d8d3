"""
Quantum f-divergences and Renyi divergences through layer-cake and
Hockey-Stick representations.

Every representation reduces to one-dimensional integrals over the threshold
parameter gamma whose integrands are piecewise analytic with kinks only at the
breakpoints of the pair. Integration ranges are cut exactly at the profile's
support bounds, and the first panel below the smallest breakpoint is done in
closed form where the projector is constant.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

import config as qconfig
from convex_functions import ConvexFunctionSpec
from errors import (BadArgument, MissingSecondDerivative, NonPositiveQ,
                    QuadratureFailure, SupportViolation)
from hockey_stick import e_gamma
from linalg_core import (Operand, SpectralProfile, as_matrix, eigh_hermitian,
                         spectral_profile, zero_band)
from quadrature import IntegralResult, IntegralTask, integrate

logger = logging.getLogger(__name__)

Q_METHODS = ('layercake', 'hs_integral', 'onesided', 'swapped')
F_METHODS = ('layercake', 'hs_integral', 'trace', 'shifted')
RELENT_METHODS = ('projection', 'frenkel', 'layercake', 'renyi_limit')

# grading hint used for integrable logarithmic endpoint singularities
LOG_GRADING = -0.5
# smallest breakpoint treated as zero, relative to the largest
_ZERO_BREAKPOINT = 1e-12


@dataclass(frozen=True)
class RenyiOrder:
    alpha: float
    allow_one: bool = False

    def __post_init__(self):
        a = float(self.alpha)
        if not np.isfinite(a) or a <= 0:
            raise BadArgument(f"alpha must be positive, got {self.alpha}")
        if a == 1.0 and not self.allow_one:
            raise BadArgument("alpha=1 requires method renyi_limit")

    @property
    def regime(self) -> str:
        if self.alpha < 1:
            return 'below_one'
        return 'above_one' if self.alpha > 1 else 'one'

    @classmethod
    def coerce(cls, alpha) -> "RenyiOrder":
        return alpha if isinstance(alpha, RenyiOrder) else cls(float(alpha))


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    method: str
    err_estimate: float
    profile: Optional[SpectralProfile] = None
    converged: bool = True
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'method': self.method,
            'err_estimate': self.err_estimate,
            'converged': self.converged,
        }


class _Pair:
    """Matrices, traces and the spectral profile of one (rho, sigma) pair"""

    def __init__(self, rho: Operand, sigma: Operand, config: Optional[qconfig.Config],
                 profile: Optional[SpectralProfile] = None):
        self.cfg = qconfig.resolve(config)
        self.R = as_matrix(rho)
        self.S = as_matrix(sigma)
        self.profile = profile or spectral_profile(self.R, self.S, config=self.cfg)
        self.tr_rho = float(np.real(np.trace(self.R)))
        self.tr_sigma = float(np.real(np.trace(self.S)))

    def sigma_weight(self, gamma: float) -> float:
        """Tr[sigma {rho > gamma sigma}]"""
        return -e_gamma(self.R, self.S, gamma, config=self.cfg).right_deriv

    def rho_weight(self, gamma: float) -> float:
        """Tr[rho {rho > gamma sigma}]"""
        return self.tr_rho - self.rho_weight_below(gamma)

    def rho_weight_below(self, gamma: float) -> float:
        """Tr[rho {rho <= gamma sigma}], from the spectral projector of rho - gamma sigma"""
        w, V = eigh_hermitian(self.R - gamma * self.S)
        eta = zero_band(w, len(w), self.cfg)
        Vs = V[:, w <= eta]
        return float(np.real(np.einsum('ij,ik,kj->', Vs.conj(), self.R, Vs)))

    def hs_forward(self, gamma: float) -> float:
        """E_gamma(rho||sigma)"""
        return e_gamma(self.R, self.S, gamma, config=self.cfg).value

    def hs_reverse_u(self, u: float) -> float:
        """Tr[(u sigma - rho)_+] = u E_{1/u}(sigma||rho)"""
        return e_gamma(self.S, self.R, 1.0 / u, config=self.cfg).value * u if u > 0 else 0.0

    @property
    def points(self) -> np.ndarray:
        p = self.profile
        return p.breakpoints if p.support_ok else p.crossings

    @property
    def first_breakpoint(self) -> float:
        """Smallest breakpoint, or 0 when it is numerically zero"""
        pts = self.points
        if not len(pts):
            return 0.0
        b1 = float(pts[0])
        scale = max(1.0, float(pts[-1]))
        return b1 if b1 > _ZERO_BREAKPOINT * scale else 0.0

    def task(self, fn: Callable[[float], Any], lo: float, hi: float,
             extra: Sequence[float] = (), **kwargs) -> IntegralTask:
        pts = self.profile.partition_points(extra, lo=lo, hi=None if np.isinf(hi) else hi)
        return IntegralTask.from_config(fn, lo, hi, pts, self.cfg, **kwargs)


def _require_support(pair: _Pair, what: str) -> None:
    if not pair.profile.support_ok:
        raise SupportViolation(f"{what} requires supp(rho) within supp(sigma)")


def _run(task: IntegralTask) -> IntegralResult:
    if task.hi <= task.lo:
        return IntegralResult(0.0, 0.0, 0, True)
    result = integrate(task)
    if not np.all(np.isfinite(result.value)):
        raise QuadratureFailure(f"Quadrature produced a non-finite value ({task.label})")
    return result


def _combine(method: str, value: float, results: Sequence[IntegralResult],
             pair: _Pair, scale: float = 1.0, **details) -> DivergenceResult:
    err = abs(scale) * sum(r.err_estimate for r in results)
    converged = all(r.converged for r in results)
    return DivergenceResult(float(value), method, float(err), pair.profile, converged, details)


# Quasi Renyi divergence

def _q_layercake(pair: _Pair, a: float) -> DivergenceResult:
    """Q_a = a int_0^inf gamma^{a-1} Tr[sigma {rho > gamma sigma}] dgamma"""
    hi = pair.profile.upper_support
    b1 = min(pair.first_breakpoint, hi)
    closed = pair.tr_sigma * b1 ** a if b1 > 0 else 0.0

    def integrand(g: float) -> float:
        return a * g ** (a - 1.0) * pair.sigma_weight(g)

    results = [_run(pair.task(integrand, b1, hi,
                              lo_exponent=0.0 if b1 > 0 else a - 1.0,
                              label=f"layercake Q_{a:g}"))]
    if not pair.profile.support_ok:
        # sigma-weight of the positive part decays like gamma^-2 past the last crossing
        results.append(_run(IntegralTask.from_config(
            integrand, hi, np.inf, (), pair.cfg, tail_decay=3.0 - a,
            label=f"layercake Q_{a:g} tail")))
    return _combine('layercake', closed + sum(r.value for r in results), results, pair)


def _q_hs_integral(pair: _Pair, a: float) -> DivergenceResult:
    """1 + a(a-1)[int_1^inf g^{a-2} E_g(rho||sigma) + int_0^1 u^{a-2} Tr(u sigma - rho)_+ du]"""
    hi = pair.profile.upper_support
    b1 = pair.first_breakpoint

    def forward(g: float) -> float:
        return g ** (a - 2.0) * pair.hs_forward(g)

    def reverse(u: float) -> float:
        return u ** (a - 2.0) * pair.hs_reverse_u(u)

    results = []
    if hi > 1.0:
        results.append(_run(pair.task(forward, 1.0, hi, label=f"hs Q_{a:g} forward")))
    if not pair.profile.support_ok:
        results.append(_run(IntegralTask.from_config(
            forward, max(hi, 1.0), np.inf, (), pair.cfg, tail_decay=2.0 - a,
            label=f"hs Q_{a:g} forward tail")))
    if b1 < 1.0:
        # Tr(u sigma - rho)_+ vanishes below the smallest breakpoint and is O(u) near 0
        results.append(_run(pair.task(reverse, b1, 1.0,
                                      lo_exponent=0.0 if b1 > 0 else a - 1.0,
                                      label=f"hs Q_{a:g} reverse")))
    # f(1) Tr sigma + f'(1) Tr[rho - sigma] for f(x) = x^a
    base = pair.tr_sigma + a * (pair.tr_rho - pair.tr_sigma)
    value = base + a * (a - 1.0) * sum(r.value for r in results)
    return _combine('hs_integral', value, results, pair, scale=a * (a - 1.0))


def _q_onesided(pair: _Pair, a: float) -> DivergenceResult:
    b1 = pair.first_breakpoint
    hi = pair.profile.upper_support
    if a < 1.0:
        # (1-a) int gamma^{a-2} Tr[rho {rho <= gamma sigma}], zero below b1
        def integrand(g: float) -> float:
            return (1.0 - a) * g ** (a - 2.0) * pair.rho_weight_below(g)

        results = [_run(pair.task(integrand, b1, hi,
                                  lo_exponent=0.0 if b1 > 0 else a,
                                  label=f"onesided Q_{a:g}"))]
        if pair.profile.support_ok:
            tail = pair.tr_rho * hi ** (a - 1.0) if hi > 0 else 0.0
        else:
            tail = 0.0
            results.append(_run(IntegralTask.from_config(
                integrand, hi, np.inf, (), pair.cfg, tail_decay=2.0 - a,
                label=f"onesided Q_{a:g} tail")))
        return _combine('onesided', tail + sum(r.value for r in results), results, pair)

    _require_support(pair, "Q_alpha for alpha > 1")

    # (a-1) int_0^lambda_max gamma^{a-2} Tr[rho {rho > gamma sigma}], constant Tr rho below b1
    def integrand(g: float) -> float:
        return (a - 1.0) * g ** (a - 2.0) * pair.rho_weight(g)

    closed = pair.tr_rho * b1 ** (a - 1.0) if b1 > 0 else 0.0
    results = [_run(pair.task(integrand, b1, hi,
                              lo_exponent=0.0 if b1 > 0 else a - 2.0,
                              label=f"onesided Q_{a:g}"))]
    return _combine('onesided', closed + sum(r.value for r in results), results, pair)


def _q_swapped(rho: Operand, sigma: Operand, a: float,
               config: Optional[qconfig.Config]) -> DivergenceResult:
    """Q_a(rho||sigma) = Q_{1-a}(sigma||rho) for a in (0, 1)"""
    if not 0 < a < 1:
        raise BadArgument("method 'swapped' needs alpha in (0, 1)")
    reversed_pair = _Pair(sigma, rho, config)
    res = _q_layercake(reversed_pair, 1.0 - a)
    return DivergenceResult(res.value, 'swapped', res.err_estimate,
                            reversed_pair.profile, res.converged)


def q_alpha(rho: Operand, sigma: Operand, alpha, method: str = 'layercake',
            config: Optional[qconfig.Config] = None,
            profile: Optional[SpectralProfile] = None) -> DivergenceResult:
    """Quasi Renyi divergence Q_alpha(rho||sigma)"""
    order = RenyiOrder.coerce(alpha)
    a = order.alpha
    if method not in Q_METHODS:
        raise BadArgument(f"Unknown method {method!r} for Q_alpha; choose from {Q_METHODS}")
    if method == 'swapped':
        return _q_swapped(rho, sigma, a, config)

    pair = _Pair(rho, sigma, config, profile)
    if a > 1.0:
        _require_support(pair, "Q_alpha for alpha > 1")
    logger.debug("Q_%g via %s", a, method)
    if method == 'layercake':
        return _q_layercake(pair, a)
    if method == 'hs_integral':
        return _q_hs_integral(pair, a)
    return _q_onesided(pair, a)


def d_alpha(rho: Operand, sigma: Operand, alpha, method: str = 'layercake',
            config: Optional[qconfig.Config] = None,
            profile: Optional[SpectralProfile] = None) -> DivergenceResult:
    """D_alpha = ln(Q_alpha) / (alpha - 1), in nats"""
    order = RenyiOrder.coerce(alpha)
    q = q_alpha(rho, sigma, order, method, config, profile)
    if q.value <= 0:
        raise NonPositiveQ(f"Q_alpha = {q.value:.3e} is not positive")
    a = order.alpha
    value = float(np.log(q.value) / (a - 1.0))
    err = q.err_estimate / (abs(a - 1.0) * q.value)
    return DivergenceResult(value, q.method, err, q.profile, q.converged, {'q_alpha': q.value})


def hellinger_alpha(rho: Operand, sigma: Operand, alpha, method: str = 'layercake',
                    config: Optional[qconfig.Config] = None) -> DivergenceResult:
    """H_alpha = (Q_alpha - 1) / (alpha - 1)"""
    order = RenyiOrder.coerce(alpha)
    q = q_alpha(rho, sigma, order, method, config)
    a = order.alpha
    return DivergenceResult((q.value - 1.0) / (a - 1.0), q.method,
                            q.err_estimate / abs(a - 1.0), q.profile, q.converged)


def q_alpha_sweep(rho: Operand, sigma: Operand, alphas: Sequence[float],
                  methods: Sequence[str] = ('layercake',),
                  config: Optional[qconfig.Config] = None
                  ) -> List[Tuple[float, str, DivergenceResult]]:
    """Q_alpha over a grid of orders and methods, rows in input order"""
    cfg = qconfig.resolve(config)
    profile = spectral_profile(rho, sigma, config=cfg)
    cells = [(a, m) for a in alphas for m in methods]

    def run(cell):
        a, m = cell
        prof = profile if m != 'swapped' else None
        return (a, m, q_alpha(rho, sigma, a, m, cfg, prof))

    if cfg.threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]


# f-divergences

def _f_layercake(pair: _Pair, f: ConvexFunctionSpec) -> DivergenceResult:
    """f(0) Tr sigma + int_0^lambda_max f'(gamma) Tr[sigma {rho > gamma sigma}]"""
    hi = pair.profile.lambda_max
    b1 = min(pair.first_breakpoint, hi)
    base = f.f_at_0 * pair.tr_sigma
    closed = pair.tr_sigma * (float(f.f(b1)) - f.f_at_0) if b1 > 0 else 0.0

    def integrand(g: float) -> float:
        return float(f.f_prime(g)) * pair.sigma_weight(g)

    lo_exp = 0.0
    if b1 == 0:
        lo_exp = f.prime_power_at_0 if f.prime_power_at_0 != 0 else LOG_GRADING
    res = _run(pair.task(integrand, b1, hi, extra=f.kinks, lo_exponent=lo_exp,
                         label=f"layercake D_{f.name}"))
    return _combine('layercake', base + closed + res.value, [res], pair)


def _f_shifted(pair: _Pair, f: ConvexFunctionSpec, shift: float) -> DivergenceResult:
    """f(c) Tr sigma + int_c^inf f' Tr[sigma{rho > g sigma}] - int_0^c f' Tr[sigma{rho <= g sigma}]"""
    c = float(shift)
    if c <= 0:
        raise BadArgument(f"shift must be positive, got {c}")
    hi = pair.profile.lambda_max
    b1 = pair.first_breakpoint
    results = []
    value = float(f.f(c)) * pair.tr_sigma

    if hi > c:
        above = _run(pair.task(lambda g: float(f.f_prime(g)) * pair.sigma_weight(g),
                               c, hi, extra=f.kinks, label=f"shifted D_{f.name} upper"))
        results.append(above)
        value += above.value
    lo = min(b1, c)
    if c > lo:
        lo_exp = 0.0
        if lo == 0:
            lo_exp = f.prime_power_at_0 + 1.0 if f.prime_power_at_0 < 0 else LOG_GRADING
        below = _run(pair.task(
            lambda g: float(f.f_prime(g)) * (pair.tr_sigma - pair.sigma_weight(g)),
            lo, c, extra=f.kinks, lo_exponent=lo_exp, label=f"shifted D_{f.name} lower"))
        results.append(below)
        value -= below.value
    return _combine('shifted', value, results, pair, shift=c)


def _f_hs_integral(pair: _Pair, f: ConvexFunctionSpec) -> DivergenceResult:
    """int_1^inf f''(g) E_g(rho||sigma) dg + int_0^1 f''(u) Tr(u sigma - rho)_+ du.

    Dirac masses of f'' at x0 contribute E_x0(rho||sigma) for x0 >= 1 and
    Tr(x0 sigma - rho)_+ for x0 < 1; the linear term f'(1-) Tr[rho - sigma]
    vanishes for states.
    """
    if f.f_second is None and not f.second_atoms:
        raise MissingSecondDerivative(f"{f.name} has no second derivative for the hs_integral method")
    hi = pair.profile.lambda_max
    b1 = pair.first_breakpoint
    results = []
    value = 0.0

    if f.f_second is not None:
        if hi > 1.0:
            results.append(_run(pair.task(
                lambda g: float(f.f_second(g)) * pair.hs_forward(g), 1.0, hi,
                label=f"hs D_{f.name} forward")))
        if b1 < 1.0:
            lo_exp = 0.0 if b1 > 0 else f.prime_power_at_0
            results.append(_run(pair.task(
                lambda u: float(f.f_second(u)) * pair.hs_reverse_u(u), b1, 1.0,
                lo_exponent=lo_exp, label=f"hs D_{f.name} reverse")))
        value += sum(r.value for r in results)

    for x0, weight in f.second_atoms:
        if x0 >= 1.0:
            value += weight * pair.hs_forward(x0)
        else:
            value += weight * pair.hs_reverse_u(x0)

    slope_at_one = float(f.f_prime(np.nextafter(1.0, 0.0)))
    value += slope_at_one * (pair.tr_rho - pair.tr_sigma)
    return _combine('hs_integral', value, results, pair)


def _f_trace(pair: _Pair, f: ConvexFunctionSpec) -> DivergenceResult:
    """f(0) Tr sigma + int_0^inf Tr[sigma(sigma+t)^{-1} X f'(X)] dt, X = (sigma+t)^{-1/2} rho (sigma+t)^{-1/2}.

    Evaluated in the eigenbasis of sigma restricted to its support.
    """
    prof = pair.profile
    basis, s = prof.support_basis, prof.support_eigs
    rho_c = basis.conj().T @ pair.R @ basis

    def integrand(t: float) -> float:
        inv_sqrt = 1.0 / np.sqrt(s + t)
        X = inv_sqrt[:, None] * rho_c * inv_sqrt[None, :]
        w, V = eigh_hermitian(X)
        w = np.clip(w, 0.0, None)
        with np.errstate(divide='ignore', invalid='ignore'):
            g = np.where(w > 0, w * f.f_prime(np.where(w > 0, w, 1.0)), 0.0)
        y = s / (s + t)
        weights = np.einsum('i,ij->j', y, np.abs(V) ** 2)
        return float(np.dot(weights, g))

    decay = 2.0 + f.prime_power_at_0
    res = _run(IntegralTask.from_config(integrand, 0.0, np.inf, (), pair.cfg,
                                        tail_decay=decay, label=f"trace D_{f.name}"))
    return _combine('trace', f.f_at_0 * pair.tr_sigma + res.value, [res], pair)


def f_divergence(rho: Operand, sigma: Operand, f: ConvexFunctionSpec,
                 method: str = 'layercake', config: Optional[qconfig.Config] = None,
                 profile: Optional[SpectralProfile] = None,
                 shift: float = 1.0) -> DivergenceResult:
    """Quantum f-divergence D_f(rho||sigma)"""
    if method not in F_METHODS:
        raise BadArgument(f"Unknown method {method!r} for D_f; choose from {F_METHODS}")
    pair = _Pair(rho, sigma, config, profile)
    _require_support(pair, f"D_{f.name}")
    logger.debug("D_%s via %s", f.name, method)
    if method == 'layercake':
        return _f_layercake(pair, f)
    if method == 'hs_integral':
        return _f_hs_integral(pair, f)
    if method == 'shifted':
        return _f_shifted(pair, f, shift)
    return _f_trace(pair, f)


# Relative entropy

def _relent_projection(pair: _Pair) -> DivergenceResult:
    """int_1^inf Tr[rho({rho > g sigma} - {sigma > g rho})] dg / g"""
    hi = pair.profile.lambda_max
    results = []
    value = 0.0
    if hi > 1.0:
        up = _run(pair.task(lambda g: pair.rho_weight(g) / g, 1.0, hi,
                            label="projection D forward"))
        results.append(up)
        value += up.value

    reverse = _Pair(pair.S, pair.R, pair.cfg)

    def rho_above(g: float) -> float:
        # Tr[rho {sigma > g rho}]
        P_w, P_v = eigh_hermitian(pair.S - g * pair.R)
        eta = zero_band(P_w, len(P_w), pair.cfg)
        Vs = P_v[:, P_w > eta]
        return float(np.real(np.einsum('ij,ik,kj->', Vs.conj(), pair.R, Vs))) / g

    rev_hi = reverse.profile.upper_support
    if rev_hi > 1.0:
        down = _run(reverse.task(rho_above, 1.0, rev_hi, label="projection D reverse"))
        results.append(down)
        value -= down.value
    if not reverse.profile.support_ok:
        # rho-weight of the positive part of sigma - g rho decays like g^-2
        tail = _run(IntegralTask.from_config(rho_above, max(rev_hi, 1.0), np.inf, (),
                                             pair.cfg, tail_decay=3.0,
                                             label="projection D reverse tail"))
        results.append(tail)
        value -= tail.value
    return _combine('projection', value, results, pair)


def _relent_frenkel(pair: _Pair) -> DivergenceResult:
    """int_1^inf [E_g(rho||sigma)/g + E_g(sigma||rho)/g^2] dg + Tr[rho - sigma]"""
    hi = pair.profile.lambda_max
    b1 = pair.first_breakpoint
    results = []
    if hi > 1.0:
        results.append(_run(pair.task(lambda g: pair.hs_forward(g) / g, 1.0, hi,
                                      label="frenkel forward")))
    if b1 < 1.0:
        # g = 1/u maps E_g(sigma||rho)/g^2 dg to Tr(u sigma - rho)_+ du / u
        results.append(_run(pair.task(lambda u: pair.hs_reverse_u(u) / u, b1, 1.0,
                                      label="frenkel reverse")))
    value = sum(r.value for r in results) + pair.tr_rho - pair.tr_sigma
    return _combine('frenkel', value, results, pair)


def _relent_layercake(pair: _Pair) -> DivergenceResult:
    """Tr rho + int_0^lambda_max ln(g) Tr[sigma {rho > g sigma}] dg"""
    hi = pair.profile.lambda_max
    b1 = min(pair.first_breakpoint, hi)
    closed = pair.tr_sigma * b1 * (np.log(b1) - 1.0) if b1 > 0 else 0.0
    res = _run(pair.task(lambda g: np.log(g) * pair.sigma_weight(g), b1, hi,
                         lo_exponent=0.0 if b1 > 0 else LOG_GRADING,
                         label="layercake D"))
    return _combine('layercake', pair.tr_rho + closed + res.value, [res], pair)


def _richardson(values: Sequence[float]) -> Tuple[float, float]:
    """Two Richardson levels for a step-halving sequence with an h^2 expansion"""
    level = list(values)
    factor = 4.0
    history = [level]
    while len(level) > 1:
        level = [(factor * level[k + 1] - level[k]) / (factor - 1.0) for k in range(len(level) - 1)]
        history.append(level)
        factor *= 4.0
    best = history[-1][0]
    previous = history[-2][-1]
    return best, abs(best - previous)


def _relent_renyi_limit(rho: Operand, sigma: Operand, pair: _Pair) -> DivergenceResult:
    """(D_{1+e} + D_{1-e}) / 2 extrapolated to e -> 0"""
    tight = pair.cfg.replace(quad_abs_tol=min(pair.cfg.quad_abs_tol, 1e-13),
                             quad_rel_tol=min(pair.cfg.quad_rel_tol, 1e-12))
    central = []
    quad_err = 0.0
    for eps in qconfig.RENYI_LIMIT_EPS:
        up = d_alpha(rho, sigma, 1.0 + eps, 'layercake', tight, pair.profile)
        down = d_alpha(rho, sigma, 1.0 - eps, 'layercake', tight, pair.profile)
        central.append(0.5 * (up.value + down.value))
        quad_err = max(quad_err, up.err_estimate + down.err_estimate)
    value, extrapolation_err = _richardson(central)
    return DivergenceResult(float(value), 'renyi_limit', float(extrapolation_err + quad_err),
                            pair.profile, True,
                            {'eps': list(qconfig.RENYI_LIMIT_EPS), 'central': central})


def relative_entropy(rho: Operand, sigma: Operand, method: str = 'layercake',
                     config: Optional[qconfig.Config] = None,
                     profile: Optional[SpectralProfile] = None,
                     generalized: bool = False) -> DivergenceResult:
    """Tr[rho (ln rho - ln sigma)] in nats; generalized adds Tr[sigma - rho]"""
    if method not in RELENT_METHODS:
        raise BadArgument(f"Unknown method {method!r} for relative entropy; choose from {RELENT_METHODS}")
    pair = _Pair(rho, sigma, config, profile)
    _require_support(pair, "relative entropy")
    if method == 'projection':
        res = _relent_projection(pair)
    elif method == 'frenkel':
        res = _relent_frenkel(pair)
    elif method == 'layercake':
        res = _relent_layercake(pair)
    else:
        res = _relent_renyi_limit(rho, sigma, pair)
    if generalized:
        return DivergenceResult(res.value + pair.tr_sigma - pair.tr_rho, res.method,
                                res.err_estimate, res.profile, res.converged, res.details)
    return res


def skew_symmetry_residual(rho: Operand, sigma: Operand, alpha: float,
                           config: Optional[qconfig.Config] = None) -> float:
    """|D_a(rho||sigma) - a/(1-a) D_{1-a}(sigma||rho)| for a in (0, 1)"""
    a = float(alpha)
    if not 0 < a < 1:
        raise BadArgument(f"skew symmetry needs alpha in (0, 1), got {a}")
    forward = d_alpha(rho, sigma, a, 'layercake', config).value
    backward = d_alpha(sigma, rho, 1.0 - a, 'layercake', config).value
    return abs(forward - a / (1.0 - a) * backward)
