"""
Convex generators f for quantum f-divergences, with derivatives and conjugates
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from errors import BadArgument

INF = float('inf')


@dataclass(frozen=True)
class ConvexFunctionSpec:
    """f on [0, inf) together with everything the representations need.

    second_atoms lists Dirac masses of f'' as (location, weight): a kink of f
    at x0 where f' jumps by w contributes w * delta_{x0}. prime_power_at_0 is p
    with f'(x) ~ x^p near 0 (0 for bounded or logarithmic behaviour).
    """
    name: str
    f: Callable
    f_prime: Callable
    f_second: Optional[Callable]
    f_at_0: float
    conjugate: Optional[Callable] = None
    conjugate_domain: Tuple[float, float] = (-INF, INF)
    conjugate_closed: Tuple[bool, bool] = (True, True)
    kinks: Tuple[float, ...] = ()
    second_atoms: Tuple[Tuple[float, float], ...] = ()
    slope_at_infinity: float = INF
    prime_power_at_0: float = 0.0
    nondecreasing: bool = False
    convex: bool = True
    normalized: bool = True
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.f_at_0):
            raise BadArgument(f"{self.name}: f(0) must be finite")
        if self.normalized and abs(float(self.f(1.0))) > 1e-12:
            raise BadArgument(f"{self.name}: f(1) must be 0, got {float(self.f(1.0))}")

    def in_conjugate_domain(self, y: float, slack: float = 1e-12) -> bool:
        lo, hi = self.conjugate_domain
        lo_ok = y >= lo - slack if self.conjugate_closed[0] else y > lo
        hi_ok = y <= hi + slack if self.conjugate_closed[1] else y < hi
        return bool(np.isfinite(y) and lo_ok and hi_ok)

    def clip_to_conjugate_domain(self, y: np.ndarray, margin: float = 1e-6) -> np.ndarray:
        lo, hi = self.conjugate_domain
        lo = lo if self.conjugate_closed[0] else lo + margin
        hi = hi if self.conjugate_closed[1] else hi - margin
        return np.clip(y, lo, hi)

    def check_convexity(self, grid: Optional[Sequence[float]] = None,
                        tol: float = 1e-12) -> bool:
        """Midpoint convexity on a grid"""
        xs = np.asarray(grid if grid is not None else np.linspace(0.0, 5.0, 201))
        a, b = xs[:-2], xs[2:]
        mid = 0.5 * (a + b)
        return bool(np.all(self.f(mid) <= 0.5 * (self.f(a) + self.f(b)) + tol))

    def check_fenchel_young(self, xs: Optional[Sequence[float]] = None,
                            ys: Optional[Sequence[float]] = None,
                            tol: float = 1e-10) -> bool:
        """f(x) + f*(y) >= xy on sampled points of the conjugate's domain"""
        if self.conjugate is None:
            return False
        xs = np.asarray(xs if xs is not None else np.linspace(0.0, 6.0, 61))
        if ys is None:
            lo, hi = self.conjugate_domain
            lo = max(lo, -5.0)
            hi = min(hi, 5.0)
            ys = np.linspace(lo, hi, 41)
        ys = [y for y in ys if self.in_conjugate_domain(y)]
        for y in ys:
            if np.any(self.f(xs) + self.conjugate(y) < xs * y - tol):
                return False
        return True


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def _log_or_minus_inf(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore'):
        return np.log(x)


def relative_entropy() -> ConvexFunctionSpec:
    """x ln x"""
    return ConvexFunctionSpec(
        name='kl',
        f=_xlogx,
        f_prime=lambda x: 1.0 + _log_or_minus_inf(x),
        f_second=lambda x: 1.0 / np.asarray(x, dtype=float),
        f_at_0=0.0,
        conjugate=lambda y: np.exp(np.asarray(y, dtype=float) - 1.0),
    )


def chi_squared() -> ConvexFunctionSpec:
    """(x - 1)^2; the conjugate is taken over x >= 0"""
    def conj(y):
        y = np.asarray(y, dtype=float)
        return np.where(y >= -2.0, y + 0.25 * y * y, -1.0)

    return ConvexFunctionSpec(
        name='chi2',
        f=lambda x: (np.asarray(x, dtype=float) - 1.0) ** 2,
        f_prime=lambda x: 2.0 * (np.asarray(x, dtype=float) - 1.0),
        f_second=lambda x: np.full_like(np.asarray(x, dtype=float), 2.0),
        f_at_0=1.0,
        conjugate=conj,
    )


def total_variation() -> ConvexFunctionSpec:
    """|x - 1| / 2 with subgradient +1/2 at the kink"""
    return ConvexFunctionSpec(
        name='tv',
        f=lambda x: 0.5 * np.abs(np.asarray(x, dtype=float) - 1.0),
        f_prime=lambda x: np.where(np.asarray(x, dtype=float) >= 1.0, 0.5, -0.5),
        f_second=None,
        f_at_0=0.5,
        conjugate=lambda y: np.asarray(y, dtype=float),
        conjugate_domain=(-0.5, 0.5),
        kinks=(1.0,),
        second_atoms=((1.0, 1.0),),
        slope_at_infinity=0.5,
    )


def hockey(threshold: float = 1.0) -> ConvexFunctionSpec:
    """(x - c)_+ with c >= 1, so that D_f = E_c"""
    c = float(threshold)
    if c < 1.0:
        raise BadArgument(f"hockey threshold must be >= 1 so that f(1) = 0, got {c}")
    return ConvexFunctionSpec(
        name='hockey' if c != 1.0 else 'positive_part',
        f=lambda x: np.maximum(np.asarray(x, dtype=float) - c, 0.0),
        f_prime=lambda x: np.where(np.asarray(x, dtype=float) >= c, 1.0, 0.0),
        f_second=None,
        f_at_0=0.0,
        conjugate=lambda y: c * np.asarray(y, dtype=float),
        conjugate_domain=(0.0, 1.0),
        kinks=(c,),
        second_atoms=((c, 1.0),),
        slope_at_infinity=1.0,
        nondecreasing=True,
        params={'threshold': c},
    )


def hellinger(alpha: float) -> ConvexFunctionSpec:
    """(x^alpha - 1) / (alpha - 1)"""
    a = float(alpha)
    if a <= 0 or a == 1.0:
        raise BadArgument(f"Hellinger order must be positive and != 1, got {a}")

    def f(x):
        return (np.power(np.asarray(x, dtype=float), a) - 1.0) / (a - 1.0)

    def f_prime(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            return a * np.power(x, a - 1.0) / (a - 1.0)

    def f_second(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            return a * np.power(x, a - 2.0)

    if a > 1.0:
        def conj(y):
            y = np.asarray(y, dtype=float)
            base = np.clip((a - 1.0) * y / a, 0.0, None)
            return np.power(base, a / (a - 1.0)) + 1.0 / (a - 1.0)
        domain, closed, slope = (-INF, INF), (True, True), INF
    else:
        def conj(y):
            y = np.asarray(y, dtype=float)
            return np.power((a - 1.0) * y / a, a / (a - 1.0)) + 1.0 / (a - 1.0)
        domain, closed, slope = (-INF, 0.0), (True, False), 0.0

    return ConvexFunctionSpec(
        name=f'hellinger:{a:g}',
        f=f, f_prime=f_prime, f_second=f_second,
        f_at_0=1.0 / (1.0 - a),
        conjugate=conj,
        conjugate_domain=domain,
        conjugate_closed=closed,
        slope_at_infinity=slope,
        prime_power_at_0=a - 1.0,
        params={'alpha': a},
    )


def squared_hellinger() -> ConvexFunctionSpec:
    """(sqrt(x) - 1)^2"""
    def f_prime(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            return 1.0 - 1.0 / np.sqrt(x)

    def conj(y):
        y = np.asarray(y, dtype=float)
        return y / (1.0 - y)

    return ConvexFunctionSpec(
        name='sq_hellinger',
        f=lambda x: (np.sqrt(np.asarray(x, dtype=float)) - 1.0) ** 2,
        f_prime=f_prime,
        f_second=lambda x: 0.5 * np.power(np.asarray(x, dtype=float), -1.5),
        f_at_0=1.0,
        conjugate=conj,
        conjugate_domain=(-INF, 1.0),
        conjugate_closed=(True, False),
        slope_at_infinity=1.0,
        prime_power_at_0=-0.5,
    )


def power_kernel(alpha: float) -> ConvexFunctionSpec:
    """x^alpha; D_f is then the quasi Renyi divergence Q_alpha (f(1) = 1)"""
    a = float(alpha)
    if a <= 0:
        raise BadArgument(f"power kernel order must be positive, got {a}")

    def f_prime(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            return a * np.power(x, a - 1.0)

    def f_second(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            return a * (a - 1.0) * np.power(x, a - 2.0)

    conj = None
    if a > 1.0:
        def conj(y):
            y = np.clip(np.asarray(y, dtype=float), 0.0, None)
            return (a - 1.0) * np.power(y / a, a / (a - 1.0))

    return ConvexFunctionSpec(
        name=f'power:{a:g}',
        f=lambda x: np.power(np.asarray(x, dtype=float), a),
        f_prime=f_prime, f_second=f_second,
        f_at_0=0.0,
        conjugate=conj,
        slope_at_infinity=INF if a > 1.0 else 0.0,
        prime_power_at_0=a - 1.0,
        nondecreasing=True,
        convex=a >= 1.0,
        normalized=False,
        params={'alpha': a},
    )


_FACTORIES: Dict[str, Callable[..., ConvexFunctionSpec]] = {
    'kl': relative_entropy,
    'xlogx': relative_entropy,
    'relative_entropy': relative_entropy,
    'chi2': chi_squared,
    'tv': total_variation,
    'positive_part': lambda: hockey(1.0),
    'hockey': hockey,
    'hellinger': hellinger,
    'sq_hellinger': squared_hellinger,
    'power': power_kernel,
}

BUILTIN_NAMES = ('kl', 'chi2', 'tv', 'positive_part', 'hockey', 'hellinger',
                 'sq_hellinger', 'power')


def get_convex_function(name: str, param: Optional[float] = None) -> ConvexFunctionSpec:
    """Look up a built-in by name; 'hellinger:2' style suffixes set the parameter"""
    key, _, suffix = name.partition(':')
    key = key.strip().lower()
    if key not in _FACTORIES:
        raise BadArgument(f"Unknown convex function {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if suffix:
        try:
            param = float(suffix)
        except ValueError:
            raise BadArgument(f"Bad parameter in {name!r}")
    if key in ('hellinger', 'power'):
        if param is None:
            raise BadArgument(f"{key} needs an order, e.g. '{key}:2'")
        return _FACTORIES[key](param)
    if key == 'hockey':
        return hockey(1.0 if param is None else param)
    return _FACTORIES[key]()
