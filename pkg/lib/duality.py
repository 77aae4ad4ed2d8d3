"""
f-divergence duality: D_f(rho||sigma) = sup_g int g dP - int f*(g) dQ.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

import config as qconfig
from convex_functions import ConvexFunctionSpec
from divergences import DivergenceResult
from errors import BadArgument, DomainViolation, SupportViolation
from linalg_core import Operand, spectral_profile
from oracles import Seed, make_rng
from quadrature import rs_integrate
from rs_dist import build_rs_distribution, f_div_rs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualWitness:
    g: Callable[[float], float]
    label: str = 'witness'
    # points where g is not smooth
    kinks: Tuple[float, ...] = ()

    def __call__(self, gamma: float) -> float:
        return float(self.g(gamma))

    def shifted(self, c: float) -> "DualWitness":
        return DualWitness(lambda x: float(self.g(x)) + c, f"{self.label}{c:+g}", self.kinks)


@dataclass(frozen=True)
class DualityObjective:
    """Objective value, or the minus-infinity tag when the witness leaves dom f*"""
    value: Optional[float]
    feasible: bool
    violation: Optional[DomainViolation] = None

    @property
    def is_minus_infinity(self) -> bool:
        return not self.feasible

    def at_most(self, bound: float, slack: float = 0.0) -> bool:
        return self.is_minus_infinity or self.value <= bound + slack

    def to_dict(self) -> Dict[str, object]:
        return {'value': self.value if self.feasible else '-inf', 'feasible': self.feasible}


def derivative_witness(f: ConvexFunctionSpec) -> DualWitness:
    return DualWitness(lambda x: float(f.f_prime(x)), f"{f.name}'", tuple(f.kinks))


def duality_objective(rho: Operand, sigma: Operand, f: ConvexFunctionSpec,
                      g: DualWitness, config: Optional[qconfig.Config] = None
                      ) -> DualityObjective:
    """int g dP - int f*(g) dQ, checked against dom f* where Q carries mass"""
    if f.conjugate is None:
        raise BadArgument(f"{f.name} has no conjugate")
    cfg = qconfig.resolve(config)
    prof = spectral_profile(rho, sigma, config=cfg)
    if not prof.support_ok:
        raise SupportViolation("duality needs supp(rho) within supp(sigma)")
    P = build_rs_distribution(rho, sigma, 'rho', cfg, prof)
    Q = build_rs_distribution(rho, sigma, 'sigma', cfg, prof)

    def conjugate_of_g(gamma: float) -> float:
        y = g(gamma)
        if not f.in_conjugate_domain(y):
            raise DomainViolation(f"witness {g.label} leaves dom({f.name}*) at gamma={gamma:.6g}",
                                  gamma=gamma, value=y)
        return float(f.conjugate(y))

    try:
        conj_part = rs_integrate(conjugate_of_g, Q, config=cfg, kinks=g.kinks)
    except DomainViolation as e:
        logger.info("DomainViolation: %s", e)
        return DualityObjective(None, False, e)
    linear_part = rs_integrate(g, P, config=cfg, kinks=g.kinks)
    return DualityObjective(float(linear_part - conj_part), True)


def duality_optimum(rho: Operand, sigma: Operand, f: ConvexFunctionSpec,
                    config: Optional[qconfig.Config] = None) -> DivergenceResult:
    """Objective at the optimal witness g = f'"""
    obj = duality_objective(rho, sigma, f, derivative_witness(f), config)
    if not obj.feasible:
        raise obj.violation
    return DivergenceResult(obj.value, 'duality', 0.0)


def random_witness(f: ConvexFunctionSpec, support_max: float, seed: Seed = None,
                   n_knots: int = 6, spread: float = 3.0) -> DualWitness:
    """Piecewise-linear witness on [0, support_max] with values inside dom f*"""
    rng = make_rng(seed)
    lo, hi = f.conjugate_domain
    lo, hi = max(lo, -spread), min(hi, spread)
    xs = np.linspace(0.0, max(support_max, 1e-12), n_knots)
    ys = f.clip_to_conjugate_domain(rng.uniform(lo, hi, size=n_knots))
    return DualWitness(lambda x: float(np.interp(x, xs, ys)), 'random', tuple(float(x) for x in xs))


def weak_duality_gap(rho: Operand, sigma: Operand, f: ConvexFunctionSpec,
                     witnesses: Sequence[DualWitness],
                     config: Optional[qconfig.Config] = None) -> Dict[str, object]:
    """D_f minus each witness objective; infeasible witnesses count as an infinite gap"""
    divergence = f_div_rs(rho, sigma, f, config).value
    gaps: List[float] = []
    for w in witnesses:
        obj = duality_objective(rho, sigma, f, w, config)
        gaps.append(float('inf') if obj.is_minus_infinity else divergence - obj.value)
    return {
        'divergence': divergence,
        'gaps': gaps,
        'min_gap': min(gaps) if gaps else float('inf'),
    }
