"""
Configuration settings for the quantum layer-cake divergence toolkit
"""
import os
from dataclasses import dataclass, fields, replace as dc_replace
from pathlib import Path
from typing import Dict, Any, Tuple

# Paths
BASE_DIR = Path(__file__).parent
GENERATED_DIR = BASE_DIR.parent / "generated"  # All generated files go here
STATES_DIR = GENERATED_DIR / "states"

# Matrix validation
HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-9

# Zero-eigenvalue band: eta = ETA_SCALE * dim * eps * spectral norm
ETA_SCALE = 64.0

# Quadrature
QUAD_ABS_TOL = 1e-9
QUAD_REL_TOL = 1e-8
MAX_PANELS = 4096

# Riemann-Stieltjes machinery
RS_ABS_TOL = 1e-10
RS_MAX_LEVEL = 12
JUMP_THRESHOLD = 1e-12

# Trace formula regularization for singular rho (alpha < 1)
TRACE_REG_EPS = 1e-8

# Hypothesis testing
DIM_CAP = 256
ALPHA_GRID: Tuple[float, ...] = tuple(round(0.05 * k, 2) for k in range(1, 20))

# Relative entropy as a Renyi limit
RENYI_LIMIT_EPS: Tuple[float, ...] = (1e-2, 5e-3, 2.5e-3)

# Processing settings
DEFAULT_SEED = 20240917
MAX_WORKERS = 4
PROGRESS_BAR = True

# Verify suite defaults; 20 pairs per check is a smoke run
VERIFY_TRIALS = 20
ACCEPTANCE_TRIALS = 200
VERIFY_DIMS: Tuple[int, ...] = (2, 3, 4)
VERIFY_ALPHAS: Tuple[float, ...] = (0.3, 0.5, 0.9, 1.5, 2.0, 3.0)
VERIFY_WITNESSES = 50

LOG_BASES = ('e', '2')


def _threads_from_env() -> int:
    raw = os.environ.get("QDIV_THREADS")
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, min(value, MAX_WORKERS * 4))


@dataclass(frozen=True)
class Config:
    """Numerical tolerances and run settings shared by every module"""
    hermiticity_tol: float = HERMITICITY_TOL
    psd_tol: float = PSD_TOL
    trace_tol: float = TRACE_TOL
    eta_scale: float = ETA_SCALE
    quad_abs_tol: float = QUAD_ABS_TOL
    quad_rel_tol: float = QUAD_REL_TOL
    max_panels: int = MAX_PANELS
    rs_abs_tol: float = RS_ABS_TOL
    jump_threshold: float = JUMP_THRESHOLD
    trace_reg_eps: float = TRACE_REG_EPS
    dim_cap: int = DIM_CAP
    seed: int = DEFAULT_SEED
    log_base: str = 'e'
    threads: int = 1

    def __post_init__(self):
        # errors imports nothing from here, so this stays acyclic
        from errors import ConfigError

        for name in ('hermiticity_tol', 'psd_tol', 'trace_tol', 'eta_scale',
                     'quad_abs_tol', 'quad_rel_tol', 'rs_abs_tol',
                     'jump_threshold', 'trace_reg_eps'):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.max_panels < 1 or self.dim_cap < 1 or self.threads < 1:
            raise ConfigError("max_panels, dim_cap and threads must be >= 1")
        if self.log_base not in LOG_BASES:
            raise ConfigError(f"log_base must be one of {LOG_BASES}, got {self.log_base!r}")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        """Defaults with QDIV_THREADS applied, then explicit overrides"""
        values: Dict[str, Any] = {'threads': _threads_from_env()}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def replace(self, **changes) -> "Config":
        return dc_replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_CONFIG = Config()


def resolve(config) -> Config:
    """Fall back to the module default when no config is passed"""
    return DEFAULT_CONFIG if config is None else config
