"""
Shared utility functions
"""
import json
import math
from pathlib import Path
from typing import Any, List

import numpy as np

LN2 = math.log(2.0)


def to_log_base(value: float, base: str = 'e') -> float:
    """Convert a value in nats to the requested base ('e' or '2')"""
    if base == '2':
        return value / LN2
    return value


def parse_float_list(text: str) -> List[float]:
    """'0.3,0.5, 2' -> [0.3, 0.5, 2.0]"""
    return [float(x) for x in text.split(',') if x.strip()]


def parse_int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(',') if x.strip()]


def parse_range(text: str) -> List[float]:
    """'lo:hi:step' inclusive of hi up to rounding; rejects non-positive steps"""
    parts = text.split(':')
    if len(parts) != 3:
        raise ValueError(f"Expected lo:hi:step, got {text!r}")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0 or hi < lo:
        raise ValueError(f"Bad range {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def jsonable(value: Any) -> Any:
    """Recursively turn numpy scalars/arrays and tuples into JSON-safe values"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def save_json(data: Any, filepath: Path, indent: int = 2) -> None:
    """Save data as JSON"""
    with open(filepath, 'w') as f:
        json.dump(jsonable(data), f, indent=indent)


def load_json(filepath: Path) -> Any:
    """Load data from JSON"""
    with open(filepath, 'r') as f:
        return json.load(f)

