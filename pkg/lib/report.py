"""
CSV and text reports: sweep tables, Riemann-Stieltjes staircases, exponent
grids and the verify-suite summary.

Headers are fixed and numbers use '.' with repr-level precision, so identical
inputs give byte-identical files.
"""
import csv
import io
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from divergences import DivergenceResult
from utils import save_json, to_log_base

SWEEP_HEADER = ('alpha', 'method', 'q_alpha', 'd_alpha', 'err_estimate', 'converged')
RS_HEADER = ('gamma', 'P', 'Q', 'jump_P', 'jump_Q')
EXPONENT_HEADER = ('n', 'a', 'alpha', 'type1', 'type2', 'bound2', 'bound1s', 'bound1e', 'holds')


def format_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return repr(value)
    return str(value)


def write_csv(rows: Iterable[Dict[str, Any]], header: Sequence[str],
              out: Optional[TextIO] = None) -> str:
    """Write rows under a fixed header; returns the text when out is None"""
    buffer = out if out is not None else io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(row.get(col)) for col in header])
    return buffer.getvalue() if out is None else ''


def write_csv_file(rows: Iterable[Dict[str, Any]], header: Sequence[str], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        write_csv(rows, header, f)
    return path


def sweep_rows(results: Sequence[Tuple[float, str, DivergenceResult]],
               log_base: str = 'e') -> List[Dict[str, Any]]:
    """Rows of SWEEP_HEADER; d_alpha is blank where Q_alpha is not positive"""
    rows = []
    for alpha, method, res in results:
        q = float(res.value)
        d = to_log_base(math.log(q) / (alpha - 1.0), log_base) if q > 0 else None
        rows.append({
            'alpha': float(alpha),
            'method': method,
            'q_alpha': q,
            'd_alpha': d,
            'err_estimate': float(res.err_estimate),
            'converged': bool(res.converged),
        })
    return rows


def method_spread(rows: Sequence[Dict[str, Any]]) -> Dict[float, float]:
    """max - min of q_alpha across methods at each alpha"""
    by_alpha: Dict[float, List[float]] = {}
    for row in rows:
        by_alpha.setdefault(row['alpha'], []).append(row['q_alpha'])
    return {a: max(vs) - min(vs) for a, vs in by_alpha.items()}


def format_check_table(results: Sequence[Any]) -> str:
    """Per-property pass/fail table for CheckResult-like records"""
    width = max([len(r.name) for r in results] + [8])
    lines = [
        f"{'property':<{width}}  {'status':<6}  {'worst':>11}  {'tolerance':>9}  trials",
        '-' * (width + 44),
    ]
    for r in results:
        status = 'PASS' if r.passed else 'FAIL'
        lines.append(f"{r.name:<{width}}  {status:<6}  {r.worst:>11.3e}  {r.tolerance:>9.1e}  {r.trials}")
    passed = sum(1 for r in results if r.passed)
    lines.append('-' * (width + 44))
    lines.append(f"{passed}/{len(results)} properties passed")
    return '\n'.join(lines)


def save_suite_report(report: Dict[str, Any], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_json(report, path)
    return path
