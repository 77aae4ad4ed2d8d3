"""
JSON state files: {"dim": d, "matrix": [[[re, im], ...], ...]} with row-major
complex entries.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

import config as qconfig
from errors import ParseError, ValidationError
from linalg_core import Operand, QuantumState, as_matrix, validate_operator
from utils import save_json

logger = logging.getLogger(__name__)


def _entry(value: Any, path: str, locus: str) -> complex:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise ParseError(f"{path}: {locus} must be a [re, im] pair of numbers",
                         path=path, locus=locus)
    return complex(float(value[0]), float(value[1]))


def decode_matrix(payload: Any, path: str = '<memory>') -> np.ndarray:
    """Decoded complex matrix of a state-file payload; structure errors carry a JSON locus"""
    if not isinstance(payload, dict):
        raise ParseError(f"{path}: top level must be an object", path=path, locus='$')
    for key in ('dim', 'matrix'):
        if key not in payload:
            raise ParseError(f"{path}: missing key '{key}'", path=path, locus=f'$.{key}')
    dim = payload['dim']
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"{path}: 'dim' must be a positive integer", path=path, locus='$.dim')
    rows = payload['matrix']
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"{path}: 'matrix' must have {dim} rows", path=path, locus='$.matrix')

    M = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{path}: row {i} must have {dim} entries",
                             path=path, locus=f'$.matrix[{i}]')
        for j, value in enumerate(row):
            M[i, j] = _entry(value, path, f'$.matrix[{i}][{j}]')
    return M


def encode_matrix(M: Operand) -> Dict[str, Any]:
    A = as_matrix(M)
    return {
        'dim': int(A.shape[0]),
        'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }


def parse_state_file(path, config: Optional[qconfig.Config] = None,
                     allow_subnormalized: bool = False) -> QuantumState:
    """Read and validate a density matrix"""
    path = Path(path)
    try:
        with open(path, 'r') as f:
            payload = json.load(f)
    except FileNotFoundError:
        raise ParseError(f"{path}: file does not exist", path=str(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})",
                         path=str(path), locus=f'line {e.lineno}')
    M = decode_matrix(payload, str(path))
    state = validate_operator(M, require_state=True, config=config,
                              allow_subnormalized=allow_subnormalized)
    logger.debug("Loaded %s (dim %d, trace %.12g)", path, state.dim, state.trace)
    return state


def write_state_file(state: Operand, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_json(encode_matrix(state), path)
    return path


class StateFileValidator:
    """Validate state files without raising"""

    def __init__(self, config: Optional[qconfig.Config] = None):
        self.config = qconfig.resolve(config)

    def check_file(self, filepath) -> Dict[str, Any]:
        filepath = Path(filepath)
        result = {
            'filepath': str(filepath),
            'exists': filepath.exists(),
            'dim': None,
            'trace': None,
            'min_eig': None,
            'is_valid': False,
            'issues': [],
        }
        if not result['exists']:
            result['issues'].append("File does not exist")
            return result

        try:
            state = parse_state_file(filepath, self.config)
        except ParseError as e:
            result['issues'].append(f"Parse error at {e.details.get('locus', '?')}: {e.message}")
            return result
        except ValidationError as e:
            result['issues'].append(f"{type(e).__name__}: {e.message}")
            return result

        result.update(dim=state.dim, trace=state.trace, min_eig=state.min_eig, is_valid=True)
        return result

    def validate_files(self, filepaths: List[Path]) -> Dict[str, Any]:
        results = {'total_files': len(filepaths), 'valid': [], 'invalid': [], 'issues_summary': {}}
        for filepath in filepaths:
            validation = self.check_file(filepath)
            if validation['is_valid']:
                results['valid'].append(validation)
            else:
                results['invalid'].append(validation)
                for issue in validation['issues']:
                    kind = issue.split(':')[0]
                    results['issues_summary'][kind] = results['issues_summary'].get(kind, 0) + 1
        return results


def quick_validate(filepath) -> Tuple[bool, str]:
    """Quick validation check returning (is_valid, message)"""
    result = StateFileValidator().check_file(filepath)
    if result['is_valid']:
        return True, f"Valid {result['dim']}x{result['dim']} state"
    return False, f"Invalid: {'; '.join(result['issues'])}"
