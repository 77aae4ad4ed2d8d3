"""
Write the demo state files used by run_demo.sh and the README examples
"""
from pathlib import Path
from typing import Dict, Optional

import numpy as np

import config as qconfig
from oracles import random_full_rank_pair
from state_io import quick_validate, write_state_file


def demo_states(seed: int = qconfig.DEFAULT_SEED) -> Dict[str, np.ndarray]:
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    qutrit_rho, qutrit_sigma = random_full_rank_pair(3, seed)
    return {
        'commuting_rho': np.diag([0.75, 0.25]).astype(complex),
        'maximally_mixed_2': 0.5 * np.eye(2, dtype=complex),
        'plus': np.outer(plus, plus).astype(complex),
        'qutrit_rho': qutrit_rho.entries,
        'qutrit_sigma': qutrit_sigma.entries,
    }


def create_demo_states(output_dir: Optional[Path] = None,
                       seed: int = qconfig.DEFAULT_SEED) -> Dict[str, Path]:
    output_dir = Path(output_dir or qconfig.STATES_DIR)
    written = {}
    for name, matrix in demo_states(seed).items():
        written[name] = write_state_file(matrix, output_dir / f"{name}.json")
        ok, message = quick_validate(written[name])
        print(f"    {'✓' if ok else '✗'} {name}.json: {message}")
    return written


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("Creating demo state files")
    print("=" * 60 + "\n")

    paths = create_demo_states()

    print(f"\nFiles created in {qconfig.STATES_DIR}:")
    for name, path in paths.items():
        print(f"  - {path.name:28s} ({path.stat().st_size} bytes)")
    print("\n💡 Pairs: commuting_rho vs maximally_mixed_2 (hand-checkable),")
    print("   plus vs maximally_mixed_2 (pure vs mixed), qutrit_rho vs qutrit_sigma (generic)")
