"""
Shared fixtures: the modules under lib/ import each other by bare name, so the
directory goes on sys.path the same way run_verify.sh exports PYTHONPATH.
"""
import sys
from pathlib import Path

import numpy as np
import pytest

LIB_DIR = Path(__file__).resolve().parent.parent / "lib"
if str(LIB_DIR) not in sys.path:
    sys.path.insert(0, str(LIB_DIR))

import config as qconfig  # noqa: E402
from oracles import random_commuting_pair, random_full_rank_pair  # noqa: E402


@pytest.fixture
def commuting_pair():
    """rho = diag(3/4, 1/4) against the maximally mixed qubit"""
    return np.diag([0.75, 0.25]).astype(complex), 0.5 * np.eye(2, dtype=complex)


@pytest.fixture
def plus_pair():
    """|+><+| against the maximally mixed qubit"""
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return np.outer(plus, plus).astype(complex), 0.5 * np.eye(2, dtype=complex)


@pytest.fixture
def full_rank_pairs():
    rng = np.random.default_rng(42)
    return [tuple(s.entries for s in random_full_rank_pair(d, rng)) for d in (2, 3, 3, 4)]


@pytest.fixture
def commuting_pairs():
    rng = np.random.default_rng(7)
    return [tuple(s.entries for s in random_commuting_pair(d, rng)) for d in (2, 3, 4)]


@pytest.fixture
def default_config():
    return qconfig.Config()
