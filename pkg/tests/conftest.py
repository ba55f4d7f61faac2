import sys
from pathlib import Path

import pytest

sys.setrecursionlimit(100_000)
sys.path.insert(0, str(Path(__file__).parent))

from epscalc import Signature, default_axioms, prelude


@pytest.fixture(scope="session")
def sig() -> Signature:
    return prelude()


@pytest.fixture(scope="session")
def axioms(sig):
    return default_axioms()


@pytest.fixture(scope="session")
def demo_dir() -> Path:
    return Path(__file__).parent.parent / "demo"
