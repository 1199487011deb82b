from pathlib import Path

import numpy as np
import pytest

from linalg.matrix_core import init_eigensolver

PROJECT_DIR = Path(__file__).parent.parent
SPEC_DIR = PROJECT_DIR / 'config' / 'specs'


@pytest.fixture(autouse=True)
def default_eigensolver():
    init_eigensolver()
    yield
    init_eigensolver()


@pytest.fixture
def spec_path():
    def _path(name: str) -> str:
        return str(SPEC_DIR / name)
    return _path


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def toeplitz_oracle(n: int) -> np.ndarray:
    """Eigenvalues of the n x n tridiagonal Toeplitz matrix with symbol 2 + cos t, ascending."""
    k = np.arange(1, n + 1)
    return np.sort(2.0 + np.cos(k * np.pi / (n + 1)))


def class_b_oracle(count: int) -> np.ndarray:
    """Symplectic eigenvalues of the diagonal class B example, largest first."""
    j = np.arange(1, count + 1) + 1.0
    return np.sqrt((1.0 + j ** -2) * (1.0 + j ** -3))
