import numpy as np
import pytest

from minangle import Subspace


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


def e(d, *idx):
    """Sum of standard basis vectors of C^d (1-based indices)."""
    v = np.zeros(d, dtype=complex)
    for i in idx:
        v[i - 1] += 1
    return v


def span(*vectors):
    return Subspace.span(*vectors)
