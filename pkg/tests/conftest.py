import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=np.uint64(20240901)))


def diag_state(*entries) -> np.ndarray:
    return np.diag(np.asarray(entries, dtype=float)).astype(complex)


@pytest.fixture
def bell_state() -> np.ndarray:
    v = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return np.outer(v, v.conj())
