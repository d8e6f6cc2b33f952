import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spd(rng, dim, eig_low=0.2, eig_high=5.0):
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    eigs = rng.uniform(eig_low, eig_high, size=dim)
    m = (q * eigs) @ q.T
    return 0.5 * (m + m.T)
