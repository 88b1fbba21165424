import numpy as np
import pytest


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_tuple(rng, n, h, norm):
    X = cgauss(rng, n, h, h)
    return X * (norm / np.linalg.norm(np.concatenate(list(X), axis=1), 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
