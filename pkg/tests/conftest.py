import numpy as np
import pytest

from mnsmooth.net_tensor import AdjacencyTensor


def random_adjacency(rng, n, K, p=0.5):
    upper = np.triu(rng.random((K, n, n)) < p, 1)
    return AdjacencyTensor((upper | upper.transpose(0, 2, 1)).astype(np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def make_adjacency():
    return random_adjacency
