import numpy as np
import pytest

from mnsmooth.errors import IndexOutOfRange, InvalidParameter, SelfLoopRejected, ShapeMismatch
from mnsmooth.net_tensor import (
    AdjacencyTensor,
    ProbabilityTensor,
    build_adjacency,
    layer_gram,
    node_gram,
    node_grams,
)

import oracles


def test_build_adjacency_mirrors_edges():
    A = build_adjacency(3, 2, [(0, 1, 0), (1, 2, 1)])
    assert A.data.shape == (2, 3, 3)
    assert A.data[0, 0, 1] == A.data[0, 1, 0] == 1
    assert A.data[1, 1, 2] == A.data[1, 2, 1] == 1
    assert A.edge_count() == 2
    assert A.n == 3 and A.K == 2


def test_build_adjacency_rejects_bad_entries():
    with pytest.raises(SelfLoopRejected):
        build_adjacency(3, 1, [(1, 1, 0)])
    with pytest.raises(IndexOutOfRange):
        build_adjacency(3, 1, [(0, 3, 0)])
    with pytest.raises(IndexOutOfRange):
        build_adjacency(3, 1, [(0, 1, 1)])


def test_adjacency_validation():
    with pytest.raises(SelfLoopRejected):
        AdjacencyTensor(np.eye(3, dtype=np.uint8)[None])
    asym = np.zeros((1, 3, 3), dtype=np.uint8)
    asym[0, 0, 1] = 1
    with pytest.raises((ShapeMismatch, InvalidParameter)):
        AdjacencyTensor(asym)
    with pytest.raises((ShapeMismatch, InvalidParameter)):
        AdjacencyTensor(np.full((1, 3, 3), 2, dtype=np.uint8))
    with pytest.raises(ShapeMismatch):
        AdjacencyTensor(np.zeros((3, 3), dtype=np.uint8))


def test_adjacency_is_read_only(rng, make_adjacency):
    A = make_adjacency(rng, 5, 2)
    with pytest.raises(ValueError):
        A.data[0, 0, 1] = 1


def test_probability_tensor_range():
    with pytest.raises((ShapeMismatch, InvalidParameter)):
        ProbabilityTensor(np.full((1, 2, 2), 1.5))
    P = ProbabilityTensor(np.full((1, 2, 2), 0.25))
    assert P.data.dtype == np.float64


def test_node_gram_triangle():
    A = build_adjacency(3, 1, [(0, 1, 0), (1, 2, 0), (0, 2, 0)])
    G = node_gram(A, 0)
    np.testing.assert_allclose(G.matrix, np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]]) / 3)


def test_node_gram_index_error(rng, make_adjacency):
    with pytest.raises(IndexOutOfRange):
        node_gram(make_adjacency(rng, 4, 2), 2)


@pytest.mark.parametrize("n,K,p", [(4, 1, 0.5), (7, 3, 0.2), (9, 4, 0.8)])
def test_grams_match_loop_oracle(rng, make_adjacency, n, K, p):
    A = make_adjacency(rng, n, K, p)
    L = oracles.to_lists(A)
    for k, G in enumerate(node_grams(A)):
        assert G.counts.tolist() == oracles.node_gram_counts(L[k])
    assert layer_gram(A).counts.tolist() == oracles.layer_gram_counts(L)
    np.testing.assert_array_equal(layer_gram(A).matrix, np.array(oracles.layer_gram_counts(L)) / n**2)
