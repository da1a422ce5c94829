import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mnsmooth.distances import excluded_chebyshev, layer_distances, node_distances
from mnsmooth.errors import TooFewLayers
from mnsmooth.net_tensor import LayerGram, layer_gram, node_gram

import oracles


def test_three_layer_example():
    # counts / n^2 with n = 10 gives T = [[.1, .2, .3], [.1, .2, .3], [.5, .5, .5]]
    T = LayerGram(counts=np.array([[10, 20, 30], [10, 20, 30], [50, 50, 50]]), n=10)
    D = layer_distances(T).D
    assert D[0, 2] == pytest.approx(0.3, abs=1e-15)
    assert D[0, 1] == 0.0
    assert D[1, 2] == pytest.approx(0.4, abs=1e-15)


def test_tiny_sizes():
    assert excluded_chebyshev(np.zeros((1, 1), dtype=np.int64)).tolist() == [[0]]
    # with m = 2 the candidate set is empty
    assert excluded_chebyshev(np.array([[0, 7], [3, 1]])).tolist() == [[0, 0], [0, 0]]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9).flatmap(
    lambda m: st.lists(st.lists(st.integers(-50, 2**40), min_size=m, max_size=m), min_size=m, max_size=m)))
def test_kernel_matches_loop_oracle(rows):
    got = excluded_chebyshev(np.array(rows, dtype=np.int64))
    assert got.tolist() == oracles.excluded_chebyshev(rows)


def test_distances_symmetric_zero_diagonal(rng, make_adjacency):
    A = make_adjacency(rng, 8, 3)
    for k in range(3):
        D = node_distances(node_gram(A, k)).D
        np.testing.assert_array_equal(D, D.T)
        assert not np.diag(D).any()
        assert D.tolist() == oracles.node_distance_matrix(oracles.to_lists(A)[k])
    DL = layer_distances(layer_gram(A)).D
    assert DL.tolist() == oracles.layer_distance_matrix(oracles.to_lists(A))


def test_layer_distances_need_two_layers(rng, make_adjacency):
    with pytest.raises(TooFewLayers):
        layer_distances(layer_gram(make_adjacency(rng, 5, 1)))
