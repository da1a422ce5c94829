import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mnsmooth.errors import EmptySet, InvalidParameter
from mnsmooth.neighborhoods import (
    BandwidthParams,
    Regime,
    compute_bandwidths,
    layer_neighbors,
    quantile_mask,
    quantile_rank,
    sample_quantile,
)

import oracles


def test_quantile_examples():
    vals = [0.4, 0.1, 0.3, 0.2, 0.5]
    assert sample_quantile(vals, 0.2) == 0.1
    assert sample_quantile(vals, 0.21) == 0.2
    assert sample_quantile(vals, 0.5) == 0.3
    assert sample_quantile(vals, 1.0) == 0.5
    assert sample_quantile([7.0], 0.01) == 7.0
    # 0.3 * 10 is 3.0000000000000004 in floating point
    assert quantile_rank(0.3, 10) == 3
    with pytest.raises(EmptySet):
        sample_quantile([], 0.5)
    with pytest.raises(InvalidParameter):
        sample_quantile([1.0], 0.0)


def test_bandwidth_arithmetic():
    p = compute_bandwidths(100, 100, 2)
    expected = 2 * (math.log(100) / 10_000) ** (1 / 3)
    assert p.h1 == pytest.approx(expected, rel=1e-12)
    assert p.h1 == pytest.approx(0.15437, abs=1e-4)
    assert p.h2 == p.h1
    assert p.regime is Regime.MULTI_LAYER


def test_single_layer_regime():
    # SingleLayer iff K^2 < n / (C^3 log n); 1000 / (8 log 1000) is about 18
    p = compute_bandwidths(1000, 3, 2)
    assert p.regime is Regime.SINGLE_LAYER
    assert p.h1 == pytest.approx(1 / 3)
    assert p.h2 == pytest.approx(2**1.5 * math.sqrt(math.log(1000) / 1000))
    assert compute_bandwidths(1000, 5, 2).regime is Regime.MULTI_LAYER
    assert compute_bandwidths(50, 1).regime is Regime.SINGLE_LAYER
    np.testing.assert_array_equal(layer_neighbors(np.ones((3, 3)), p), np.eye(3))


def test_bandwidth_validation():
    for args in ((2, 5, 2), (10, 0, 2), (10, 5, 0)):
        with pytest.raises(InvalidParameter):
            compute_bandwidths(*args)
    with pytest.raises(InvalidParameter):
        BandwidthParams(C=1, h1=0.0, h2=0.5, regime="MultiLayer")


def _symmetric(rng, m):
    D = rng.integers(0, 6, size=(m, m)).astype(float)
    D = np.triu(D, 1)
    return D + D.T


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
def test_mask_matches_oracle_and_includes_self(m, h, seed):
    D = _symmetric(np.random.default_rng(seed), m)
    mask = quantile_mask(D, h)
    sets = oracles.neighbour_sets(D.tolist(), h)
    assert [set(np.flatnonzero(row)) for row in mask] == sets
    assert all(mask[i, i] == 1 for i in range(m))
    if m > 1:
        # at least ceil(h (m - 1)) non-self neighbours, more only through ties
        assert (mask.sum(axis=1) - 1 >= quantile_rank(h, m - 1)).all()


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.floats(0.01, 1.0), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
def test_mask_monotone_in_h(m, h_a, h_b, seed):
    lo, hi = sorted((h_a, h_b))
    D = _symmetric(np.random.default_rng(seed), m)
    assert (quantile_mask(D, lo) <= quantile_mask(D, hi)).all()
    assert quantile_mask(D, 1.0).all()
