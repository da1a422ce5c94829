import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mnsmooth.errors import InvalidParameter
from mnsmooth.graphons import (
    GraphonSpec,
    block_count,
    build_probability_tensor,
    clamp_report,
    eval_graphon,
    graphon_values,
    sample_adjacency,
    sample_latents,
)

unit = st.floats(0.0, 1.0)


def test_named_values():
    # sin(1)/2 + 1/2
    assert eval_graphon(GraphonSpec("sine"), 0, 0, 0) == pytest.approx(0.5 * np.sin(1) + 0.5, abs=1e-12)
    assert eval_graphon(GraphonSpec("sine"), 0, 0, 0) == pytest.approx(0.92074, abs=1e-5)
    # logistic(-0.1) at u = v
    assert eval_graphon(GraphonSpec("diagonal"), 0.3, 0.3, 0.5) == pytest.approx(0.47502, abs=1e-5)
    assert eval_graphon(GraphonSpec("cosine"), 0, 0, 0.7) == pytest.approx(0.15)
    assert eval_graphon(GraphonSpec("constant", {"c": 0.25}), 0.1, 0.9, 0.4) == 0.25


def test_blocks_values():
    # n = 100 gives M = floor(ln 100) = 4 blocks
    assert block_count(100) == 4
    g = GraphonSpec("blocks")
    assert eval_graphon(g, 0.9, 0.2, 0.0) == pytest.approx(0.3 / 5)
    assert eval_graphon(g, 0.1, 0.2, 0.0) == pytest.approx(1 / 5)
    assert eval_graphon(g, 0.9, 1.0, 1.0) == pytest.approx(4 / 10)
    # block edge is half-open
    assert eval_graphon(g, 0.25, 0.24, 0.0) == pytest.approx(0.3 / 5)
    assert block_count(100, log_base=10) == 2


def test_aliases_and_json_roundtrip():
    for alias, kind in zip("1234", ("blocks", "sine", "diagonal", "cosine")):
        assert GraphonSpec(alias).kind == kind
    g = GraphonSpec("constant", {"c": 0.4})
    assert GraphonSpec.from_json(json.loads(json.dumps(g.to_json()))).params == g.params
    with pytest.raises(InvalidParameter):
        GraphonSpec("nope")


def test_eval_rejects_out_of_range():
    with pytest.raises(InvalidParameter):
        eval_graphon(GraphonSpec("sine"), 1.2, 0, 0)
    with pytest.raises(InvalidParameter):
        eval_graphon(GraphonSpec("sine"), 0, 0, 0, n_hint=2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["blocks", "sine", "diagonal", "cosine"]), unit, unit, unit)
def test_symmetric_and_in_range(kind, u, v, w):
    g = GraphonSpec(kind)
    a, b = eval_graphon(g, u, v, w), eval_graphon(g, v, u, w)
    assert a == b
    assert 0.0 <= a <= 1.0


def test_clamp_report():
    rep = clamp_report(GraphonSpec("sine"))
    assert rep["below"] == rep["above"] == 0
    assert 0.0 <= rep["min"] <= rep["max"] <= 1.0
    # cosine can exceed the unit interval before clamping only if its range says so
    rep = clamp_report(GraphonSpec("cosine"))
    assert rep["min"] >= 0.15 - 2 / 3 - 1e-12


def test_tabulated_interpolates_and_matches_constant():
    grid = np.full((3, 3, 2), 0.3)
    g = GraphonSpec("tabulated", {"grid": grid})
    assert eval_graphon(g, 0.17, 0.61, 0.9) == pytest.approx(0.3)
    grid = np.zeros((2, 2, 2))
    grid[1, 1, :] = 1.0
    v = graphon_values(GraphonSpec("tabulated", {"grid": grid}), 0.5, 0.5, 0.2)
    assert v == pytest.approx(0.25)
    bad = np.zeros((2, 2, 2))
    bad[0, 1, 0] = 1.0
    with pytest.raises(InvalidParameter):
        GraphonSpec("tabulated", {"grid": bad})


def test_latents_deterministic_and_uniform():
    a, b = sample_latents(5, 3, 11), sample_latents(5, 3, 11)
    np.testing.assert_array_equal(a.xi, b.xi)
    np.testing.assert_array_equal(a.eta, b.eta)
    assert not np.array_equal(a.xi, sample_latents(5, 3, 12).xi)
    big = sample_latents(100_000, 1, 3)
    assert abs(big.xi.mean() - 0.5) < 0.01


def test_probability_tensor_structure():
    lat = sample_latents(6, 3, 1)
    P = build_probability_tensor(GraphonSpec("sine"), lat)
    assert P.data.shape == (3, 6, 6)
    np.testing.assert_array_equal(P.data, P.data.transpose(0, 2, 1))
    assert not np.diagonal(P.data, axis1=1, axis2=2).any()
    i, j, k = 1, 4, 2
    assert P.data[k, i, j] == eval_graphon(GraphonSpec("sine"), lat.xi[i], lat.xi[j], lat.eta[k])


def test_adjacency_density_and_layer_dependence():
    lat = sample_latents(200, 2, 5)
    const = build_probability_tensor(GraphonSpec("constant", {"c": 0.3}), lat)
    A = sample_adjacency(const, 9)
    iu = np.triu_indices(200, 1)
    dens = A.data[:, iu[0], iu[1]].mean()
    # binomial standard error is about 0.0015
    assert abs(dens - 0.3) < 0.01
    # independent draws across layers for a constant graphon: near-zero correlation
    r = np.corrcoef(A.data[0][iu], A.data[1][iu])[0, 1]
    assert abs(r) < 0.03
    # a layer-independent structured graphon makes layers correlate through xi
    P = build_probability_tensor(GraphonSpec("blocks"), lat)
    B = sample_adjacency(P, 9)
    assert np.corrcoef(B.data[0][iu], B.data[1][iu])[0, 1] > 0.05
    assert sample_adjacency(const, 9) == A
