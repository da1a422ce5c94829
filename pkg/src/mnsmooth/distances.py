"""Node- and layer-level Chebyshev distances between Gram-matrix rows.

Both distances have the same shape: for rows ``a`` and ``b`` of a square
Gram matrix ``G``,

    D[a, b] = max_{s not in {a, b}} |G[a, s] - G[b, s]|

with an empty candidate set (matrix of size 2) giving 0.  Values are the
squared distances used for thresholding; no square roots are taken.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import TooFewLayers
from .net_tensor import LayerGram, NodeGram


@numba.njit(cache=True, nogil=True, fastmath=True, error_model="numpy")
def _excluded_chebyshev(counts):
    m = counts.shape[0]
    out = np.zeros((m, m), dtype=counts.dtype)
    row = np.empty(m, dtype=counts.dtype)
    for a in range(m):
        row[:] = counts[a]
        for b in range(a + 1, m):
            y = counts[b]
            # zero out the two excluded columns by copying y into the scratch
            # row; keeps the inner loop branch-free so it vectorises
            row[a] = y[a]
            row[b] = y[b]
            best = 0
            for s in range(m):
                d = row[s] - y[s]
                d = d if d >= 0 else -d
                best = d if d > best else best
            row[a] = counts[a, a]
            row[b] = counts[a, b]
            out[a, b] = best
            out[b, a] = best
    return out


def excluded_chebyshev(counts: np.ndarray) -> np.ndarray:
    """Pairwise row Chebyshev distance skipping the two involved columns.

    Integer input only; the result is exact.
    """
    counts = np.asarray(counts)
    if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {counts.shape}")
    if counts.size and (counts.min() < 0 or counts.max() >= 2**31):
        counts = np.ascontiguousarray(counts, dtype=np.int64)
    else:
        counts = np.ascontiguousarray(counts, dtype=np.int32)
    return _excluded_chebyshev(counts).astype(np.int64)


@dataclass(frozen=True)
class NodeDistanceMatrix:
    k: int
    D: np.ndarray


@dataclass(frozen=True)
class LayerDistanceMatrix:
    D: np.ndarray


def node_distances(G: NodeGram, k: int = None) -> NodeDistanceMatrix:
    k = G.k if k is None else k
    return NodeDistanceMatrix(k=k, D=excluded_chebyshev(G.counts) / G.n)


def layer_distances(T: LayerGram) -> LayerDistanceMatrix:
    if T.counts.shape[0] < 2:
        raise TooFewLayers("layer distances need at least two layers")
    return LayerDistanceMatrix(D=excluded_chebyshev(T.counts) / float(T.n * T.n))
