"""Dense multi-layer network containers and Gram kernels.

Tensors are stored layer-major with shape ``(K, n, n)``: ``data[k]`` is the
contiguous ``n x n`` slice for layer ``k``.  All containers freeze their
backing arrays on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import IndexOutOfRange, InvalidParameter, SelfLoopRejected, ShapeMismatch


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class AdjacencyTensor:
    """Binary undirected multi-layer network, one symmetric slice per layer."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or data.shape[1] != data.shape[2]:
            raise ShapeMismatch(f"expected (K, n, n) array, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidParameter("need at least one node and one layer")
        if not np.isin(data, (0, 1)).all():
            raise InvalidParameter("adjacency entries must be 0 or 1")
        data = data.astype(np.uint8)
        if not np.array_equal(data, data.transpose(0, 2, 1)):
            raise InvalidParameter("adjacency slices must be symmetric")
        if np.diagonal(data, axis1=1, axis2=2).any():
            raise SelfLoopRejected("adjacency slices must have a zero diagonal")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def K(self) -> int:
        return self.data.shape[0]

    def layer(self, k: int) -> np.ndarray:
        _check_layer(k, self.K)
        return self.data[k]

    def edge_count(self) -> int:
        """Number of undirected edges summed over layers."""
        return int(self.data.sum()) // 2

    def __eq__(self, other):
        if not isinstance(other, AdjacencyTensor):
            return NotImplemented
        return np.array_equal(self.data, other.data)


@dataclass(frozen=True, eq=False)
class ProbabilityTensor:
    """Real ``(K, n, n)`` tensor with entries in [0, 1]."""

    data: np.ndarray
    symmetrized: bool = False

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3 or data.shape[1] != data.shape[2]:
            raise ShapeMismatch(f"expected (K, n, n) array, got shape {data.shape}")
        if not np.all((data >= 0.0) & (data <= 1.0)):
            raise InvalidParameter("probabilities must lie in [0, 1]")
        if self.symmetrized and not np.array_equal(data, data.transpose(0, 2, 1)):
            raise InvalidParameter("tensor flagged symmetrized has asymmetric slices")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def K(self) -> int:
        return self.data.shape[0]

    def layer(self, k: int) -> np.ndarray:
        _check_layer(k, self.K)
        return self.data[k]

    def __eq__(self, other):
        if not isinstance(other, ProbabilityTensor):
            return NotImplemented
        return np.array_equal(self.data, other.data)


@dataclass(frozen=True)
class NodeGram:
    """``(A^k)^2 / n`` kept as integer path counts plus the scale ``n``.

    ``counts[i, s]`` is the number of common neighbours of ``i`` and ``s``
    in layer ``k``.  Distances are taken on the counts and divided once, so
    ties between equal integer differences survive exactly.
    """

    k: int
    counts: np.ndarray
    n: int

    @property
    def matrix(self) -> np.ndarray:
        return self.counts / self.n


@dataclass(frozen=True)
class LayerGram:
    """``T[k, l] = tr(A^k.T A^l) / n^2`` kept as integer co-occurrence counts."""

    counts: np.ndarray
    n: int

    @property
    def matrix(self) -> np.ndarray:
        return self.counts / float(self.n * self.n)


def _check_layer(k: int, K: int) -> None:
    if not 0 <= k < K:
        raise IndexOutOfRange(f"layer index {k} out of range for K={K}")


def build_adjacency(n: int, K: int, entries: Iterable[Tuple[int, int, int]]) -> AdjacencyTensor:
    """Build a tensor from ``(i, j, k)`` triples; each edge is mirrored to ``(j, i, k)``."""
    if n < 1 or K < 1:
        raise InvalidParameter(f"n and K must be positive, got n={n}, K={K}")
    data = np.zeros((K, n, n), dtype=np.uint8)
    for i, j, k in entries:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"node index out of range in edge ({i}, {j}, {k})")
        if not 0 <= k < K:
            raise IndexOutOfRange(f"layer index out of range in edge ({i}, {j}, {k})")
        if i == j:
            raise SelfLoopRejected(f"self-loop on node {i} in layer {k}")
        data[k, i, j] = 1
        data[k, j, i] = 1
    return AdjacencyTensor(data)


def _square_counts(slice_: np.ndarray) -> np.ndarray:
    # float64 BLAS is exact here: entries are integers well below 2**53
    a = slice_.astype(np.float64)
    return (a @ a).astype(np.int64)


def node_gram(A: AdjacencyTensor, k: int) -> NodeGram:
    _check_layer(k, A.K)
    return NodeGram(k=k, counts=_frozen(_square_counts(A.data[k])), n=A.n)


def node_grams(A: AdjacencyTensor) -> list:
    return [node_gram(A, k) for k in range(A.K)]


def layer_gram(A: AdjacencyTensor) -> LayerGram:
    flat = A.data.reshape(A.K, -1).astype(np.float64)
    counts = (flat @ flat.T).astype(np.int64)
    return LayerGram(counts=_frozen(counts), n=A.n)
