"""Multi-layer neighbourhood smoothing (MNS) and the single-layer NS baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distances import layer_distances, node_distances
from .errors import ShapeMismatch, TooFewNodes, ZeroDenominator
from .neighborhoods import (
    DEFAULT_C,
    BandwidthParams,
    NeighborMasks,
    Regime,
    compute_bandwidths,
    layer_neighbors,
    node_neighbors,
    quantile_mask,
    single_layer_rate,
)
from .net_tensor import AdjacencyTensor, ProbabilityTensor, layer_gram, node_gram


@dataclass(frozen=True, eq=False)
class SmoothingIntermediates:
    """Per-layer neighbourhood sums ``C[k] = B[k] @ A[k]`` and denominators.

    ``denom[k, i]`` is the total number of node neighbours of ``i`` pooled
    over the layer neighbourhood of ``k``.
    """

    C_tensor: np.ndarray
    denom: np.ndarray


def build_masks(A: AdjacencyTensor, params: BandwidthParams) -> NeighborMasks:
    B = np.empty((A.K, A.n, A.n), dtype=np.uint8)
    for k in range(A.K):
        B[k] = node_neighbors(node_distances(node_gram(A, k)), params)
    if params.regime is Regime.SINGLE_LAYER:
        B_layer = np.eye(A.K, dtype=np.uint8)
    else:
        B_layer = layer_neighbors(layer_distances(layer_gram(A)), params)
    return NeighborMasks(B=B, B_layer=B_layer)


def smoothing_intermediates(A: AdjacencyTensor, masks: NeighborMasks) -> SmoothingIntermediates:
    B, B_layer = np.asarray(masks.B), np.asarray(masks.B_layer)
    if B.shape != A.data.shape or B_layer.shape != (A.K, A.K):
        raise ShapeMismatch(
            f"masks {B.shape} / {B_layer.shape} do not match adjacency {A.data.shape}"
        )
    # row i of B[k] selects the neighbours of i, so B[k] @ A[k] sums their rows;
    # all values are small integers, so float64 products are exact
    Bf = B.astype(np.float64)
    C_tensor = np.matmul(Bf, A.data.astype(np.float64))
    denom = B_layer.astype(np.float64) @ Bf.sum(axis=2)
    return SmoothingIntermediates(C_tensor=C_tensor, denom=denom)


def _finish(P_tilde: np.ndarray) -> np.ndarray:
    P_hat = (P_tilde + np.swapaxes(P_tilde, -1, -2)) / 2
    # no self-loops in the model: the diagonal is a structural zero
    idx = np.arange(P_hat.shape[-1])
    P_hat[..., idx, idx] = 0.0
    return P_hat


def smooth_with_masks(A: AdjacencyTensor, masks: NeighborMasks) -> ProbabilityTensor:
    """Ratio-of-sums smoothing for given node and layer masks.

    Layer ``k`` pools ``C[l]`` over the layers ``l`` with ``B_layer[k, l] == 1``
    (a mode-3 product with row ``k`` of the layer mask), divides row ``i`` by
    the pooled neighbour count, symmetrises and zeroes the diagonal.
    """
    inter = smoothing_intermediates(A, masks)
    if (inter.denom == 0).any():
        raise ZeroDenominator("a node has no neighbours in its pooled neighbourhood")
    n, K = A.n, A.K
    L = np.asarray(masks.B_layer, dtype=np.float64)
    numer = (L @ inter.C_tensor.reshape(K, n * n)).reshape(K, n, n)
    return ProbabilityTensor(_finish(numer / inter.denom[:, :, None]), symmetrized=True)


def mns_estimate(A: AdjacencyTensor, params: BandwidthParams = None, C: float = DEFAULT_C) -> ProbabilityTensor:
    """Estimate every layer's edge probabilities by two-step smoothing.

    ``params`` defaults to :func:`compute_bandwidths` at ``C``.
    """
    if A.n < 3:
        raise TooFewNodes(f"smoothing needs at least 3 nodes, got {A.n}")
    if params is None:
        params = compute_bandwidths(A.n, A.K, C)
    return smooth_with_masks(A, build_masks(A, params))


def ns_estimate(A: AdjacencyTensor, k: int, C: float = DEFAULT_C) -> np.ndarray:
    """Single-layer neighbourhood smoothing of layer ``k`` alone."""
    G = node_gram(A, k)
    if A.n < 3:
        raise TooFewNodes(f"smoothing needs at least 3 nodes, got {A.n}")
    h = min(single_layer_rate(A.n, C), 1.0)
    mask = quantile_mask(node_distances(G).D, h).astype(np.float64)
    P_tilde = (mask @ A.data[k].astype(np.float64)) / mask.sum(axis=1)[:, None]
    return _finish(P_tilde)


def ns_estimate_all(A: AdjacencyTensor, C: float = DEFAULT_C) -> ProbabilityTensor:
    return ProbabilityTensor(np.stack([ns_estimate(A, k, C) for k in range(A.K)]), symmetrized=True)
