"""Bandwidths and quantile-thresholded neighbourhood masks.

Masks use row orientation: ``mask[i, j] == 1`` means ``j`` is a neighbour
of ``i``.  Every index is a member of its own neighbourhood (its distance
to itself is 0), while the quantile threshold is taken over the non-self
distances only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptySet, InvalidParameter

DEFAULT_C = 2.0

# absorbs float noise in h * m for decimal levels such as 0.3 * 10
_RANK_EPS = 1e-9


class Regime(str, Enum):
    MULTI_LAYER = "MultiLayer"
    SINGLE_LAYER = "SingleLayer"


@dataclass(frozen=True)
class BandwidthParams:
    C: float
    h1: float
    h2: float
    regime: Regime

    def __post_init__(self):
        for name in ("h1", "h2"):
            h = getattr(self, name)
            if not 0.0 < h <= 1.0:
                raise InvalidParameter(f"{name} must lie in (0, 1], got {h}")
        object.__setattr__(self, "regime", Regime(self.regime))

    def to_json(self) -> dict:
        return {"C": self.C, "h1": self.h1, "h2": self.h2, "regime": self.regime.value}


def multilayer_rate(n: int, K: int, C: float) -> float:
    """``C * (log n / (n K))^(1/3)``."""
    return C * (math.log(n) / (n * K)) ** (1.0 / 3.0)


def single_layer_rate(n: int, C: float) -> float:
    """``C^(3/2) * (log n / n)^(1/2)``, the single-layer smoothing level."""
    return C ** 1.5 * math.sqrt(math.log(n) / n)


def compute_bandwidths(n: int, K: int, C: float = DEFAULT_C) -> BandwidthParams:
    """Quantile levels for layer (``h1``) and node (``h2``) neighbourhoods.

    When ``C (log n / nK)^(1/3) < 1/K`` (or ``K == 1``) there are too few
    layers to borrow from: ``h1 = 1/K``, node smoothing falls back to the
    single-layer level and the regime is ``SingleLayer``.  Otherwise both
    levels equal the multi-layer rate.  Levels are capped at 1.
    """
    if n < 3 or K < 1:
        raise InvalidParameter(f"need n >= 3 and K >= 1, got n={n}, K={K}")
    if not C > 0:
        raise InvalidParameter(f"C must be positive, got {C}")
    a = multilayer_rate(n, K, C)
    if K == 1 or a < 1.0 / K:
        return BandwidthParams(C=C, h1=1.0 / K, h2=min(single_layer_rate(n, C), 1.0),
                               regime=Regime.SINGLE_LAYER)
    return BandwidthParams(C=C, h1=min(a, 1.0), h2=min(a, 1.0), regime=Regime.MULTI_LAYER)


def quantile_rank(h: float, m: int) -> int:
    """1-based order statistic index ``ceil(h * m)`` used by :func:`sample_quantile`."""
    return min(max(math.ceil(h * m - _RANK_EPS), 1), m)


def sample_quantile(values, h: float) -> float:
    """Lower empirical quantile: the ``ceil(h m)``-th smallest of ``m`` values."""
    vals = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if vals.size == 0:
        raise EmptySet("sample quantile of an empty set")
    if not 0.0 < h <= 1.0:
        raise InvalidParameter(f"quantile level must lie in (0, 1], got {h}")
    return float(vals[quantile_rank(h, vals.size) - 1])


def quantile_mask(D: np.ndarray, h: float) -> np.ndarray:
    """Row-wise thresholding of a symmetric distance matrix at level ``h``.

    Row ``i`` keeps every ``j`` with ``D[i, j] <= q_i`` where ``q_i`` is the
    ``h``-quantile of ``{D[i, j] : j != i}``; ties at the threshold are kept.
    """
    D = np.asarray(D, dtype=np.float64)
    m = D.shape[0]
    if m == 1:
        return np.ones((1, 1), dtype=np.uint8)
    off = D.copy()
    np.fill_diagonal(off, np.inf)
    off.sort(axis=1)
    q = off[:, quantile_rank(h, m - 1) - 1]
    mask = (D <= q[:, None]).astype(np.uint8)
    np.fill_diagonal(mask, 1)
    return mask


def layer_neighbors(D_layer, params: BandwidthParams) -> np.ndarray:
    D = getattr(D_layer, "D", D_layer)
    if params.regime is Regime.SINGLE_LAYER:
        return np.eye(D.shape[0], dtype=np.uint8)
    return quantile_mask(D, params.h1)


def node_neighbors(D, params: BandwidthParams) -> np.ndarray:
    return quantile_mask(getattr(D, "D", D), params.h2)


@dataclass(frozen=True, eq=False)
class NeighborMasks:
    """Node masks ``B`` with shape ``(K, n, n)`` and layer mask ``B_layer`` (K x K)."""

    B: np.ndarray
    B_layer: np.ndarray
