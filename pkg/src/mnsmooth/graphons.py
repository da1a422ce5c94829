"""Ternary graphons f(u, v, w) and the generative model built on them.

Node positions ``xi`` and layer positions ``eta`` are i.i.d. Uniform[0, 1];
layer ``k`` has edge probabilities ``P[k, i, j] = f(xi[i], xi[j], eta[k])``
and each unordered pair is an independent Bernoulli draw.

Randomness comes from numpy's Philox-4x64 counter-based generator keyed by
``SeedSequence(seed)``.  Draw order is documented per function so that the
same streams can be reproduced elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import expit

from .errors import InvalidParameter
from .net_tensor import AdjacencyTensor, ProbabilityTensor

BUILTIN_KINDS = ("blocks", "sine", "diagonal", "cosine")
KINDS = BUILTIN_KINDS + ("constant", "tabulated")

# numeric aliases follow the usual numbering of the four synthetic graphons
_ALIASES = {"1": "blocks", "2": "sine", "3": "diagonal", "4": "cosine"}


def make_rng(seed: int) -> np.random.Generator:
    """Philox generator keyed by ``SeedSequence(seed)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


@dataclass(frozen=True)
class GraphonSpec:
    """Declarative graphon description.

    ``params`` by kind:

    * ``blocks``: optional ``log_base`` (``"e"`` default, or a number) used in
      ``M = floor(log(n))``
    * ``constant``: ``c`` in [0, 1]
    * ``tabulated``: ``grid``, a nested list / array of shape ``(a, b, c)``
      sampled on equally spaced points of [0, 1]^3, symmetric in its first
      two axes; evaluated by trilinear interpolation
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).lower(), str(self.kind).lower())
        if kind not in KINDS:
            raise InvalidParameter(f"unknown graphon kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        params = dict(self.params or {})
        if kind == "constant":
            c = params.get("c")
            if c is None or not 0.0 <= float(c) <= 1.0:
                raise InvalidParameter(f"constant graphon needs c in [0, 1], got {c!r}")
            params["c"] = float(c)
        elif kind == "tabulated":
            grid = np.asarray(params.get("grid"), dtype=np.float64)
            if grid.ndim != 3 or min(grid.shape) < 2:
                raise InvalidParameter("tabulated grid must be 3-D with at least 2 points per axis")
            if grid.shape[0] != grid.shape[1] or not np.allclose(grid, grid.transpose(1, 0, 2)):
                raise InvalidParameter("tabulated grid must be symmetric in its first two axes")
            params["grid"] = grid
        elif kind == "blocks":
            base = params.get("log_base", "e")
            if base != "e" and not float(base) > 1.0:
                raise InvalidParameter(f"log_base must be 'e' or a number > 1, got {base!r}")
        object.__setattr__(self, "params", params)

    def to_json(self) -> dict:
        params = dict(self.params)
        if "grid" in params:
            params["grid"] = np.asarray(params["grid"]).tolist()
        return {"kind": self.kind, "params": params}

    @classmethod
    def from_json(cls, obj) -> "GraphonSpec":
        if isinstance(obj, (str, int)):
            return cls(str(obj))
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidParameter(f"graphon JSON must be an object with a 'kind' field, got {obj!r}")
        return cls(obj["kind"], obj.get("params", {}))


def block_count(n_hint: int, log_base="e") -> int:
    """Number of diagonal blocks ``M = floor(log n)`` for the block graphon."""
    if log_base == "e":
        return int(math.floor(math.log(n_hint)))
    return int(math.floor(math.log(n_hint, float(log_base))))


def _raw_values(spec: GraphonSpec, u, v, w, n_hint: int) -> np.ndarray:
    u, v, w = np.broadcast_arrays(*(np.asarray(x, dtype=np.float64) for x in (u, v, w)))
    kind = spec.kind
    if kind == "blocks":
        M = block_count(n_hint, spec.params.get("log_base", "e"))
        if M < 1:
            raise InvalidParameter(f"n_hint={n_hint} gives fewer than one block")
        # half-open blocks [(m-1)/M, m/M), last block closed at 1
        bu = np.minimum(np.floor(u * M), M - 1)
        bv = np.minimum(np.floor(v * M), M - 1)
        inside = (bu + 1) / ((M + 1) * (w + 1))
        return np.where(bu == bv, inside, 0.3 / (M + 1))
    if kind == "sine":
        return np.sin(5 * np.pi * (u + v - w) + 1) / 2 + 0.5
    if kind == "diagonal":
        return expit(15 * (0.8 * np.abs(u - v)) ** (1 / (1 + w)) - 0.1)
    if kind == "cosine":
        s = u * u + v * v
        safe = np.where(s > 0, s, 1.0)
        # the product term vanishes as u^2 + v^2 -> 0, leaving the offset
        return np.where(s > 0, safe / 3 * np.cos(w / safe), 0.0) + 0.15
    if kind == "constant":
        return np.full(u.shape, spec.params["c"])
    grid = spec.params["grid"]
    axes = tuple(np.linspace(0.0, 1.0, m) for m in grid.shape)
    interp = RegularGridInterpolator(axes, grid, method="linear")
    pts = np.stack([u.ravel(), v.ravel(), w.ravel()], axis=-1)
    return interp(pts).reshape(u.shape)


def graphon_values(spec: GraphonSpec, u, v, w, n_hint: int = 100, clip: bool = True) -> np.ndarray:
    """Vectorised evaluation over broadcast arrays ``u, v, w``."""
    vals = _raw_values(spec, u, v, w, n_hint)
    return np.clip(vals, 0.0, 1.0) if clip else vals


def eval_graphon(spec: GraphonSpec, u: float, v: float, w: float, n_hint: int = 100) -> float:
    for name, x in (("u", u), ("v", v), ("w", w)):
        if not 0.0 <= x <= 1.0:
            raise InvalidParameter(f"{name}={x} outside [0, 1]")
    if n_hint < 3:
        raise InvalidParameter(f"n_hint must be >= 3, got {n_hint}")
    return float(graphon_values(spec, u, v, w, n_hint))


def clamp_report(spec: GraphonSpec, n_hint: int = 100, shape=(50, 50, 10)) -> dict:
    """Pre-clamp range of ``spec`` on a regular grid over [0, 1]^3."""
    axes = [np.linspace(0.0, 1.0, m) for m in shape]
    u, v, w = np.meshgrid(*axes, indexing="ij")
    raw = _raw_values(spec, u, v, w, n_hint)
    return {
        "min": float(raw.min()),
        "max": float(raw.max()),
        "below": int((raw < 0).sum()),
        "above": int((raw > 1).sum()),
    }


@dataclass(frozen=True, eq=False)
class LatentDraw:
    xi: np.ndarray
    eta: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return len(self.xi)

    @property
    def K(self) -> int:
        return len(self.eta)


def sample_latents(n: int, K: int, seed: int) -> LatentDraw:
    """Draw ``n`` node positions then ``K`` layer positions from one Philox stream."""
    if n < 1 or K < 1:
        raise InvalidParameter(f"n and K must be positive, got n={n}, K={K}")
    rng = make_rng(seed)
    xi = rng.random(n)
    eta = rng.random(K)
    return LatentDraw(xi=xi, eta=eta, seed=int(seed))


def build_probability_tensor(spec: GraphonSpec, latents: LatentDraw) -> ProbabilityTensor:
    xi, eta = latents.xi, latents.eta
    n = len(xi)
    P = graphon_values(spec, xi[None, :, None], xi[None, None, :], eta[:, None, None], n_hint=max(n, 3))
    P = np.array(np.broadcast_to(P, (len(eta), n, n)))
    iu = np.triu_indices(n, 1)
    for k in range(len(eta)):
        upper = P[k][iu]
        P[k] = 0.0
        P[k][iu] = upper
        P[k].T[iu] = upper
    return ProbabilityTensor(P, symmetrized=True)


def sample_adjacency(P: ProbabilityTensor, seed: int) -> AdjacencyTensor:
    """Independent Bernoulli draw for every unordered pair in every layer.

    Uniforms are consumed layer by layer, and within a layer over ``i < j``
    in row-major order; edge present iff ``U < P[k, i, j]``.
    """
    K, n = P.K, P.n
    iu = np.triu_indices(n, 1)
    U = make_rng(seed).random((K, len(iu[0])))
    upper = (U < P.data[:, iu[0], iu[1]]).astype(np.uint8)
    A = np.zeros((K, n, n), dtype=np.uint8)
    A[:, iu[0], iu[1]] = upper
    A[:, iu[1], iu[0]] = upper
    return AdjacencyTensor(A)
