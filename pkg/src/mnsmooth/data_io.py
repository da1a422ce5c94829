"""Edge-list ingestion, preprocessing filters and tensor persistence.

Edge lists are delimited text with a header containing ``layer``, ``src`` and
``dst`` (other columns ignored).  Tensors are stored as a directory holding
one CSV per layer (``layer_0000.csv`` ...; ``n`` rows of ``n`` values) and a
``manifest.json``::

    {"format": "mnsmooth-tensor", "version": 1,
     "kind": "adjacency" | "probability", "symmetrized": bool,
     "n": int, "K": int,
     "node_labels": [str, ...] | null, "layer_labels": [str, ...] | null,
     "files": ["layer_0000.csv", ...]}

Adjacency entries are written as ``0``/``1``; probabilities with 17
significant digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from .errors import EmptyAfterFilter, EmptyFile, InvalidParameter, IoError, ManifestMismatch, ParseError
from .net_tensor import AdjacencyTensor, ProbabilityTensor

MANIFEST = "manifest.json"
TENSOR_FORMAT = "mnsmooth-tensor"
DEGREE_MODES = ("union", "sum")


@dataclass(frozen=True, eq=False)
class MultiLayerEdgeList:
    """Parsed directed edge records with dense label indices.

    Labels are sorted, so indices do not depend on the row order of the file.
    ``records`` is an ``(E, 3)`` integer array of unique ``(layer, src, dst)``.
    """

    node_labels: List[str]
    layer_labels: List[str]
    records: np.ndarray
    dropped_self_loops: int = 0

    @property
    def n(self) -> int:
        return len(self.node_labels)

    @property
    def K(self) -> int:
        return len(self.layer_labels)

    def to_tensor(self, symmetrize: bool = True) -> AdjacencyTensor:
        """Undirected tensor; ``symmetrize=False`` keeps only reciprocated pairs."""
        A = np.zeros((self.K, self.n, self.n), dtype=np.uint8)
        if len(self.records):
            k, i, j = self.records.T
            A[k, i, j] = 1
        A = (A | A.transpose(0, 2, 1)) if symmetrize else (A & A.transpose(0, 2, 1))
        return AdjacencyTensor(A)


def read_edge_list(path, format: str = "csv") -> MultiLayerEdgeList:
    delimiters = {"csv": ",", "tsv": "\t"}
    if format not in delimiters:
        raise InvalidParameter(f"unknown edge list format {format!r}; expected csv or tsv")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise EmptyFile(f"{path} is empty")
    reader = csv.reader(text.splitlines(), delimiter=delimiters[format])
    header = [h.strip() for h in next(reader)]
    try:
        cols = [header.index(c) for c in ("layer", "src", "dst")]
    except ValueError:
        raise ParseError(f"header must contain layer, src, dst; got {header}", line=1) from None
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(cols):
            raise ParseError(f"expected at least {max(cols) + 1} fields, got {len(row)}", line=lineno)
        layer, src, dst = (row[c].strip() for c in cols)
        if not (layer and src and dst):
            raise ParseError("empty layer, src or dst field", line=lineno)
        rows.append((layer, src, dst))
    if not rows:
        raise EmptyFile(f"{path} has a header but no edge rows")

    loops = sum(1 for _, s, d in rows if s == d)
    nodes = sorted({s for _, s, _ in rows} | {d for _, _, d in rows})
    layers = sorted({l for l, _, _ in rows})
    node_ix = {v: i for i, v in enumerate(nodes)}
    layer_ix = {v: i for i, v in enumerate(layers)}
    recs = {(layer_ix[l], node_ix[s], node_ix[d]) for l, s, d in rows if s != d}
    records = np.array(sorted(recs), dtype=np.int64).reshape(-1, 3)
    return MultiLayerEdgeList(node_labels=nodes, layer_labels=layers, records=records, dropped_self_loops=loops)


def write_edge_list(path, A: AdjacencyTensor, node_labels=None, layer_labels=None) -> None:
    """Write each undirected edge once as ``layer,src,dst`` with ``src < dst``."""
    node_labels = node_labels or [str(i) for i in range(A.n)]
    layer_labels = layer_labels or [str(k) for k in range(A.K)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["layer", "src", "dst"])
        for k, i, j in zip(*np.nonzero(np.triu(A.data, 1))):
            w.writerow([layer_labels[k], node_labels[i], node_labels[j]])


@dataclass(frozen=True)
class PreprocessConfig:
    """Filters for real multi-layer data.

    Nodes with degree ``<= min_degree`` are dropped first; then layers with
    fewer than ``min_layer_edges`` nonzero adjacency entries (both
    orientations counted) are dropped.  ``degree_mode`` is ``"union"`` (distinct
    neighbours across all layers) or ``"sum"`` (edges summed over layers).
    """

    min_degree: int = 0
    min_layer_edges: int = 0
    symmetrize_input: bool = True
    degree_mode: str = "union"

    def __post_init__(self):
        if self.min_degree < 0 or self.min_layer_edges < 0:
            raise InvalidParameter("preprocessing thresholds must be >= 0")
        if self.degree_mode not in DEGREE_MODES:
            raise InvalidParameter(f"degree_mode must be one of {DEGREE_MODES}")


def preprocess(edges: MultiLayerEdgeList, cfg: PreprocessConfig = PreprocessConfig()):
    """Returns ``(tensor, kept node labels, kept layer labels)``."""
    A = edges.to_tensor(symmetrize=cfg.symmetrize_input).data
    if cfg.degree_mode == "union":
        degree = A.any(axis=0).sum(axis=1)
    else:
        degree = A.sum(axis=(0, 2))
    keep_nodes = np.flatnonzero(degree > cfg.min_degree)
    if len(keep_nodes) < 2:
        raise EmptyAfterFilter(f"{len(keep_nodes)} node(s) left after the degree filter")
    A = A[:, keep_nodes][:, :, keep_nodes]
    keep_layers = np.flatnonzero(A.sum(axis=(1, 2)) >= cfg.min_layer_edges)
    if len(keep_layers) == 0:
        raise EmptyAfterFilter("no layers left after the edge-count filter")
    A = A[keep_layers]
    return (
        AdjacencyTensor(A),
        [edges.node_labels[i] for i in keep_nodes],
        [edges.layer_labels[k] for k in keep_layers],
    )


def _layer_file(k: int) -> str:
    return f"layer_{k:04d}.csv"


def write_tensor(path, T, node_labels=None, layer_labels=None) -> Path:
    """Write ``T`` (adjacency or probability tensor) into directory ``path``."""
    root = Path(path)
    is_adj = isinstance(T, AdjacencyTensor)
    if not is_adj and not isinstance(T, ProbabilityTensor):
        raise InvalidParameter(f"cannot serialise {type(T).__name__}")
    for labels, size, what in ((node_labels, T.n, "node"), (layer_labels, T.K, "layer")):
        if labels is not None and len(labels) != size:
            raise ManifestMismatch(f"{len(labels)} {what} labels for size {size}")
    try:
        root.mkdir(parents=True, exist_ok=True)
        files = []
        for k in range(T.K):
            name = _layer_file(k)
            fmt = "%d" if is_adj else "%.17g"
            np.savetxt(root / name, T.data[k], fmt=fmt, delimiter=",", newline="\n")
            files.append(name)
        manifest = {
            "format": TENSOR_FORMAT,
            "version": 1,
            "kind": "adjacency" if is_adj else "probability",
            "symmetrized": True if is_adj else bool(T.symmetrized),
            "n": T.n,
            "K": T.K,
            "node_labels": list(node_labels) if node_labels is not None else None,
            "layer_labels": list(layer_labels) if layer_labels is not None else None,
            "files": files,
        }
        (root / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write tensor to {root}: {exc}") from exc
    return root


def read_manifest(path) -> dict:
    mpath = Path(path) / MANIFEST
    try:
        manifest = json.loads(mpath.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {mpath}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestMismatch(f"{mpath} is not valid JSON: {exc}") from exc
    for key in ("kind", "n", "K", "files"):
        if key not in manifest:
            raise ManifestMismatch(f"{mpath} lacks {key!r}")
    if len(manifest["files"]) != manifest["K"]:
        raise ManifestMismatch(f"manifest lists {len(manifest['files'])} files for K={manifest['K']}")
    return manifest


def read_tensor(path):
    """Load a tensor directory written by :func:`write_tensor`."""
    root = Path(path)
    manifest = read_manifest(root)
    n, K = manifest["n"], manifest["K"]
    dtype = np.uint8 if manifest["kind"] == "adjacency" else np.float64
    data = np.empty((K, n, n), dtype=dtype)
    for k, name in enumerate(manifest["files"]):
        try:
            layer = np.loadtxt(root / name, delimiter=",", dtype=np.float64, ndmin=2)
        except OSError as exc:
            raise IoError(f"cannot read {root / name}: {exc}") from exc
        except ValueError as exc:
            raise ManifestMismatch(f"{root / name}: {exc}") from exc
        if layer.shape != (n, n):
            raise ManifestMismatch(f"{root / name} has shape {layer.shape}, manifest says n={n}")
        data[k] = layer
    if manifest["kind"] == "adjacency":
        return AdjacencyTensor(data)
    return ProbabilityTensor(data, symmetrized=bool(manifest.get("symmetrized", False)))


def load_adjacency(path, format: Optional[str] = None, cfg: Optional[PreprocessConfig] = None):
    """Adjacency from a tensor directory or an edge-list file.

    Returns ``(tensor, node_labels, layer_labels)``; labels are ``None`` when
    the source carries none.
    """
    p = Path(path)
    if p.is_dir():
        T = read_tensor(p)
        if not isinstance(T, AdjacencyTensor):
            raise ManifestMismatch(f"{p} holds a probability tensor, expected adjacency")
        m = read_manifest(p)
        return T, m.get("node_labels"), m.get("layer_labels")
    fmt = format or ("tsv" if p.suffix.lower() in (".tsv", ".tab") else "csv")
    return preprocess(read_edge_list(p, fmt), cfg or PreprocessConfig())


def write_json(path, obj) -> None:
    try:
        Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
