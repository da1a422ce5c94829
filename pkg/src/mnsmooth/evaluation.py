"""Error metrics, edge masking, held-out ROC/AUC and replication driver."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from .config import ExperimentConfig, derive_seed
from .errors import DegenerateHoldout, InvalidParameter, ShapeMismatch
from .estimators import mns_estimate, ns_estimate_all
from .graphons import build_probability_tensor, make_rng, sample_adjacency, sample_latents
from .net_tensor import AdjacencyTensor, ProbabilityTensor

DISPLAY_SCALE = 100.0


def _as_array(T) -> np.ndarray:
    return np.asarray(getattr(T, "data", T), dtype=np.float64)


@dataclass(frozen=True, eq=False)
class ErrorReport:
    """RMSE / MAE summary.

    ``rmse`` and ``mae`` hold per-layer values averaged over replications;
    ``rmse_reps`` / ``mae_reps`` hold the layer-averaged value of each
    replication.  Raw values are stored; ``DISPLAY_SCALE`` is applied only by
    the formatting helpers.
    """

    rmse: np.ndarray
    mae: np.ndarray
    rmse_reps: np.ndarray
    mae_reps: np.ndarray

    @property
    def R(self) -> int:
        return len(self.rmse_reps)

    @property
    def std_defined(self) -> bool:
        return self.R > 1

    @property
    def rmse_mean(self) -> float:
        return float(np.mean(self.rmse_reps))

    @property
    def mae_mean(self) -> float:
        return float(np.mean(self.mae_reps))

    @property
    def rmse_std(self) -> float:
        return float(np.std(self.rmse_reps, ddof=1)) if self.std_defined else 0.0

    @property
    def mae_std(self) -> float:
        return float(np.std(self.mae_reps, ddof=1)) if self.std_defined else 0.0

    def display(self, metric: str = "rmse") -> str:
        """Table-style ``mean (std)`` string, scaled by 100."""
        mean, std = getattr(self, f"{metric}_mean"), getattr(self, f"{metric}_std")
        return f"{DISPLAY_SCALE * mean:.2f} ({DISPLAY_SCALE * std:.2f})"

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "std_defined": self.std_defined,
            "scale": DISPLAY_SCALE,
            "rmse_mean": self.rmse_mean,
            "rmse_std": self.rmse_std,
            "mae_mean": self.mae_mean,
            "mae_std": self.mae_std,
            "rmse_display": self.display("rmse"),
            "mae_display": self.display("mae"),
            "rmse_reps": self.rmse_reps.tolist(),
            "mae_reps": self.mae_reps.tolist(),
            "per_layer": {"rmse": self.rmse.tolist(), "mae": self.mae.tolist()},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["layer", "rmse", "mae", "rmse_x100", "mae_x100"])
        for k, (r, a) in enumerate(zip(self.rmse, self.mae)):
            w.writerow([k, repr(float(r)), repr(float(a)), f"{DISPLAY_SCALE * r:.4f}", f"{DISPLAY_SCALE * a:.4f}"])
        return buf.getvalue()

    @classmethod
    def combine(cls, reports: Sequence["ErrorReport"]) -> "ErrorReport":
        return cls(
            rmse=np.mean([r.rmse for r in reports], axis=0),
            mae=np.mean([r.mae for r in reports], axis=0),
            rmse_reps=np.concatenate([r.rmse_reps for r in reports]),
            mae_reps=np.concatenate([r.mae_reps for r in reports]),
        )


def rmse_mae(P_hat, P_true) -> ErrorReport:
    """Per-layer RMSE and MAE over the full ``n x n`` grid, then layer means."""
    X, Y = _as_array(P_hat), _as_array(P_true)
    if X.shape != Y.shape or X.ndim != 3:
        raise ShapeMismatch(f"shape mismatch: {X.shape} vs {Y.shape}")
    diff = X - Y
    rmse = np.sqrt(np.mean(diff * diff, axis=(1, 2)))
    mae = np.mean(np.abs(diff), axis=(1, 2))
    return ErrorReport(rmse=rmse, mae=mae, rmse_reps=np.array([rmse.mean()]), mae_reps=np.array([mae.mean()]))


@dataclass(frozen=True, eq=False)
class MaskTensor:
    """Observation mask: ``M[k, i, j] == 0`` marks a held-out pair.

    Symmetric per layer; the diagonal is always observed.
    """

    M: np.ndarray
    p_remove: float


def mask_edges(A: AdjacencyTensor, p: float, seed: int):
    """Hide each unordered pair independently with probability ``p``.

    Uniforms are drawn like :func:`graphons.sample_adjacency` (layer by layer,
    ``i < j`` row-major); a pair is kept iff its uniform is ``>= p``.
    """
    if not 0.0 <= p < 1.0:
        raise InvalidParameter(f"removal probability must lie in [0, 1), got {p}")
    K, n = A.K, A.n
    iu = np.triu_indices(n, 1)
    U = make_rng(seed).random((K, len(iu[0])))
    keep = (U >= p).astype(np.uint8)
    M = np.ones((K, n, n), dtype=np.uint8)
    M[:, iu[0], iu[1]] = keep
    M[:, iu[1], iu[0]] = keep
    A_obs = AdjacencyTensor(A.data * M)
    return A_obs, MaskTensor(M=M, p_remove=p)


@dataclass(frozen=True, eq=False)
class RocCurve:
    """False/true positive rates at decreasing thresholds ``t`` (score ``> t``)."""

    thresholds: np.ndarray
    fp: np.ndarray
    tp: np.ndarray

    @property
    def auc(self) -> float:
        return float(np.trapezoid(self.tp, self.fp))

    def to_json(self) -> dict:
        return {
            "auc": self.auc,
            "thresholds": self.thresholds.tolist(),
            "fp": self.fp.tolist(),
            "tp": self.tp.tolist(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["threshold", "fp", "tp"])
        for t, f, p in zip(self.thresholds, self.fp, self.tp):
            w.writerow([repr(float(t)), repr(float(f)), repr(float(p))])
        return buf.getvalue()


def heldout_scores(P_hat, A: AdjacencyTensor, M: MaskTensor):
    """Scores of held-out off-diagonal pairs, split into (positives, negatives).

    Each unordered pair is counted once; counting both orientations doubles
    numerator and denominator alike and gives the same rates.
    """
    X = _as_array(P_hat)
    Mm = np.asarray(getattr(M, "M", M))
    if X.shape != A.data.shape or Mm.shape != A.data.shape:
        raise ShapeMismatch(f"shape mismatch: {X.shape}, {A.data.shape}, {Mm.shape}")
    iu = np.triu_indices(A.n, 1)
    held = Mm[:, iu[0], iu[1]] == 0
    labels = A.data[:, iu[0], iu[1]][held]
    scores = X[:, iu[0], iu[1]][held]
    pos, neg = scores[labels == 1], scores[labels == 0]
    if pos.size == 0 or neg.size == 0:
        raise DegenerateHoldout(
            f"held-out set has {pos.size} positives and {neg.size} negatives; "
            "need at least one of each (raise the removal probability or check the input)"
        )
    return np.sort(pos), np.sort(neg)


def _rates_above(sorted_scores: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    above = sorted_scores.size - np.searchsorted(sorted_scores, thresholds, side="right")
    return above / sorted_scores.size


def _sweep(*score_arrays) -> np.ndarray:
    vals = np.unique(np.concatenate(score_arrays))
    # sentinels: above the maximum gives (0, 0), below the minimum gives (1, 1)
    return np.concatenate([[vals[-1] + 1.0], vals[::-1], [vals[0] - 1.0]])


def roc_curve(P_hat, A: AdjacencyTensor, M: MaskTensor) -> RocCurve:
    pos, neg = heldout_scores(P_hat, A, M)
    t = _sweep(pos, neg)
    return RocCurve(thresholds=t, fp=_rates_above(neg, t), tp=_rates_above(pos, t))


def average_roc(score_sets) -> RocCurve:
    """Average FP and TP over several held-out score sets at a common threshold sweep.

    ``score_sets`` is a sequence of ``(positives, negatives)`` pairs as
    returned by :func:`heldout_scores`.
    """
    score_sets = list(score_sets)
    t = _sweep(*(arr for pair in score_sets for arr in pair))
    fp = np.mean([_rates_above(neg, t) for _, neg in score_sets], axis=0)
    tp = np.mean([_rates_above(pos, t) for pos, _ in score_sets], axis=0)
    return RocCurve(thresholds=t, fp=fp, tp=tp)


ESTIMATORS = {
    "mns": lambda A, C: mns_estimate(A, C=C),
    "ns": lambda A, C: ns_estimate_all(A, C=C),
}


def simulate_replication(config: ExperimentConfig, r: int):
    """Latents, true P and adjacency for replication ``r`` of ``config``."""
    rep_seed = derive_seed(config.seed, r)
    latents = sample_latents(config.n, config.K, derive_seed(rep_seed, 0))
    P = build_probability_tensor(config.graphon, latents)
    A = sample_adjacency(P, derive_seed(rep_seed, 1))
    return latents, P, A


def replicate_methods(config: ExperimentConfig, R: int, methods: Sequence[str]) -> Dict[str, ErrorReport]:
    """Run ``R`` replications, scoring every method on the same draws."""
    if R < 1:
        raise InvalidParameter(f"need at least one replication, got {R}")
    if config.graphon is None:
        raise InvalidParameter("replications need a graphon")

    def one(r):
        _, P, A = simulate_replication(config, r)
        return {m: rmse_mae(ESTIMATORS[m](A, config.C), P) for m in methods}

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(one, range(R)))
    else:
        results = [one(r) for r in range(R)]
    # pool.map preserves replication order, so the reduction is deterministic
    return {m: ErrorReport.combine([res[m] for res in results]) for m in methods}


def run_replications(config: ExperimentConfig, R: int) -> ErrorReport:
    return replicate_methods(config, R, [config.method])[config.method]
