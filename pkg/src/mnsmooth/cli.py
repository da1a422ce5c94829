"""Command-line interface.

Subcommands: simulate, estimate, evaluate, linkpred, bench.  A JSON config
(``--config``) supplies defaults, explicit flags override it, and the
resolved config is written to ``<out>/config.json``.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical or
degenerate-input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import data_io
from .config import METHODS, ExperimentConfig, derive_seed, parse_graphon
from .errors import InvalidParameter, IoError, MNSError
from .estimators import mns_estimate, ns_estimate_all
from .evaluation import (
    DISPLAY_SCALE,
    average_roc,
    heldout_scores,
    mask_edges,
    replicate_methods,
    rmse_mae,
    simulate_replication,
)
from .neighborhoods import Regime, compute_bandwidths, single_layer_rate

log = logging.getLogger("mnsmooth")

# seed-path tags, so every random stream of a command is distinct
_MASK_STREAM = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--threads", type=int)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--methods", nargs="+", choices=METHODS)
    p.add_argument("-n", type=int, dest="n")
    p.add_argument("-K", type=int, dest="K")
    p.add_argument("-C", type=float, dest="C")
    p.add_argument("--reps", type=int)
    p.add_argument("--graphon", help='1-4, a kind name, "constant:c" or a JSON object')
    p.add_argument("--remove-prob", type=float, dest="remove_prob")
    p.add_argument("--input", help="adjacency tensor directory or edge-list file")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mnsmooth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("simulate", help="sample P, A and latents from a graphon"))
    est = sub.add_parser("estimate", help="estimate edge probabilities from an adjacency tensor")
    _common(est)
    ev = sub.add_parser("evaluate", help="RMSE/MAE of estimates, given or simulated")
    _common(ev)
    ev.add_argument("--truth", help="true probability tensor directory (with --input as the estimate)")
    _common(sub.add_parser("linkpred", help="held-out link prediction ROC/AUC"))
    bench = sub.add_parser("bench", help="error sweep over a grid of (graphon, n, K, method)")
    _common(bench)
    bench.add_argument("--grid-n", type=int, nargs="+", dest="grid_n")
    bench.add_argument("--grid-K", type=int, nargs="+", dest="grid_K")
    bench.add_argument("--graphons", nargs="+")
    return parser


_CONFIG_FLAGS = (
    "seed", "out", "threads", "method", "methods", "n", "K", "C", "reps", "graphon",
    "remove_prob", "input", "truth", "grid_n", "grid_K", "graphons",
)


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    overrides = {k: getattr(args, k) for k in _CONFIG_FLAGS if getattr(args, k, None) is not None}
    if "graphon" in overrides:
        overrides["graphon"] = parse_graphon(overrides["graphon"])
    if "graphons" in overrides:
        overrides["graphons"] = [parse_graphon(g) for g in overrides["graphons"]]
    return cfg.replace(**overrides).validate()


def _methods(cfg: ExperimentConfig):
    return list(cfg.methods) or [cfg.method]


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _prepare_out(cfg: ExperimentConfig, command: str) -> Path:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out}: {exc}") from exc
    data_io.write_json(out / "config.json", {"command": command, **cfg.to_json()})
    return out


def cmd_simulate(cfg: ExperimentConfig) -> Path:
    if cfg.graphon is None:
        raise InvalidParameter("simulate needs --graphon")
    out = _prepare_out(cfg, "simulate")
    latents, P, A = simulate_replication(cfg, 0)
    data_io.write_tensor(out / "P", P)
    data_io.write_tensor(out / "A", A)
    data_io.write_json(out / "latents.json", {
        "seed": latents.seed, "xi": latents.xi.tolist(), "eta": latents.eta.tolist(),
    })
    data_io.write_json(out / "manifest.json", {
        "command": "simulate", "graphon": cfg.graphon.to_json(), "n": cfg.n, "K": cfg.K,
        "files": {"P": "P", "A": "A", "latents": "latents.json"},
    })
    return out


def _bandwidth_record(method: str, n: int, K: int, C: float) -> dict:
    if method == "ns":
        return {"C": C, "h": min(single_layer_rate(n, C), 1.0), "regime": Regime.SINGLE_LAYER.value}
    return compute_bandwidths(n, K, C).to_json()


def cmd_estimate(cfg: ExperimentConfig) -> Path:
    if not cfg.input:
        raise InvalidParameter("estimate needs --input")
    A, node_labels, layer_labels = data_io.load_adjacency(cfg.input)
    out = _prepare_out(cfg, "estimate")
    P_hat = mns_estimate(A, C=cfg.C) if cfg.method == "mns" else ns_estimate_all(A, C=cfg.C)
    data_io.write_tensor(out / "P_hat", P_hat, node_labels, layer_labels)
    data_io.write_json(out / "manifest.json", {
        "command": "estimate", "method": cfg.method, "n": A.n, "K": A.K,
        "bandwidths": _bandwidth_record(cfg.method, A.n, A.K, cfg.C),
        "files": {"P_hat": "P_hat"},
    })
    return out


def _write_reports(out: Path, reports: dict) -> None:
    summary = [["method", "R", "rmse_x100", "mae_x100", "rmse_mean", "rmse_std", "mae_mean", "mae_std"]]
    for m, rep in reports.items():
        data_io.write_text(out / f"report_{m}.csv", rep.to_csv())
        summary.append([m, rep.R, rep.display("rmse"), rep.display("mae"),
                        repr(rep.rmse_mean), repr(rep.rmse_std), repr(rep.mae_mean), repr(rep.mae_std)])
    data_io.write_json(out / "report.json", {m: r.to_json() for m, r in reports.items()})
    data_io.write_text(out / "summary.csv", _csv(summary))


def cmd_evaluate(cfg: ExperimentConfig) -> dict:
    if cfg.input and cfg.truth:
        P_hat, P = data_io.read_tensor(cfg.input), data_io.read_tensor(cfg.truth)
        reports = {"given": rmse_mae(P_hat, P)}
    elif cfg.graphon is not None:
        reports = replicate_methods(cfg, cfg.reps, _methods(cfg))
    else:
        raise InvalidParameter("evaluate needs --input and --truth, or --graphon")
    out = _prepare_out(cfg, "evaluate")
    _write_reports(out, reports)
    for m, rep in reports.items():
        log.info("%s: RMSE %s  MAE %s (x%g, R=%d)", m, rep.display("rmse"), rep.display("mae"), DISPLAY_SCALE, rep.R)
    return reports


def cmd_linkpred(cfg: ExperimentConfig) -> dict:
    if cfg.input:
        A, _, _ = data_io.load_adjacency(cfg.input)
    elif cfg.graphon is not None:
        _, _, A = simulate_replication(cfg, 0)
    else:
        raise InvalidParameter("linkpred needs --input or --graphon")
    methods = _methods(cfg)
    scores = {m: [] for m in methods}
    for r in range(cfg.reps):
        A_obs, M = mask_edges(A, cfg.remove_prob, derive_seed(cfg.seed, _MASK_STREAM, r))
        for m in methods:
            P_hat = mns_estimate(A_obs, C=cfg.C) if m == "mns" else ns_estimate_all(A_obs, C=cfg.C)
            scores[m].append(heldout_scores(P_hat, A, M))
    out = _prepare_out(cfg, "linkpred")
    result = {}
    for m in methods:
        curve = average_roc(scores[m])
        per_rep = [average_roc([s]).auc for s in scores[m]]
        data_io.write_text(out / f"roc_{m}.csv", curve.to_csv())
        result[m] = {"auc": curve.auc, "auc_per_rep": per_rep, "reps": cfg.reps,
                     "remove_prob": cfg.remove_prob}
        log.info("%s: AUC %.4f", m, curve.auc)
    data_io.write_json(out / "auc.json", result)
    return result


def cmd_bench(cfg: ExperimentConfig) -> list:
    graphons = list(cfg.graphons) or ([cfg.graphon] if cfg.graphon is not None else [])
    if not graphons:
        raise InvalidParameter("bench needs --graphons or --graphon")
    grid_n = [int(v) for v in cfg.grid_n] or [cfg.n]
    grid_K = [int(v) for v in cfg.grid_K] or [cfg.K]
    methods = _methods(cfg)
    header = ["graphon", "n", "K", "method", "R", "rmse_mean", "rmse_std", "mae_mean", "mae_std",
              "rmse_x100", "mae_x100"]
    rows = []
    for g in graphons:
        for n in grid_n:
            for K in grid_K:
                cell = cfg.replace(graphon=g, n=n, K=K)
                reports = replicate_methods(cell, cfg.reps, methods)
                for m in methods:
                    rep = reports[m]
                    rows.append([g.kind, n, K, m, rep.R, repr(rep.rmse_mean), repr(rep.rmse_std),
                                 repr(rep.mae_mean), repr(rep.mae_std), rep.display("rmse"), rep.display("mae")])
                    log.info("%s n=%d K=%d %s: RMSE %s", g.kind, n, K, m, rep.display("rmse"))
    out = _prepare_out(cfg, "bench")
    data_io.write_text(out / "bench.csv", _csv([header, *rows]))
    return rows


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "evaluate": cmd_evaluate,
    "linkpred": cmd_linkpred,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg)
    except MNSError as exc:
        print(f"mnsmooth {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
