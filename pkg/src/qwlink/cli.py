"""Command-line entry point with reproducible, machine-readable outputs.

Every run writes ``manifest.json`` into the output directory, echoing the
resolved configuration and SHA-256 digests of the input files. CSV output
uses ``.`` decimals, LF line endings, and shortest round-trip float
formatting, so identical runs produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import QwlinkError
from .evaluation import (
    SCREENS_TOP_N,
    cross_validate,
    heldout_validate,
    kfold_split,
    rank_predictions,
    tune_heldout,
    tune_hyperparameter,
)
from .graphs import Graph, compute_stats, parse_edge_list
from .sampling import SamplerConfig, draw_samples, estimate_scores
from .scoring import METHODS, MethodSpec, compute_scores

STATS_JSON = "stats.json"
SCORES_CSV = "scores.csv"
SAMPLES_CSV = "samples.csv"
REPORT_JSON = "report.json"
PRECISION_CSV = "precision.csv"
AUC_CSV = "auc.csv"
MANIFEST_JSON = "manifest.json"


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_json(path: Path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(outdir: Path, subcommand: str, config: dict, inputs: Sequence[Path], outputs: Sequence[str]) -> None:
    manifest = {
        "tool": "qwlink",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": sorted(outputs),
    }
    _write_json(outdir / MANIFEST_JSON, manifest)


def _load_graph(path: Path) -> tuple[Graph, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        g, report = parse_edge_list(fh)
    info = {
        "edges_read": report.lines_read,
        "duplicates_dropped": report.duplicates_dropped,
        "self_loops_dropped": report.self_loops_dropped,
    }
    return g, info


def _method_spec(args: argparse.Namespace) -> MethodSpec:
    return MethodSpec(args.method, t=args.t, alpha=args.alpha)


def _spec_config(spec: MethodSpec) -> dict:
    return {"method": spec.method, **spec.params()}


def _outdir(args: argparse.Namespace) -> Path:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir


def _score_rows(g: Graph, pairs: np.ndarray, scores: np.ndarray):
    for (i, j), s in zip(pairs, scores):
        yield g.labels[i], g.labels[j], s


def _cmd_stats(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    g, load_info = _load_graph(args.graph)
    stats = compute_stats(g)
    _write_json(outdir / STATS_JSON, stats.to_dict())
    config = {"graph": str(args.graph), "load": load_info}
    _write_manifest(outdir, "stats", config, [args.graph], [STATS_JSON])
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    g, load_info = _load_graph(args.graph)
    spec = _method_spec(args)
    scores = compute_scores(g, spec)
    ranked = rank_predictions(scores, g, args.cutoff)
    _write_csv(outdir / SCORES_CSV, ["node_i", "node_j", "score"], _score_rows(g, ranked.pairs, ranked.scores))
    config = {"graph": str(args.graph), "load": load_info, "spec": _spec_config(spec), "cutoff": args.cutoff}
    _write_manifest(outdir, "score", config, [args.graph], [SCORES_CSV])
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    g, load_info = _load_graph(args.graph)
    cfg = SamplerConfig(
        shots=args.shots,
        rng_seed=args.seed,
        keep_even=args.parity == "even",
        keep_odd=args.parity == "odd",
        shots_mode=args.shots_mode,
    )
    records = list(draw_samples(g, args.t, cfg))
    _write_csv(
        outdir / SAMPLES_CSV,
        ["initial_node", "ancilla", "measured_node", "disposition"],
        (
            (g.labels[r.initial_node], r.ancilla, g.labels[r.measured_node], r.disposition)
            for r in records
        ),
    )
    empirical = estimate_scores(records, g.node_count, args.parity)
    ranked = rank_predictions(empirical, g, None)
    nonzero = ranked.scores > 0
    _write_csv(
        outdir / SCORES_CSV,
        ["node_i", "node_j", "score"],
        _score_rows(g, ranked.pairs[nonzero], ranked.scores[nonzero]),
    )
    config = {
        "graph": str(args.graph),
        "load": load_info,
        "t": args.t,
        "shots": args.shots,
        "shots_mode": args.shots_mode,
        "seed": args.seed,
        "parity": args.parity,
    }
    _write_manifest(outdir, "sample", config, [args.graph], [SAMPLES_CSV, SCORES_CSV])
    return 0


def _resolve_parameter(args: argparse.Namespace, g: Graph) -> tuple[MethodSpec, Optional[dict]]:
    """Fixed spec from flags, or a tuned one when --tune is given."""
    if not args.tune:
        return _method_spec(args), None
    result = tune_hyperparameter(
        g, args.method, args.grid, seed=args.seed, folds=args.folds, cutoff=args.cutoff
    )
    template = MethodSpec(args.method, t=1.0, alpha=1.0)
    tune_info = {
        "grid": [float(p) for p in result.grid],
        "objectives": [float(o) for o in result.objectives],
        "best": result.best,
    }
    return template.with_parameter(result.best), tune_info


def _cmd_crossval(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    g, load_info = _load_graph(args.graph)
    spec, tune_info = _resolve_parameter(args, g)
    plan = kfold_split(g, args.folds, args.seed)
    report = cross_validate(g, spec, plan, args.cutoff)
    _write_csv(
        outdir / PRECISION_CSV,
        ["rank", "mean_precision", "std_precision"],
        (
            (r, report.mean_curve[r], report.std_curve[r])
            for r in range(len(report.mean_curve))
        ),
    )
    _write_csv(
        outdir / AUC_CSV,
        ["fold", "auc_roc", "auc_pr"],
        ((f, report.auc_roc[f], report.auc_pr[f]) for f in range(plan.fold_count)),
    )
    payload = {
        "spec": _spec_config(spec),
        "folds": plan.fold_count,
        "seed": args.seed,
        "cutoff": report.cutoff,
        "fold_plan_digest": report.fold_plan_digest,
        "auc_roc_mean": report.auc_roc_mean,
        "auc_roc_std": report.auc_roc_std,
        "auc_pr_mean": report.auc_pr_mean,
        "auc_pr_std": report.auc_pr_std,
    }
    if tune_info is not None:
        payload["tuning"] = tune_info
    _write_json(outdir / REPORT_JSON, payload)
    config = {
        "graph": str(args.graph),
        "load": load_info,
        "spec": _spec_config(spec),
        "folds": args.folds,
        "seed": args.seed,
        "cutoff": args.cutoff,
        "tune": args.tune,
    }
    _write_manifest(outdir, "crossval", config, [args.graph], [REPORT_JSON, PRECISION_CSV, AUC_CSV])
    return 0


def _cmd_tune(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    g, load_info = _load_graph(args.graph)
    result = tune_hyperparameter(
        g, args.method, args.grid, seed=args.seed, folds=args.folds, cutoff=args.cutoff
    )
    payload = {
        "method": result.method,
        "best": result.best,
        "grid": [float(p) for p in result.grid],
        "objectives": [float(o) for o in result.objectives],
        "folds": args.folds,
        "seed": args.seed,
    }
    _write_json(outdir / REPORT_JSON, payload)
    config = {
        "graph": str(args.graph),
        "load": load_info,
        "method": args.method,
        "grid": [float(p) for p in args.grid] if args.grid else None,
        "folds": args.folds,
        "seed": args.seed,
        "cutoff": args.cutoff,
    }
    _write_manifest(outdir, "tune", config, [args.graph], [REPORT_JSON])
    return 0


def _read_label_pairs(paths: Sequence[Path]) -> list[tuple[str, str]]:
    pairs = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            test_graph, _ = parse_edge_list(fh)
        pairs.extend((test_graph.labels[u], test_graph.labels[v]) for u, v in test_graph.edges)
    return pairs


def _cmd_screens(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    train, load_info = _load_graph(args.train)
    tune_info = None
    if args.tune:
        if args.seed is None:
            raise QwlinkError("--seed is required with --tune")
        result = tune_heldout(train, args.method, args.grid, seed=args.seed, top_n=args.top_n)
        spec = MethodSpec(args.method, t=1.0, alpha=1.0).with_parameter(result.best)
        tune_info = {
            "grid": [float(p) for p in result.grid],
            "objectives": [float(o) for o in result.objectives],
            "best": result.best,
        }
    else:
        spec = _method_spec(args)
    test_pairs = _read_label_pairs(args.tests)
    outcome = heldout_validate(train, test_pairs, spec, args.top_n)
    _write_csv(
        outdir / PRECISION_CSV,
        ["rank", "precision"],
        ((r, outcome.curve[r]) for r in range(len(outcome.curve))),
    )
    payload = {
        "spec": _spec_config(spec),
        "top_n": args.top_n,
        "test_pairs_used": outcome.test_pairs_used,
        "test_pairs_dropped": outcome.test_pairs_dropped,
        "final_precision": float(outcome.curve[-1]) if len(outcome.curve) else 0.0,
    }
    if tune_info is not None:
        payload["tuning"] = tune_info
    _write_json(outdir / REPORT_JSON, payload)
    config = {
        "train": str(args.train),
        "tests": [str(p) for p in args.tests],
        "load": load_info,
        "spec": _spec_config(spec),
        "top_n": args.top_n,
        "seed": args.seed,
        "tune": args.tune,
    }
    _write_manifest(
        outdir, "screens", config, [args.train, *args.tests], [REPORT_JSON, PRECISION_CSV]
    )
    return 0


def _add_method_flags(parser: argparse.ArgumentParser, *, tunable: bool) -> None:
    parser.add_argument("--method", required=True, choices=METHODS)
    parser.add_argument("--t", type=float, default=None, help="walk time (qlp methods)")
    parser.add_argument("--alpha", type=float, default=None, help="regularizer (lo)")
    if tunable:
        parser.add_argument("--tune", action="store_true", help="grid-search the free parameter")
        parser.add_argument("--grid", type=float, nargs="+", default=None, help="parameter grid for --tune")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwlink", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qwlink {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("stats", help="network statistics as JSON")
    p.add_argument("graph", type=Path)
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("score", help="ranked candidate scores as CSV")
    p.add_argument("graph", type=Path)
    _add_method_flags(p, tunable=False)
    p.add_argument("--cutoff", type=int, default=None, help="truncate the ranking")
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("sample", help="simulate measurement shots")
    p.add_argument("graph", type=Path)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), required=True)
    p.add_argument("--shots-mode", choices=("uniform", "degree"), default="uniform")
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("crossval", help="k-fold cross-validation report")
    p.add_argument("graph", type=Path)
    _add_method_flags(p, tunable=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(func=_cmd_crossval)

    p = sub.add_parser("tune", help="grid-search a method's free parameter")
    p.add_argument("graph", type=Path)
    p.add_argument("--method", required=True, choices=("qlp-even", "qlp-odd", "lo"))
    p.add_argument("--grid", type=float, nargs="+", default=None)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("screens", help="validate predictions against held-out screens")
    p.add_argument("train", type=Path)
    p.add_argument("tests", type=Path, nargs="+")
    _add_method_flags(p, tunable=True)
    p.add_argument("--top-n", type=int, default=SCREENS_TOP_N)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(func=_cmd_screens)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QwlinkError, OSError) as exc:
        print(f"qwlink: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
