"""Cross-validation, ranking, precision curves, AUC metrics, and tuning.

Candidates for prediction are the unordered node pairs that are not edges of
the training graph. Rankings are totally ordered: descending score, then
ascending (min id, max id), so every run is deterministic down to the byte.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.stats

from .errors import MetricUndefinedError, QwlinkError
from .graphs import Graph
from .scoring import MethodSpec, ScoreMatrix, compute_scores

__all__ = [
    "DEFAULT_GRIDS",
    "FoldPlan",
    "RankedPredictions",
    "EvalReport",
    "HeldoutResult",
    "TuneResult",
    "standard_cutoff",
    "kfold_split",
    "candidate_pairs",
    "rank_predictions",
    "cumulative_precision",
    "auc_metrics",
    "cross_validate",
    "inner_holdout_split",
    "tune_hyperparameter",
    "map_label_pairs",
    "heldout_validate",
    "tune_heldout",
]

# Parameter grids that cover the operating points observed across the
# benchmark networks: walk times span 1e-6..1 for the even channel and
# 0.01..2 for the odd channel; LO regularizers span 1e-4..1e-1.
DEFAULT_GRIDS: dict[str, np.ndarray] = {
    "qlp-even": np.logspace(-6, 0, 25),
    "qlp-odd": np.concatenate([[0.01, 0.02, 0.03, 0.05], np.round(np.arange(0.1, 2.01, 0.1), 2)]),
    "lo": np.logspace(-4, -1, 13),
}

HOLDOUT_FRACTION = 0.10
SCREENS_HOLDOUT_FRACTION = 0.50
SCREENS_TOP_N = 500


@dataclass(frozen=True)
class FoldPlan:
    """Partition of a graph's edges into folds, one fold id per edge."""

    fold_count: int
    rng_seed: int
    assignment: np.ndarray

    def __post_init__(self):
        sizes = np.bincount(self.assignment, minlength=self.fold_count)
        if sizes.max() - sizes.min() > 1:
            raise QwlinkError("fold sizes differ by more than one")

    def test_edges(self, g: Graph, fold: int) -> np.ndarray:
        return g.edges[self.assignment == fold]

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.fold_count},{self.rng_seed}:".encode())
        h.update(np.ascontiguousarray(self.assignment, dtype=np.int64).tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class RankedPredictions:
    """Candidate pairs in total order: descending score, then ascending ids."""

    pairs: np.ndarray
    scores: np.ndarray
    cutoff: int


@dataclass(frozen=True)
class EvalReport:
    """Aggregated cross-validation result for one method."""

    spec: MethodSpec
    fold_plan_digest: str
    cutoff: int
    fold_curves: tuple[np.ndarray, ...]
    mean_curve: np.ndarray
    std_curve: np.ndarray
    auc_roc: np.ndarray
    auc_pr: np.ndarray

    @property
    def auc_roc_mean(self) -> float:
        return float(self.auc_roc.mean())

    @property
    def auc_roc_std(self) -> float:
        return float(self.auc_roc.std(ddof=1)) if len(self.auc_roc) > 1 else 0.0

    @property
    def auc_pr_mean(self) -> float:
        return float(self.auc_pr.mean())

    @property
    def auc_pr_std(self) -> float:
        return float(self.auc_pr.std(ddof=1)) if len(self.auc_pr) > 1 else 0.0


@dataclass(frozen=True)
class TuneResult:
    """Grid-search outcome: chosen parameter plus the objective per grid point."""

    method: str
    best: float
    grid: np.ndarray
    objectives: np.ndarray


@dataclass(frozen=True)
class HeldoutResult:
    """Held-out validation curve plus label-mapping accounting."""

    curve: np.ndarray
    test_pairs_used: int
    test_pairs_dropped: int


def standard_cutoff(g: Graph) -> int:
    """Plot window used throughout: floor(0.05 * N * k_av) ranks."""
    k_av = 2.0 * g.edge_count / g.node_count
    return max(1, int(0.05 * g.node_count * k_av))


def kfold_split(g: Graph, folds: int, seed: int) -> FoldPlan:
    """Uniform random partition of the edge set into folds of near-equal size."""
    if folds < 2:
        raise QwlinkError("folds must be >= 2")
    if seed < 0:
        raise QwlinkError("seed must be non-negative")
    m = g.edge_count
    if m < folds:
        raise QwlinkError(f"graph has {m} edges, fewer than {folds} folds")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    perm = rng.permutation(m)
    assignment = np.empty(m, dtype=np.int64)
    assignment[perm] = np.arange(m) % folds
    return FoldPlan(fold_count=folds, rng_seed=seed, assignment=assignment)


def _encode(pairs_i: np.ndarray, pairs_j: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(pairs_i, pairs_j).astype(np.int64)
    hi = np.maximum(pairs_i, pairs_j).astype(np.int64)
    return lo * np.int64(n) + hi


def candidate_pairs(train: Graph) -> tuple[np.ndarray, np.ndarray]:
    """All unordered non-adjacent pairs (i < j) of the training graph."""
    n = train.node_count
    iu, ju = np.triu_indices(n, k=1)
    if train.edge_count:
        is_edge = np.zeros(n * n, dtype=bool)
        codes = _encode(train.edges[:, 0], train.edges[:, 1], n)
        is_edge[codes] = True
        keep = ~is_edge[iu * np.int64(n) + ju]
        iu, ju = iu[keep], ju[keep]
    return iu, ju


def rank_predictions(
    scores: ScoreMatrix, train: Graph, cutoff: Optional[int] = None
) -> RankedPredictions:
    """Rank candidate pairs of ``train`` by score, truncated at ``cutoff``."""
    if scores.node_count != train.node_count:
        raise QwlinkError("score matrix size does not match the training graph")
    iu, ju = candidate_pairs(train)
    vals = scores.values[iu, ju]
    order = np.lexsort((ju, iu, -vals))
    if cutoff is not None:
        order = order[: max(0, cutoff)]
    pairs = np.column_stack([iu[order], ju[order]])
    return RankedPredictions(
        pairs=pairs, scores=vals[order], cutoff=len(order)
    )


def cumulative_precision(ranked: RankedPredictions, test_edges: np.ndarray) -> np.ndarray:
    """curve[r] = fraction of the top r+1 predictions that are held-out edges."""
    if len(ranked.pairs) == 0:
        return np.zeros(0)
    n = int(ranked.pairs.max()) + 1 if len(ranked.pairs) else 1
    test_edges = np.asarray(test_edges, dtype=np.int64).reshape(-1, 2)
    if len(test_edges):
        n = max(n, int(test_edges.max()) + 1)
        test_codes = _encode(test_edges[:, 0], test_edges[:, 1], n)
        codes = _encode(ranked.pairs[:, 0], ranked.pairs[:, 1], n)
        hits = np.isin(codes, test_codes)
    else:
        hits = np.zeros(len(ranked.pairs), dtype=bool)
    return np.cumsum(hits) / np.arange(1, len(hits) + 1)


def _average_precision(scores: np.ndarray, positive: np.ndarray) -> float:
    """Area under the precision-recall curve with step-wise interpolation.

    Thresholds sweep the distinct score values in descending order; equal
    scores enter as one block, so the result is tie-invariant.
    """
    order = np.argsort(-scores, kind="stable")
    s_sorted = scores[order]
    p_sorted = positive[order]
    # Last index of each tie block.
    block_ends = np.flatnonzero(np.diff(s_sorted))
    block_ends = np.append(block_ends, len(s_sorted) - 1)
    tp = np.cumsum(p_sorted)[block_ends].astype(np.float64)
    total = block_ends + 1.0
    n_pos = float(positive.sum())
    precision = tp / total
    recall = tp / n_pos
    recall_prev = np.concatenate([[0.0], recall[:-1]])
    return float(((recall - recall_prev) * precision).sum())


def auc_metrics(
    scores: ScoreMatrix, train: Graph, test_edges: np.ndarray
) -> tuple[float, float]:
    """AUC-ROC and AUC-PR over the full candidate ranking.

    Positives are the held-out edges; negatives are every other candidate
    pair. AUC-ROC uses the rank-statistic formulation with midrank ties;
    AUC-PR uses step-wise interpolation.
    """
    if scores.node_count != train.node_count:
        raise QwlinkError("score matrix size does not match the training graph")
    n = train.node_count
    test_edges = np.asarray(test_edges, dtype=np.int64).reshape(-1, 2)
    iu, ju = candidate_pairs(train)
    codes = _encode(iu, ju, n)
    test_codes = _encode(test_edges[:, 0], test_edges[:, 1], n) if len(test_edges) else np.zeros(0, np.int64)
    if len(np.setdiff1d(test_codes, codes)):
        raise MetricUndefinedError("test edges must be disjoint from training edges")
    positive = np.isin(codes, test_codes)
    n_pos = int(positive.sum())
    n_neg = len(codes) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricUndefinedError(
            f"AUC undefined with {n_pos} positives and {n_neg} negatives"
        )
    vals = scores.values[iu, ju]
    ranks = scipy.stats.rankdata(vals)
    auc_roc = (ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    auc_pr = _average_precision(vals, positive)
    return float(auc_roc), auc_pr


def cross_validate(
    g: Graph,
    spec: MethodSpec,
    plan: FoldPlan,
    cutoff: Optional[int] = None,
) -> EvalReport:
    """Score each fold's training graph and aggregate precision and AUC.

    Every fold removes its edges from ``g``, scores the remainder, and
    evaluates against the removed edges. Curves are truncated to the shortest
    fold before averaging (they differ only when the candidate set is tiny).
    """
    if len(plan.assignment) != g.edge_count:
        raise QwlinkError("fold plan does not match the graph's edge count")
    if cutoff is None:
        cutoff = standard_cutoff(g)
    curves = []
    auc_roc = np.empty(plan.fold_count)
    auc_pr = np.empty(plan.fold_count)
    for fold in range(plan.fold_count):
        test = plan.test_edges(g, fold)
        train = g.without_edges(test)
        scores = compute_scores(train, spec)
        ranked = rank_predictions(scores, train, cutoff)
        curves.append(cumulative_precision(ranked, test))
        auc_roc[fold], auc_pr[fold] = auc_metrics(scores, train, test)
    length = min(len(c) for c in curves)
    stacked = np.vstack([c[:length] for c in curves])
    return EvalReport(
        spec=spec,
        fold_plan_digest=plan.digest(),
        cutoff=cutoff,
        fold_curves=tuple(curves),
        mean_curve=stacked.mean(axis=0),
        std_curve=stacked.std(axis=0, ddof=1) if len(curves) > 1 else np.zeros(length),
        auc_roc=auc_roc,
        auc_pr=auc_pr,
    )


def inner_holdout_split(
    g: Graph, plan: FoldPlan, seed: int, fraction: float = HOLDOUT_FRACTION
) -> tuple[Graph, np.ndarray]:
    """Validation split used for tuning: carve a slice out of fold 0's training edges.

    Returns the reduced training graph and the removed edges (validation
    positives). Deterministic in ``seed``.
    """
    train_edges = g.edges[plan.assignment != 0]
    train = Graph.from_edges(g.node_count, train_edges, labels=g.labels)
    return remove_random_edges(train, fraction, seed)


def remove_random_edges(g: Graph, fraction: float, seed: int) -> tuple[Graph, np.ndarray]:
    """Remove a random fraction of edges; returns (reduced graph, removed edges)."""
    if seed < 0:
        raise QwlinkError("seed must be non-negative")
    m = g.edge_count
    n_val = max(1, int(round(fraction * m)))
    if n_val >= m:
        raise QwlinkError("cannot hold out every edge")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 1)))
    picked = rng.choice(m, size=n_val, replace=False)
    removed = g.edges[np.sort(picked)]
    return g.without_edges(removed), removed


def _objective(train: Graph, spec: MethodSpec, positives: np.ndarray, cutoff: int) -> float:
    scores = compute_scores(train, spec)
    ranked = rank_predictions(scores, train, cutoff)
    return float(cumulative_precision(ranked, positives).sum())


def _resolve_grid(method: str, grid: Optional[Sequence[float]]) -> np.ndarray:
    if method not in DEFAULT_GRIDS:
        raise QwlinkError(f"{method} has no tunable parameter")
    if grid is None:
        grid = DEFAULT_GRIDS[method]
    grid = np.sort(np.asarray(grid, dtype=np.float64))
    if len(grid) == 0:
        raise QwlinkError("parameter grid is empty")
    return grid


def tune_hyperparameter(
    g: Graph,
    method: str,
    grid: Optional[Sequence[float]] = None,
    *,
    seed: int,
    folds: int = 10,
    cutoff: Optional[int] = None,
) -> TuneResult:
    """Pick the parameter maximizing area under the validation precision curve.

    The validation positives are a random 10% slice of the first fold's
    training edges. Ties resolve to the smaller parameter.
    """
    grid = _resolve_grid(method, grid)
    if cutoff is None:
        cutoff = standard_cutoff(g)
    plan = kfold_split(g, folds, seed)
    inner_train, positives = inner_holdout_split(g, plan, seed)
    template = MethodSpec(method, t=1.0, alpha=1.0)
    objectives = np.array(
        [_objective(inner_train, template.with_parameter(p), positives, cutoff) for p in grid]
    )
    best = grid[int(np.argmax(objectives))]  # argmax returns the first (smallest) maximizer
    return TuneResult(method=method, best=float(best), grid=grid, objectives=objectives)


def map_label_pairs(
    train: Graph, label_pairs: Iterable[tuple[str, str]]
) -> tuple[np.ndarray, int]:
    """Map labeled pairs onto the training graph's ids, dropping unknown labels.

    Returns deduplicated id pairs plus the count of dropped pairs (unknown
    label or self-pair).
    """
    ids = train.label_map()
    mapped = []
    dropped = 0
    for u_lab, v_lab in label_pairs:
        u = ids.get(str(u_lab))
        v = ids.get(str(v_lab))
        if u is None or v is None or u == v:
            dropped += 1
            continue
        mapped.append((min(u, v), max(u, v)))
    if not mapped:
        return np.zeros((0, 2), dtype=np.int64), dropped
    pairs = np.unique(np.asarray(mapped, dtype=np.int64), axis=0)
    dropped += len(mapped) - len(pairs)
    return pairs, dropped


def heldout_validate(
    train: Graph,
    test_label_pairs: Iterable[tuple[str, str]],
    spec: MethodSpec,
    top_n: int = SCREENS_TOP_N,
) -> HeldoutResult:
    """Precision over the top ``top_n`` predictions against an external edge set.

    Test pairs are given by node label; pairs mentioning labels absent from
    the training graph are dropped and counted. Pairs that are training edges
    can never be predicted and simply never score a hit.
    """
    test_pairs, dropped = map_label_pairs(train, test_label_pairs)
    scores = compute_scores(train, spec)
    ranked = rank_predictions(scores, train, top_n)
    curve = cumulative_precision(ranked, test_pairs)
    return HeldoutResult(
        curve=curve, test_pairs_used=len(test_pairs), test_pairs_dropped=dropped
    )


def tune_heldout(
    train: Graph,
    method: str,
    grid: Optional[Sequence[float]] = None,
    *,
    seed: int,
    top_n: int = SCREENS_TOP_N,
) -> TuneResult:
    """Tune for held-out validation: optimize the top-``top_n`` precision area
    after removing a random 50% of the training edges."""
    grid = _resolve_grid(method, grid)
    inner_train, removed = remove_random_edges(train, SCREENS_HOLDOUT_FRACTION, seed)
    template = MethodSpec(method, t=1.0, alpha=1.0)
    objectives = np.array(
        [_objective(inner_train, template.with_parameter(p), removed, top_n) for p in grid]
    )
    best = grid[int(np.argmax(objectives))]
    return TuneResult(method=method, best=float(best), grid=grid, objectives=objectives)
