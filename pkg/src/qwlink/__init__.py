"""Quantum-walk link prediction with classical baselines and an evaluation harness."""

__version__ = "0.1.0"

from .baselines import ch_l2, ch_l3, l3, lo, ra_l2
from .errors import EdgeListParseError, MetricUndefinedError, NumericalError, QwlinkError
from .evaluation import (
    EvalReport,
    FoldPlan,
    HeldoutResult,
    RankedPredictions,
    TuneResult,
    auc_metrics,
    cross_validate,
    cumulative_precision,
    heldout_validate,
    kfold_split,
    rank_predictions,
    standard_cutoff,
    tune_heldout,
    tune_hyperparameter,
)
from .graphs import (
    Graph,
    NetworkStats,
    bipartition,
    compute_stats,
    count_walks,
    load_edge_list,
    parse_edge_list,
    serialize_edge_list,
)
from .sampling import (
    SampleRecord,
    SamplerConfig,
    draw_samples,
    estimate_scores,
    shot_distribution,
)
from .scoring import METHODS, MethodSpec, ScoreMatrix, compute_scores
from .walk import (
    EvolutionOperator,
    SeriesTruncation,
    evolution_operator,
    qlp_scores,
    series_coefficients,
    truncated_series_scores,
)

__all__ = [
    "__version__",
    "METHODS",
    "Graph",
    "NetworkStats",
    "EvolutionOperator",
    "SeriesTruncation",
    "ScoreMatrix",
    "MethodSpec",
    "SamplerConfig",
    "SampleRecord",
    "FoldPlan",
    "RankedPredictions",
    "EvalReport",
    "TuneResult",
    "HeldoutResult",
    "QwlinkError",
    "EdgeListParseError",
    "NumericalError",
    "MetricUndefinedError",
    "load_edge_list",
    "parse_edge_list",
    "serialize_edge_list",
    "compute_stats",
    "count_walks",
    "bipartition",
    "evolution_operator",
    "qlp_scores",
    "series_coefficients",
    "truncated_series_scores",
    "shot_distribution",
    "draw_samples",
    "estimate_scores",
    "ra_l2",
    "ch_l2",
    "l3",
    "ch_l3",
    "lo",
    "compute_scores",
    "standard_cutoff",
    "kfold_split",
    "rank_predictions",
    "cumulative_precision",
    "auc_metrics",
    "cross_validate",
    "tune_hyperparameter",
    "heldout_validate",
    "tune_heldout",
]
