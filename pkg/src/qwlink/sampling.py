"""Simulation of the circuit measurement loop.

Each shot starts a walker at node j, measures the ancilla bit selecting the
even (0) or odd (1) channel, then measures a node i. Shots landing on the
initial node or an existing edge, or carrying an unwanted ancilla value, are
recorded as discarded rather than silently resampled, so the post-selection
overhead stays measurable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import QwlinkError
from .graphs import Graph
from .scoring import ScoreMatrix
from .walk import EvolutionOperator, evolution_operator

__all__ = [
    "DISPOSITIONS",
    "SamplerConfig",
    "SampleRecord",
    "shot_distribution",
    "draw_samples",
    "estimate_scores",
]

KEPT = "kept"
DISCARDED_SELF = "discarded_self"
DISCARDED_EXISTING_LINK = "discarded_existing_link"
DISCARDED_PARITY = "discarded_parity"
DISPOSITIONS = (KEPT, DISCARDED_SELF, DISCARDED_EXISTING_LINK, DISCARDED_PARITY)

_SHOT_MODES = ("uniform", "degree")


@dataclass(frozen=True)
class SamplerConfig:
    """Shot budget, seed, and channel post-selection flags.

    ``shots`` is the per-node budget; with ``shots_mode="degree"`` the budget
    is redistributed proportionally to node degree while keeping roughly the
    same total.
    """

    shots: int
    rng_seed: int
    keep_even: bool = True
    keep_odd: bool = True
    shots_mode: str = "uniform"

    def __post_init__(self):
        if self.shots < 1:
            raise QwlinkError("shots must be >= 1")
        if self.rng_seed < 0:
            raise QwlinkError("rng_seed must be non-negative")
        if not (self.keep_even or self.keep_odd):
            raise QwlinkError("at least one of keep_even/keep_odd must be set")
        if self.shots_mode not in _SHOT_MODES:
            raise QwlinkError(f"shots_mode must be one of {_SHOT_MODES}")

    def shots_per_node(self, g: Graph) -> np.ndarray:
        if self.shots_mode == "uniform":
            return np.full(g.node_count, self.shots, dtype=np.int64)
        k = g.degrees.astype(np.float64)
        k_av = k.mean()
        if k_av == 0:
            return np.full(g.node_count, self.shots, dtype=np.int64)
        return np.maximum(1, np.rint(self.shots * k / k_av)).astype(np.int64)


class SampleRecord(NamedTuple):
    """One circuit shot: start node, ancilla bit, measured node, disposition."""

    initial_node: int
    ancilla: int
    measured_node: int
    disposition: str


def shot_distribution(op: EvolutionOperator, j: int) -> np.ndarray:
    """Joint (ancilla, node) probability table for a walker started at node j.

    Row 0 holds the even-channel probabilities Re(U)_ij^2, row 1 the
    odd-channel Im(U)_ij^2; the table sums to 1 by unitarity.
    """
    n = op.re_part.shape[0]
    if not 0 <= j < n:
        raise QwlinkError(f"initial node {j} out of range for {n} nodes")
    return np.stack([op.re_part[:, j] ** 2, op.im_part[:, j] ** 2])


def _node_rng(seed: int, node: int) -> np.random.Generator:
    # Counter-based generator keyed per (seed, node): per-node substreams are
    # independent, so parallel scheduling cannot change the output.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, node))))


def draw_samples(g: Graph, t: float, cfg: SamplerConfig) -> Iterator[SampleRecord]:
    """Generate shot records for every initial node, in node order.

    Draws are i.i.d. from :func:`shot_distribution` per node and fully
    reproducible from ``cfg.rng_seed``.
    """
    op = evolution_operator(g, t)
    n = g.node_count
    budget = cfg.shots_per_node(g)
    for j in range(n):
        probs = shot_distribution(op, j).ravel()
        probs = probs / probs.sum()
        rng = _node_rng(cfg.rng_seed, j)
        outcomes = rng.choice(2 * n, size=int(budget[j]), p=probs)
        ancilla = outcomes // n
        measured = outcomes % n
        is_self = measured == j
        is_edge = np.isin(measured, g.neighbors(j))
        keep_flag = np.where(ancilla == 0, cfg.keep_even, cfg.keep_odd)
        for q_a, i, self_hit, edge_hit, keep in zip(
            ancilla, measured, is_self, is_edge, keep_flag
        ):
            if self_hit:
                disposition = DISCARDED_SELF
            elif edge_hit:
                disposition = DISCARDED_EXISTING_LINK
            elif not keep:
                disposition = DISCARDED_PARITY
            else:
                disposition = KEPT
            yield SampleRecord(j, int(q_a), int(i), disposition)


def estimate_scores(
    samples: Iterable[SampleRecord], node_count: int, parity: str
) -> ScoreMatrix:
    """Empirical score table from kept shots of one parity channel.

    Each kept record with matching ancilla adds one count to its unordered
    pair, pooling shots started from either endpoint. Entries are raw counts;
    pairs never sampled stay at zero.
    """
    if parity not in ("even", "odd"):
        raise QwlinkError("parity must be 'even' or 'odd'")
    want = 0 if parity == "even" else 1
    values = np.zeros((node_count, node_count))
    kept = 0
    for rec in samples:
        if rec.disposition == KEPT and rec.ancilla == want:
            values[rec.initial_node, rec.measured_node] += 1.0
            values[rec.measured_node, rec.initial_node] += 1.0
            kept += 1
    if kept == 0:
        warnings.warn(f"no kept {parity} samples; returning an all-zero score matrix")
    return ScoreMatrix(method=f"empirical-{parity}", params={}, values=values)
