"""Score-matrix container, method specifications, and the scoring dispatch."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import QwlinkError
from .graphs import Graph

__all__ = ["METHODS", "ScoreMatrix", "MethodSpec", "compute_scores"]

METHODS = ("qlp-even", "qlp-odd", "ra-l2", "ch-l2", "l3", "ch-l3", "lo")

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class ScoreMatrix:
    """Symmetric per-pair score table for one method and parameter setting.

    The diagonal is computed but carries no meaning; existing edges are
    filtered out downstream when candidates are ranked.
    """

    method: str
    params: dict
    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise QwlinkError("score matrix must be square")
        if not np.all(np.isfinite(v)):
            raise QwlinkError(f"{self.method}: non-finite score entries")
        asym = np.abs(v - v.T).max() if v.size else 0.0
        if asym > _SYMMETRY_TOL:
            raise QwlinkError(f"{self.method}: score matrix asymmetry {asym:.3e}")

    @property
    def node_count(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class MethodSpec:
    """A prediction method plus its parameter (walk time t or regularizer alpha)."""

    method: str
    t: Optional[float] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise QwlinkError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.method in ("qlp-even", "qlp-odd"):
            if self.t is None or not np.isfinite(self.t):
                raise QwlinkError(f"{self.method} requires a finite walk time t")
        if self.method == "lo":
            if self.alpha is None or not self.alpha > 0:
                raise QwlinkError("lo requires a regularizer alpha > 0")

    def params(self) -> dict:
        if self.method in ("qlp-even", "qlp-odd"):
            return {"t": float(self.t)}
        if self.method == "lo":
            return {"alpha": float(self.alpha)}
        return {}

    def with_parameter(self, value: float) -> "MethodSpec":
        """Copy of this spec with its free parameter replaced."""
        if self.method in ("qlp-even", "qlp-odd"):
            return MethodSpec(self.method, t=float(value))
        if self.method == "lo":
            return MethodSpec(self.method, alpha=float(value))
        raise QwlinkError(f"{self.method} has no free parameter")


def compute_scores(g: Graph, spec: MethodSpec) -> ScoreMatrix:
    """Score every node pair of ``g`` with the requested method."""
    # Imported here: walk/baselines both build on ScoreMatrix.
    from . import baselines, walk

    if spec.method == "qlp-even":
        return walk.qlp_scores(g, spec.t)[0]
    if spec.method == "qlp-odd":
        return walk.qlp_scores(g, spec.t)[1]
    if spec.method == "ra-l2":
        return baselines.ra_l2(g)
    if spec.method == "ch-l2":
        return baselines.ch_l2(g)
    if spec.method == "l3":
        return baselines.l3(g)
    if spec.method == "ch-l3":
        return baselines.ch_l3(g)
    if spec.method == "lo":
        return baselines.lo(g, spec.alpha)
    raise QwlinkError(f"unknown method {spec.method!r}")
