"""Undirected simple graphs: ingestion, statistics, and path-counting oracles.

Graphs are stored in CSR form with contiguous internal ids 0..N-1. Input
edge lists are canonicalized on load: directed or repeated edges collapse
to one undirected edge, self-loops are dropped, and original labels are
kept in a label map ordered by first appearance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import EdgeListParseError, QwlinkError

__all__ = [
    "Graph",
    "LoadReport",
    "NetworkStats",
    "load_edge_list",
    "parse_edge_list",
    "serialize_edge_list",
    "compute_stats",
    "count_walks",
    "bipartition",
]

# Source batch size for the all-pairs BFS used by compute_stats; bounds the
# distance-matrix slice to batch * N doubles.
_BFS_BATCH = 256


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with CSR adjacency.

    Attributes
    ----------
    indptr, indices : CSR neighbor structure; neighbors of u are
        ``indices[indptr[u]:indptr[u+1]]``, sorted ascending.
    edges : (M, 2) int array of unordered edges with ``edges[:,0] < edges[:,1]``,
        sorted lexicographically.
    labels : original node label per internal id, in first-appearance order.
    """

    indptr: np.ndarray
    indices: np.ndarray
    edges: np.ndarray
    labels: tuple[str, ...]

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        pos = np.searchsorted(row, v)
        return pos < len(row) and row[pos] == v

    def label_map(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def adjacency_sparse(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        n = self.node_count
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def adjacency_dense(self) -> np.ndarray:
        n = self.node_count
        a = np.zeros((n, n), dtype=np.float64)
        rows = np.repeat(np.arange(n), self.degrees)
        a[rows, self.indices] = 1.0
        return a

    def adjacency_bool(self) -> np.ndarray:
        n = self.node_count
        a = np.zeros((n, n), dtype=bool)
        rows = np.repeat(np.arange(n), self.degrees)
        a[rows, self.indices] = True
        return a

    def without_edges(self, removed: np.ndarray) -> "Graph":
        """New graph on the same node set with the given unordered edges removed."""
        if len(removed) == 0:
            return self
        n = self.node_count
        drop = _encode_pairs(np.asarray(removed), n)
        keep = ~np.isin(_encode_pairs(self.edges, n), drop)
        return Graph.from_edges(n, self.edges[keep], labels=self.labels)

    @staticmethod
    def from_edges(
        node_count: int,
        edges: Union[np.ndarray, Sequence[tuple[int, int]]],
        labels: Optional[Sequence[str]] = None,
    ) -> "Graph":
        """Build a graph from unordered integer edge pairs.

        Raises ``QwlinkError`` on self-loops, duplicates, or out-of-range ids.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if labels is None:
            labels = tuple(str(i) for i in range(node_count))
        else:
            labels = tuple(labels)
        if len(labels) != node_count:
            raise QwlinkError("label count does not match node count")
        if len(edges) > 0:
            if edges.min() < 0 or edges.max() >= node_count:
                raise QwlinkError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise QwlinkError("self-loop in edge array")
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            edges = np.column_stack([lo, hi])
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            codes = _encode_pairs(edges, node_count)
            if np.any(np.diff(codes) == 0):
                raise QwlinkError("duplicate edge in edge array")
        both = np.concatenate([edges, edges[:, ::-1]]) if len(edges) else edges
        counts = np.bincount(both[:, 0], minlength=node_count) if len(both) else np.zeros(node_count, dtype=np.int64)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        if len(both):
            order = np.lexsort((both[:, 1], both[:, 0]))
            indices = both[order, 1]
        else:
            indices = np.zeros(0, dtype=np.int64)
        g = Graph(indptr=indptr, indices=indices, edges=edges, labels=labels)
        assert int(g.degrees.sum()) == 2 * g.edge_count
        return g


@dataclass(frozen=True)
class LoadReport:
    """Canonicalization counters from one edge-list parse."""

    lines_read: int
    duplicates_dropped: int
    self_loops_dropped: int


@dataclass(frozen=True)
class NetworkStats:
    """Summary statistics of one graph.

    Distance fields (``d_max``, ``d_av``) are computed over the largest
    connected component only; ``d_av`` averages over unordered distinct
    pairs. ``C`` is the mean local clustering coefficient with nodes of
    degree < 2 contributing 0.
    """

    N: int
    M: int
    k_av: float
    k_max: int
    density: float
    d_max: int
    d_av: float
    C: float
    k2_mean: float
    k3_mean: float

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "k_av": self.k_av,
            "k_max": self.k_max,
            "density": self.density,
            "d_max": self.d_max,
            "d_av": self.d_av,
            "C": self.C,
            "k2_mean": self.k2_mean,
            "k3_mean": self.k3_mean,
        }


def _encode_pairs(pairs: np.ndarray, n: int) -> np.ndarray:
    """Unique int64 code per unordered pair, i*n+j with i<j."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    lo = pairs.min(axis=1)
    hi = pairs.max(axis=1)
    return lo * np.int64(n) + hi


def _iter_lines(source: Union[str, IO[str], Iterable[str]]) -> Iterator[str]:
    if isinstance(source, str):
        yield from source.splitlines()
    else:
        for line in source:
            yield line.rstrip("\n")


def parse_edge_list(
    source: Union[str, IO[str], Iterable[str]],
    *,
    skip_comments: bool = True,
    deduplicate: bool = True,
) -> tuple[Graph, LoadReport]:
    """Parse a two-column edge list into a canonical graph plus a drop report.

    Each non-comment line holds two whitespace-separated node labels.
    Labels are relabeled to 0..N-1 in first-appearance order. With
    ``deduplicate``, repeated edges (in either direction) and self-loops
    are dropped and counted; otherwise they raise ``EdgeListParseError``.
    """
    label_ids: dict[str, int] = {}
    edge_codes: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    duplicates = 0
    self_loops = 0
    lines_read = 0
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if skip_comments:
                continue
            raise EdgeListParseError(lineno, "comment line with skip_comments disabled")
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(lineno, f"expected 2 tokens, got {len(tokens)}")
        lines_read += 1
        u_lab, v_lab = tokens
        u = label_ids.setdefault(u_lab, len(label_ids))
        v = label_ids.setdefault(v_lab, len(label_ids))
        if u == v:
            if not deduplicate:
                raise EdgeListParseError(lineno, f"self-loop at node {u_lab!r}")
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in edge_codes:
            if not deduplicate:
                raise EdgeListParseError(lineno, f"duplicate edge {u_lab!r} {v_lab!r}")
            duplicates += 1
            continue
        edge_codes.add(key)
        edges.append(key)
    if not edges:
        raise QwlinkError("empty graph: edge list contains no usable edges")
    labels = [""] * len(label_ids)
    for lab, i in label_ids.items():
        labels[i] = lab
    g = Graph.from_edges(len(labels), edges, labels=labels)
    return g, LoadReport(lines_read, duplicates, self_loops)


def load_edge_list(
    source: Union[str, IO[str], Iterable[str]],
    *,
    skip_comments: bool = True,
    deduplicate: bool = True,
) -> Graph:
    """Parse an edge list, discarding the drop report."""
    g, _ = parse_edge_list(source, skip_comments=skip_comments, deduplicate=deduplicate)
    return g


def serialize_edge_list(g: Graph) -> str:
    """Edge-list text for the graph, one ``label_u label_v`` line per edge."""
    lines = [f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def _largest_component(g: Graph) -> np.ndarray:
    n_comp, comp = csgraph.connected_components(g.adjacency_sparse(), directed=False)
    if n_comp == 1:
        return np.arange(g.node_count)
    sizes = np.bincount(comp, minlength=n_comp)
    return np.flatnonzero(comp == np.argmax(sizes))


def _distance_stats(g: Graph) -> tuple[int, float]:
    """(max distance, mean distance over unordered pairs) in the largest component."""
    members = _largest_component(g)
    nc = len(members)
    if nc < 2:
        return 0, 0.0
    sub = g.adjacency_sparse()[members][:, members]
    d_max = 0
    total = 0.0
    for start in range(0, nc, _BFS_BATCH):
        idx = np.arange(start, min(start + _BFS_BATCH, nc))
        dist = csgraph.dijkstra(sub, directed=False, unweighted=True, indices=idx)
        d_max = max(d_max, int(dist.max()))
        total += float(dist.sum())
    # total counts ordered pairs (and zero diagonals); the unordered mean
    # equals the ordered mean over distinct pairs.
    d_av = total / (nc * (nc - 1))
    return d_max, d_av


def _mean_clustering(g: Graph) -> float:
    a = g.adjacency_sparse()
    k = g.degrees.astype(np.float64)
    # (A @ A) .* A row-sums give twice the triangle count per node.
    tri2 = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()
    denom = k * (k - 1)
    local = np.divide(tri2, denom, out=np.zeros_like(tri2), where=denom > 0)
    return float(local.mean())


def compute_stats(g: Graph) -> NetworkStats:
    """Deterministic summary statistics for a graph."""
    n = g.node_count
    m = g.edge_count
    k = g.degrees.astype(np.float64)
    d_max, d_av = _distance_stats(g)
    return NetworkStats(
        N=n,
        M=m,
        k_av=float(k.mean()),
        k_max=int(k.max()) if n else 0,
        density=float(2.0 * m / (n * (n - 1))) if n > 1 else 0.0,
        d_max=d_max,
        d_av=d_av,
        C=_mean_clustering(g),
        k2_mean=float((k**2).mean()),
        k3_mean=float((k**3).mean()),
    )


def count_walks(g: Graph, length: int) -> np.ndarray:
    """Count walks of the given length between every node pair.

    Works by explicit neighbor expansion (repeatedly pushing walk counts
    along adjacency lists), independent of any matrix arithmetic, so it can
    serve as an oracle for matrix-power-based scores. Exact integer output;
    intended for small graphs (N up to a few hundred).
    """
    if length < 0:
        raise ValueError("walk length must be >= 0")
    n = g.node_count
    counts = np.zeros((n, n), dtype=np.int64)
    for src in range(n):
        frontier: dict[int, int] = {src: 1}
        for _ in range(length):
            expanded: dict[int, int] = {}
            for node, ways in frontier.items():
                for nb in g.neighbors(node):
                    nb = int(nb)
                    expanded[nb] = expanded.get(nb, 0) + ways
            frontier = expanded
        for node, ways in frontier.items():
            counts[src, node] = ways
    return counts


def bipartition(g: Graph) -> Optional[np.ndarray]:
    """Two-coloring of the nodes, or None if the graph has an odd cycle.

    Disconnected graphs are colored component by component.
    """
    n = g.node_count
    color = np.full(n, -1, dtype=np.int8)
    for start in range(n):
        if color[start] != -1:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            cu = color[u]
            for v in g.neighbors(u):
                v = int(v)
                if color[v] == -1:
                    color[v] = 1 - cu
                    stack.append(v)
                elif color[v] == cu:
                    return None
    return color
