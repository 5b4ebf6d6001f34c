"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import numpy as np

import qwlink as qw


def gnp_graph(rng: np.random.Generator, n: int, p: float) -> qw.Graph:
    """Erdos-Renyi style graph with at least one edge."""
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(len(iu)) < p
    edges = np.column_stack([iu[mask], ju[mask]])
    if len(edges) == 0:
        edges = np.array([[0, 1]])
    return qw.Graph.from_edges(n, edges)


def random_bipartite(
    rng: np.random.Generator, n_left: int, n_right: int, p: float
) -> tuple[qw.Graph, np.ndarray]:
    """Bipartite graph plus its part indicator (0 = left, 1 = right)."""
    left = np.arange(n_left)
    right = np.arange(n_left, n_left + n_right)
    pairs = np.array([(u, v) for u in left for v in right])
    mask = rng.random(len(pairs)) < p
    edges = pairs[mask]
    if len(edges) == 0:
        edges = pairs[:1]
    side = np.zeros(n_left + n_right, dtype=int)
    side[right] = 1
    return qw.Graph.from_edges(n_left + n_right, edges), side


def random_tree(rng: np.random.Generator, n: int) -> qw.Graph:
    """Uniform random attachment tree on n >= 2 nodes."""
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    return qw.Graph.from_edges(n, edges)


def auc_roc_oracle(pos_scores: np.ndarray, neg_scores: np.ndarray) -> float:
    """Exhaustive pairwise P(pos > neg) + 0.5 P(pos == neg)."""
    wins = 0.0
    for sp in pos_scores:
        for sn in neg_scores:
            if sp > sn:
                wins += 1.0
            elif sp == sn:
                wins += 0.5
    return wins / (len(pos_scores) * len(neg_scores))


def k3_propagator(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form Re/Im of the triangle propagator (spectrum {2, -1, -1})."""
    off_re = (np.cos(2 * t) - np.cos(t)) / 3.0
    off_im = -(np.sin(2 * t) + np.sin(t)) / 3.0
    diag_re = (np.cos(2 * t) + 2 * np.cos(t)) / 3.0
    diag_im = (-np.sin(2 * t) + 2 * np.sin(t)) / 3.0
    re = np.full((3, 3), off_re)
    im = np.full((3, 3), off_im)
    np.fill_diagonal(re, diag_re)
    np.fill_diagonal(im, diag_im)
    return re, im


def edge_label_set(g: qw.Graph) -> set[frozenset]:
    return {frozenset((g.labels[u], g.labels[v])) for u, v in g.edges}
