"""Classical path-based link predictors: RA-L2, CH-L2, L3, CH-L3, and LO.

RA-L2 and CH-L2 score pairs through their common neighbors (length-2 paths);
L3, CH-L3, and LO build on length-3 paths and odd adjacency powers. All
return dense symmetric score tables over every node pair.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import NumericalError
from .graphs import Graph
from .scoring import ScoreMatrix

__all__ = ["ra_l2", "ch_l2", "l3", "ch_l3", "lo", "lo_neumann"]


def _degree_power(g: Graph, exponent: float) -> np.ndarray:
    """k^exponent per node, with 0 for isolated nodes when exponent < 0."""
    k = g.degrees.astype(np.float64)
    if exponent >= 0:
        return k**exponent
    out = np.zeros_like(k)
    np.power(k, exponent, out=out, where=k > 0)
    return out


def two_path_scores(g: Graph, degree_exponent: float = -1.0) -> np.ndarray:
    """Degree-weighted length-2 path counts: (A diag(k^e) A)_ij.

    The default exponent -1 yields resource allocation; exponent 0 yields
    raw 2-walk counts.
    """
    a = g.adjacency_sparse()
    w = _degree_power(g, degree_exponent)
    s = sp.csr_matrix(a.multiply(w[np.newaxis, :])) @ a
    return s.toarray()


def three_path_scores(g: Graph, degree_exponent: float = -0.5) -> np.ndarray:
    """Degree-weighted length-3 path counts: (A diag(k^e) A diag(k^e) A)_ij.

    The default exponent -1/2 normalizes each path by sqrt(k_mid1 * k_mid2);
    exponent 0 yields raw 3-walk counts.
    """
    a = g.adjacency_sparse()
    scaled = sp.csr_matrix(a.multiply(_degree_power(g, degree_exponent)[np.newaxis, :]))
    s = (scaled @ scaled) @ a
    return s.toarray()


def ra_l2(g: Graph) -> ScoreMatrix:
    """Resource allocation: p_ij = sum over common neighbors z of 1/k_z."""
    values = two_path_scores(g, -1.0)
    values = (values + values.T) / 2.0
    return ScoreMatrix(method="ra-l2", params={}, values=values)


def l3(g: Graph) -> ScoreMatrix:
    """Degree-normalized 3-path count: p_ij = sum a_ik a_kl a_lj / sqrt(k_k k_l)."""
    values = three_path_scores(g, -0.5)
    values = (values + values.T) / 2.0
    return ScoreMatrix(method="l3", params={}, values=values)


def lo(g: Graph, alpha: float) -> ScoreMatrix:
    """Regularized odd-power combination: P = A (A^2 + alpha*I)^(-1) A^2.

    Solved as a symmetric positive-definite linear system; equals the
    alternating series sum_k (-1)^k alpha^-(k+1) A^(2k+3) when it converges.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    a = g.adjacency_dense()
    a2 = a @ a
    system = a2 + alpha * np.eye(g.node_count)
    try:
        factor = scipy.linalg.cho_factor(system, lower=True, check_finite=False)
        x = scipy.linalg.cho_solve(factor, a2, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"LO solve failed: {exc}") from exc
    values = a @ x
    values = (values + values.T) / 2.0
    return ScoreMatrix(method="lo", params={"alpha": float(alpha)}, values=values)


def lo_neumann(g: Graph, alpha: float, tol: float = 1e-16, max_terms: int = 200) -> np.ndarray:
    """Series evaluation of the LO scores, convergent for alpha > ||A||_2^2.

    Sums (-1)^k alpha^-(k+1) A^(2k+3) until the next term falls below
    ``tol`` relative to the largest accumulated entry.
    """
    a = g.adjacency_dense()
    a2 = a @ a
    term = (a2 @ a) / alpha  # k = 0
    total = term.copy()
    for k in range(1, max_terms):
        term = -(term @ a2) / alpha
        total += term
        scale = max(np.abs(total).max(), 1.0)
        if np.abs(term).max() <= tol * scale:
            break
    else:
        raise NumericalError("LO series did not converge; alpha too small?")
    return total


def ch_l2(g: Graph) -> ScoreMatrix:
    """Community-weighted common-neighbor score.

    For each pair (i, j) with local community LC = common neighbors of i and
    j, every z in LC contributes (1 + d_int(z)) / (1 + d_ext(z)), where
    d_int counts z's links into LC and d_ext its links leaving LC, i, and j.
    """
    n = g.node_count
    b = g.adjacency_bool()
    k = g.degrees.astype(np.float64)
    values = np.zeros((n, n))
    support = two_path_scores(g, 0.0) > 0
    for i in range(n):
        for j in range(i + 1, n):
            if not support[i, j]:
                continue
            lc = b[i] & b[j]
            zs = np.flatnonzero(lc)
            # z is adjacent to both i and j, so d_ext = k_z - d_int - 2.
            d_int = b[np.ix_(zs, zs)].sum(axis=1).astype(np.float64)
            d_ext = k[zs] - d_int - 2.0
            score = ((1.0 + d_int) / (1.0 + d_ext)).sum()
            values[i, j] = score
            values[j, i] = score
    return ScoreMatrix(method="ch-l2", params={}, values=values)


def ch_l3(g: Graph) -> ScoreMatrix:
    """Community-weighted 3-path score.

    For each pair (i, j), the local community LC is the set of intermediate
    nodes on any 3-path i-k-l-j. Each 3-path contributes
    sqrt((1 + d_int(k)) (1 + d_int(l))) / sqrt((1 + d_ext(k)) (1 + d_ext(l))),
    with d_int/d_ext counted against LC as in :func:`ch_l2`.
    """
    n = g.node_count
    b = g.adjacency_bool()
    k = g.degrees.astype(np.float64)
    values = np.zeros((n, n))
    support = three_path_scores(g, 0.0) > 0
    for i in range(n):
        nbr_i = g.neighbors(i)
        for j in range(i + 1, n):
            if not support[i, j]:
                continue
            ks = nbr_i[nbr_i != j]
            nbr_j = g.neighbors(j)
            ls = nbr_j[nbr_j != i]
            if len(ks) == 0 or len(ls) == 0:
                continue
            sub = b[np.ix_(ks, ls)]
            if not sub.any():
                continue
            on_path_k = sub.any(axis=1)
            on_path_l = sub.any(axis=0)
            lc = np.zeros(n, dtype=bool)
            lc[ks[on_path_k]] = True
            lc[ls[on_path_l]] = True
            members = np.flatnonzero(lc)
            d_int_all = np.zeros(n)
            d_int_all[members] = b[np.ix_(members, members)].sum(axis=1)
            d_ext_all = k - d_int_all - b[:, i] - b[:, j]
            w = np.sqrt((1.0 + d_int_all) / (1.0 + d_ext_all))
            score = float(w[ks] @ sub @ w[ls])
            values[i, j] = score
            values[j, i] = score
    return ScoreMatrix(method="ch-l3", params={}, values=values)
