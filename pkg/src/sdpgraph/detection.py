"""SDP-based community detection: hypothesis tests and the split-graph
estimator."""

from dataclasses import dataclass
import math

import numpy as np
from numba import njit

from .errors import InvalidParameter
from .graphs import SparseGraph, centered_operator
from .rng import derive_seed, make_rng
from .solver import (DEFAULT_MAX_EPOCHS, DEFAULT_RESTARTS, DEFAULT_TOL, SphereFactor,
                     default_rank, opt_k)


@dataclass
class TestResult:
    statistic: float
    threshold: float
    decision: int
    d_used: float
    k_used: int

    __test__ = False  # not a pytest class


@dataclass
class EstimateResult:
    xhat: np.ndarray
    chosen_pair: tuple
    score: float
    overlap: float = math.nan


def estimate_d(g):
    """Empirical average degree 2|E|/n."""
    return 2.0 * g.num_edges / g.n if g.n else 0.0


def resolve_d(g, d=None, r=None, a=None, b=None):
    """Explicit d, else (a + (r-1) b) / r when all of r, a, b are known,
    else the empirical average degree."""
    if d is not None and d != "auto":
        return float(d)
    if r is not None and a is not None and b is not None:
        return (a + (r - 1) * b) / r
    return estimate_d(g)


def sdp_statistic(g, d, k=None, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL,
                  max_epochs=DEFAULT_MAX_EPOCHS, seed=0):
    """opt_k(A_G - (d/n) 1 1^T) / (n sqrt(d)) and the factor attaining it."""
    if d <= 0:
        raise InvalidParameter("average degree must be > 0")
    k = default_rank(g.n) if k is None else k
    op = centered_operator(g, d)
    value, fac, _ = opt_k(op, k, restarts, tol, max_epochs, seed)
    return value / (g.n * math.sqrt(d)), fac


def test_two_communities(g, d=None, delta=0.05, k=None, restarts=DEFAULT_RESTARTS,
                         tol=DEFAULT_TOL, max_epochs=DEFAULT_MAX_EPOCHS, seed=0):
    """Reject the Erdos-Renyi null when the statistic reaches 2(1 + delta)."""
    d_used = resolve_d(g, d)
    k = default_rank(g.n) if k is None else k
    stat, _ = sdp_statistic(g, d_used, k, restarts, tol, max_epochs, seed)
    threshold = 2.0 * (1.0 + delta)
    return TestResult(stat, threshold, int(stat >= threshold), d_used, k)


def test_r_communities(g, r=None, a=None, b=None, d=None, delta=0.05, k=None,
                       restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL,
                       max_epochs=DEFAULT_MAX_EPOCHS, seed=0):
    """Same statistic as the two-community test; r only enters through d."""
    return test_two_communities(g, resolve_d(g, d, r, a, b), delta, k, restarts, tol,
                                max_epochs, seed)


def split_fraction(n):
    dn = n ** -0.5
    return dn / (1.0 + dn)


def split_edges(g, seed):
    """Send each edge to G2 independently with probability n^-1/2 / (1 + n^-1/2)."""
    rng = make_rng(seed)
    to_second = rng.random(g.num_edges) < split_fraction(g.n)
    return SparseGraph(g.n, g.edges[~to_second]), SparseGraph(g.n, g.edges[to_second])


def factor_eigvectors(f, rtol=1e-10):
    """Nonzero eigenpairs of sigma sigma^T via the k x k Gram matrix.

    Returns ``(values, vectors)`` in descending order, vectors as columns.
    """
    sigma = f.sigma if isinstance(f, SphereFactor) else np.asarray(f)
    vals, w = np.linalg.eigh(sigma.T @ sigma)
    vals, w = vals[::-1], w[:, ::-1]
    keep = vals > rtol * max(vals[0], 1.0)
    vals, w = vals[keep], w[:, keep]
    vecs = sigma @ w
    vecs /= np.linalg.norm(vecs, axis=0)
    return vals, vecs


def threshold_family(v, j):
    """sign(v) on coordinates with |v_l| >= |v_j|, zero elsewhere."""
    v = np.asarray(v, dtype=np.float64)
    keep = np.abs(v) >= abs(v[j])
    return (np.sign(v) * keep).astype(np.int64)


def quadratic_score(g, x):
    """<x, A_G x> = 2 sum over edges x_u x_v."""
    x = np.asarray(x)
    e = g.edges
    return float(2 * np.sum(x[e[:, 0]] * x[e[:, 1]]))


@njit(cache=True)
def _sweep_thresholds(order, signs, keys, indptr, indices):
    # Activate coordinates by decreasing |v|; after each complete group of
    # equal |v| the score is a candidate, labelled by the group's smallest index.
    n = len(order)
    x = np.zeros(n, dtype=np.int64)
    score = 0
    best, best_j = -(1 << 62), -1
    p = 0
    while p < n:
        q = p
        group_min = order[p]
        while q < n and keys[order[q]] == keys[order[p]]:
            l = order[q]
            s = signs[l]
            acc = 0
            for t in range(indptr[l], indptr[l + 1]):
                acc += x[indices[t]]
            score += 2 * s * acc
            x[l] = s
            if l < group_min:
                group_min = l
            q += 1
        if score > best or (score == best and group_min < best_j):
            best, best_j = score, group_min
        p = q
    return best, best_j


def select_candidate(vectors, g2):
    """Exact argmax over (i, j) of <x^(i,j), A_G2 x^(i,j)>.

    ``vectors`` holds eigenvectors as columns.  Ties go to the smallest
    (i, j).  Returns ``(I, J, score, xhat)``.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    if vectors.shape[1] == 0:
        raise InvalidParameter("need at least one vector")
    best = None
    for i in range(vectors.shape[1]):
        v = vectors[:, i]
        keys = np.abs(v)
        order = np.lexsort((np.arange(len(v)), -keys)).astype(np.int64)
        signs = np.sign(v).astype(np.int64)
        score, j = _sweep_thresholds(order, signs, keys, g2.indptr, g2.indices)
        if best is None or score > best[2]:
            best = (i, int(j), int(score))
    i, j, score = best
    return i, j, float(score), threshold_family(vectors[:, i], j)


def overlap(xhat, labels):
    """|<xhat, x0>| / n with x0 the +-1 encoding of two communities."""
    x0 = labels.signs() if hasattr(labels, "signs") else np.asarray(labels)
    xhat = np.asarray(xhat)
    if len(x0) != len(xhat):
        raise InvalidParameter("length mismatch")
    if not np.all(np.abs(x0) == 1):
        raise InvalidParameter("labels must be +-1")
    return abs(float(np.dot(xhat, x0))) / len(x0)


def estimate_partition(g, d=None, k=None, restarts=1, tol=DEFAULT_TOL,
                       max_epochs=DEFAULT_MAX_EPOCHS, seed=0, labels=None, diagonal=None):
    """Split the edges, solve the rank-k program on the centered G1, and
    round the factor's eigenvectors using G2.

    G1 is centered with d / (1 + n^-1/2), its expected average degree.
    ``diagonal`` sets the diagonal of the centered G1 matrix.
    """
    n = g.n
    if n < 4:
        raise InvalidParameter("n must be >= 4")
    d = resolve_d(g, d)
    if d <= 0:
        raise InvalidParameter("average degree must be > 0")
    g1, g2 = split_edges(g, derive_seed(seed, 0))
    d1 = d * (1.0 - split_fraction(n))
    k = default_rank(n) if k is None else k
    op = centered_operator(g1, d1, diagonal=diagonal)
    _, fac, _ = opt_k(op, k, restarts, tol, max_epochs, derive_seed(seed, 1))
    _, vecs = factor_eigvectors(fac)
    i, j, score, xhat = select_candidate(vecs, g2)
    ov = overlap(xhat, labels) if labels is not None else math.nan
    return EstimateResult(xhat, (i, j), score, ov)
