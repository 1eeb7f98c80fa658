"""Independent reference computations used only by the tests."""

import itertools

import cvxpy as cp
import numpy as np


def sdp_value(m):
    """max <M, X> over PSD X with unit diagonal, by interior point.

    Returns ``(value, upper)`` where ``upper`` is a dual certificate:
    sum(y) + n * max(0, -lambda_min(diag(y) - M)).
    """
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    x = cp.Variable((n, n), PSD=True)
    cons = [cp.diag(x) == 1]
    prob = cp.Problem(cp.Maximize(cp.trace(m @ x)), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
    y = np.asarray(cons[0].dual_value).ravel()
    slack = np.linalg.eigvalsh(np.diag(y) - m)[0]
    upper = y.sum() + n * max(0.0, -slack)
    xv = x.value
    # repair primal to an exactly feasible point for a certified lower bound
    w, v = np.linalg.eigh((xv + xv.T) / 2)
    xv = (v * np.clip(w, 0, None)) @ v.T
    s = 1 / np.sqrt(np.diag(xv))
    lower = float(np.sum(m * (s[:, None] * xv * s[None, :])))
    return lower, float(upper)


def opt1_brute(m):
    """max over sign vectors of s^T M s."""
    m = np.asarray(m)
    n = m.shape[0]
    best = -np.inf
    for signs in itertools.product((1.0, -1.0), repeat=n - 1):
        s = np.array((1.0,) + signs)
        best = max(best, s @ m @ s)
    return float(best)


def random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2


def brute_candidate_scores(vectors, g):
    """Score <x, A x> of every threshold vector x^(i,j), by direct product."""
    a = g.adjacency().toarray()
    out = np.empty((vectors.shape[1], vectors.shape[0]))
    for i in range(vectors.shape[1]):
        v = vectors[:, i]
        for j in range(len(v)):
            x = np.sign(v) * (np.abs(v) >= abs(v[j]))
            out[i, j] = x @ a @ x
    return out
