"""Explicit feasible points of the elliptope built from eigenvectors of a
deformed GOE matrix.

All three constructions have the form

    X = Phi Phi^T + diag(D) U U^T diag(D)

with ``U`` orthonormal eigenvector columns and ``Phi`` either empty, a capped
top eigenvector, or a row-capped block of top eigenvectors.  ``D`` is chosen
so that diag(X) = 1 holds identically.
"""

from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .errors import DegenerateProjection, InvalidParameter
from .matrices import eig_sym

DEGENERATE_TOL = 1e-12
EPS_GRID = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
DELTA_GRID = (0.01, 0.02, 0.05, 0.1, 0.15, 0.2)


@dataclass
class WitnessParts:
    phi: np.ndarray  # n x p, p in {0, 1, r-1}
    D: np.ndarray
    U: np.ndarray
    mode: str
    params: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.U.shape[0]

    def materialize(self):
        du = self.D[:, None] * self.U
        return self.phi @ self.phi.T + du @ du.T


@dataclass
class FeasibilityReport:
    diag_error: float
    min_eig: float
    orth_error: float
    tol: float
    failures: list

    @property
    def ok(self):
        return not self.failures


def cap_scalar(x):
    return float(min(1.0, max(-1.0, x)))


def cap_vector(x):
    """Radial projection onto the closed unit ball."""
    x = np.asarray(x, dtype=np.float64)
    nrm = np.linalg.norm(x)
    return x if nrm <= 1.0 else x / nrm


def _cap_rows(v):
    norms = np.linalg.norm(v, axis=1)
    return v / np.maximum(norms, 1.0)[:, None]


def _spectrum(b, spectrum):
    return spectrum if spectrum is not None else eig_sym(b)


def _block_size(n, delta):
    m = int(math.floor(n * delta + 1e-9))
    if m < 1:
        raise InvalidParameter(f"n*delta must be >= 1 (n={n}, delta={delta})")
    return m


def _row_norms(u):
    norms = np.linalg.norm(u, axis=1)
    bad = np.flatnonzero(norms < DEGENERATE_TOL)
    if bad.size:
        raise DegenerateProjection(f"zero projection row(s) {bad[:5].tolist()}")
    return norms


def witness_subcritical(b, delta, spectrum=None):
    """X = P^{-1/2} U U^T P^{-1/2}, U = top floor(n delta) eigenvectors,
    P = diag(U U^T)."""
    if not 0 < delta <= 1:
        raise InvalidParameter("delta must lie in (0, 1]")
    spec = _spectrum(b, spectrum)
    n = spec.eigenvectors.shape[0]
    u = spec.eigenvectors[:, :_block_size(n, delta)]
    d = 1.0 / _row_norms(u)
    return WitnessParts(np.zeros((n, 0)), d, u, "subcritical", {"delta": delta})


def _supercritical(spec, p, eps, delta, mode):
    if not (0 < eps < 1 and 0 < delta < 1):
        raise InvalidParameter("eps and delta must lie in (0, 1)")
    vecs = spec.eigenvectors
    n = vecs.shape[0]
    m = _block_size(n, delta)
    if p + m > n:
        raise InvalidParameter("not enough eigenvectors for this delta")
    phi = _cap_rows(eps * math.sqrt(n) * vecs[:, :p])
    u = vecs[:, p:p + m]
    rest = np.clip(1.0 - np.sum(phi * phi, axis=1), 0.0, None)
    d = np.sqrt(rest) / _row_norms(u)
    return WitnessParts(phi, d, u, mode, {"eps": eps, "delta": delta})


def witness_supercritical(b, eps, delta, spectrum=None):
    """phi_i = cap(eps sqrt(n) u_1i), U = eigenvectors 2 .. floor(n delta)+1."""
    return _supercritical(_spectrum(b, spectrum), 1, eps, delta, "supercritical")


def witness_supercritical_r(b, r, eps, delta, spectrum=None):
    """Rows of eps sqrt(n) [u_1 .. u_{r-1}] capped to the unit ball."""
    if r < 2:
        raise InvalidParameter("r must be >= 2")
    return _supercritical(_spectrum(b, spectrum), r - 1, eps, delta, "supercritical_r")


def witness_value(b, w):
    """<B, X> / n, computed from the parts without forming X."""
    b = np.asarray(b, dtype=np.float64)
    n = b.shape[0]
    if w.n != n:
        raise InvalidParameter("dimension mismatch")
    du = w.D[:, None] * w.U
    val = np.sum(du * (b @ du))
    if w.phi.shape[1]:
        val += np.sum(w.phi * (b @ w.phi))
    return float(val / n)


def verify_feasible(w, tol=1e-8):
    failures = []
    x = w.materialize()
    diag_err = float(np.max(np.abs(np.diagonal(x) - 1.0)))
    if diag_err > tol:
        failures.append(f"diagonal deviates from 1 by {diag_err:.3g}")
    min_eig = float(np.linalg.eigvalsh(x)[0])
    if min_eig < -tol:
        failures.append(f"minimum eigenvalue {min_eig:.3g}")
    m = w.U.shape[1]
    orth_err = float(np.max(np.abs(w.U.T @ w.U - np.eye(m)), initial=0.0))
    if orth_err > tol:
        failures.append(f"U^T U deviates from I by {orth_err:.3g}")
    return FeasibilityReport(diag_err, min_eig, orth_err, tol, failures)


def grid_search(b, mode="supercritical", r=2, eps_grid=EPS_GRID, delta_grid=DELTA_GRID,
                tol=1e-8, spectrum=None):
    """Best feasible witness over an (eps, delta) grid.

    Returns ``(value, parts)``; cells that are degenerate or fail
    ``verify_feasible`` are skipped.
    """
    spec = _spectrum(b, spectrum)
    best = (-math.inf, None)
    if mode == "subcritical":
        cells = [(None, dl) for dl in delta_grid]
    else:
        cells = itertools.product(eps_grid, delta_grid)
    for eps, dl in cells:
        try:
            if mode == "subcritical":
                w = witness_subcritical(b, dl, spec)
            elif mode == "supercritical":
                w = witness_supercritical(b, eps, dl, spec)
            else:
                w = witness_supercritical_r(b, r, eps, dl, spec)
        except (DegenerateProjection, InvalidParameter):
            continue
        val = witness_value(b, w)
        if val > best[0] and verify_feasible(w, tol).ok:
            best = (val, w)
    return best


def as_factor(w):
    """Rows [phi_i, D_i U_i]: a unit-norm factor with X = sigma sigma^T,
    usable as a solver warm start."""
    from .solver import SphereFactor
    return SphereFactor(np.hstack([w.phi, w.D[:, None] * w.U]))
