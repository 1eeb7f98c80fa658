"""Rank-k factorized solver for max <M, X> over the elliptope.

The rank-k program is solved by block-coordinate ascent over the rows of an
n x k factor with unit-norm rows.  Operators may be dense symmetric ndarrays,
``CenteredOperator`` instances, or symmetric scipy sparse matrices.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from . import _kernels
from .errors import InvalidParameter
from .graphs import CenteredOperator
from .rng import derive_seed, make_rng

DEFAULT_TOL = 1e-7
DEFAULT_MAX_EPOCHS = 2000
DEFAULT_RESTARTS = 3


@dataclass
class SphereFactor:
    """n x k matrix whose rows lie on the unit sphere; X = sigma sigma^T."""

    sigma: np.ndarray

    def __post_init__(self):
        self.sigma = np.ascontiguousarray(self.sigma, dtype=np.float64)
        if self.sigma.ndim != 2:
            raise InvalidParameter("sigma must be a 2-d array")

    @property
    def n(self):
        return self.sigma.shape[0]

    @property
    def k(self):
        return self.sigma.shape[1]

    def row_norm_error(self):
        return float(np.max(np.abs(np.linalg.norm(self.sigma, axis=1) - 1.0), initial=0.0))

    def gram(self):
        """Materialized X = sigma sigma^T (small n only)."""
        return self.sigma @ self.sigma.T

    def copy(self):
        return SphereFactor(self.sigma.copy())

    def embed(self, k):
        """Same point padded with zero columns to rank ``k``."""
        if k < self.k:
            raise InvalidParameter("cannot embed into a smaller rank")
        out = np.zeros((self.n, k))
        out[:, :self.k] = self.sigma
        return SphereFactor(out)


@dataclass
class SolveReport:
    objective_trace: list = field(default_factory=list)
    epochs: int = 0
    converged: bool = False
    restarts_used: int = 1
    min_step: float = math.inf


@dataclass
class Sandwich:
    lower: float
    upper: float
    k: int
    alpha_k: float
    spectral_upper: float = math.nan
    grothendieck_upper: float = math.nan
    opt_neg: float = math.nan


def default_rank(n):
    return int(min(64, math.ceil(math.sqrt(2 * n))))


def init_factor(n, k, seed):
    """Rows i.i.d. uniform on the sphere S^{k-1}."""
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    rng = make_rng(seed)
    g = rng.standard_normal((n, k))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):
        bad = norms == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), k))
        norms = np.linalg.norm(g, axis=1)
    return SphereFactor(g / norms[:, None])


def _shape(m):
    return m.shape[0] if not isinstance(m, CenteredOperator) else m.n


def apply(m, x):
    """M @ x for any supported operator."""
    if isinstance(m, CenteredOperator):
        return m.matvec(x)
    return m @ x


def objective(m, f):
    """sum_ij M_ij <sigma_i, sigma_j> (diagonal included)."""
    sigma = f.sigma if isinstance(f, SphereFactor) else np.asarray(f)
    if _shape(m) != sigma.shape[0]:
        raise InvalidParameter(f"operator is {_shape(m)}-dimensional, factor has {sigma.shape[0]} rows")
    return float(np.sum(sigma * apply(m, sigma)))


def _sweeper(m):
    if isinstance(m, CenteredOperator):
        g = m.graph
        data = np.full(len(g.indices), m.scale)
        c = m.rank_one_coef
        indptr, indices = g.indptr, g.indices

        def sweep(sigma, order):
            total = sigma.sum(axis=0)
            return _kernels.sweep_sparse(indptr, indices, data, c, sigma, total, order)
        return sweep
    if sp.issparse(m):
        a = sp.csr_matrix(m)
        a.sort_indices()
        indptr = a.indptr.astype(np.int64)
        indices = a.indices.astype(np.int64)
        data = a.data.astype(np.float64)

        def sweep(sigma, order):
            dummy = np.zeros(sigma.shape[1])
            return _kernels.sweep_sparse(indptr, indices, data, 0.0, sigma, dummy, order)
        return sweep
    dense = np.ascontiguousarray(m, dtype=np.float64)

    def sweep(sigma, order):
        return _kernels.sweep_dense(dense, sigma, order)
    return sweep


def coordinate_ascent(m, f, tol=DEFAULT_TOL, max_epochs=DEFAULT_MAX_EPOCHS, seed=0):
    """Block-coordinate ascent from ``f``; returns ``(factor, report)``.

    Each epoch visits the rows in a fresh random order.  Stops when the
    epoch's objective gain drops below ``tol * (1 + |objective|)``.
    """
    if tol <= 0:
        raise InvalidParameter("tol must be > 0")
    rng = make_rng(seed)
    sweep = _sweeper(m)
    sigma = f.sigma.copy()
    n = sigma.shape[0]
    value = objective(m, sigma)
    report = SolveReport(objective_trace=[value])
    for epoch in range(max_epochs):
        order = rng.permutation(n).astype(np.int64)
        _, min_step = sweep(sigma, order)
        report.min_step = min(report.min_step, min_step)
        # renormalize to keep row norms at 1 to machine precision
        sigma /= np.linalg.norm(sigma, axis=1)[:, None]
        new = objective(m, sigma)
        report.objective_trace.append(new)
        report.epochs = epoch + 1
        gain = new - value
        value = new
        if gain < tol * (1.0 + abs(value)):
            report.converged = True
            break
    return SphereFactor(sigma), report


def opt_k(m, k, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL, max_epochs=DEFAULT_MAX_EPOCHS,
          seed=0, init=None, workers=1):
    """Best objective over ``restarts`` random starts.

    Returns ``(value, factor, report)``.  The value is attained by a feasible
    point, hence is a lower bound on the SDP value.  Restart ``r`` uses seed
    ``derive_seed(seed, r)``; ties go to the lowest restart index.  ``init``
    replaces the random start of restart 0.
    """
    if restarts < 1:
        raise InvalidParameter("restarts must be >= 1")
    n = _shape(m)

    def one(r):
        s = derive_seed(seed, r)
        start = init if (r == 0 and init is not None) else init_factor(n, k, s)
        fac, rep = coordinate_ascent(m, start, tol, max_epochs, s)
        return rep.objective_trace[-1], fac, rep

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(restarts)))
    else:
        results = [one(r) for r in range(restarts)]
    best = max(range(restarts), key=lambda r: (results[r][0], -r))
    value, fac, rep = results[best]
    rep.restarts_used = restarts
    return value, fac, rep


def alpha_k(k):
    """(E||g||_2)^2 for g ~ N(0, I_k / k)."""
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    return float(2.0 * math.exp(2.0 * gammaln((k + 1) / 2.0) - 2.0 * gammaln(k / 2.0)) / k)


def top_eigenvalue(m):
    """Largest eigenvalue of a supported operator."""
    n = _shape(m)
    if isinstance(m, CenteredOperator) and n > 200:
        from scipy.sparse.linalg import LinearOperator, eigsh
        op = LinearOperator((n, n), matvec=m.matvec, dtype=np.float64)
        v0 = np.ones(n) / math.sqrt(n)
        return float(eigsh(op, k=1, which="LA", v0=v0, tol=1e-10)[0][0])
    dense = m.to_dense() if isinstance(m, CenteredOperator) else (m.toarray() if sp.issparse(m) else m)
    return float(np.linalg.eigvalsh(dense)[-1])


def negate(m):
    return -m


def sdp_sandwich(m, k, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL,
                 max_epochs=DEFAULT_MAX_EPOCHS, seed=0, spectral=True):
    """Bracket the SDP value between opt_k and an upper bound.

    The upper bound is the smallest of n * xi_1(M) and the two bounds that
    follow from the Grothendieck-type inequality applied to M and -M.  The
    latter assume the solver reached OPT_k for both signs.
    """
    if k < 2:
        raise InvalidParameter("k must be >= 2")
    n = _shape(m)
    a = alpha_k(k)
    lo_pos = opt_k(m, k, restarts, tol, max_epochs, seed)[0]
    lo_neg = opt_k(negate(m), k, restarts, tol, max_epochs, derive_seed(seed, 1 << 20))[0]
    # alpha S+ - (1-alpha) S- <= o+ and the mirrored inequality, combined.
    gro_pos = (a * lo_pos + (1 - a) * lo_neg) / (2 * a - 1)
    gro_neg = (a * lo_neg + (1 - a) * lo_pos) / (2 * a - 1)
    spec_pos = spec_neg = math.inf
    if spectral:
        spec_pos = n * top_eigenvalue(m)
        spec_neg = n * top_eigenvalue(negate(m))
    upper_neg = min(spec_neg, gro_neg)
    gro = min(gro_pos, (lo_pos + (1 - a) * upper_neg) / a)
    upper = max(lo_pos, min(spec_pos, gro))
    return Sandwich(lower=lo_pos, upper=upper, k=k, alpha_k=a,
                    spectral_upper=spec_pos if spectral else math.nan,
                    grothendieck_upper=gro, opt_neg=lo_neg)


def grothendieck_round(f, k, seed=0, projection=None):
    """Project rank-K rows to rank k through a Gaussian k x K matrix and
    renormalize.  ``projection`` fixes the matrix (testing hook)."""
    K = f.k
    if projection is None and not 1 <= k < K:
        raise InvalidParameter("need 1 <= k < K")
    rng = make_rng(seed)
    while True:
        j = projection if projection is not None else rng.standard_normal((k, K)) / math.sqrt(k)
        x = f.sigma @ np.asarray(j).T
        norms = np.linalg.norm(x, axis=1)
        if np.all(norms > 0):
            return SphereFactor(x / norms[:, None])
        if projection is not None:
            raise InvalidParameter("projection annihilates a row")


def zero_temp_gap_bound(L, k, beta, eps, C):
    """2 L eps sqrt(k) + (k / beta) log(C / eps)."""
    if not 0 < eps <= 1:
        raise InvalidParameter("eps must lie in (0, 1]")
    if beta <= 0 or C <= 0:
        raise InvalidParameter("beta and C must be > 0")
    return 2.0 * L * eps * math.sqrt(k) + (k / beta) * math.log(C / eps)


def interpolation_gap_bound(beta, d, lam):
    """2 beta^2 / sqrt(d) + 8 lam^(1/2) / d^(1/4)."""
    if d <= 0 or lam < 0:
        raise InvalidParameter("need d > 0 and lambda >= 0")
    return 2.0 * beta ** 2 / math.sqrt(d) + 8.0 * math.sqrt(lam) / d ** 0.25
