"""GOE / deformed GOE sampling, dense symmetric eigendecomposition and
spectral reference quantities."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidParameter, NumericalFailure, SizeLimitError
from .rng import make_rng

EIG_MAX_N = 4000


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order; ``eigenvectors[:, i]`` pairs with
    ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def top(self):
        return float(self.eigenvalues[0])


def sample_goe(n, seed):
    """GOE(n): off-diagonal N(0, 1/n), diagonal N(0, 2/n).

    Only the upper triangle is drawn; the lower triangle mirrors it.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    rng = make_rng(seed)
    g = rng.standard_normal((n, n)) / math.sqrt(n)
    w = np.triu(g, 1)
    w = w + w.T
    w[np.diag_indices(n)] = math.sqrt(2.0) * np.diagonal(g)
    return w


def deformed_goe(n, lam, seed):
    """(lam/n) 1 1^T + W with W ~ GOE(n)."""
    return sample_goe(n, seed) + lam / n


def community_mean_matrix(labels):
    """B0(r): (r-1)/n inside a community, -1/n across."""
    a = labels.assignment
    n, r = len(a), labels.r
    same = a[:, None] == a[None, :]
    return np.where(same, (r - 1) / n, -1.0 / n)


def deformed_goe_r(n, r, lam, labels, seed):
    """lam * B0(r) + W with W ~ GOE(n)."""
    if len(labels.assignment) != n or labels.r != r or not labels.is_balanced():
        raise InvalidParameter("labels must split n vertices into r equal communities")
    return lam * community_mean_matrix(labels) + sample_goe(n, seed)


def eig_sym(m):
    """Full eigendecomposition of a dense symmetric matrix, descending order."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape[0] > EIG_MAX_N:
        raise SizeLimitError(f"dense eigendecomposition limited to n <= {EIG_MAX_N}")
    try:
        vals, vecs = np.linalg.eigh(m, UPLO="U")
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    return Spectrum(vals[::-1].copy(), vecs[:, ::-1].copy())


def bbap_prediction(lam):
    """Limit of the top eigenvalue of the rank-one deformed GOE."""
    if lam < 0:
        raise InvalidParameter("lambda must be >= 0")
    return 2.0 if lam <= 1.0 else lam + 1.0 / lam


def semicircle_cdf(x):
    """CDF of the semicircle law on [-2, 2]."""
    x = np.clip(x, -2.0, 2.0)
    return 0.5 + (x * np.sqrt(4.0 - x * x) / 2.0 + 2.0 * np.arcsin(x / 2.0)) / (2.0 * math.pi)


def semicircle_quantile(delta, tol=1e-12):
    """xi_*(delta): the point with semicircle mass ``delta`` to its right."""
    if not 0.0 < delta < 1.0:
        raise InvalidParameter("delta must lie in (0, 1)")
    lo, hi = -2.0, 2.0
    target = 1.0 - delta
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if semicircle_cdf(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
