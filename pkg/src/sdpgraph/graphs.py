"""Random graph ensembles and centered adjacency operators."""

from dataclasses import dataclass
import math

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameter, SamplingFailure, SizeLimitError
from .rng import make_rng

REGULAR_MAX_RESTARTS = 1000
INF_TO_TWO_MAX_N = 22


class SparseGraph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``edges`` is an ``(m, 2)`` int64 array with ``u < v`` in each row, sorted
    lexicographically.  ``indptr``/``indices`` hold the sorted neighbor lists
    in CSR layout.
    """

    def __init__(self, n, edges=None):
        self.n = int(n)
        if self.n < 0:
            raise InvalidParameter("n must be nonnegative")
        e = np.zeros((0, 2), dtype=np.int64) if edges is None else np.asarray(edges, dtype=np.int64)
        e = e.reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= self.n:
                raise InvalidParameter("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise InvalidParameter("self-loops are not allowed")
            e = np.sort(e, axis=1)
            keys = e[:, 0] * self.n + e[:, 1]
            order = np.argsort(keys, kind="stable")
            keys = keys[order]
            if np.any(keys[1:] == keys[:-1]):
                raise InvalidParameter("duplicate edges are not allowed")
            e = e[order]
        self.edges = e
        self.edges.setflags(write=False)

        heads = np.concatenate([e[:, 0], e[:, 1]])
        tails = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((tails, heads))
        self.indices = tails[order]
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(heads, minlength=self.n), out=self.indptr[1:])
        self.indices.setflags(write=False)
        self.indptr.setflags(write=False)

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def adj(self):
        return [self.neighbors(i) for i in range(self.n)]

    def adjacency(self):
        """Adjacency matrix as ``scipy.sparse.csr_matrix`` (float64)."""
        data = np.ones(len(self.indices))
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def add_edge(self, u, v):
        return SparseGraph(self.n, np.vstack([self.edges, [[u, v]]]))

    def permuted(self, perm):
        """Relabel vertex ``i`` as ``perm[i]``."""
        perm = np.asarray(perm)
        return SparseGraph(self.n, perm[self.edges])

    def __eq__(self, other):
        return (isinstance(other, SparseGraph) and self.n == other.n
                and np.array_equal(self.edges, other.edges))

    def __repr__(self):
        return f"SparseGraph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class Labels:
    """Balanced community assignment, entries in ``0..r-1``."""

    assignment: np.ndarray
    r: int

    def sizes(self):
        return np.bincount(self.assignment, minlength=self.r)

    def is_balanced(self):
        s = self.sizes()
        return len(s) == self.r and bool(np.all(s == s[0]))

    def signs(self):
        """+1/-1 vector for two communities (community 0 -> +1)."""
        if self.r != 2:
            raise InvalidParameter("signs() needs exactly two communities")
        return 1 - 2 * self.assignment.astype(np.int64)


# -- sampling helpers ---------------------------------------------------------

def _bernoulli_indices(rng, total, p):
    """Sorted indices in ``range(total)`` kept independently with prob. ``p``.

    Uses geometric skipping, so the cost is proportional to the output size.
    """
    if total <= 0 or p <= 0.0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    if p < 1e-12:
        # geometric gaps would overflow int64
        count = rng.binomial(total, p)
        return np.sort(rng.choice(total, size=count, replace=False)).astype(np.int64)
    chunks = []
    pos = -1
    while True:
        remaining = total - 1 - pos
        mean = remaining * p
        batch = int(mean + 6.0 * math.sqrt(mean + 1.0)) + 16
        idx = pos + np.cumsum(rng.geometric(p, size=batch))
        if idx[-1] >= total:
            chunks.append(idx[idx < total])
            break
        chunks.append(idx)
        pos = int(idx[-1])
    return np.concatenate(chunks).astype(np.int64)


def _triangle_pairs(idx):
    """Map pair index ``v(v-1)/2 + u`` (``u < v``) back to ``(u, v)``."""
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    v -= (v * (v - 1) // 2 > idx)
    v += ((v + 1) * v // 2 <= idx)
    u = idx - v * (v - 1) // 2
    return u, v


def _check_prob(x, n, name):
    if not (0 <= x <= n):
        raise InvalidParameter(f"{name} must lie in [0, n], got {x}")


def gen_er(n, d, seed):
    """Erdos-Renyi graph G(n, d/n)."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    _check_prob(d, n, "d")
    rng = make_rng(seed)
    idx = _bernoulli_indices(rng, n * (n - 1) // 2, d / n)
    u, v = _triangle_pairs(idx)
    return SparseGraph(n, np.column_stack([u, v]))


def _balanced_labels(rng, n, r):
    perm = rng.permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[perm] = np.arange(n) // (n // r)
    return Labels(assignment, r)


def gen_planted_r(n, r, a, b, seed):
    """Planted partition with ``r`` equal communities.

    Pairs inside a community are joined with probability ``a/n``, pairs across
    communities with probability ``b/n``.  Returns ``(graph, labels)``.
    """
    if r < 2:
        raise InvalidParameter("r must be >= 2")
    if n < r or n % r:
        raise InvalidParameter(f"r={r} must divide n={n}")
    _check_prob(a, n, "a")
    _check_prob(b, n, "b")
    rng = make_rng(seed)
    labels = _balanced_labels(rng, n, r)
    m = n // r
    members = [np.flatnonzero(labels.assignment == c) for c in range(r)]
    blocks = []
    for c in range(r):
        u, v = _triangle_pairs(_bernoulli_indices(rng, m * (m - 1) // 2, a / n))
        blocks.append(np.column_stack([members[c][u], members[c][v]]))
        for c2 in range(c + 1, r):
            idx = _bernoulli_indices(rng, m * m, b / n)
            blocks.append(np.column_stack([members[c][idx // m], members[c2][idx % m]]))
    return SparseGraph(n, np.vstack(blocks)), labels


def gen_planted_2(n, a, b, seed):
    """Two-community planted partition G(n, a/n, b/n)."""
    if n % 2:
        raise InvalidParameter("n must be even")
    return gen_planted_r(n, 2, a, b, seed)


def gen_regular(n, d, seed, max_restarts=REGULAR_MAX_RESTARTS):
    """Random d-regular graph from the pairing model.

    Half-edges are matched in random rounds; pairs forming a loop or a repeat
    edge are returned to the pool and re-shuffled.  If the leftover pool
    cannot be matched at all the whole attempt restarts.
    """
    d = int(d)
    if n < 1 or d < 0 or d >= n:
        raise InvalidParameter("need 0 <= d < n")
    if (n * d) % 2:
        raise InvalidParameter("n*d must be even")
    rng = make_rng(seed)
    if d == 0:
        return SparseGraph(n)
    for _ in range(max_restarts):
        edges = _pairing_attempt(rng, n, d)
        if edges is not None:
            return SparseGraph(n, np.array(sorted(edges), dtype=np.int64))
    raise SamplingFailure(f"no simple {d}-regular graph after {max_restarts} restarts")


def _pairing_attempt(rng, n, d):
    edges = set()
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    while stubs.size:
        rng.shuffle(stubs)
        pairs = np.sort(stubs.reshape(-1, 2), axis=1)
        leftover = []
        for u, v in pairs.tolist():
            if u != v and (u, v) not in edges:
                edges.add((u, v))
            else:
                leftover += (u, v)
        if not leftover:
            break
        if not _matchable(leftover, edges):
            return None
        stubs = np.array(leftover, dtype=np.int64)
    return edges


def _matchable(stubs, edges):
    nodes = sorted(set(stubs))
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if (u, v) not in edges:
                return True
    return False


# -- operators ----------------------------------------------------------------

class CenteredOperator:
    """Implicit ``scale * (A_G - (d/n) 1 1^T)``.

    ``diagonal`` overrides the diagonal entries (default: the natural value
    ``-scale * d / n``).  Never materialized unless ``to_dense`` is called.
    """

    def __init__(self, graph, d, scale=1.0, diagonal=None):
        self.graph = graph
        self.d = float(d)
        self.scale = float(scale)
        self.diagonal = None if diagonal is None else float(diagonal)
        self._adj = graph.adjacency()

    @property
    def n(self):
        return self.graph.n

    @property
    def shape(self):
        return (self.n, self.n)

    @property
    def rank_one_coef(self):
        """Coefficient ``c`` of the ``c 1 1^T`` term."""
        return -self.scale * self.d / self.n

    def diag_values(self):
        value = self.rank_one_coef if self.diagonal is None else self.diagonal
        return np.full(self.n, value)

    def matvec(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = self.scale * (self._adj @ x) + self.rank_one_coef * x.sum(axis=0)
        if self.diagonal is not None:
            extra = self.diagonal - self.rank_one_coef
            out = out + extra * x
        return out

    __matmul__ = matvec

    def __neg__(self):
        diag = None if self.diagonal is None else -self.diagonal
        return CenteredOperator(self.graph, self.d, -self.scale, diag)

    def to_dense(self):
        m = self.scale * self._adj.toarray() + self.rank_one_coef
        np.fill_diagonal(m, self.diag_values())
        return m


def centered_operator(g, d, scale=1.0, diagonal=None):
    if d < 0:
        raise InvalidParameter("d must be >= 0")
    if scale <= 0:
        raise InvalidParameter("scale must be > 0")
    return CenteredOperator(g, d, scale, diagonal)


def degree_second_moment(g):
    deg = g.degrees.astype(np.float64)
    return float(deg @ deg)


def inf_to_two_norm_exact(m, chunk=1 << 15):
    """max over sign vectors s of ||M s||_2, by enumerating all corners."""
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    if n > INF_TO_TWO_MAX_N:
        raise SizeLimitError(f"corner enumeration limited to n <= {INF_TO_TWO_MAX_N}")
    if n == 0:
        return 0.0
    # s and -s give the same norm: fix the first sign.
    total = 1 << (n - 1)
    bits = np.arange(n - 1, dtype=np.int64)
    best = 0.0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        signs = np.ones((len(codes), n))
        signs[:, 1:] = 1.0 - 2.0 * ((codes[:, None] >> bits) & 1)
        prod = signs @ m.T
        vals = np.einsum("ij,ij->i", prod, prod)
        best = max(best, float(vals.max()))
    return math.sqrt(best)
