import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_candidate_scores
from sdpgraph import SparseGraph, SphereFactor, gen_er, gen_planted_2, gen_planted_r, gen_regular, init_factor
from sdpgraph import detection
from sdpgraph.detection import (estimate_d, estimate_partition, factor_eigvectors, overlap,
                                quadratic_score, select_candidate, split_edges, split_fraction,
                                threshold_family)
from sdpgraph.errors import InvalidParameter
from sdpgraph.experiments import planted_params


def test_estimate_d():
    assert estimate_d(gen_regular(100, 6, 1)) == 6.0
    assert estimate_d(SparseGraph(10)) == 0.0
    n, d = 2000, 20
    g = gen_er(n, d, 2)
    pairs = n * (n - 1) / 2
    sd = 2 / n * math.sqrt(pairs * d / n * (1 - d / n))
    assert abs(estimate_d(g) - d * (n - 1) / n) < 4 * sd


def test_test_requires_positive_degree():
    with pytest.raises(InvalidParameter):
        detection.test_two_communities(SparseGraph(20))


def test_statistic_deterministic():
    g, _ = gen_planted_2(400, 8, 4, 1)
    a = detection.test_two_communities(g, 6.0, 0.1, k=10, restarts=1, seed=5)
    b = detection.test_two_communities(g, 6.0, 0.1, k=10, restarts=1, seed=5)
    assert a == b
    assert a.decision == int(a.statistic >= a.threshold)
    assert a.threshold == pytest.approx(2.2)


def test_decision_nonincreasing_in_delta():
    g, _ = gen_planted_2(400, 12, 2, 3)
    decisions = [detection.test_two_communities(g, 7.0, dl, k=10, restarts=1, seed=1).decision
                 for dl in np.linspace(-0.5, 1.0, 16)]
    assert all(x >= y for x, y in zip(decisions, decisions[1:]))


def test_r_test_d_resolution():
    a, b = planted_params(12, 1.2, 3)
    g, _ = gen_planted_r(999, 3, a, b, 4)
    known = detection.test_r_communities(g, r=3, a=a, b=b, k=12, restarts=1, seed=2)
    auto = detection.test_r_communities(g, k=12, restarts=1, seed=2)
    assert known.d_used == pytest.approx(12.0)
    assert abs(auto.d_used - known.d_used) < 0.5
    # statistic scales like 1/sqrt(d) up to the centering term
    assert abs(auto.statistic - known.statistic) < 0.1


def test_split_fraction():
    assert split_fraction(10_000) == pytest.approx(0.01 / 1.01)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**63))
def test_split_partition(seed):
    g = gen_er(300, 6, 1)
    g1, g2 = split_edges(g, seed)
    e = {tuple(x) for x in g.edges.tolist()}
    e1 = {tuple(x) for x in g1.edges.tolist()}
    e2 = {tuple(x) for x in g2.edges.tolist()}
    assert e1 | e2 == e and not (e1 & e2)


def test_split_size():
    g = gen_er(5000, 20, 3)
    _, g2 = split_edges(g, 1)
    p = split_fraction(5000)
    m = g.num_edges
    assert abs(g2.num_edges - m * p) < 4 * math.sqrt(m * p * (1 - p))


def test_factor_eigvectors_rank_one():
    n = 30
    vals, vecs = factor_eigvectors(SphereFactor(np.tile([1.0, 0, 0], (n, 1))))
    assert vals == pytest.approx([n])
    np.testing.assert_allclose(np.abs(vecs[:, 0]), 1 / math.sqrt(n))


@pytest.mark.parametrize("n,k", [(10, 3), (64, 8), (40, 40)])
def test_factor_eigvectors_reconstruct(n, k):
    f = init_factor(n, k, n + k)
    vals, vecs = factor_eigvectors(f)
    np.testing.assert_allclose((vecs * vals) @ vecs.T, f.gram(), atol=1e-8)
    assert vals.sum() == pytest.approx(n)
    np.testing.assert_allclose(vecs.T @ vecs, np.eye(len(vals)), atol=1e-8)


def test_threshold_family():
    v = np.array([0.9, -0.5, 0.1])
    assert threshold_family(v, 1).tolist() == [1, -1, 0]
    assert threshold_family(v, 0).tolist() == [1, 0, 0]
    assert threshold_family(v, 2).tolist() == [1, -1, 1]
    w = np.array([0.5, -0.5, 0.2])
    assert threshold_family(w, 0).tolist() == [1, -1, 0]


def test_select_candidate_empty_g2():
    vecs = np.random.default_rng(0).standard_normal((20, 3))
    i, j, score, x = select_candidate(vecs, SparseGraph(20))
    # every candidate scores 0; the lexicographically smallest pair wins
    assert (i, j, score) == (0, 0, 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 200), st.integers(1, 4), st.floats(0.5, 12), st.integers(0, 10**6),
       st.booleans())
def test_select_candidate_matches_brute_force(n, nvec, d, seed, ties):
    rng = np.random.default_rng(seed)
    g = gen_er(n, min(d, n), seed)
    vecs = rng.standard_normal((n, nvec))
    if ties:
        vecs = np.round(vecs, 0)
    scores = brute_candidate_scores(vecs, g)
    i, j, score, x = select_candidate(vecs, g)
    assert score == scores.max()
    best = np.argwhere(scores == scores.max())
    assert (i, j) == tuple(best[np.lexsort((best[:, 1], best[:, 0]))][0])
    assert quadratic_score(g, x) == score


def test_select_candidate_finds_community_vector():
    n = 200
    g, lab = gen_planted_2(n, 30, 2, 1)
    x0 = lab.signs().astype(float)
    v = x0 * (1 + 0.01 * np.arange(n)) / math.sqrt(n)
    scores = brute_candidate_scores(v[:, None], g)
    i, j, score, x = select_candidate(v[:, None], g)
    assert score == scores.max()
    assert np.array_equal(np.abs(x), np.ones(n))


def test_overlap():
    x0 = np.array([1, -1, 1, -1, 1, 1])
    assert overlap(x0, x0) == 1.0
    assert overlap(-x0, x0) == 1.0
    assert overlap(np.zeros(6), x0) == 0.0
    with pytest.raises(InvalidParameter):
        overlap(x0, np.array([1, 0, 1, -1, 1, 1]))


def test_estimate_two_cliques():
    n = 200
    g, lab = gen_planted_2(n, n, 0, 3)
    res = estimate_partition(g, seed=1, labels=lab)
    assert res.overlap >= 0.95
    assert quadratic_score(split_edges(g, 0)[1], res.xhat) is not None
    assert set(np.unique(res.xhat)) <= {-1, 0, 1}


def test_estimate_score_consistent():
    from sdpgraph.rng import derive_seed
    g, lab = gen_planted_2(400, 14, 4, 2)
    res = estimate_partition(g, seed=9, labels=lab)
    _, g2 = split_edges(g, derive_seed(9, 0))
    assert quadratic_score(g2, res.xhat) == res.score


def test_estimate_null_small_overlap():
    ovs = []
    for s in range(5):
        g, lab = gen_planted_2(2000, 15, 15, s)
        ovs.append(estimate_partition(g, seed=s, labels=lab).overlap)
    assert np.mean(np.array(ovs) <= 0.1) >= 0.8
