import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from sdpgraph import (bbap_prediction, deformed_goe, deformed_goe_r, eig_sym, gen_planted_r,
                      sample_goe, semicircle_quantile)
from sdpgraph.errors import InvalidParameter
from sdpgraph.graphs import Labels
from sdpgraph.matrices import community_mean_matrix, semicircle_cdf


def test_goe_symmetric_and_deterministic():
    w = sample_goe(30, 4)
    assert np.array_equal(w, w.T)
    assert np.array_equal(w, sample_goe(30, 4))
    assert sample_goe(1, 0).shape == (1, 1)


def test_goe_entry_variances():
    n, reps = 4, 10_000
    samples = np.array([sample_goe(n, s) for s in range(reps)])
    off = samples[:, 0, 1].var()
    diag = samples[:, 2, 2].var()
    assert abs(off - 1 / n) < 0.05 / n
    assert abs(diag - 2 / n) < 0.05 * 2 / n


def test_goe_top_eigenvalue():
    assert 1.9 <= eig_sym(sample_goe(1000, 1)).top <= 2.1


def test_goe_semicircle_kolmogorov():
    vals = np.sort(np.concatenate([np.linalg.eigvalsh(sample_goe(1000, s)) for s in range(5)]))
    emp = np.arange(1, len(vals) + 1) / len(vals)
    dist = np.max(np.abs(emp - semicircle_cdf(vals)))
    assert dist < 0.05


def test_deformed_goe_shift_exact():
    n, lam = 50, 1.7
    diff = deformed_goe(n, lam, 3) - deformed_goe(n, 0.0, 3)
    np.testing.assert_allclose(diff, lam / n, rtol=0, atol=1e-15)
    assert np.array_equal(deformed_goe(n, 0.0, 3), sample_goe(n, 3))


def test_deformed_goe_mean():
    n, lam = 400, 3.0
    b = deformed_goe(n, lam, 9)
    off = b[np.triu_indices(n, 1)]
    assert abs(off.mean() - lam / n) < 4 * math.sqrt(1 / n / len(off))


def test_deformed_goe_top_eigenvalue():
    assert 2.35 <= eig_sym(deformed_goe(1000, 2.0, 2)).top <= 2.65


def test_community_mean_matrix():
    _, lab = gen_planted_r(12, 3, 1, 1, 0)
    b0 = community_mean_matrix(lab)
    vals = np.sort(np.linalg.eigvalsh(b0))[::-1]
    np.testing.assert_allclose(vals[:2], 1.0, atol=1e-12)
    np.testing.assert_allclose(vals[2:], 0.0, atol=1e-12)


def test_community_mean_two_groups_is_rank_one():
    _, lab = gen_planted_r(10, 2, 1, 1, 3)
    v = lab.signs() / math.sqrt(10)
    np.testing.assert_allclose(community_mean_matrix(lab), np.outer(v, v), atol=1e-15)


def test_deformed_goe_r():
    _, lab = gen_planted_r(30, 3, 1, 1, 0)
    np.testing.assert_array_equal(deformed_goe_r(30, 3, 0.0, lab, 5), sample_goe(30, 5))
    bad = Labels(np.array([0] * 20 + [1] * 5 + [2] * 5), 3)
    with pytest.raises(InvalidParameter):
        deformed_goe_r(30, 3, 1.0, bad, 5)


def test_eig_sym_examples():
    s = eig_sym(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(s.eigenvalues, [3, 2, 1])
    np.testing.assert_allclose(np.abs(s.eigenvectors), np.eye(3)[:, [0, 2, 1]], atol=1e-12)
    s = eig_sym(np.ones((6, 6)) / 6)
    np.testing.assert_allclose(s.eigenvalues, [1, 0, 0, 0, 0, 0], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40), st.integers(0, 10**6))
def test_eig_sym_invariants(n, seed):
    a = np.random.default_rng(seed).standard_normal((n, n))
    m = a + a.T
    s = eig_sym(m)
    v, lam = s.eigenvectors, s.eigenvalues
    fro = np.linalg.norm(m)
    assert np.all(np.diff(lam) <= 0)
    assert np.linalg.norm(m @ v - v * lam, axis=0).max() <= 1e-8 * max(fro, 1)
    np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-8)
    assert abs(lam.sum() - np.trace(m)) <= 1e-8 * max(fro, 1)
    assert np.linalg.norm(v @ np.diag(lam) @ v.T - m) <= 1e-8 * max(fro, 1)


def test_bbap_prediction():
    assert bbap_prediction(0.5) == 2.0
    assert bbap_prediction(1.0) == 2.0
    assert bbap_prediction(2.0) == 2.5
    with pytest.raises(InvalidParameter):
        bbap_prediction(-1)


def test_semicircle_quantile_values():
    assert abs(semicircle_quantile(0.5)) < 1e-10
    with pytest.raises(InvalidParameter):
        semicircle_quantile(0.0)
    with pytest.raises(InvalidParameter):
        semicircle_quantile(1.0)


@pytest.mark.parametrize("delta", [0.001, 0.01, 0.05, 0.2, 0.5, 0.8, 0.99])
def test_semicircle_quantile_integral(delta):
    xi = semicircle_quantile(delta)
    mass, _ = quad(lambda x: math.sqrt(4 - x * x) / (2 * math.pi), xi, 2, epsabs=1e-13, epsrel=1e-13)
    assert abs(mass - delta) < 1e-9


def test_semicircle_quantile_monotone():
    deltas = np.linspace(1e-4, 1 - 1e-4, 200)
    xs = [semicircle_quantile(d) for d in deltas]
    assert np.all(np.diff(xs) < 0)
    assert semicircle_quantile(1e-8) > 1.99
