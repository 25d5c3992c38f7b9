import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from conftest import random_line_problem
from hybridfit.geometry import (BasisError, FittingProblem, extract_basis, feasibility,
                                minimax, residual)
from hybridfit.oracles import max_consensus_exhaustive


def chebyshev_highs(a, b):
    """Primal Chebyshev LP ``min t, -t <= a x - b <= t`` through HiGHS."""
    k, d = a.shape
    c = np.zeros(d + 1)
    c[-1] = 1.0
    ones = np.ones((k, 1))
    A_ub = np.vstack([np.hstack([a, -ones]), np.hstack([-a, -ones])])
    b_ub = np.concatenate([b, -b])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * d + [(0, None)],
                  method="highs")
    return res.fun


def problem_1d(b, eps=0.5, a=None):
    b = np.asarray(b, dtype=float)
    a = np.ones_like(b) if a is None else np.asarray(a, dtype=float)
    return FittingProblem(a[:, None], b, eps)


def test_residual_examples():
    assert residual(problem_1d([0.0]), 0, [0.0]) == 0.0
    assert residual(problem_1d([2.0]), 0, [1.0]) == 1.0
    p = FittingProblem(np.array([[2.0, -1.0]]), np.array([3.0]), 1.0)
    assert residual(p, 0, [1.0, 1.0]) == 2.0
    with pytest.raises(IndexError):
        residual(p, 1, [0.0, 0.0])


def test_minimax_two_point_midpoint():
    fit = minimax(problem_1d([0.0, 2.0]), [0, 1])
    assert fit.value == pytest.approx(1.0)
    assert fit.minimizer[0] == pytest.approx(1.0)


def test_minimax_singleton_is_exact():
    fit = minimax(problem_1d([5.0]), [0])
    assert fit.value == pytest.approx(0.0, abs=1e-12)
    assert fit.minimizer[0] == pytest.approx(5.0)


def test_minimax_three_points():
    fit = minimax(problem_1d([0.0, 1.0, 4.0]), [0, 1, 2])
    assert fit.value == pytest.approx(2.0)
    assert fit.minimizer[0] == pytest.approx(2.0)
    assert fit.active == (0, 2)


def test_minimax_empty_subset_rejected():
    with pytest.raises(ValueError):
        minimax(problem_1d([0.0]), [])


@pytest.mark.parametrize("seed", range(30))
def test_minimax_matches_highs(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 6))
    k = int(rng.integers(1, 25))
    a = rng.normal(size=(k, d))
    b = rng.normal(size=k)
    p = FittingProblem(a, b, 0.1)
    fit = minimax(p, range(k))
    assert fit.value == pytest.approx(chebyshev_highs(a, b), rel=1e-7, abs=1e-9)
    r = p.residuals(fit.minimizer)
    assert r.max() == pytest.approx(fit.value, rel=1e-9, abs=1e-12)
    for i in fit.active:
        assert r[i] == pytest.approx(fit.value, rel=1e-8, abs=1e-9)


def test_feasibility_threshold():
    p = problem_1d([0.0, 1.0], eps=1.0)     # g = 0.5
    assert feasibility(p, [0, 1]) == 0
    p = problem_1d([0.0, 4.0], eps=1.0)     # g = 2
    assert feasibility(p, [0, 1]) == 1
    assert feasibility(p, []) == 0


def test_extract_basis_examples():
    assert extract_basis(problem_1d([0.0, 4.0]), [0, 1]) == (0, 1)
    assert extract_basis(problem_1d([0.0, 1.0, 4.0]), [0, 1, 2]) == (0, 2)
    with pytest.raises(BasisError, match="subset is feasible"):
        extract_basis(problem_1d([0.0, 0.2]), [0, 1])


@pytest.mark.parametrize("seed", range(25))
def test_extract_basis_is_minimal(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    n = int(rng.integers(d + 2, 15))
    p = FittingProblem(rng.normal(size=(n, d)), rng.normal(size=n), 0.05)
    if not feasibility(p, range(n)):
        pytest.skip("instance happens to be feasible")
    B = extract_basis(p, range(n))
    assert len(B) <= p.comb_dim
    assert feasibility(p, B) == 1
    g = minimax(p, B).value
    assert g == pytest.approx(minimax(p, range(n)).value, rel=1e-7)
    for i in B:
        rest = [j for j in B if j != i]
        if rest:
            assert minimax(p, rest).value < g * (1 - 1e-7)


subsets = st.lists(st.integers(0, 11), min_size=1, max_size=12, unique=True)


@given(seed=st.integers(0, 10**6), base=subsets, extra=subsets)
def test_monotone_under_inclusion(seed, base, extra):
    p = random_line_problem(np.random.default_rng(seed), 12)
    small = sorted(base)
    big = sorted(set(base) | set(extra))
    assert minimax(p, small).value <= minimax(p, big).value + 1e-9
    assert feasibility(p, small) <= feasibility(p, big)


@given(seed=st.integers(0, 10**6), perm_seed=st.integers(0, 10**6))
def test_permutation_invariance(seed, perm_seed):
    p = random_line_problem(np.random.default_rng(seed), 10)
    order = np.random.default_rng(perm_seed).permutation(10)
    assert minimax(p, order).value == pytest.approx(minimax(p, range(10)).value, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_every_basis_hits_an_outlier(seed):
    rng = np.random.default_rng(seed)
    p = random_line_problem(rng, 10)
    size, best = max_consensus_exhaustive(p)
    outliers = set(range(10)) - set(best)
    for k in range(1, p.comb_dim + 1):
        for subset in itertools.combinations(range(10), k):
            if feasibility(p, subset):
                B = extract_basis(p, subset)
                assert outliers.intersection(B)


def test_problem_validation():
    with pytest.raises(ValueError):
        FittingProblem(np.ones((3, 1)), np.ones(2), 0.1)
    with pytest.raises(ValueError):
        FittingProblem(np.ones((2, 1)), np.ones(2), -1.0)
    with pytest.raises(ValueError):
        FittingProblem(np.array([[np.nan]]), np.ones(1), 0.1)
    with pytest.raises(ValueError):
        FittingProblem(np.ones((2, 1)), np.ones(2), 0.1, comb_dim=4)
    p = FittingProblem(np.ones((2, 3)), np.ones(2), 0.1)
    assert p.comb_dim == 4
    with pytest.raises(ValueError):
        p.coefficients[0, 0] = 2.0
