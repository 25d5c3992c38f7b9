"""Brute-force maximum consensus, used to check the hypergraph route."""
from itertools import combinations

import numpy as np

from .geometry import feasibility, minimax

EXHAUSTIVE_LIMIT = 16


def max_consensus_exhaustive(problem):
    """Largest feasible subset by descending-size subset search.

    Returns ``(size, subset)``. Monotonicity means the first feasible size
    found from the top is the optimum.
    """
    n = problem.n_points
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive search restricted to N <= {EXHAUSTIVE_LIMIT}")
    for size in range(n, 0, -1):
        for subset in combinations(range(n), size):
            if feasibility(problem, subset) == 0:
                return size, subset
    return 0, ()


def max_consensus_1d(problem):
    """Exact maximum consensus for one-parameter models by interval stabbing.

    Each point admits the closed interval of ``x`` with ``|a x - b| <= eps``;
    the best model sits at a left endpoint. No LP is involved.

    Returns ``(size, witness)``.
    """
    if problem.dim != 1:
        raise ValueError("interval stabbing needs a one-parameter model")
    a = problem.coefficients[:, 0]
    b = problem.offsets
    eps = problem.epsilon
    free = (a == 0) & (np.abs(b) <= eps)
    moving = a != 0
    lo = np.where(a > 0, (b - eps) / np.where(moving, a, 1), (b + eps) / np.where(moving, a, 1))
    hi = np.where(a > 0, (b + eps) / np.where(moving, a, 1), (b - eps) / np.where(moving, a, 1))
    lo, hi = lo[moving], hi[moving]
    base = int(free.sum())
    if lo.size == 0:
        return base, np.zeros(1)
    counts = ((lo[None, :] <= lo[:, None]) & (lo[:, None] <= hi[None, :])).sum(axis=1)
    k = int(np.argmax(counts))
    return base + int(counts[k]), np.array([lo[k]])


def max_consensus(problem):
    """Maximum consensus size with an LP-certified witness.

    Uses interval stabbing for ``d == 1`` and subset search otherwise.
    Returns ``(size, witness)``.
    """
    if problem.dim == 1:
        return max_consensus_1d(problem)
    size, subset = max_consensus_exhaustive(problem)
    if size == 0:
        return 0, np.zeros(problem.dim)
    return size, minimax(problem, subset).minimizer
