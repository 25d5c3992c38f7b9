"""Affine residual models, the minimax fit g(C) and the feasibility test f(C).

Indices are 0-based throughout the package.
"""
from dataclasses import dataclass, field

import numpy as np

from .simplex import TOL, linprog_standard

#: relative tolerance for value equality when testing basis minimality
BASIS_RTOL = 1e-7


class BasisError(ValueError):
    """Raised when a basis is requested from a feasible subset."""


@dataclass(frozen=True)
class FittingProblem:
    """Robust fitting instance with residuals ``|a_i @ x - b_i|``.

    Attributes:
        coefficients: ``(N, d)`` array of rows ``a_i``.
        offsets: ``(N,)`` array of ``b_i``.
        epsilon: inlier threshold.
        comb_dim: combinatorial dimension; ``d + 1`` unless given.
    """

    coefficients: np.ndarray
    offsets: np.ndarray
    epsilon: float
    comb_dim: int = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.coefficients, dtype=float))
        if a.shape[0] == 1 and np.ndim(self.coefficients) == 1:
            a = a.T
        b = np.asarray(self.offsets, dtype=float).reshape(-1)
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"{a.shape[0]} coefficient rows but {b.shape[0]} offsets")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("need at least one point and one model parameter")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise ValueError("coefficients and offsets must be finite")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be nonnegative")
        delta = a.shape[1] + 1 if self.comb_dim is None else int(self.comb_dim)
        if not 1 <= delta <= 2 * a.shape[1] + 1:
            raise ValueError(f"comb_dim {delta} outside [1, 2d+1]")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "offsets", b)
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "comb_dim", delta)

    @property
    def n_points(self):
        return self.coefficients.shape[0]

    @property
    def dim(self):
        return self.coefficients.shape[1]

    def residuals(self, x, subset=None):
        x = np.asarray(x, dtype=float).reshape(-1)
        if subset is None:
            return np.abs(self.coefficients @ x - self.offsets)
        idx = np.asarray(subset, dtype=np.int64)
        return np.abs(self.coefficients[idx] @ x - self.offsets[idx])

    def consensus(self, x):
        """Indices whose residual at ``x`` is within epsilon."""
        return np.flatnonzero(self.residuals(x) <= self.epsilon)

    def subproblem(self, subset):
        idx = np.asarray(subset, dtype=np.int64)
        return FittingProblem(self.coefficients[idx], self.offsets[idx],
                              self.epsilon, self.comb_dim)


@dataclass(frozen=True)
class SubsetValue:
    value: float
    minimizer: np.ndarray
    active: tuple = field(default=())


def residual(problem, i, x):
    if not 0 <= i < problem.n_points:
        raise IndexError(f"point index {i} out of range for N={problem.n_points}")
    x = np.asarray(x, dtype=float).reshape(-1)
    return float(abs(problem.coefficients[i] @ x - problem.offsets[i]))


def _as_subset(problem, subset):
    idx = np.unique(np.asarray(list(subset), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= problem.n_points):
        raise IndexError("subset index out of range")
    return idx


def minimax(problem, subset):
    """Chebyshev fit ``g(C) = min_x max_{i in C} |a_i @ x - b_i|``.

    The LP is solved in its dual form, which has only ``d + 1`` equality
    rows: maximise ``sum_i b_i (u_i - w_i)`` subject to
    ``sum_i a_i (u_i - w_i) = 0`` and ``sum_i (u_i + w_i) = 1``. The fit
    ``x`` is read off the equality multipliers.
    """
    idx = _as_subset(problem, subset)
    if idx.size == 0:
        raise ValueError("minimax needs a nonempty subset")
    a = problem.coefficients[idx]
    b = problem.offsets[idx]
    k, d = a.shape
    A = np.zeros((d + 1, 2 * k))
    A[:d, :k] = a.T
    A[:d, k:] = -a.T
    A[d, :] = 1.0
    rhs = np.zeros(d + 1)
    rhs[d] = 1.0
    cost = np.concatenate([-b, b])
    sol = linprog_standard(cost, A, rhs)
    x = -sol.duals[:d]
    r = np.abs(a @ x - b)
    value = float(r.max())
    tol = TOL * max(1.0, value)
    active = tuple(int(i) for i in idx[r >= value - tol])
    return SubsetValue(value=value, minimizer=x, active=active)


def feasibility(problem, subset):
    """0 if the subset is a consensus set (``g(C) <= epsilon``), else 1."""
    idx = _as_subset(problem, subset)
    if idx.size == 0:
        return 0
    return int(minimax(problem, idx).value > problem.epsilon)


def _same_value(g_small, g_ref):
    return g_small >= g_ref - BASIS_RTOL * max(1.0, abs(g_ref))


def extract_basis(problem, subset):
    """Infeasible basis ``B`` of an infeasible subset with ``g(B) = g(V')``.

    Starts from the active set of the minimax fit and greedily removes
    elements in ascending index order while the minimax value is unchanged.
    """
    idx = _as_subset(problem, subset)
    if idx.size == 0:
        raise BasisError("subset is feasible, no infeasible basis exists")
    full = minimax(problem, idx)
    if full.value <= problem.epsilon:
        raise BasisError("subset is feasible, no infeasible basis exists")
    g = full.value
    current = list(full.active)
    if not _same_value(minimax(problem, current).value, g):
        # active set lost the value to LP noise; minimise from the whole subset
        current = [int(i) for i in idx]
    changed = True
    while changed:
        changed = False
        for i in list(current):
            if len(current) == 1:
                break
            rest = [j for j in current if j != i]
            if _same_value(minimax(problem, rest).value, g):
                current = rest
                changed = True
    if len(current) > problem.comb_dim:
        raise RuntimeError(
            f"basis of size {len(current)} exceeds combinatorial dimension {problem.comb_dim}")
    return tuple(sorted(current))
