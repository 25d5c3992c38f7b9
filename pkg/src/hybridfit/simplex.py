"""Dense two-phase simplex for small standard-form linear programs.

Solves ``min c @ x  s.t.  A @ x == b, x >= 0``. Both the Chebyshev fits in
:mod:`hybridfit.geometry` and the cover relaxation in
:mod:`hybridfit.hypergraph` go through :func:`linprog_standard`.
"""
from dataclasses import dataclass

import numpy as np

from .kernels import simplex as _kern

TOL = 1e-9


class SimplexError(RuntimeError):
    """The simplex core could not certify an optimum."""


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    value: float
    duals: np.ndarray
    basis: np.ndarray
    iterations: int


def linprog_standard(c, A, b, tol=TOL, max_iter=None):
    """Minimise ``c @ x`` over ``A @ x == b``, ``x >= 0``.

    Bland's rule is used for both entering and leaving variables, so the
    method terminates on degenerate problems. Redundant equality rows are
    detected after phase one and dropped.

    Args:
        c: cost vector, shape ``(n,)``.
        A: constraint matrix, shape ``(m, n)``.
        b: right-hand side, shape ``(m,)``.
        tol: pivot and optimality tolerance.
        max_iter: pivot budget per phase; defaults to ``50 * (m + n)``.

    Returns:
        LPSolution with primal ``x``, optimal value and equality multipliers
        ``duals`` (``A.T @ duals <= c`` at optimality).

    Raises:
        SimplexError: infeasible, unbounded or out of iterations.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n) + 100

    sign = np.where(b < 0, -1.0, 1.0)
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A * sign[:, None]
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b * sign
    T[m, :n] = -T[:m, :n].sum(axis=0)
    T[m, -1] = -T[:m, -1].sum()
    basis = np.arange(n, n + m, dtype=np.int64)

    status, it1 = _kern.bland_loop(T, basis, n, tol, max_iter)
    if status != _kern.OPTIMAL:
        raise SimplexError(f"phase one failed (status {status})")
    scale = max(1.0, np.abs(b).max(initial=0.0))
    if T[m, -1] < -tol * scale * max(m, 1):
        raise SimplexError("linear program is infeasible")

    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] < n:
            continue
        row = T[i, :n]
        j = np.flatnonzero(np.abs(row) > tol)
        if j.size:
            _kern._pivot_np(T, i, j[0])
            basis[i] = j[0]
        else:
            keep[i] = False
    if not keep.all():
        T = np.vstack([T[:m][keep], T[m:]])
        basis = basis[keep]
        m = int(keep.sum())

    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        cb = c[basis[i]]
        if cb != 0.0:
            T[m] -= cb * T[i]
    status, it2 = _kern.bland_loop(T, basis, n, tol, max_iter)
    if status == _kern.UNBOUNDED:
        raise SimplexError("linear program is unbounded")
    if status != _kern.OPTIMAL:
        raise SimplexError("simplex iteration limit reached")

    x = np.zeros(n)
    x[basis] = np.maximum(T[:m, -1], 0.0)
    if m:
        duals = np.linalg.lstsq(A[:, basis].T, c[basis], rcond=None)[0]
    else:
        duals = np.zeros(A.shape[0])
    return LPSolution(x=x, value=float(c @ x), duals=duals,
                      basis=basis.copy(), iterations=int(it1 + it2))
