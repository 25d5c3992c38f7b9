"""Tableau pivoting with Bland's rule.

The tableau ``T`` has one row per constraint plus a final reduced-cost row;
the last column holds the right-hand side. ``basis[i]`` is the column basic
in row ``i``. Only columns ``< n_enter`` may enter the basis.
"""
import numpy as np

from . import USE_NUMBA, njit

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def _pivot(T, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row:
            f = T[i, col]
            if f != 0.0:
                T[i] -= f * T[row]


def _bland_loop(T, basis, n_enter, tol, max_iter):
    m = T.shape[0] - 1
    rhs = T.shape[1] - 1
    for it in range(max_iter):
        col = -1
        for j in range(n_enter):
            if T[m, j] < -tol:
                col = j
                break
        if col < 0:
            return OPTIMAL, it
        best = np.inf
        for i in range(m):
            a = T[i, col]
            if a > tol:
                ratio = T[i, rhs] / a
                if ratio < best:
                    best = ratio
        if best == np.inf:
            return UNBOUNDED, it
        row = -1
        for i in range(m):
            a = T[i, col]
            if a > tol and T[i, rhs] / a <= best + tol:
                if row < 0 or basis[i] < basis[row]:
                    row = i
        _pivot(T, row, col)
        basis[row] = col
    return ITERATION_LIMIT, max_iter


def _pivot_np(T, row, col):
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _bland_loop_np(T, basis, n_enter, tol, max_iter):
    m = T.shape[0] - 1
    for it in range(max_iter):
        candidates = np.flatnonzero(T[m, :n_enter] < -tol)
        if candidates.size == 0:
            return OPTIMAL, it
        col = candidates[0]
        column = T[:m, col]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol]
        row = tied[np.argmin(basis[tied])]
        _pivot_np(T, row, col)
        basis[row] = col
    return ITERATION_LIMIT, max_iter


if USE_NUMBA:
    _pivot = njit(_pivot)
    bland_loop_numba = njit(_bland_loop)
else:
    bland_loop_numba = None
bland_loop_numpy = _bland_loop_np
bland_loop = bland_loop_numba if USE_NUMBA else bland_loop_numpy
