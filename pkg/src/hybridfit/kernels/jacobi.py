"""Cyclic Jacobi eigenvalue iteration for dense symmetric matrices."""
import numpy as np

from . import USE_NUMBA, njit


def _rotation(app, aqq, apq):
    theta = (aqq - app) / (2.0 * apq)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    elif theta >= 0.0:
        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c


def _off_norm(A):
    n = A.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += A[i, j] * A[i, j]
    return np.sqrt(total)


def _jacobi(A, tol, max_sweeps):
    A = A.copy()
    n = A.shape[0]
    sweeps = 0
    while sweeps < max_sweeps and _off_norm(A) > tol:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation(A[p, p], A[q, q], apq)
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
        sweeps += 1
    return np.sort(np.diag(A).copy()), sweeps


def jacobi_numpy(A, tol, max_sweeps):
    A = np.array(A, dtype=float)
    n = A.shape[0]
    mask = ~np.eye(n, dtype=bool)
    sweeps = 0
    while sweeps < max_sweeps and np.sqrt((A[mask] ** 2).sum()) > tol:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation_py(A[p, p], A[q, q], apq)
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp, rq = A[p].copy(), A[q].copy()
                A[p] = c * rp - s * rq
                A[q] = s * rp + c * rq
        sweeps += 1
    return np.sort(np.diag(A).copy()), sweeps


_rotation_py = _rotation

if USE_NUMBA:
    _rotation = njit(_rotation)
    _off_norm = njit(_off_norm)
    jacobi_numba = njit(_jacobi)
else:
    jacobi_numba = None


def jacobi_eigenvalues(A, tol=1e-10, max_sweeps=100):
    """Ascending eigenvalues of symmetric ``A``.

    Iterates full cyclic sweeps until the off-diagonal Frobenius norm drops
    below ``tol * max(1, ||A||_F)``.

    Returns:
        ``(eigenvalues, sweeps_used)``.
    """
    A = np.ascontiguousarray(A, dtype=float)
    thresh = tol * max(1.0, float(np.linalg.norm(A)))
    if USE_NUMBA:
        return jacobi_numba(A, thresh, max_sweeps)
    return jacobi_numpy(A, thresh, max_sweeps)
