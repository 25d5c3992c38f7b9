"""Simulated annealing and exhaustive enumeration kernels for QUBOs.

Both work on the split form of an upper-triangular QUBO: ``diag`` holds the
linear terms and ``Qs`` the symmetric couplings with a zero diagonal, so
``E(v) = diag @ v + v @ Qs @ v / 2``. Flipping bit ``i`` changes the energy
by ``(1 - 2 v_i) * (diag_i + field_i)`` with ``field = Qs @ v``.

Random numbers come from a per-restart Mersenne Twister seeded with the
restart's seed. Every proposal consumes exactly one uniform draw and every
sweep shuffles with ``n - 1`` draws, so the numba path (numba's generator)
and the numpy path (``RandomState``) read identical streams.
"""
import numpy as np

from . import USE_NUMBA, njit

try:
    from numba import prange
except ImportError:  # pragma: no cover
    prange = range


def _sa_restart(Qs, diag, temps, seed, v, best_v):
    n = diag.shape[0]
    np.random.seed(seed)
    for i in range(n):
        v[i] = 1 if np.random.random() < 0.5 else 0
    field = np.zeros(n)
    for i in range(n):
        if v[i]:
            for j in range(n):
                field[j] += Qs[j, i]
    energy = 0.0
    for i in range(n):
        if v[i]:
            energy += diag[i] + 0.5 * field[i]
    best = energy
    best_v[:] = v
    order = np.empty(n, dtype=np.int64)
    for sweep in range(temps.shape[0]):
        temp = temps[sweep]
        for k in range(n):
            order[k] = k
        for k in range(n - 1, 0, -1):
            j = int(np.random.random() * (k + 1))
            tmp = order[k]
            order[k] = order[j]
            order[j] = tmp
        for t in range(n):
            i = order[t]
            u = np.random.random()
            delta = (1 - 2 * v[i]) * (diag[i] + field[i])
            if delta <= 0.0 or u < np.exp(-delta / temp):
                c = 1.0 if v[i] == 0 else -1.0
                v[i] = 1 - v[i]
                for j in range(n):
                    field[j] += c * Qs[j, i]
                energy += delta
                if energy < best:
                    best = energy
                    best_v[:] = v


def _sa_batch(Qs, diag, temps, seeds):
    n = diag.shape[0]
    restarts = seeds.shape[0]
    states = np.zeros((restarts, n), dtype=np.int8)
    for r in prange(restarts):
        v = np.zeros(n, dtype=np.int8)
        best_v = np.zeros(n, dtype=np.int8)
        _sa_restart(Qs, diag, temps, seeds[r], v, best_v)
        states[r, :] = best_v
    return states


def sa_batch_numpy(Qs, diag, temps, seeds):
    """Vectorised across restarts; same draws and decisions as the numba path."""
    n = diag.shape[0]
    restarts = len(seeds)
    rows = np.arange(restarts)
    gens = [np.random.RandomState(int(s)) for s in seeds]
    V = (np.stack([g.random_sample(n) for g in gens]) < 0.5).astype(np.int8) if n else \
        np.zeros((restarts, 0), dtype=np.int8)
    F = V.astype(float) @ Qs
    E = V @ diag + 0.5 * (V * F).sum(axis=1)
    best_E = E.copy()
    best_V = V.copy()
    for temp in temps:
        draws = np.stack([g.random_sample(2 * n - 1) for g in gens]) if n else \
            np.zeros((restarts, 0))
        order = np.tile(np.arange(n), (restarts, 1))
        for step, k in enumerate(range(n - 1, 0, -1)):
            j = (draws[:, step] * (k + 1)).astype(np.int64)
            tmp = order[rows, k].copy()
            order[rows, k] = order[rows, j]
            order[rows, j] = tmp
        for t in range(n):
            i = order[:, t]
            u = draws[:, n - 1 + t]
            vi = V[rows, i]
            delta = (1 - 2 * vi) * (diag[i] + F[rows, i])
            with np.errstate(over="ignore"):
                accept = (delta <= 0.0) | (u < np.exp(-np.maximum(delta, 0.0) / temp))
            if not accept.any():
                continue
            acc = rows[accept]
            ia = i[accept]
            c = np.where(V[acc, ia] == 0, 1.0, -1.0)
            V[acc, ia] = 1 - V[acc, ia]
            F[acc] += c[:, None] * Qs[ia]
            E[acc] += delta[accept]
            improved = acc[E[acc] < best_E[acc]]
            best_E[improved] = E[improved]
            best_V[improved] = V[improved]
    return best_V


def _gray_minimum(Qs, diag, tol):
    n = diag.shape[0]
    v = np.zeros(n, dtype=np.int8)
    field = np.zeros(n)
    energy = 0.0
    best = 0.0
    best_code = 0
    code = 0
    for k in range(1, 1 << n):
        i = 0
        kk = k
        while (kk & 1) == 0:
            kk >>= 1
            i += 1
        delta = (1 - 2 * v[i]) * (diag[i] + field[i])
        c = 1.0 if v[i] == 0 else -1.0
        v[i] = 1 - v[i]
        for j in range(n):
            field[j] += c * Qs[j, i]
        energy += delta
        code ^= 1 << i
        if energy < best - tol:
            best = energy
            best_code = code
        elif energy <= best + tol and code < best_code:
            best_code = code
    return best_code


def gray_minimum_numpy(Qs, diag, tol, chunk=1 << 16):
    """Chunked exhaustive scan; lowest code within ``tol`` of the minimum wins."""
    n = diag.shape[0]
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)

    def energies(start):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(float)
        return codes, bits @ diag + 0.5 * ((bits @ Qs) * bits).sum(axis=1)

    best = np.inf
    for start in range(0, total, chunk):
        best = min(best, energies(start)[1].min())
    for start in range(0, total, chunk):
        codes, e = energies(start)
        hit = np.flatnonzero(e <= best + tol)
        if hit.size:
            return int(codes[hit[0]])
    return 0


if USE_NUMBA:
    _sa_restart = njit(_sa_restart)
    sa_batch_numba = njit(_sa_batch)
    sa_batch_numba_parallel = njit(parallel=True)(_sa_batch)
    gray_minimum_numba = njit(_gray_minimum)
else:
    sa_batch_numba = sa_batch_numba_parallel = gray_minimum_numba = None


def sa_batch(Qs, diag, temps, seeds, parallel=False):
    if USE_NUMBA:
        kernel = sa_batch_numba_parallel if parallel else sa_batch_numba
        return kernel(Qs, diag, temps, seeds)
    return sa_batch_numpy(Qs, diag, temps, seeds)


def gray_minimum(Qs, diag, tol):
    if USE_NUMBA:
        return gray_minimum_numba(Qs, diag, tol)
    return gray_minimum_numpy(Qs, diag, tol)
