"""Classical QUBO solvers: multi-restart simulated annealing and exact search."""
from dataclasses import dataclass

import numpy as np

from .kernels import anneal as _kern
from .qubo import qubo_energy

EXACT_LIMIT = 24
COVER_EXACT_LIMIT = 24


@dataclass(frozen=True)
class AnnealConfig:
    """Simulated annealing budget.

    ``sweeps``, ``temp_initial`` and ``temp_final`` default to values derived
    from the problem: ``max(100, 10 n)`` sweeps, the largest absolute matrix
    entry, and a thousandth of that.
    """

    restarts: int = 1000
    sweeps: int = None
    temp_initial: float = None
    temp_final: float = None
    seed: int = 0
    parallel: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.sweeps is not None and self.sweeps < 1:
            raise ValueError("sweeps must be at least 1")
        t0, t1 = self.temp_initial, self.temp_final
        if t0 is not None and not t0 > 0:
            raise ValueError("temp_initial must be positive")
        if t1 is not None and not t1 > 0:
            raise ValueError("temp_final must be positive")
        if t0 is not None and t1 is not None and not t0 > t1:
            raise ValueError("temp_initial must exceed temp_final")

    def resolve(self, q):
        """Concrete ``(sweeps, temp_initial, temp_final)`` for problem ``q``."""
        n = q.n_variables
        sweeps = self.sweeps if self.sweeps is not None else max(100, 10 * n)
        t0 = self.temp_initial
        if t0 is None:
            t0 = float(np.abs(q.matrix).max(initial=0.0)) or 1.0
        t1 = self.temp_final if self.temp_final is not None else 1e-3 * t0
        if not t0 > t1:
            raise ValueError("temp_initial must exceed temp_final")
        return sweeps, t0, t1


@dataclass(frozen=True)
class AnnealResult:
    best_v: np.ndarray
    best_energy: float
    energies: np.ndarray


def split_couplings(matrix):
    """``(Qs, diag)``: symmetric zero-diagonal couplings and linear terms."""
    Q = np.asarray(matrix, dtype=float)
    diag = np.diag(Q).copy()
    Qs = np.triu(Q, 1)
    Qs = Qs + Qs.T
    return np.ascontiguousarray(Qs), diag


def _batch_energies(q, states):
    V = states.astype(float)
    return (V @ q.matrix * V).sum(axis=1) + q.offset


def restart_seeds(seed, restarts):
    return (np.arange(restarts, dtype=np.uint64) + np.uint64(seed % 2**64)) % np.uint64(2**32)


def simulated_anneal(q, cfg=None):
    """Best of ``cfg.restarts`` independent Metropolis annealing runs.

    Restart ``r`` is seeded with ``seed + r`` (mod 2**32), so results do not
    depend on whether restarts run in parallel, and the first ``k`` restart
    energies are the same for any run with at least ``k`` restarts.
    """
    cfg = cfg or AnnealConfig()
    n = q.n_variables
    if n == 0:
        return AnnealResult(np.zeros(0, dtype=np.int8), q.offset,
                            np.full(cfg.restarts, q.offset))
    sweeps, t0, t1 = cfg.resolve(q)
    temps = np.geomspace(t0, t1, sweeps)
    Qs, diag = split_couplings(q.matrix)
    seeds = restart_seeds(cfg.seed, cfg.restarts).astype(np.int64)
    states = _kern.sa_batch(Qs, diag, temps, seeds, parallel=cfg.parallel)
    energies = _batch_energies(q, states)
    k = int(np.argmin(energies))
    return AnnealResult(best_v=states[k].copy(), best_energy=float(energies[k]),
                        energies=energies)


def _tie_tol(q):
    return 1e-9 * max(1.0, float(np.abs(q.matrix).sum()))


def exact_solve(q):
    """Exhaustive minimum over all ``2**n`` states (Gray-code order).

    Ties are broken towards the smallest integer ``sum(v_i * 2**i)``.
    """
    n = q.n_variables
    if n > EXACT_LIMIT:
        raise ValueError(f"exhaustive QUBO search restricted to n <= {EXACT_LIMIT}")
    Qs, diag = split_couplings(q.matrix)
    code = _kern.gray_minimum(Qs, diag, _tie_tol(q)) if n else 0
    v = np.array([(code >> i) & 1 for i in range(n)], dtype=np.int8)
    e = qubo_energy(q, v)
    return AnnealResult(best_v=v, best_energy=e, energies=np.array([e]))


def solve_cover_qubo_exact(q, chunk=1 << 15):
    """Exact minimum of a compiled cover QUBO, minimising slack analytically.

    For a fixed cover vector the best slack setting leaves a penalty of
    ``penalty`` on each uncovered edge and zero elsewhere, so only the
    ``2**N`` point bits need enumerating. Ties go to the smallest integer
    cover vector; slack bits are filled lowest-first.
    """
    N = q.n_vertices
    if N > COVER_EXACT_LIMIT:
        raise ValueError(f"exact cover QUBO restricted to N <= {COVER_EXACT_LIMIT}")
    if any(len(e) > q.slack_width + 1 for e in q.edges):
        raise ValueError("edges exceed slack capacity")
    A = np.zeros((N, len(q.edges)))
    for m, e in enumerate(q.edges):
        A[list(e), m] = 1.0
    shifts = np.arange(N, dtype=np.int64)
    tol = _tie_tol(q)
    best, best_code = np.inf, 0
    for start in range(0, 1 << N, chunk):
        codes = np.arange(start, min(start + chunk, 1 << N), dtype=np.int64)
        Z = ((codes[:, None] >> shifts) & 1).astype(float)
        uncovered = ((Z @ A) == 0).sum(axis=1)
        e = Z.sum(axis=1) + q.penalty * uncovered
        k = int(np.argmin(e))
        if e[k] < best - tol:
            best, best_code = e[k], int(codes[k])
    z = np.array([(best_code >> i) & 1 for i in range(N)], dtype=np.int8)
    v = np.zeros(q.n_variables, dtype=np.int8)
    v[:N] = z
    for m, e in enumerate(q.edges):
        hits = int(z[list(e)].sum())
        if hits > 1:
            sl = q.slack_slice(m)
            v[sl.start:sl.start + hits - 1] = 1
    energy = qubo_energy(q, v)
    return AnnealResult(best_v=v, best_energy=energy, energies=np.array([energy]))
