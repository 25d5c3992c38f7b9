"""Time the numba and numpy paths of each hot kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeats 3]

Needs numba importable with HYBRIDFIT_KERNELS unset or set to ``numba``;
the numpy paths are called directly. First calls are made before timing so
that compilation is excluded.
"""
import argparse
import time

import numpy as np

from hybridfit.annealer import split_couplings
from hybridfit.data import SyntheticSpec, generate_synthetic
from hybridfit.hypergraph import enumerate_infeasible_bases
from hybridfit.kernels import USE_NUMBA
from hybridfit.kernels import anneal, jacobi, simplex
from hybridfit.qubo import build_qubo, to_ising
from hybridfit.spectral import hamiltonian


def best_of(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cover_qubo(n_points, seed=0):
    p, _ = generate_synthetic(SyntheticSpec(n_points, 0.3, seed=seed))
    edges = enumerate_infeasible_bases(p)
    return build_qubo(edges, p.comb_dim, 1.0)


def simplex_tableau(seed, m=40, n=120):
    rng = np.random.default_rng(seed)
    T = np.zeros((m + 1, n + 1))
    T[:m, :n] = rng.uniform(0, 1, (m, n))
    T[:m, :m] = np.eye(m)
    T[:m, n] = rng.uniform(1, 2, m)
    T[m, m:n] = -rng.uniform(0, 1, n - m)
    return T, np.arange(m, dtype=np.int64)


def cases():
    q = cover_qubo(14)
    Qs, diag = split_couplings(q.matrix)
    temps = np.geomspace(float(np.abs(q.matrix).max()), 1e-3, 300)
    seeds = np.arange(16, dtype=np.int64)
    yield (f"SA, n={q.n_variables}, 16 restarts x 300 sweeps",
           lambda: anneal.sa_batch_numba(Qs, diag, temps, seeds),
           lambda: anneal.sa_batch_numpy(Qs, diag, temps, seeds))

    rng = np.random.default_rng(1)
    Qg, dg = split_couplings(np.triu(rng.normal(size=(20, 20))))
    yield ("Gray-code exhaustive, n=20",
           lambda: anneal.gray_minimum_numba(Qg, dg, 1e-9),
           lambda: anneal.gray_minimum_numpy(Qg, dg, 1e-9))

    H = hamiltonian(to_ising(cover_qubo(5, seed=4)), 0.5)
    yield (f"Jacobi eigenvalues, {H.shape[0]}x{H.shape[0]}",
           lambda: jacobi.jacobi_numba(H, 1e-10, 100),
           lambda: jacobi.jacobi_numpy(H, 1e-10, 100))

    T, basis = simplex_tableau(2)
    yield ("Bland simplex, 40x120 tableau",
           lambda: simplex.bland_loop_numba(T.copy(), basis.copy(), 120, 1e-9, 10000),
           lambda: simplex.bland_loop_numpy(T.copy(), basis.copy(), 120, 1e-9, 10000))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    if not USE_NUMBA:
        raise SystemExit("numba path inactive; unset HYBRIDFIT_KERNELS=numpy and install numba")
    print(f"{'kernel':<44} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}")
    for name, fast, slow in cases():
        t_fast = best_of(fast, args.repeats)
        t_slow = best_of(slow, args.repeats)
        print(f"{name:<44} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
