"""Spectral gap of the transverse-field annealing Hamiltonian.

``H(s) = (1 - s) sum_i X_i + s (sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j)``
on ``n`` qubits. Qubit ``i`` is the ``i``-th Kronecker factor, i.e. bit
``n - 1 - i`` of the basis index, and ``Z`` is ``+1`` on bit value 0.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .kernels.jacobi import jacobi_eigenvalues

MAX_QUBITS = 12
DEGENERACY_TOL = 1e-8
JACOBI_MAX_DIM = 64
DENSE_MAX_DIM = 1024


@dataclass(frozen=True)
class GapProfile:
    s_grid: np.ndarray
    gaps: np.ndarray
    min_gap: float
    argmin_s: float
    degenerate: bool


def _check_size(model):
    if model.n_spins > MAX_QUBITS:
        raise ValueError(f"spectral analysis restricted to <= {MAX_QUBITS} qubits "
                         f"(got {model.n_spins})")


def spin_table(n):
    """``(2**n, n)`` array of Z eigenvalues per basis state and qubit."""
    k = np.arange(1 << n)[:, None]
    bits = (k >> (n - 1 - np.arange(n))[None, :]) & 1
    return 1 - 2 * bits


def final_diagonal(model):
    """Diagonal of the problem Hamiltonian (Ising energies, offset excluded)."""
    Z = spin_table(model.n_spins).astype(float)
    diag = Z @ model.biases
    for (i, j), w in model.couplings.items():
        diag += w * Z[:, i] * Z[:, j]
    return diag


def _flip_pairs(n):
    k = np.arange(1 << n)
    rows = np.concatenate([k] * n) if n else k[:0]
    cols = np.concatenate([k ^ (1 << (n - 1 - i)) for i in range(n)]) if n else k[:0]
    return rows, cols


def hamiltonian(model, s):
    """Dense ``H(s)`` as a ``2**n x 2**n`` array."""
    _check_size(model)
    if not 0.0 <= s <= 1.0:
        raise ValueError("annealing time s must lie in [0, 1]")
    n = model.n_spins
    H = np.diag(s * final_diagonal(model))
    rows, cols = _flip_pairs(n)
    H[rows, cols] += 1.0 - s
    return H


def hamiltonian_sparse(model, s, diag=None):
    n = model.n_spins
    if diag is None:
        diag = final_diagonal(model)
    dim = 1 << n
    rows, cols = _flip_pairs(n)
    off = scipy.sparse.csr_matrix((np.full(rows.size, 1.0 - s), (rows, cols)), shape=(dim, dim))
    return off + scipy.sparse.diags(s * diag)


def two_lowest(model, s, solver="auto", diag=None):
    """The two smallest eigenvalues ``(E0, E1)`` of ``H(s)``."""
    n = model.n_spins
    dim = 1 << n
    if diag is None:
        diag = final_diagonal(model)
    if dim == 1:
        e = s * diag[0]
        return e, e
    if s == 1.0:
        lo = np.partition(diag, 1)[:2]
        return float(lo.min()), float(lo.max())
    if solver == "auto":
        solver = "jacobi" if dim <= JACOBI_MAX_DIM else "lapack" if dim <= DENSE_MAX_DIM else "lanczos"
    if solver == "jacobi":
        vals = jacobi_eigenvalues(hamiltonian(model, s))[0]
    elif solver == "lapack":
        vals = scipy.linalg.eigh(hamiltonian(model, s), eigvals_only=True, subset_by_index=[0, 1])
    elif solver == "lanczos":
        H = hamiltonian_sparse(model, s, diag)
        v0 = np.random.default_rng(0).random(dim)
        vals = np.sort(scipy.sparse.linalg.eigsh(H, k=2, which="SA", v0=v0, tol=1e-12,
                                                 return_eigenvectors=False))
    else:
        raise ValueError(f"unknown eigensolver {solver!r}")
    return float(vals[0]), float(vals[1])


def spectral_gap(model, grid_points=101, solver="auto"):
    """Gap ``E1 - E0`` of ``H(s)`` on a uniform grid over ``[0, 1]``."""
    _check_size(model)
    if grid_points < 3:
        raise ValueError("need at least 3 grid points")
    grid = np.linspace(0.0, 1.0, grid_points)
    diag = final_diagonal(model)
    gaps = np.empty(grid_points)
    for k, s in enumerate(grid):
        e0, e1 = two_lowest(model, float(s), solver, diag)
        gaps[k] = max(e1 - e0, 0.0)
    k = int(np.argmin(gaps))
    return GapProfile(s_grid=grid, gaps=gaps, min_gap=float(gaps[k]), argmin_s=float(grid[k]),
                      degenerate=bool(gaps[k] <= DEGENERACY_TOL))


def write_profile_csv(profile, path):
    with open(path, "w") as fh:
        fh.write("s,gap\n")
        for s, g in zip(profile.s_grid, profile.gaps):
            fh.write(f"{float(s)!r},{float(g)!r}\n")


def read_profile_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]
