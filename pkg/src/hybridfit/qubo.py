"""Penalty QUBO for the hypergraph cover ILP, and its Ising form.

Variables are ``v = [z, t_1, ..., t_M]``: one bit per point followed by
``delta - 1`` slack bits per edge. Each cover constraint ``a_m @ z >= 1`` is
written as the equality ``a_m @ z - sum(t_m) = 1`` and lifted into the
objective with weight ``penalty``.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuboProblem:
    """Upper-triangular QUBO ``v @ matrix @ v + offset``.

    ``edges`` and the block sizes are kept so that solutions can be decoded
    back into a cover vector and per-edge constraint checks.
    """

    matrix: np.ndarray
    offset: float
    penalty: float
    n_vertices: int
    slack_width: int
    edges: tuple

    @property
    def n_variables(self):
        return self.matrix.shape[0]

    @property
    def n_constraints(self):
        return len(self.edges)

    def slack_slice(self, m):
        start = self.n_vertices + m * self.slack_width
        return slice(start, start + self.slack_width)


@dataclass(frozen=True)
class IsingModel:
    """Normalised Ising model ``sum h_i s_i + sum J_ij s_i s_j + offset``.

    Multiplying the energy by ``scale`` recovers the QUBO energy of the
    corresponding bit vector ``v = (s + 1) / 2``.
    """

    biases: np.ndarray
    couplings: dict
    offset: float
    scale: float

    @property
    def n_spins(self):
        return self.biases.shape[0]

    def energy(self, spins):
        s = np.asarray(spins, dtype=float)
        e = float(self.biases @ s) + self.offset
        for (i, j), w in self.couplings.items():
            e += w * s[i] * s[j]
        return e

    def coupling_matrix(self):
        J = np.zeros((self.n_spins, self.n_spins))
        for (i, j), w in self.couplings.items():
            J[i, j] = w
        return J


def constraint_matrix(edges, delta):
    """``H_A = [A^T, -S, -1]`` with ``S = I_M kron 1^T`` (``delta - 1`` ones)."""
    n_v = edges.n_vertices
    m = len(edges)
    width = delta - 1
    n = n_v + width * m
    H = np.zeros((m, n + 1))
    H[:, :n_v] = edges.incidence().T
    for k in range(m):
        H[k, n_v + k * width:n_v + (k + 1) * width] = -1.0
    H[:, n] = -1.0
    return H


def lifted_matrix(edges, delta, penalty):
    """Square matrix of the lifted objective over ``[v, 1]`` before folding."""
    H = constraint_matrix(edges, delta)
    size = H.shape[1]
    J = np.zeros((size, size))
    idx = np.arange(edges.n_vertices)
    J[idx, idx] = 1.0
    return J + penalty * (H.T @ H)


def lifted_energy(edges, delta, penalty, v):
    w = np.append(np.asarray(v, dtype=float), 1.0)
    return float(w @ lifted_matrix(edges, delta, penalty) @ w)


def build_qubo(edges, delta, penalty):
    """Compile the cover ILP over ``edges`` into an upper-triangular QUBO.

    Raises:
        ValueError: an edge is larger than ``delta`` or ``penalty <= 0``.
    """
    if not penalty > 0:
        raise ValueError("penalty must be positive")
    if delta < 1:
        raise ValueError("delta must be at least 1")
    too_big = [e for e in edges if len(e) > delta]
    if too_big:
        raise ValueError(f"edge {too_big[0]} has more than delta={delta} vertices")
    Q = lifted_matrix(edges, delta, penalty)
    upper = np.triu(Q) + np.triu(Q.T, 1)
    n = Q.shape[0] - 1
    folded = upper[:n, :n].copy()
    folded[np.arange(n), np.arange(n)] += upper[:n, n]
    return QuboProblem(matrix=folded, offset=float(upper[n, n]), penalty=float(penalty),
                       n_vertices=edges.n_vertices, slack_width=delta - 1,
                       edges=tuple(edges))


def _check_length(q, v):
    v = np.asarray(v).reshape(-1)
    if v.size != q.n_variables:
        raise ValueError(f"bit vector has length {v.size}, expected {q.n_variables}")
    return v


def qubo_energy(q, v):
    v = _check_length(q, v).astype(float)
    return float(v @ q.matrix @ v) + q.offset


def decode(q, v):
    """Split a solution into the cover vector ``z`` and its violation count."""
    v = _check_length(q, v).astype(np.int64)
    z = v[:q.n_vertices].astype(np.int8)
    violations = 0
    for m, e in enumerate(q.edges):
        if int(z[list(e)].sum()) - int(v[q.slack_slice(m)].sum()) != 1:
            violations += 1
    return z, violations


def to_ising(q):
    """Spin form of ``q`` under ``v = (s + 1) / 2``, scaled into hardware ranges.

    Biases collect both the row and the column entries of the
    upper-triangular matrix, so the spin energy matches the QUBO energy for
    every state. A single scale ``max(max|h|/2, max|J|, 1)`` is applied to
    biases, couplings and offset together.
    """
    Q = q.matrix
    diag = np.diag(Q).copy()
    off = np.triu(Q, 1)
    h = diag / 2.0 + (off.sum(axis=1) + off.sum(axis=0)) / 4.0
    const = diag.sum() / 2.0 + off.sum() / 4.0 + q.offset
    rows, cols = np.nonzero(off)
    jvals = off[rows, cols] / 4.0
    scale = max(np.abs(h).max(initial=0.0) / 2.0, np.abs(jvals).max(initial=0.0), 1.0)
    couplings = {(int(i), int(j)): float(w / scale) for i, j, w in zip(rows, cols, jvals)}
    return IsingModel(biases=h / scale, couplings=couplings, offset=float(const / scale),
                      scale=float(scale))


def write_qubo(q, path):
    """Text export: ``n nnz`` header, ``i j value`` rows, offset comment."""
    Q = q.matrix
    rows, cols = np.nonzero(Q)
    lines = [f"{Q.shape[0]} {rows.size}"]
    lines += [f"{i} {j} {float(Q[i, j])!r}" for i, j in zip(rows, cols)]
    lines.append(f"# offset {float(q.offset)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_qubo(path):
    """Parse :func:`write_qubo` output into ``(matrix, offset)``."""
    offset = 0.0
    entries = []
    header = None
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "offset":
                    offset = float(parts[1])
                continue
            parts = line.split()
            if header is None:
                header = (int(parts[0]), int(parts[1]))
                continue
            entries.append((int(parts[0]), int(parts[1]), float(parts[2])))
    if header is None:
        raise ValueError(f"{path}: missing 'n nnz' header")
    n, nnz = header
    if len(entries) != nnz:
        raise ValueError(f"{path}: header announces {nnz} entries, found {len(entries)}")
    Q = np.zeros((n, n))
    for i, j, w in entries:
        if j < i:
            raise ValueError(f"{path}: entry ({i}, {j}) below the diagonal")
        Q[i, j] = w
    return Q, offset


def qubo_from_matrix(matrix, offset=0.0):
    """Wrap a bare upper-triangular matrix (no cover structure attached)."""
    Q = np.asarray(matrix, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError("QUBO matrix must be square")
    if np.any(np.tril(Q, -1)):
        raise ValueError("QUBO matrix must be upper-triangular")
    return QuboProblem(matrix=Q, offset=float(offset), penalty=1.0,
                       n_vertices=Q.shape[0], slack_width=0, edges=())
