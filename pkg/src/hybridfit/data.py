"""Instance generation, file formats and the RANSAC baseline.

File formats:

* affine problems: CSV with header ``a1,...,ad,b``;
* correspondences: CSV with header ``u1,v1,u2,v2``;
* both take a JSON sidecar (same stem, ``.json``) carrying ``epsilon`` and
  optionally ``dim`` / ``comb_dim``.
"""
import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import FittingProblem

CORRESPONDENCE_HEADER = ["u1", "v1", "u2", "v2"]


@dataclass(frozen=True)
class SyntheticSpec:
    """1D line-fitting instance in the unit square.

    ``epsilon`` defaults to three inlier standard deviations.
    """

    n_points: int
    outlier_ratio: float
    sigma_in: float = 0.1
    sigma_out: float = 1.5
    seed: int = 0
    epsilon: float = None

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError("n_points must be positive")
        if not 0.0 <= self.outlier_ratio < 1.0:
            raise ValueError("outlier_ratio must lie in [0, 1)")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", 3.0 * self.sigma_in)


@dataclass(frozen=True)
class SyntheticTruth:
    model: np.ndarray
    inlier_mask: np.ndarray


def generate_synthetic(spec):
    """Points ``(a_i, b_i)`` around a random line ``b = a x``, clipped to [0, 1].

    Exactly ``floor(outlier_ratio * N)`` points receive the outlier noise.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_points
    a = rng.uniform(0.0, 1.0, n)
    x = rng.uniform(0.0, 1.0)
    n_out = int(np.floor(spec.outlier_ratio * n))
    outliers = rng.permutation(n)[:n_out]
    mask = np.ones(n, dtype=bool)
    mask[outliers] = False
    noise = np.where(mask, rng.normal(0.0, spec.sigma_in, n), rng.normal(0.0, spec.sigma_out, n))
    b = np.clip(a * x + noise, 0.0, 1.0)
    problem = FittingProblem(a[:, None], b, spec.epsilon)
    return problem, SyntheticTruth(model=np.array([x]), inlier_mask=mask)


@dataclass(frozen=True)
class CorrespondenceSet:
    """Point matches ``(u, v) <-> (u', v')`` as a ``(K, 4)`` array."""

    pairs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pairs, dtype=float)
        if p.ndim != 2 or p.shape[1] != 4:
            raise ValueError("correspondences must be a (K, 4) array")
        if not np.isfinite(p).all():
            raise ValueError("correspondence coordinates must be finite")
        object.__setattr__(self, "pairs", p)

    def __len__(self):
        return self.pairs.shape[0]


def hartley_normalise(points):
    """Similarity taking ``points`` to zero centroid and mean distance sqrt(2).

    Returns ``(normalised_points, T)`` with ``T`` the 3x3 transform.
    """
    centroid = points.mean(axis=0)
    shifted = points - centroid
    mean_dist = np.sqrt((shifted ** 2).sum(axis=1)).mean()
    if mean_dist < 1e-12:
        raise ValueError("degenerate normalisation: all points coincide")
    s = np.sqrt(2.0) / mean_dist
    T = np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])
    return shifted * s, T


def linearize_fundamental(corr, epsilon):
    """Algebraic epipolar residuals with the gauge ``F[2, 2] = 1``.

    Row ``i`` is ``[u'u, u'v, u', v'u, v'v, v', u, v]`` in Hartley-normalised
    coordinates and ``b_i = -1``, so ``|a_i @ f - b_i|`` equals
    ``|x'^T F x|`` for ``F`` built from ``f`` and a trailing one.
    """
    if len(corr) < 8:
        raise ValueError(f"need at least 8 correspondences, got {len(corr)}")
    p1, _ = hartley_normalise(corr.pairs[:, :2])
    p2, _ = hartley_normalise(corr.pairs[:, 2:])
    u, v = p1[:, 0], p1[:, 1]
    u2, v2 = p2[:, 0], p2[:, 1]
    A = np.column_stack([u2 * u, u2 * v, u2, v2 * u, v2 * v, v2, u, v])
    return FittingProblem(A, -np.ones(len(corr)), epsilon)


def fundamental_from_params(f):
    return np.append(np.asarray(f, dtype=float), 1.0).reshape(3, 3)


def ransac_baseline(problem, iterations, seed=0):
    """Minimal-sample RANSAC: exact fits through ``d`` random points.

    Returns ``(consensus, witness)`` for the largest consensus seen.
    """
    n, d = problem.n_points, problem.dim
    if d > n:
        raise ValueError(f"model dimension {d} exceeds number of points {n}")
    rng = np.random.default_rng(seed)
    best = np.zeros(0, dtype=np.int64)
    witness = np.zeros(d)
    A, b = problem.coefficients, problem.offsets
    for _ in range(iterations):
        sample = rng.choice(n, size=d, replace=False)
        M = A[sample]
        if np.linalg.cond(M) > 1e12:
            continue
        x = np.linalg.solve(M, b[sample])
        inliers = problem.consensus(x)
        if inliers.size > best.size:
            best, witness = inliers, x
    return best, witness


# -- files -----------------------------------------------------------------

def sidecar_path(path):
    return Path(path).with_suffix(".json")


def _fmt(x):
    return repr(float(x))


def write_problem(problem, path, extra=None):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"a{k + 1}" for k in range(problem.dim)] + ["b"])
        for a, b in zip(problem.coefficients, problem.offsets):
            w.writerow([_fmt(v) for v in a] + [_fmt(b)])
    meta = {"kind": "affine", "epsilon": problem.epsilon, "dim": problem.dim,
            "comb_dim": problem.comb_dim}
    meta.update(extra or {})
    write_json(meta, sidecar_path(path))


def write_correspondences(corr, path, epsilon=None):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CORRESPONDENCE_HEADER)
        for row in corr.pairs:
            w.writerow([_fmt(v) for v in row])
    meta = {"kind": "correspondences"}
    if epsilon is not None:
        meta["epsilon"] = float(epsilon)
    write_json(meta, sidecar_path(path))


def read_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    if data.size == 0:
        raise ValueError(f"{path}: no data rows")
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: rows do not match header")
    return header, data


def read_sidecar(path):
    side = sidecar_path(path)
    if side.exists():
        with open(side) as fh:
            return json.load(fh)
    return {}


def read_problem(path, epsilon=None):
    """Load an affine or correspondence CSV as a :class:`FittingProblem`.

    An explicit ``epsilon`` overrides the sidecar value.
    """
    header, data = read_table(path)
    meta = read_sidecar(path)
    eps = epsilon if epsilon is not None else meta.get("epsilon")
    if eps is None:
        raise ValueError(f"{path}: no epsilon given and none in sidecar")
    if header == CORRESPONDENCE_HEADER:
        return linearize_fundamental(CorrespondenceSet(data), eps)
    d = len(header) - 1
    if header != [f"a{k + 1}" for k in range(d)] + ["b"]:
        raise ValueError(f"{path}: unrecognised header {header}")
    return FittingProblem(data[:, :d], data[:, d], eps, meta.get("comb_dim"))


def read_correspondences(path):
    header, data = read_table(path)
    if header != CORRESPONDENCE_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CORRESPONDENCE_HEADER)}")
    return CorrespondenceSet(data)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_truth(truth, path):
    write_json({"model": truth.model, "inlier_mask": truth.inlier_mask.astype(int)}, path)


def read_truth(path):
    d = read_json(path)
    return SyntheticTruth(model=np.asarray(d["model"], dtype=float),
                          inlier_mask=np.asarray(d["inlier_mask"], dtype=bool))
