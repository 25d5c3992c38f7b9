"""Incremental hybrid loop: sample bases, solve the cover QUBO, bound the gap.

Each iteration adds one infeasible basis to the edge set ``A``, compiles the
penalty QUBO over ``A``, solves it with the configured backend and tests
whether the points left after removing the selected vertices form a
consensus set. ``LP(A)`` is a certified lower bound on the minimum number
of outliers, so ``|z_best| - LP(A)`` bounds how far the best consensus set
can be from the optimum.
"""
import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .annealer import AnnealConfig, simulated_anneal, solve_cover_qubo_exact
from .geometry import BasisError, extract_basis, feasibility, minimax
from .hypergraph import HyperedgeSet, lp_lower_bound
from .qubo import build_qubo, decode

VARIANTS = ("full", "early")
BACKENDS = ("sa", "exact")
SUBSET_REDRAWS = 10


@dataclass(frozen=True)
class DriverConfig:
    """Settings for :func:`run`.

    ``decay_factor`` divides the penalty every ``decay_period`` iterations,
    never going below ``lambda_floor``; a period longer than
    ``max_iterations`` keeps the penalty fixed. ``restarts`` and ``sweeps``
    are passed to the annealer on each iteration.
    """

    max_iterations: int = 200
    lambda_initial: float = 1.0
    lambda_floor: float = 0.01
    decay_factor: float = 2.0
    decay_period: int = 50
    epsilon: float = None
    variant: str = "full"
    seed: int = 0
    backend: str = "sa"
    restarts: int = 10
    sweeps: int = 200

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.lambda_floor > 0:
            raise ValueError("lambda_floor must be positive")
        if self.lambda_initial < self.lambda_floor:
            raise ValueError("lambda_initial must not be below lambda_floor")
        if not self.decay_factor > 0:
            raise ValueError("decay_factor must be positive")
        if self.decay_period < 1:
            raise ValueError("decay_period must be at least 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    z_norm: int
    lp_bound: float
    feasible: int
    penalty: float
    edge_count: int
    best_z_norm: int


@dataclass
class RunReport:
    z_best: np.ndarray
    consensus: tuple
    witness: np.ndarray
    error_bound: float
    records: list
    edges: HyperedgeSet
    found_consensus: bool = False
    iterations: int = 0
    config: DriverConfig = field(default=None)

    def to_dict(self):
        return {
            "z_best": self.z_best.astype(int).tolist(),
            "consensus": list(self.consensus),
            "consensus_size": len(self.consensus),
            "witness": [float(v) for v in self.witness],
            "error_bound": float(self.error_bound),
            "found_consensus": bool(self.found_consensus),
            "iterations": int(self.iterations),
            "edges": [list(e) for e in self.edges],
            "records": [
                {"iteration": r.iteration, "z_norm": r.z_norm, "lp_bound": r.lp_bound,
                 "feasible": r.feasible, "lambda": r.penalty, "edge_count": r.edge_count,
                 "best_z_norm": r.best_z_norm}
                for r in self.records
            ],
        }


class ConsensusRequired(ValueError):
    """The error bound is only defined for consensus-set complements."""


def error_bound(z_best, edges, problem=None):
    """``|z_best| - LP(A)``.

    With ``problem`` given, the points left by ``z_best`` are checked to be
    a consensus set first.
    """
    z = np.asarray(z_best).reshape(-1)
    if problem is not None:
        keep = np.flatnonzero(z == 0)
        if feasibility(problem, keep):
            raise ConsensusRequired("bound requires a consensus set")
    return float(z.sum()) - lp_lower_bound(edges)


def penalty_schedule(cfg, iteration):
    """Penalty in force at 1-based ``iteration`` after any decay."""
    decays = iteration // cfg.decay_period
    lam = cfg.lambda_initial
    for _ in range(decays):
        lam = max(lam / cfg.decay_factor, cfg.lambda_floor)
    return lam


def _solve(q, cfg, rng):
    if cfg.backend == "exact":
        return solve_cover_qubo_exact(q)
    seed = int(rng.integers(0, 2**32))
    return simulated_anneal(q, AnnealConfig(restarts=cfg.restarts, sweeps=cfg.sweeps, seed=seed))


def _redraw_candidates(problem, outliers, inliers, all_points, rng):
    for _ in range(SUBSET_REDRAWS):
        pick = inliers[rng.random(inliers.size) < 0.5]
        cand = np.union1d(outliers, pick)
        if cand.size and feasibility(problem, cand):
            return cand
    return all_points


def run(problem, cfg=None):
    """Run the hybrid loop on ``problem``."""
    cfg = cfg or DriverConfig()
    if cfg.epsilon is not None:
        problem = replace(problem, epsilon=cfg.epsilon)
    n = problem.n_points
    everything = np.arange(n)
    edges = HyperedgeSet(n)

    if feasibility(problem, everything) == 0:
        fit = minimax(problem, everything)
        return RunReport(z_best=np.zeros(n, dtype=np.int8), consensus=tuple(range(n)),
                         witness=fit.minimizer, error_bound=0.0, records=[], edges=edges,
                         found_consensus=True, iterations=0, config=cfg)

    rng = np.random.default_rng(cfg.seed)
    candidates = everything
    z_best = np.ones(n, dtype=np.int8)
    found = False
    lam = cfg.lambda_initial
    records = []
    m = 0
    for m in range(1, cfg.max_iterations + 1):
        try:
            basis = extract_basis(problem, candidates)
        except BasisError:
            candidates = everything
            basis = extract_basis(problem, candidates)
        edges.add(basis)
        if m % cfg.decay_period == 0:
            lam = max(lam / cfg.decay_factor, cfg.lambda_floor)
        q = build_qubo(edges, problem.comb_dim, lam)
        z, _ = decode(q, _solve(q, cfg, rng).best_v)
        removed = np.flatnonzero(z)
        kept = np.flatnonzero(z == 0)
        feasible = feasibility(problem, kept) == 0
        if feasible:
            if not found or z.sum() < z_best.sum():
                z_best = z.copy()
            found = True
            candidates = _redraw_candidates(problem, removed, kept, everything, rng)
        else:
            candidates = kept
        records.append(IterationRecord(iteration=m, z_norm=int(z.sum()),
                                       lp_bound=lp_lower_bound(edges), feasible=int(feasible),
                                       penalty=lam, edge_count=len(edges),
                                       best_z_norm=int(z_best.sum())))
        if feasible and cfg.variant == "early":
            break

    consensus = tuple(int(i) for i in np.flatnonzero(z_best == 0))
    witness = minimax(problem, consensus).minimizer if consensus else np.zeros(problem.dim)
    bound = float(z_best.sum()) - (records[-1].lp_bound if records else 0.0)
    return RunReport(z_best=z_best, consensus=consensus, witness=witness, error_bound=bound,
                     records=records, edges=edges, found_consensus=found, iterations=m,
                     config=cfg)


LOG_HEADER = ["iter", "edges", "z_norm", "lp_bound", "feasible", "lambda"]


def write_iteration_log(report, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOG_HEADER)
        for r in report.records:
            w.writerow([r.iteration, r.edge_count, r.z_norm, repr(float(r.lp_bound)),
                        r.feasible, repr(float(r.penalty))])


def read_iteration_log(path):
    """Rows of an iteration log as dicts with typed values."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != LOG_HEADER:
            raise ValueError(f"{path}: expected header {','.join(LOG_HEADER)}")
        return [{"iter": int(r["iter"]), "edges": int(r["edges"]), "z_norm": int(r["z_norm"]),
                 "lp_bound": float(r["lp_bound"]), "feasible": int(r["feasible"]),
                 "lambda": float(r["lambda"])} for r in reader]
