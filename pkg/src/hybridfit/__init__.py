"""Consensus maximisation through hypergraph vertex cover and penalty QUBOs."""
from .geometry import FittingProblem, extract_basis, feasibility, minimax
from .hypergraph import HyperedgeSet, enumerate_infeasible_bases, lp_lower_bound, solve_cover_exact
from .qubo import build_qubo, to_ising
from .annealer import AnnealConfig, exact_solve, simulated_anneal
from .driver import DriverConfig, run

__version__ = "0.1.0"

__all__ = [
    "AnnealConfig", "DriverConfig", "FittingProblem", "HyperedgeSet", "build_qubo",
    "enumerate_infeasible_bases", "exact_solve", "extract_basis", "feasibility",
    "lp_lower_bound", "minimax", "run", "simulated_anneal", "solve_cover_exact", "to_ising",
]
