"""Command-line entry point.

Every subcommand takes ``--config FILE`` (a JSON object of option values,
or a manifest written by an earlier run) and ``--out DIR``. Option values
resolve as built-in defaults, then the config file, then explicit flags.
Each run writes ``manifest.json`` next to its outputs; passing that file
back through ``--config`` repeats the run and rewrites identical bytes.

Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""
import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .data import (SyntheticSpec, generate_synthetic, ransac_baseline, read_problem,
                   write_json, write_problem, write_truth)
from .driver import DriverConfig, run, write_iteration_log
from .geometry import BasisError
from .hypergraph import enumerate_infeasible_bases, lp_lower_bound, solve_cover_exact
from .qubo import build_qubo, qubo_from_matrix, read_qubo, to_ising, write_qubo
from .simplex import SimplexError
from .spectral import MAX_QUBITS, spectral_gap, write_profile_csv

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 2, 3


class InputError(Exception):
    pass


DEFAULTS = {
    "generate": {"n_points": 20, "outlier_ratio": 0.2, "sigma_in": 0.1, "sigma_out": 1.5,
                 "seed": 0, "epsilon": None},
    "solve": {"input": None, "epsilon": None, "variant": "full", "lambda_initial": 1.0,
              "decay_factor": 2.0, "decay_period": 50, "lambda_floor": 0.01,
              "max_iterations": 200, "backend": "sa", "restarts": 10, "sweeps": 200, "seed": 0},
    "ransac": {"input": None, "epsilon": None, "iterations": 1000, "seed": 0},
    "enumerate": {"input": None, "epsilon": None},
    "qubo-export": {"input": None, "epsilon": None, "lambda_initial": 1.0},
    "spectral-gap": {"input": None, "qubo": None, "epsilon": None, "lambda_min": 0.1,
                     "lambda_max": 100.0, "lambda_points": 7, "grid_points": 101},
}


def _versions():
    import scipy
    out = {"hybridfit": __version__, "numpy": np.__version__, "scipy": scipy.__version__}
    try:
        import numba
        out["numba"] = numba.__version__
    except ImportError:
        out["numba"] = None
    return out


def _add_common(p, with_input=True):
    S = argparse.SUPPRESS
    if with_input:
        p.add_argument("input", nargs="?", default=S, help="problem CSV")
        p.add_argument("--epsilon", type=float, default=S, help="inlier threshold override")
    p.add_argument("--config", default=None, help="JSON config or earlier manifest")
    p.add_argument("--out", default=None, help="output directory (default: current)")


def build_parser():
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="hybridfit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthetic 1D line-fitting instance")
    _add_common(p, with_input=False)
    p.add_argument("--n-points", dest="n_points", type=int, default=S)
    p.add_argument("--outlier-ratio", dest="outlier_ratio", type=float, default=S)
    p.add_argument("--sigma-in", dest="sigma_in", type=float, default=S)
    p.add_argument("--sigma-out", dest="sigma_out", type=float, default=S)
    p.add_argument("--epsilon", type=float, default=S, help="default: 3 * sigma-in")
    p.add_argument("--seed", type=int, default=S)

    p = sub.add_parser("solve", help="run the hybrid cover loop")
    _add_common(p)
    p.add_argument("--variant", choices=["full", "early"], default=S)
    p.add_argument("--lambda", dest="lambda_initial", type=float, default=S)
    p.add_argument("--gamma", dest="decay_factor", type=float, default=S,
                   help="penalty divisor applied every decay period")
    p.add_argument("--decay-period", dest="decay_period", type=int, default=S)
    p.add_argument("--lambda-floor", dest="lambda_floor", type=float, default=S)
    p.add_argument("--max-iterations", dest="max_iterations", type=int, default=S)
    p.add_argument("--backend", choices=["sa", "exact"], default=S)
    p.add_argument("--restarts", type=int, default=S)
    p.add_argument("--sweeps", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)

    p = sub.add_parser("ransac", help="minimal-sample RANSAC baseline")
    _add_common(p)
    p.add_argument("--iterations", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)

    p = sub.add_parser("enumerate", help="all infeasible bases, exact cover and LP bound")
    _add_common(p)

    p = sub.add_parser("qubo-export", help="compile the cover QUBO over all infeasible bases")
    _add_common(p)
    p.add_argument("--lambda", dest="lambda_initial", type=float, default=S)

    p = sub.add_parser("spectral-gap", help="minimum spectral gap over a penalty grid")
    _add_common(p)
    p.add_argument("--qubo", default=S, help="QUBO text file; writes its gap profile instead")
    p.add_argument("--lambda-min", dest="lambda_min", type=float, default=S)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=S)
    p.add_argument("--lambda-points", dest="lambda_points", type=int, default=S)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=S)
    return parser


def resolve_options(command, namespace):
    """Merge defaults, the ``--config`` file and explicit flags."""
    opts = dict(DEFAULTS[command])
    if namespace.config is not None:
        try:
            with open(namespace.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {namespace.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise InputError("config must be a JSON object")
        if "command" in cfg and "config" in cfg:
            if cfg["command"] != command:
                raise InputError(f"manifest is for '{cfg['command']}', not '{command}'")
            cfg = cfg["config"]
        unknown = sorted(set(cfg) - set(opts))
        if unknown:
            raise InputError(f"unknown config keys for {command}: {', '.join(unknown)}")
        opts.update(cfg)
    for key, value in vars(namespace).items():
        if key in opts:
            opts[key] = value
    return opts


def _load(opts):
    if opts["input"] is None:
        raise InputError("no input file given")
    path = Path(opts["input"])
    if not path.is_file():
        raise InputError(f"input file not found: {path}")
    try:
        return read_problem(path, opts["epsilon"])
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc


def _write_manifest(out, command, opts):
    write_json({"command": command, "config": opts, "seed": opts.get("seed"),
                "versions": _versions()}, out / "manifest.json")


def cmd_generate(opts, out):
    try:
        spec = SyntheticSpec(n_points=opts["n_points"], outlier_ratio=opts["outlier_ratio"],
                             sigma_in=opts["sigma_in"], sigma_out=opts["sigma_out"],
                             seed=opts["seed"], epsilon=opts["epsilon"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    problem, truth = generate_synthetic(spec)
    write_problem(problem, out / "problem.csv")
    write_truth(truth, out / "truth.json")
    print(f"wrote {out / 'problem.csv'} ({problem.n_points} points, "
          f"{int((~truth.inlier_mask).sum())} outliers)")


def cmd_solve(opts, out):
    problem = _load(opts)
    try:
        cfg = DriverConfig(max_iterations=opts["max_iterations"],
                           lambda_initial=opts["lambda_initial"],
                           lambda_floor=opts["lambda_floor"], decay_factor=opts["decay_factor"],
                           decay_period=opts["decay_period"], variant=opts["variant"],
                           seed=opts["seed"], backend=opts["backend"],
                           restarts=opts["restarts"], sweeps=opts["sweeps"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if cfg.backend == "exact" and problem.n_points > 24:
        raise InputError("exact backend restricted to N <= 24")
    start = time.perf_counter()
    report = run(problem, cfg)
    elapsed = time.perf_counter() - start
    write_json(report.to_dict(), out / "report.json")
    write_iteration_log(report, out / "iterations.csv")
    print(f"consensus={len(report.consensus)} bound={report.error_bound:g} time={elapsed:.3f}")


def cmd_ransac(opts, out):
    problem = _load(opts)
    if opts["iterations"] < 1:
        raise InputError("iterations must be positive")
    try:
        consensus, witness = ransac_baseline(problem, opts["iterations"], opts["seed"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    write_json({"consensus": consensus, "consensus_size": int(consensus.size),
                "witness": witness}, out / "ransac.json")
    print(f"consensus={consensus.size}")


def cmd_enumerate(opts, out):
    problem = _load(opts)
    try:
        edges = enumerate_infeasible_bases(problem)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    z, size = solve_cover_exact(edges)
    lp = lp_lower_bound(edges)
    write_json({"edges": [list(e) for e in edges], "min_cover": np.flatnonzero(z),
                "min_cover_size": int(size), "lp_bound": lp,
                "max_consensus": problem.n_points - int(size)}, out / "hypergraph.json")
    print(f"edges={len(edges)} min_cover={size} lp={lp:g}")


def _compile_all(problem, penalty):
    try:
        edges = enumerate_infeasible_bases(problem)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return build_qubo(edges, problem.comb_dim, penalty)


def _ising_dict(model):
    return {"biases": model.biases, "offset": model.offset, "scale": model.scale,
            "couplings": [[i, j, w] for (i, j), w in sorted(model.couplings.items())]}


def cmd_qubo_export(opts, out):
    problem = _load(opts)
    if not opts["lambda_initial"] > 0:
        raise InputError("penalty must be positive")
    q = _compile_all(problem, opts["lambda_initial"])
    write_qubo(q, out / "qubo.txt")
    write_json(_ising_dict(to_ising(q)), out / "ising.json")
    print(f"variables={q.n_variables} constraints={q.n_constraints}")


def cmd_spectral(opts, out):
    if opts["qubo"] is not None:
        path = Path(opts["qubo"])
        if not path.is_file():
            raise InputError(f"qubo file not found: {path}")
        try:
            matrix, offset = read_qubo(path)
            model = to_ising(qubo_from_matrix(matrix, offset))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if model.n_spins > MAX_QUBITS:
            raise InputError(f"spectral analysis restricted to <= {MAX_QUBITS} qubits")
        profile = spectral_gap(model, opts["grid_points"])
        write_profile_csv(profile, out / "profile.csv")
        print(f"min_gap={profile.min_gap!r} s={profile.argmin_s!r}")
        return
    problem = _load(opts)
    lo, hi, k = opts["lambda_min"], opts["lambda_max"], opts["lambda_points"]
    if not (0 < lo <= hi) or k < 1:
        raise InputError("need 0 < lambda-min <= lambda-max and lambda-points >= 1")
    lambdas = np.geomspace(lo, hi, k) if k > 1 else np.array([lo])
    rows = []
    for lam in lambdas:
        model = to_ising(_compile_all(problem, float(lam)))
        if model.n_spins > MAX_QUBITS:
            raise InputError(f"compiled QUBO has {model.n_spins} qubits, "
                             f"spectral analysis restricted to <= {MAX_QUBITS}")
        prof = spectral_gap(model, opts["grid_points"])
        rows.append((float(lam), prof.min_gap, prof.argmin_s, prof.degenerate))
    with open(out / "spectral.csv", "w") as fh:
        fh.write("lambda,min_gap\n")
        for lam, gap, _, _ in rows:
            fh.write(f"{lam!r},{gap!r}\n")
    write_json({"lambda": [r[0] for r in rows], "min_gap": [r[1] for r in rows],
                "argmin_s": [r[2] for r in rows], "degenerate": [r[3] for r in rows]},
               out / "spectral.json")
    print(f"lambdas={len(rows)} min_gap_range=[{min(r[1] for r in rows):g}, "
          f"{max(r[1] for r in rows):g}]")


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "ransac": cmd_ransac,
            "enumerate": cmd_enumerate, "qubo-export": cmd_qubo_export,
            "spectral-gap": cmd_spectral}


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        opts = resolve_options(ns.command, ns)
        out = Path(ns.out) if ns.out else Path.cwd()
        out.mkdir(parents=True, exist_ok=True)
        COMMANDS[ns.command](opts, out)
        _write_manifest(out, ns.command, opts)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SimplexError, BasisError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
