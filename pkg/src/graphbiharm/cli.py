"""Command-line front end.

Exit codes: 0 success, 1 validation/config error, 2 solver non-convergence.
``GRAPHBIHARM_TOL`` and ``GRAPHBIHARM_SEED`` override the defaults of
``--tol`` and ``--seed``; explicit flags win over the environment.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from .calculus import check_ibp, vertex_function
from .convergence import sweep
from .errors import ConfigError, GraphbiharmError
from .graph import make_domain, make_potential, random_graph, validate_assumptions
from .variational import ProblemParams, SolverConfig, solve_dirichlet, solve_ground_state

IBP_TOL = 1e-10


def _env(name: str, cast, fallback):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"environment variable {name}={raw!r} is not a {cast.__name__}")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="residual tolerance")
    p.add_argument("--max-iter", type=int, default=20000)
    p.add_argument("--n-starts", type=int, default=8)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--step-init", type=float, default=1.0)
    p.add_argument("--backtrack-factor", type=float, default=0.5)


def _add_output_flags(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--output", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphbiharm")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="graph statistics and assumption report")
    p.add_argument("--graph", required=True)
    p.add_argument("--potential", default=None)

    p = sub.add_parser("verify", help="run the integration-by-parts identity suite")
    p.add_argument("--graph", default=None, help="verify on this graph instead of random ones")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-vertices", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("solve", help="ground state of the coupled equation")
    p.add_argument("--graph", required=True)
    p.add_argument("--potential", default=None)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, required=True)
    p.add_argument("--p", dest="p", type=float, required=True)
    _add_solver_flags(p)
    _add_output_flags(p, "json")

    p = sub.add_parser("solve-dirichlet", help="ground state of the Dirichlet problem")
    p.add_argument("--graph", required=True)
    p.add_argument("--potential", default=None)
    p.add_argument("--omega", required=True,
                   help="comma-separated vertex labels, or 'well' (needs a potential)")
    p.add_argument("--p", dest="p", type=float, required=True)
    _add_solver_flags(p)
    _add_output_flags(p, "json")

    p = sub.add_parser("sweep", help="coupling ladder with Dirichlet limit")
    p.add_argument("--graph", required=True)
    p.add_argument("--potential", default=None)
    p.add_argument("--p", dest="p", type=float, required=True)
    p.add_argument("--lambdas", required=True, help="comma-separated ascending couplings")
    p.add_argument("--emit-fields", action="store_true")
    _add_solver_flags(p)
    _add_output_flags(p, "csv")
    return ap


def _load(args):
    g, a_file = io.load_graph(args.graph)
    a = a_file
    if getattr(args, "potential", None):
        a = io.load_potential(args.potential, g)
    return g, a


def _config(args) -> SolverConfig:
    tol = args.tol if args.tol is not None else _env("GRAPHBIHARM_TOL", float, 1e-9)
    seed = args.seed if args.seed is not None else _env("GRAPHBIHARM_SEED", int, 0)
    return SolverConfig(tol=tol, max_iter=args.max_iter, n_starts=args.n_starts,
                        seed=seed, step_init=args.step_init,
                        backtrack_factor=args.backtrack_factor)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_info(args) -> int:
    g, a = _load(args)
    print(f"graph: {g.n_vertices} vertices, {g.n_edges} edges")
    print(f"mu_min: {g.mu_min:.12g}")
    print(f"max weight sum: {g.max_weight_sum:.12g}")
    print(f"fingerprint: {io.fingerprint(g, a)}")
    if a is not None:
        rep = validate_assumptions(g, a)
        print(f"well: {len(rep.well)} vertices, connected: {rep.well_connected}, "
              f"bounded: {rep.well_bounded} (finite graph)")
        if rep.min_outside_well is not None:
            print(f"min potential outside well: {rep.min_outside_well:.12g}")
        print(f"growth proxy monotone along rings: {rep.growth_monotone}")
        for w in rep.warnings:
            print(f"warning: {w}")
    return 0


def _cmd_verify(args) -> int:
    tol = args.tol if args.tol is not None else _env("GRAPHBIHARM_TOL", float, IBP_TOL)
    seed = args.seed if args.seed is not None else _env("GRAPHBIHARM_SEED", int, 0)
    rng = np.random.default_rng(seed)
    fixed = io.load_graph(args.graph)[0] if args.graph else None
    worst = 0.0
    breaches = 0
    for _ in range(args.trials):
        g = fixed if fixed is not None else random_graph(rng, n_max=args.max_vertices)
        u = vertex_function(g, rng.standard_normal(g.n_vertices))
        v = vertex_function(g, rng.standard_normal(g.n_vertices))
        interior = rng.choice(g.n_vertices, size=int(rng.integers(1, g.n_vertices + 1)),
                              replace=False)
        dom = make_domain(g, interior.astype(np.intp))
        v_dom = vertex_function(g, v.values * dom.interior_mask)
        for res in (check_ibp(g, u, v), check_ibp(g, u, v_dom, dom)):
            rel = res.max_relative()
            worst = max(worst, rel)
            if not res.within(tol):
                breaches += 1
    print(f"trials: {args.trials}")
    print(f"max relative residual: {worst:.3e} (tolerance {tol:.1e})")
    print(f"breaches: {breaches}")
    return 0 if breaches == 0 else 1


def _solution_report(args, g, a, sol, extra: dict) -> tuple[str, int]:
    if args.format == "csv":
        text = io.solution_csv(sol, g)
    else:
        doc = {"command": args.command, "graph": {"path": args.graph,
                                                  "fingerprint": io.fingerprint(g, a),
                                                  "n_vertices": g.n_vertices,
                                                  "n_edges": g.n_edges}}
        doc.update(extra)
        cfg = _config(args)
        doc["config"] = {"tol": cfg.tol, "max_iter": cfg.max_iter,
                         "n_starts": cfg.n_starts, "seed": cfg.seed,
                         "step_init": cfg.step_init,
                         "backtrack_factor": cfg.backtrack_factor}
        doc["solution"] = io.solution_dict(sol, g)
        text = io.json_text(doc) + "\n"
    return text, (0 if sol.converged else 2)


def _cmd_solve(args) -> int:
    g, a = _load(args)
    if a is None:
        a = make_potential(g, 0.0)
    params = ProblemParams(a=a, lam=args.lam, p=args.p)
    sol = solve_ground_state(g, params, _config(args))
    text, status = _solution_report(args, g, a, sol,
                                    {"params": {"lambda": args.lam, "p": args.p}})
    _emit(args, text)
    return status


def _cmd_solve_dirichlet(args) -> int:
    g, a = _load(args)
    if args.omega == "well":
        if a is None:
            raise ConfigError("--omega well requires a potential")
        interior = [g.labels[i] for i in a.well]
    else:
        interior = args.omega.split(",")
    dom = make_domain(g, interior)
    sol = solve_dirichlet(g, dom, args.p, _config(args))
    extra = {"params": {"p": args.p,
                        "omega": [str(l) for l in dom.interior_labels],
                        "boundary": [str(l) for l in dom.boundary_labels]}}
    text, status = _solution_report(args, g, a, sol, extra)
    _emit(args, text)
    return status


def _cmd_sweep(args) -> int:
    g, a = _load(args)
    if a is None:
        raise ConfigError("sweep requires a potential (file column or --potential)")
    lambdas = [float(tok) for tok in args.lambdas.split(",") if tok]
    report = sweep(g, a, args.p, lambdas, _config(args),
                   keep_solutions=args.emit_fields or args.format == "json")
    if args.format == "csv":
        text = report.to_csv()
    else:
        doc = {"command": "sweep", "path": args.graph}
        doc.update(io.sweep_report_dict(report, g, a, emit_fields=args.emit_fields))
        text = io.json_text(doc) + "\n"
    _emit(args, text)
    bad = [r for r in report.rows if not r.converged]
    return 2 if bad else 0


_HANDLERS = {
    "info": _cmd_info,
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "solve-dirichlet": _cmd_solve_dirichlet,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except GraphbiharmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
