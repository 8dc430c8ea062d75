"""Text graph format, report serialization, and fingerprints.

Graph files are line-oriented::

    # comment
    graph <n_vertices> <n_edges>
    vertex <id> <mu> [<a>]
    edge <id1> <id2> <omega>

Vertex ids are whitespace-free tokens. The potential column is optional
but must be present on all vertex lines or none; it may instead live in a
separate file of ``vertex <id> <a>`` lines.

JSON output prints floats with 17 significant digits (archival,
round-trip exact); CSV prints 12 (plotting).
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Mapping, Sequence

from .errors import ParseError
from .graph import Graph, Potential, build_graph, make_potential


def _fmt(x: float, sig: int) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), f".{sig}g")


def json_text(obj, sig: int = 17, indent: int = 0) -> str:
    """Serialize to JSON with fixed-significant-digit floats."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or type(obj).__name__ == "bool_":
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj, sig)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f'{inner}{json_text(str(k))}: {json_text(v, sig, indent + 2)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, Sequence):
        if not obj:
            return "[]"
        items = [f"{inner}{json_text(v, sig, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    # numpy scalars and anything float-like
    return _fmt(float(obj), sig)


def save_graph_text(g: Graph, a: Potential | None = None) -> str:
    """Canonical text form: vertices in index order, edges ascending."""
    lines = [f"graph {g.n_vertices} {g.n_edges}"]
    for i, label in enumerate(g.labels):
        cells = [f"vertex {label} {_fmt(g.mu[i], 17)}"]
        if a is not None:
            cells.append(_fmt(float(a.values[i]), 17))
        lines.append(" ".join(cells))
    for i, j, w in g.edge_list():
        lines.append(f"edge {g.labels[i]} {g.labels[j]} {_fmt(w, 17)}")
    return "\n".join(lines) + "\n"


def save_graph(path, g: Graph, a: Potential | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(save_graph_text(g, a))


def fingerprint(g: Graph, a: Potential | None = None) -> str:
    """sha256 of the canonical serialization."""
    return hashlib.sha256(save_graph_text(g, a).encode()).hexdigest()


def _tokens(text: str, source: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield ln, line.split()


def _parse_float(tok: str, what: str, source: str, ln: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", source, ln) from None


def parse_graph(text: str, source: str = "<string>") -> tuple[Graph, Potential | None]:
    """Parse the text graph format; raises ParseError with line numbers."""
    header = None
    measure: dict[str, float] = {}
    pot: dict[str, float] = {}
    pot_seen = 0
    edges: list[tuple[str, str, float]] = []
    for ln, toks in _tokens(text, source):
        kind = toks[0]
        if kind == "graph":
            if header is not None:
                raise ParseError("duplicate header line", source, ln)
            if len(toks) != 3:
                raise ParseError("header must be 'graph <n_vertices> <n_edges>'", source, ln)
            try:
                header = (int(toks[1]), int(toks[2]))
            except ValueError:
                raise ParseError("header counts must be integers", source, ln) from None
        elif kind == "vertex":
            if len(toks) not in (3, 4):
                raise ParseError("vertex line must be 'vertex <id> <mu> [<a>]'", source, ln)
            vid = toks[1]
            if vid in measure:
                raise ParseError(f"duplicate vertex {vid!r}", source, ln)
            measure[vid] = _parse_float(toks[2], "measure", source, ln)
            if len(toks) == 4:
                pot[vid] = _parse_float(toks[3], "potential", source, ln)
                pot_seen += 1
        elif kind == "edge":
            if len(toks) != 4:
                raise ParseError("edge line must be 'edge <id1> <id2> <omega>'", source, ln)
            edges.append((toks[1], toks[2], _parse_float(toks[3], "weight", source, ln)))
        else:
            raise ParseError(f"unknown record {kind!r}", source, ln)
    if header is None:
        raise ParseError("missing 'graph' header line", source)
    n_v, n_e = header
    if len(measure) != n_v:
        raise ParseError(f"header says {n_v} vertices, found {len(measure)}", source)
    if len(edges) != n_e:
        raise ParseError(f"header says {n_e} edges, found {len(edges)}", source)
    if pot_seen not in (0, len(measure)):
        raise ParseError("potential column present on some vertex lines but not all", source)
    g = build_graph(edges, measure)
    a = make_potential(g, pot) if pot_seen else None
    return g, a


def load_graph(path) -> tuple[Graph, Potential | None]:
    with open(path) as fh:
        return parse_graph(fh.read(), source=str(path))


def parse_potential(text: str, g: Graph, source: str = "<string>") -> Potential:
    """Parse a standalone potential file of 'vertex <id> <a>' lines."""
    vals: dict[str, float] = {}
    for ln, toks in _tokens(text, source):
        if toks[0] != "vertex" or len(toks) != 3:
            raise ParseError("potential line must be 'vertex <id> <a>'", source, ln)
        if toks[1] in vals:
            raise ParseError(f"duplicate vertex {toks[1]!r}", source, ln)
        vals[toks[1]] = _parse_float(toks[2], "potential", source, ln)
    return make_potential(g, vals)


def load_potential(path, g: Graph) -> Potential:
    with open(path) as fh:
        return parse_potential(fh.read(), g, source=str(path))


def solution_dict(sol, g: Graph, emit_field: bool = True) -> dict:
    d = {
        "energy": sol.energy,
        "energy_norm": sol.energy_norm,
        "nehari_residual": sol.nehari_residual,
        "euler_lagrange_residual": sol.euler_lagrange_residual,
        "residual_scale": sol.residual_scale,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "restarts_used": sol.restarts_used,
        "sign_changing": sol.sign_changing,
    }
    if emit_field:
        d["u"] = {str(label): float(v) for label, v in zip(g.labels, sol.u.values)}
    else:
        vals = sol.u.values
        d["u_summary"] = {
            "sup": float(abs(vals).max()),
            "l2_mass": float((g.mu * vals * vals).sum()),
            "support": int((vals != 0.0).sum()),
        }
    return d


def solution_csv(sol, g: Graph) -> str:
    lines = [
        f"# energy {_fmt(sol.energy, 12)}",
        f"# converged {int(sol.converged)}",
        "vertex,value",
    ]
    for label, v in zip(g.labels, sol.u.values):
        lines.append(f"{label},{_fmt(float(v), 12)}")
    return "\n".join(lines) + "\n"


def sweep_report_dict(report, g: Graph, a: Potential, emit_fields: bool = False) -> dict:
    rows = []
    for r in report.rows:
        row = {
            "lambda": r.lam,
            "m_lambda": r.m_lambda,
            "tail": r.tail,
            "exterior_mass": r.exterior_mass,
            "diff_w22": r.diff_w22,
            "diff_E": r.diff_energy_norm,
            "converged": r.converged,
            "iterations": r.iterations,
        }
        if emit_fields and r.solution is not None:
            row["u"] = {str(label): float(v)
                        for label, v in zip(g.labels, r.solution.u.values)}
        rows.append(row)
    cfg = report.cfg
    return {
        "graph": {
            "fingerprint": fingerprint(g, a),
            "n_vertices": g.n_vertices,
            "n_edges": g.n_edges,
        },
        "p": report.p,
        "config": {
            "tol": cfg.tol,
            "max_iter": cfg.max_iter,
            "n_starts": cfg.n_starts,
            "seed": cfg.seed,
            "step_init": cfg.step_init,
            "backtrack_factor": cfg.backtrack_factor,
        },
        "dirichlet": {
            "m_omega": report.m_omega,
            "well": [str(w) for w in report.well_labels],
            **solution_dict(report.dirichlet, g, emit_field=emit_fields),
        },
        "rows": rows,
    }
