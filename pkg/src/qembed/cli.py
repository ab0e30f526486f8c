"""Command-line front end.

Exit codes: 0 on success, 1 for domain errors (disconnected graph,
non-embeddable distance matrix, size caps), 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from contextlib import nullcontext
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import DomainError, InputError, NotEmbeddable
from .graph import (
    Graph,
    bfs_distances,
    complete_multipartite,
    complete_multipartite_parts,
    is_connected,
)
from .graph6 import iter_graph6_records, parse_graph6, read_edge_list, write_graph6
from .multipartite import (
    Partition,
    contains_primary,
    non_qe_condition,
    parse_partition,
    qec_multipartite,
)
from .search import (
    NON_QE_THRESHOLD,
    SCAN_FIELDS,
    contained_primaries,
    find_isometric_embedding,
    primary_scan,
    scan_graphs,
)
from .spectral import (
    EMBED_TOL,
    JACOBI_TOL,
    distance_spectrum,
    embedding_residual,
    qec_numeric,
    quadratic_embedding,
)

log = logging.getLogger("qembed")

LAMBDA2_TOL = 1e-8


def fmt(x) -> str:
    """12 significant digits, with negative zero printed as 0."""
    if x is None:
        return "-"
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def _num(x):
    if x is None:
        return None
    x = float(x)
    return 0.0 if x == 0 else x


class Source:
    """A graph read from one of the CLI input options."""

    def __init__(self, graph: Graph, descriptor: dict, partition: Partition | None = None):
        self.graph = graph
        self.descriptor = descriptor
        self.partition = partition


def add_source_args(p: argparse.ArgumentParser, prefix: str = "", required: bool = True):
    label = f"{prefix} graph" if prefix else "input graph"
    dash = f"{prefix}-" if prefix else ""
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument(f"--{dash}g6", metavar="STRING", help=f"{label} as a graph6 string")
    g.add_argument(f"--{dash}edges", metavar="FILE", help=f"{label} as an edge-list file ('-' for stdin)")
    g.add_argument(f"--{dash}multipartite", metavar="PARTS",
                   help=f"{label} as complete multipartite part sizes, e.g. 4,1,1,1 or 2^3")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_source(args, prefix: str = "") -> Source:
    key = f"{prefix}_" if prefix else ""
    g6 = getattr(args, f"{key}g6")
    edges = getattr(args, f"{key}edges")
    parts = getattr(args, f"{key}multipartite")
    if g6 is not None:
        return Source(parse_graph6(g6), {"g6": g6})
    if edges is not None:
        return Source(read_edge_list(_read_text(edges)), {"edges": edges})
    p = parse_partition(parts)
    return Source(complete_multipartite(p.parts), {"multipartite": ",".join(map(str, p.parts))}, p)


def _exact_str(q: Fraction | None) -> str | None:
    if q is None:
        return None
    return str(q)


def _record(command, source_desc, result, method, tolerances, started):
    return {
        "command": command,
        "input": source_desc,
        "result": result,
        "method": method,
        "tolerances": tolerances,
        "wall_time": round(time.perf_counter() - started, 6),
    }


def _emit_json(rec):
    json.dump(rec, sys.stdout, indent=2)
    sys.stdout.write("\n")


# --- commands ---------------------------------------------------------------


def cmd_qec(args) -> int:
    t0 = time.perf_counter()
    src = load_source(args)
    method = args.method
    if method == "closed-form" and src.partition is None:
        raise InputError("--method closed-form requires --multipartite input")
    if method == "auto":
        method = "closed-form" if src.partition is not None else "eigen"
    if src.graph.n < 2:
        raise InputError("the QE constant needs at least two vertices")

    if method == "closed-form":
        cf = qec_multipartite(src.partition)
        result = {
            "value": _num(cf.value),
            "exact": _exact_str(cf.exact),
            "branch": cf.branch,
            "alpha_star": _num(cf.alpha_star),
            "residual": _num(cf.psi_residual if cf.psi_residual is not None else 0.0),
        }
        tol = {"root_interval_width": 1e-13}
        lines = [f"QEC = {fmt(cf.value)}" + (f" (exact {cf.exact})" if cf.exact is not None else "")]
        lines.append(f"method: closed-form, {cf.branch} branch"
                     + (f", alpha* = {fmt(cf.alpha_star)}" if cf.alpha_star is not None else ""))
    else:
        d = bfs_distances(src.graph)
        res = qec_numeric(d)
        lam = distance_spectrum(d).eigenvalues
        l2 = float(lam[1]) if len(lam) > 1 else None
        result = {
            "value": _num(res.value),
            "exact": None,
            "residual": _num(res.residual),
            "lambda1": _num(lam[0]),
            "lambda2": _num(l2),
            "lambda2_equals_qec": bool(l2 is not None and abs(l2 - res.value) <= LAMBDA2_TOL),
        }
        if args.certificate:
            result["certificate"] = [_num(x) for x in res.certificate]
        tol = {"jacobi_offdiag": JACOBI_TOL, "lambda2_equality": LAMBDA2_TOL}
        lines = [f"QEC = {fmt(res.value)}", "method: eigen",
                 f"lambda1 = {fmt(lam[0])}, lambda2 = {fmt(l2)}"
                 + (" (lambda2 = QEC)" if result["lambda2_equals_qec"] else "")]
        if args.certificate:
            lines.append("certificate: " + " ".join(fmt(x) for x in res.certificate))
    if args.json:
        _emit_json(_record("qec", src.descriptor, result, method, tol, t0))
    else:
        print("\n".join(lines))
    return 0


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    src = load_source(args)
    g = src.graph
    if not is_connected(g):
        raise DomainError("graph is not connected")
    parts = src.partition
    if parts is None:
        found = complete_multipartite_parts(g)
        parts = Partition(found) if found else None
    result = {}
    if parts is not None:
        cond = non_qe_condition(parts)
        cf = qec_multipartite(parts)
        result.update(
            {"class": "non-QE" if cond else "QE", "condition": cond,
             "partition": list(parts.parts), "qec": _num(cf.value), "exact": _exact_str(cf.exact),
             "primaries": sorted(contains_primary(parts))}
        )
        method = "integer-conditions"
    else:
        q = qec_numeric(bfs_distances(g)).value if g.n >= 2 else -np.inf
        non_qe = q > NON_QE_THRESHOLD
        result.update(
            {"class": "non-QE" if non_qe else "QE", "condition": None, "partition": None,
             "qec": _num(q) if g.n >= 2 else None, "exact": None,
             "primaries": sorted(contained_primaries(g)) if non_qe else []}
        )
        method = "eigen"
    if args.json:
        _emit_json(_record("classify", src.descriptor, result, method,
                           {"non_qe_threshold": NON_QE_THRESHOLD}, t0))
    else:
        print(result["class"])
        if result["condition"]:
            print(f"condition: ({result['condition']})")
        if result["qec"] is not None:
            print(f"QEC = {fmt(result['qec'])}" + (f" (exact {result['exact']})" if result["exact"] else ""))
        if result["primaries"]:
            print("primaries: " + ", ".join(result["primaries"]))
    return 0


def cmd_embed(args) -> int:
    t0 = time.perf_counter()
    src = load_source(args)
    if src.partition is not None and src.partition.k >= 2 and non_qe_condition(src.partition):
        q = qec_multipartite(src.partition).value
        raise NotEmbeddable(f"{src.partition} is of non-QE class (QEC = {fmt(q)})", qec=q)
    d = bfs_distances(src.graph)
    coords = quadratic_embedding(d, args.tol)
    resid = embedding_residual(coords, d)
    points = [[_num(x) for x in row] for row in coords.points]
    payload = {"n": coords.n, "dim": coords.dim, "points": points}
    if args.out:
        try:
            with open(args.out, "w") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise DomainError(f"cannot write {args.out}: {exc.strerror}") from None
    result = {"n": coords.n, "dim": coords.dim, "residual": _num(resid)}
    if not args.out:
        result["points"] = points
    if args.json:
        _emit_json(_record("embed", src.descriptor, result, "gram-eigen", {"embed_tol": args.tol}, t0))
    else:
        print(f"dimension: {coords.dim}")
        print(f"max residual: {fmt(resid)}")
        if not args.out:
            print(json.dumps(points))
    return 0


def cmd_contains(args) -> int:
    t0 = time.perf_counter()
    pat = load_source(args, "pattern")
    tgt = load_source(args, "target")
    w = find_isometric_embedding(pat.graph, tgt.graph)
    mapping = list(w.mapping) if w else None
    if args.json:
        _emit_json(_record("contains", {"pattern": pat.descriptor, "target": tgt.descriptor},
                           {"witness": mapping}, "backtracking", {}, t0))
    elif mapping is None:
        print("none")
    else:
        print(" ".join(f"{x}->{y}" for x, y in enumerate(mapping)))
    return 0


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("QEMBED_JOBS", "1")))
    except ValueError:
        return 1


def cmd_scan(args) -> int:
    t0 = time.perf_counter()
    if args.n is not None:
        report = primary_scan(args.n, jobs=args.jobs)
        desc = {"n": args.n}
    else:
        diagnostics = []
        ctx = nullcontext(sys.stdin) if args.input == "-" else open(args.input)
        try:
            with ctx as fh:
                graphs = [r.graph for r in iter_graph6_records(
                    fh, skip_errors=args.skip_errors, diagnostics=diagnostics)]
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        for g in graphs:
            if not is_connected(g):
                raise DomainError(f"graph {write_graph6(g)} is not connected")
        report = scan_graphs(graphs, primary=True, jobs=args.jobs)
        desc = {"input": args.input, "skipped": len(diagnostics)}
    records = report.records
    if args.non_qe_only:
        records = [r for r in records if r.non_qe]
    if args.primary:
        records = [r for r in records if r.primary]
    rows = [r.to_dict() for r in records]
    summary = report.summary()
    summary["listed"] = len(rows)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SCAN_FIELDS)
        for row in rows:
            w.writerow([json.dumps(row[k]) if isinstance(row[k], (list, dict, bool)) else
                        ("" if row[k] is None else row[k]) for k in SCAN_FIELDS])
        sys.stdout.write(buf.getvalue())
    else:
        _emit_json(_record("scan", desc, {"summary": summary, "records": rows}, "eigen",
                           {"non_qe_threshold": NON_QE_THRESHOLD, "jacobi_offdiag": JACOBI_TOL}, t0))
    print(f"total={summary['total']} non_qe={summary['non_qe']} primary={summary['primary']} "
          f"listed={summary['listed']}", file=sys.stderr)
    return 0


# --- entry point ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qembed", description="Quadratic embedding constants of graphs.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("qec", help="compute the QE constant")
    add_source_args(p)
    p.add_argument("--method", choices=("auto", "eigen", "closed-form"), default="auto")
    p.add_argument("--certificate", action="store_true", help="also print the optimizing vector")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_qec)

    p = sub.add_parser("classify", help="decide QE or non-QE class")
    add_source_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("embed", help="construct a quadratic embedding")
    add_source_args(p)
    p.add_argument("--out", metavar="FILE", help="write coordinates as JSON")
    p.add_argument("--tol", type=float, default=EMBED_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("contains", help="search an isometric embedding of PATTERN in TARGET")
    add_source_args(p, "pattern")
    add_source_args(p, "target")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_contains)

    p = sub.add_parser("scan", help="scan small graphs for non-QE and primary non-QE graphs")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("-n", type=int, help="enumerate all connected graphs on n <= 6 vertices")
    g.add_argument("--input", metavar="FILE", help="graph6 file, '-' for stdin")
    p.add_argument("--non-qe-only", action="store_true")
    p.add_argument("--primary", action="store_true", help="list only primary non-QE graphs")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--json", dest="format", action="store_const", const="json",
                   help="same as --format json")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--skip-errors", action="store_true", help="log and skip malformed graph6 lines")
    p.set_defaults(func=cmd_scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"qembed: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"qembed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
