"""Command line interface.

Every command prints a JSON report on stdout. Exit codes: 0 success,
1 premise violation (or a counterexample from `oracle precise`), 2 parse/usage error,
3 work budget or oracle size limit exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from twcert.certificate import (
    Certificate,
    CertificateRejected,
    Flavor,
    search_certificate,
    verify_certificate,
    verify_cyclespace_certificate,
    verify_unit_certificate,
)
from twcert.errors import BudgetExceeded, LemmaViolation, OracleLimitExceeded, ParseError
from twcert.formats import (
    certificate_to_dict,
    dump_certificate,
    format_graph,
    format_lengths,
    format_rational,
    load_certificate,
    parse_graph,
    parse_lengths,
    parse_rational,
)
from twcert.generators import intro_grid_lengths, make_grid, make_wall, make_wheel, wall_certificate
from twcert.graph import VertexSet
from twcert.lemmas import DEFAULT_ORACLE_LIMIT, balanced_separator, check_precise_theorem, exact_treewidth
from twcert.metric import DEFAULT_WORK_BUDGET, LengthFn

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class _Inputs:
    """Reads input files (``-`` is stdin) and remembers their digests."""

    def __init__(self) -> None:
        self.digests: dict[str, str] = {}

    def read(self, role: str, path: str) -> str:
        try:
            data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {role} file {path!r}: {exc.strerror}") from None
        self.digests[role] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError(f"{role} file is not UTF-8") from None

    def graph(self, args):
        g, lengths = parse_graph(self.read("graph", args.graph))
        if getattr(args, "length_file", None):
            lengths = parse_lengths(self.read("lengths", args.length_file), g)
        return g, lengths


def _violation_dict(v) -> dict:
    return {"premise": v.premise, "message": v.message, "witness": v.witness}


def cmd_verify(args, inputs: _Inputs) -> tuple[int, dict]:
    g, lengths = inputs.graph(args)
    cert = load_certificate(inputs.read("certificate", args.certificate), g)
    report = {"flavor": cert.flavor.value, "bound": format_rational(cert.bound)}
    try:
        if cert.flavor is Flavor.RATIONAL_GEODESIC:
            vc = verify_certificate(g, lengths if lengths is not None else LengthFn.unit(g), cert)
        elif cert.flavor is Flavor.UNIT_PRECISE:
            vc = verify_unit_certificate(g, cert, lengths)
        else:
            if lengths is not None and not lengths.is_unit:
                raise ParseError("cyclespace certificates require unit lengths")
            if cert.bound.denominator != 1:
                raise ParseError("cyclespace bound must be an integer")
            vc = verify_cyclespace_certificate(g, cert.cycle, int(cert.bound), args.work_budget)
    except CertificateRejected as exc:
        report.update(verdict="rejected", k=None, violations=[_violation_dict(v) for v in exc.violations])
        return EXIT_VIOLATION, report
    report.update(
        verdict="verified",
        k=vc.k,
        cycle_length=format_rational(vc.cycle_length),
        max_generator_length=format_rational(vc.max_generator_length),
        violations=[],
    )
    return EXIT_OK, report


def cmd_gen(args, inputs: _Inputs) -> tuple[int, dict]:
    kind, size = args.kind, args.size
    default_lengths = {"grid": "intro", "wall": "corollary", "wheel": "unit"}[kind]
    mode = args.lengths or default_lengths
    allowed = {"grid": {"intro", "unit"}, "wheel": {"unit"}, "wall": {"corollary"}}[kind]
    if mode not in allowed:
        raise ParseError(f"--lengths {mode} is not available for {kind}")
    try:
        if kind == "grid":
            grid = make_grid(size)
            g = grid.graph
            if mode == "intro":
                lengths = intro_grid_lengths(grid)
                cert = Certificate(grid.outer, grid.faces, 8, Flavor.RATIONAL_GEODESIC)
            else:
                lengths = None
                cert = Certificate(grid.outer, grid.faces, 4, Flavor.UNIT_PRECISE)
        elif kind == "wheel":
            wheel = make_wheel(size)
            g, lengths = wheel.graph, None
            cert = Certificate(wheel.rim, wheel.triangles, 3, Flavor.RATIONAL_GEODESIC)
        else:
            built = wall_certificate(size, None if args.subdivide == 1 else [args.subdivide] * _wall_edges(size))
            g, lengths, cert = built.graph, built.lengths, built.certificate
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    prefix = args.out or f"{kind}-{size}"
    written = {"graph": f"{prefix}.graph"}
    Path(written["graph"]).write_text(format_graph(g))
    if lengths is not None:
        written["lengths"] = f"{prefix}.len"
        Path(written["lengths"]).write_text(format_lengths(lengths))
    written["certificate"] = f"{prefix}.cert.json"
    Path(written["certificate"]).write_text(dump_certificate(cert))
    report = {
        "verdict": "generated",
        "kind": kind,
        "size": size,
        "lengths": mode,
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "files": written,
    }
    return EXIT_OK, report


def _wall_edges(t: int) -> int:
    return make_wall(t).graph.edge_count


def cmd_oracle(args, inputs: _Inputs) -> tuple[int, dict]:
    g, _ = inputs.graph(args)
    if args.oracle == "tw":
        tw = exact_treewidth(g, args.oracle_limit)
        return EXIT_OK, {"verdict": "computed", "treewidth": tw}
    if g.vertex_count > args.oracle_limit:
        raise OracleLimitExceeded(f"{g.vertex_count} vertices exceed the oracle limit of {args.oracle_limit}")
    if args.oracle == "separator":
        if args.set is None:
            target = VertexSet(g, (1 << g.vertex_count) - 1)
        else:
            try:
                ids = [int(x) for x in args.set.split(",") if x.strip()]
                target = VertexSet.from_ids(g, ids)
            except ValueError as exc:
                raise ParseError(f"--set: {exc}") from None
        found = balanced_separator(g, target, args.k, args.work_budget)
        return EXIT_OK, {
            "verdict": "found" if found is not None else "none",
            "k": args.k,
            "target": sorted(target),
            "separator": sorted(found) if found is not None else None,
        }
    cert = load_certificate(inputs.read("certificate", args.certificate), g)
    p = int(cert.bound) if cert.bound.denominator == 1 else None
    bad = check_precise_theorem(g, cert.cycle, cert.generators, p, args.k, args.work_budget)
    if bad is None:
        return EXIT_OK, {"verdict": "pass", "k": args.k, "counterexample": None}
    return EXIT_VIOLATION, {"verdict": "counterexample", "k": args.k, "counterexample": sorted(bad)}


def cmd_search(args, inputs: _Inputs) -> tuple[int, dict]:
    g, lengths = inputs.graph(args)
    if lengths is None:
        lengths = LengthFn.unit(g)
    r = parse_rational(args.r)
    if r <= 0:
        raise ParseError("r must be positive")
    cert = search_certificate(g, lengths, r, args.work_budget)
    if cert is None:
        return EXIT_OK, {"verdict": "none", "certificate": None}
    vc = verify_certificate(g, lengths, cert)
    if args.out:
        Path(args.out).write_text(dump_certificate(cert))
    return EXIT_OK, {
        "verdict": "found",
        "certificate": certificate_to_dict(cert),
        "cycle_length": format_rational(vc.cycle_length),
        "k": vc.k,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twcert", description="Algebraic tree-width certificates.")
    parser.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    def budget(p):
        p.add_argument("--work-budget", type=int, default=DEFAULT_WORK_BUDGET)

    p = sub.add_parser("verify", help="verify a certificate and report the tree-width lower bound")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.add_argument("--length-file")
    budget(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a grid, wheel or wall with its certificate")
    p.add_argument("kind", choices=["grid", "wheel", "wall"])
    p.add_argument("size", type=int)
    p.add_argument("--lengths", choices=["intro", "corollary", "unit"])
    p.add_argument("--subdivide", type=int, default=1, help="wall only: edges per wall edge")
    p.add_argument("--out", help="output path prefix (default <kind>-<size>)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="run a brute-force oracle")
    p.add_argument("oracle", choices=["tw", "separator", "precise"])
    p.add_argument("graph")
    p.add_argument("certificate", nargs="?", help="precise only")
    p.add_argument("--length-file")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--set", help="separator only: comma-separated target vertices (default all)")
    p.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    budget(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("search", help="search for a certificate with generator bound r")
    p.add_argument("graph")
    p.add_argument("r")
    p.add_argument("--length-file")
    p.add_argument("--out", help="also write the certificate JSON here")
    budget(p)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle" and args.oracle == "precise" and not args.certificate:
        parser.error("oracle precise needs a certificate file")
    inputs = _Inputs()
    started = time.perf_counter()
    try:
        code, body = args.func(args, inputs)
    except ParseError as exc:
        code, body = EXIT_PARSE, {"verdict": "error", "error": str(exc)}
    except (BudgetExceeded, OracleLimitExceeded) as exc:
        code, body = EXIT_BUDGET, {"verdict": "exhausted", "error": str(exc)}
    except LemmaViolation as exc:
        code, body = EXIT_VIOLATION, {"verdict": "internal-invariant", "error": str(exc)}
    report = {"command": args.command, "inputs": inputs.digests, **body}
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
