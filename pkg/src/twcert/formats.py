"""Text formats for graphs, length functions and certificates.

Graph document::

    graph <n> <m>
    e <u> <v> [<num>/<den>]      # m lines, edge ids in order

Length document: lines ``l <edge-id> <num>/<den>``; unlisted edges get 1.

Certificate document (JSON)::

    {"flavor": "rational-geodesic", "cycle": [0, 1, 2, 5],
     "generators": [[0, 1, 4, 3], ...], "bound": "8/1"}

Vertex sequences list each cycle vertex once; the closing edge is implied.
Blank lines and ``#`` comments are ignored in the text formats.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from twcert.certificate import Certificate, Flavor
from twcert.errors import NotACycle, ParseError
from twcert.graph import Cycle, Graph
from twcert.metric import LengthFn

__all__ = [
    "parse_rational",
    "format_rational",
    "parse_graph",
    "format_graph",
    "parse_lengths",
    "format_lengths",
    "certificate_to_dict",
    "certificate_from_dict",
    "dump_certificate",
    "load_certificate",
]

_RATIONAL = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(token: str) -> Fraction:
    m = _RATIONAL.match(token.strip())
    if not m:
        raise ParseError(f"not a rational number: {token!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {token!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str) -> tuple[Graph, LengthFn | None]:
    """Parse a graph document; lengths are returned only if some edge carries one."""
    rows = list(_lines(text))
    if not rows or rows[0][1][0] != "graph" or len(rows[0][1]) != 3:
        raise ParseError("expected header 'graph <n> <m>'")
    try:
        n, m = int(rows[0][1][1]), int(rows[0][1][2])
    except ValueError:
        raise ParseError("header counts must be integers") from None
    if n < 0 or m < 0:
        raise ParseError("header counts must be non-negative")
    body = rows[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} edges, found {len(body)} lines")
    edges = []
    weights = []
    for lineno, tokens in body:
        if tokens[0] != "e" or len(tokens) not in (3, 4):
            raise ParseError(f"line {lineno}: expected 'e <u> <v> [<num>/<den>]'")
        try:
            u, v = int(tokens[1]), int(tokens[2])
        except ValueError:
            raise ParseError(f"line {lineno}: vertex ids must be integers") from None
        w = parse_rational(tokens[3]) if len(tokens) == 4 else None
        if w is not None and w <= 0:
            raise ParseError(f"line {lineno}: edge length must be positive")
        edges.append((u, v))
        weights.append(w)
    try:
        g = Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if all(w is None for w in weights):
        return g, None
    return g, LengthFn(g, [w if w is not None else 1 for w in weights])


def format_graph(g: Graph, lengths: LengthFn | None = None) -> str:
    out = [f"graph {g.vertex_count} {g.edge_count}"]
    for eid, (u, v) in enumerate(g.edges):
        suffix = f" {format_rational(lengths[eid])}" if lengths is not None else ""
        out.append(f"e {u} {v}{suffix}")
    return "\n".join(out) + "\n"


def parse_lengths(text: str, g: Graph) -> LengthFn:
    values: dict[int, Fraction] = {}
    for lineno, tokens in _lines(text):
        if tokens[0] != "l" or len(tokens) != 3:
            raise ParseError(f"line {lineno}: expected 'l <edge-id> <num>/<den>'")
        try:
            eid = int(tokens[1])
        except ValueError:
            raise ParseError(f"line {lineno}: edge id must be an integer") from None
        if not 0 <= eid < g.edge_count:
            raise ParseError(f"line {lineno}: no edge with id {eid}")
        if eid in values:
            raise ParseError(f"line {lineno}: edge {eid} listed twice")
        w = parse_rational(tokens[2])
        if w <= 0:
            raise ParseError(f"line {lineno}: edge length must be positive")
        values[eid] = w
    return LengthFn.from_mapping(g, values)


def format_lengths(lengths: LengthFn) -> str:
    return "".join(f"l {eid} {format_rational(x)}\n" for eid, x in enumerate(lengths.values))


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "flavor": cert.flavor.value,
        "cycle": list(cert.cycle.vertices),
        "generators": [list(d.vertices) for d in cert.generators],
        "bound": format_rational(cert.bound),
    }


def _cycle(g: Graph, seq, what: str) -> Cycle:
    if not isinstance(seq, list) or not all(isinstance(v, int) for v in seq):
        raise ParseError(f"{what}: expected a list of vertex ids")
    for v in seq:
        if not 0 <= v < g.vertex_count:
            raise ParseError(f"{what}: vertex {v} out of range")
    try:
        return Cycle.from_vertices(g, seq)
    except (NotACycle, ValueError) as exc:
        raise ParseError(f"{what}: not a cycle ({exc})") from None


def certificate_from_dict(data: dict, g: Graph) -> Certificate:
    if not isinstance(data, dict):
        raise ParseError("certificate must be a JSON object")
    missing = {"flavor", "cycle", "generators", "bound"} - set(data)
    if missing:
        raise ParseError(f"certificate lacks field(s): {', '.join(sorted(missing))}")
    try:
        flavor = Flavor(data["flavor"])
    except ValueError:
        raise ParseError(f"unknown flavor {data['flavor']!r}") from None
    if not isinstance(data["bound"], str):
        raise ParseError("bound must be a string 'num/den'")
    bound = parse_rational(data["bound"])
    if not isinstance(data["generators"], list):
        raise ParseError("generators must be a list")
    cycle = _cycle(g, data["cycle"], "cycle")
    gens = [_cycle(g, seq, f"generator {i}") for i, seq in enumerate(data["generators"])]
    try:
        return Certificate(cycle, tuple(gens), bound, flavor)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def dump_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=2) + "\n"


def load_certificate(text: str, g: Graph) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return certificate_from_dict(data, g)
