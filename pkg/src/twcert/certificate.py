"""Tree-width lower-bound certificates: data model, verification and search.

A certificate names a cycle ``C`` together with a list of short cycles whose
GF(2) sum is ``C``. When ``C`` is geodesic, its length relative to the
length bound on the generators yields a lower bound on tree-width:

* ``rational-geodesic``: ``k = floor(l(C) / (2 r))`` for an arbitrary
  rational length function;
* ``unit-precise``: ``k = floor(|C| / (4 floor(p / 2)))`` for unit lengths;
* ``cyclespace``: ``k = floor(|C| / p)`` when the whole cycle space is
  generated by cycles of length at most ``p``.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from twcert.graph import (
    Cycle,
    EdgeSet,
    Graph,
    SpanBasis,
    Subdivision,
    decompose_in_span,
    subdivide_edges,
)
from twcert.metric import (
    DEFAULT_WORK_BUDGET,
    LengthFn,
    check_geodesic_with,
    all_pairs_distances,
    enumerate_cycles_up_to,
    is_geodesic_cycle,
    subgraph_length,
    to_fraction,
)

__all__ = [
    "Flavor",
    "Certificate",
    "Violation",
    "VerifiedCertificate",
    "CertificateRejected",
    "PREMISES",
    "verify_certificate",
    "verify_unit_certificate",
    "lower_bound_unit",
    "verify_cyclespace_certificate",
    "fundamental_cycles",
    "scale_factor",
    "subdivide",
    "search_certificate",
]


class Flavor(str, enum.Enum):
    RATIONAL_GEODESIC = "rational-geodesic"
    UNIT_PRECISE = "unit-precise"
    CYCLESPACE = "cyclespace"


# Canonical premise order; violation lists are sorted by it.
PREMISES = ("unit-lengths", "sum", "generation", "generator-length", "geodesic")


@dataclass(frozen=True)
class Certificate:
    cycle: Cycle
    generators: tuple[Cycle, ...]
    bound: Fraction
    flavor: Flavor = Flavor.RATIONAL_GEODESIC

    def __post_init__(self) -> None:
        object.__setattr__(self, "bound", to_fraction(self.bound))
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if self.bound <= 0:
            raise ValueError(f"bound must be positive, got {self.bound}")
        if not self.generators and self.flavor is not Flavor.CYCLESPACE:
            raise ValueError("certificate needs at least one generator")
        for gen in self.generators:
            if gen.graph != self.cycle.graph:
                raise ValueError("generator lives in a different graph than the cycle")

    @property
    def graph(self) -> Graph:
        return self.cycle.graph

    def reduced_generators(self) -> list[Cycle]:
        """Generators of odd multiplicity, first-occurrence order."""
        counts = Counter(g.edges.bits for g in self.generators)
        seen = set()
        out = []
        for gen in self.generators:
            b = gen.edges.bits
            if counts[b] % 2 and b not in seen:
                out.append(gen)
            seen.add(b)
        return out


@dataclass(frozen=True)
class Violation:
    """One failed premise with a JSON-friendly witness."""

    premise: str
    message: str
    witness: dict = field(default_factory=dict)


class CertificateRejected(Exception):
    def __init__(self, violations: Sequence[Violation]) -> None:
        self.violations = sorted(violations, key=lambda v: PREMISES.index(v.premise))
        super().__init__("; ".join(f"{v.premise}: {v.message}" for v in self.violations))


@dataclass(frozen=True)
class VerifiedCertificate:
    certificate: Certificate
    cycle_length: Fraction
    max_generator_length: Fraction
    k: int


def _sum_check(cert: Certificate) -> Violation | None:
    total = EdgeSet(cert.graph)
    for gen in cert.generators:
        total ^= gen.edges
    residue = total ^ cert.cycle.edges
    if not residue:
        return None
    g = cert.graph
    return Violation(
        "sum",
        f"generators sum to the cycle plus {len(residue)} extra edge(s)",
        {"residue": [list(g.edges[e]) for e in residue]},
    )


def _geodesic_check(g: Graph, lengths: LengthFn, cycle: Cycle) -> Violation | None:
    check = is_geodesic_cycle(g, lengths, cycle)
    if check:
        return None
    a, b = check.pair
    return Violation(
        "geodesic",
        f"vertices {a} and {b} are {check.graph_distance} apart but {check.arc_length} along the cycle",
        {"pair": [a, b], "arc_length": str(check.arc_length), "distance": str(check.graph_distance)},
    )


def _length_violations(lengths: LengthFn, gens: Sequence[Cycle], bound: Fraction):
    longest = Fraction(0)
    bad = []
    for gen in gens:
        gl = subgraph_length(lengths, gen.edges)
        longest = max(longest, gl)
        if gl > bound:
            bad.append({"generator": list(gen.vertices), "length": str(gl)})
    violation = None
    if bad:
        violation = Violation(
            "generator-length", f"{len(bad)} generator(s) longer than {bound}", {"generators": bad}
        )
    return longest, violation


def verify_certificate(g: Graph, lengths: LengthFn, cert: Certificate) -> VerifiedCertificate:
    """Check all premises of a rational-geodesic certificate.

    Every failed premise is reported in one :class:`CertificateRejected`.
    """
    if cert.flavor is not Flavor.RATIONAL_GEODESIC:
        raise ValueError(f"expected a rational-geodesic certificate, got {cert.flavor.value}")
    if cert.graph != g or lengths.graph != g:
        raise ValueError("certificate, lengths and graph disagree")
    violations = []
    if (v := _sum_check(cert)) is not None:
        violations.append(v)
    longest, v = _length_violations(lengths, cert.reduced_generators(), cert.bound)
    if v is not None:
        violations.append(v)
    if (v := _geodesic_check(g, lengths, cert.cycle)) is not None:
        violations.append(v)
    if violations:
        raise CertificateRejected(violations)
    total = subgraph_length(lengths, cert.cycle.edges)
    return VerifiedCertificate(cert, total, longest, math.floor(total / (2 * cert.bound)))


def verify_unit_certificate(
    g: Graph, cert: Certificate, lengths: LengthFn | None = None
) -> VerifiedCertificate:
    """Unit-length flavor: ``k = floor(|C| / (4 floor(p/2)))``."""
    if cert.flavor is not Flavor.UNIT_PRECISE:
        raise ValueError(f"expected a unit-precise certificate, got {cert.flavor.value}")
    p = cert.bound
    if p.denominator != 1:
        raise ValueError(f"unit-precise bound must be an integer, got {p}")
    violations = []
    if lengths is not None and not lengths.is_unit:
        violations.append(Violation("unit-lengths", "length function is not constantly 1"))
    unit = LengthFn.unit(g)
    if (v := _sum_check(cert)) is not None:
        violations.append(v)
    longest, v = _length_violations(unit, cert.reduced_generators(), p)
    if v is not None:
        violations.append(v)
    if (v := _geodesic_check(g, unit, cert.cycle)) is not None:
        violations.append(v)
    if violations:
        raise CertificateRejected(violations)
    half = int(p) // 2
    k = len(cert.cycle) // (4 * half) if half else 0
    return VerifiedCertificate(cert, Fraction(len(cert.cycle)), longest, k)


def lower_bound_unit(g: Graph, cert: Certificate) -> int:
    return verify_unit_certificate(g, cert).k


def fundamental_cycles(g: Graph) -> list[EdgeSet]:
    """Fundamental cycles of a breadth-first spanning forest, one per non-tree edge."""
    parent: list[int | None] = [None] * g.vertex_count
    parent_edge: list[int | None] = [None] * g.vertex_count
    depth = [-1] * g.vertex_count
    tree = set()
    for root in range(g.vertex_count):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = [root]
        for u in queue:
            for w, eid in g.incidence[u]:
                if depth[w] < 0:
                    depth[w] = depth[u] + 1
                    parent[w], parent_edge[w] = u, eid
                    tree.add(eid)
                    queue.append(w)
    basis = []
    for eid, (u, v) in enumerate(g.edges):
        if eid in tree:
            continue
        bits = 1 << eid
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            bits ^= 1 << parent_edge[u]
            u = parent[u]
        basis.append(EdgeSet(g, bits))
    return basis


def verify_cyclespace_certificate(
    g: Graph, c: Cycle, p: int, budget: int = DEFAULT_WORK_BUDGET
) -> VerifiedCertificate:
    """Whole-cycle-space flavor with unit lengths: ``k = floor(|C| / p)``.

    Checks that every fundamental cycle lies in the span of the cycles of
    length at most ``p``, and that ``c`` is geodesic.
    """
    if int(p) != p or p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    p = int(p)
    unit = LengthFn.unit(g)
    short = enumerate_cycles_up_to(g, unit, p, budget)
    basis = SpanBasis()
    for d in short:
        basis.add(d.edges.bits)
    violations = []
    for f in fundamental_cycles(g):
        if not basis.contains(f.bits):
            violations.append(
                Violation(
                    "generation",
                    f"a fundamental cycle is not a sum of cycles of length at most {p}",
                    {"basis_element": [list(g.edges[e]) for e in f]},
                )
            )
            break
    if (v := _geodesic_check(g, unit, c)) is not None:
        violations.append(v)
    if violations:
        raise CertificateRejected(violations)
    cert = Certificate(c, tuple(short), Fraction(p), Flavor.CYCLESPACE)
    longest = max((Fraction(len(d)) for d in short), default=Fraction(0))
    return VerifiedCertificate(cert, Fraction(len(c)), longest, len(c) // p)


def scale_factor(lengths: LengthFn, r) -> int:
    """Least positive integer ``M`` making ``M*r`` and every ``M*l(e)`` integral."""
    r = to_fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    m = r.denominator
    for x in lengths.values:
        m = math.lcm(m, x.denominator)
    return m


@dataclass(frozen=True)
class SubdivisionMap:
    """Unit-length model of ``(G, l)``: each edge becomes ``M * l(e)`` edges."""

    subdivision: Subdivision
    scale: int

    @property
    def original(self) -> Graph:
        return self.subdivision.original

    @property
    def graph(self) -> Graph:
        return self.subdivision.graph

    @property
    def branch_paths(self) -> tuple[tuple[int, ...], ...]:
        return self.subdivision.branch_paths

    def lift(self, s: EdgeSet) -> EdgeSet:
        return self.subdivision.lift(s)

    def lift_cycle(self, c: Cycle) -> Cycle:
        return self.subdivision.lift_cycle(c)

    def lift_certificate(self, cert: Certificate) -> Certificate:
        """The unit-length certificate ``(C', D', M r)`` on the subdivided graph."""
        return Certificate(
            self.lift_cycle(cert.cycle),
            tuple(self.lift_cycle(d) for d in cert.generators),
            cert.bound * self.scale,
            Flavor.RATIONAL_GEODESIC,
        )


def subdivide(g: Graph, lengths: LengthFn, M: int) -> SubdivisionMap:
    """Subdivide every edge ``e`` into a path of ``M * l(e)`` edges."""
    counts = []
    for eid, x in enumerate(lengths.values):
        scaled = x * M
        if scaled.denominator != 1:
            raise ValueError(f"M * l(e) = {scaled} is not integral for edge {eid}")
        counts.append(int(scaled))
    return SubdivisionMap(subdivide_edges(g, counts), M)


def search_certificate(
    g: Graph, lengths: LengthFn, r, budget: int = DEFAULT_WORK_BUDGET
) -> Certificate | None:
    """Longest geodesic cycle in the span of cycles of length at most ``r``.

    Best effort: candidates are all cycles no longer than twice the largest
    finite distance plus the longest edge (a geodesic cycle cannot be
    longer), tried longest first. Returns None when no candidate qualifies.
    """
    r = to_fraction(r)
    short = enumerate_cycles_up_to(g, lengths, r, budget)
    if not short:
        return None
    basis = SpanBasis()
    for d in short:
        basis.add(d.edges.bits)
    rows = all_pairs_distances(g, lengths)
    diameter = max(x for row in rows for x in row if x is not None)
    cap = 2 * diameter + max(lengths.values)
    candidates = [
        (subgraph_length(lengths, c.edges), i, c)
        for i, c in enumerate(enumerate_cycles_up_to(g, lengths, cap, budget))
    ]
    candidates.sort(key=lambda item: (-item[0], item[1]))
    short_sets = [d.edges for d in short]
    for _, _, c in candidates:
        if not basis.contains(c.edges.bits):
            continue
        if not check_geodesic_with(c, lengths, rows):
            continue
        chosen = decompose_in_span(c.edges, short_sets)
        assert chosen is not None
        return Certificate(c, tuple(short[i] for i in chosen), r, Flavor.RATIONAL_GEODESIC)
    return None
