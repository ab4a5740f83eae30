"""Exact rational edge lengths, shortest-path distances and geodesic cycles."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from twcert.errors import BudgetExceeded
from twcert.graph import Cycle, EdgeSet, Graph, as_cycle

__all__ = [
    "DEFAULT_WORK_BUDGET",
    "LengthFn",
    "GeodesicCheck",
    "AlgebraicGeodesicCheck",
    "to_fraction",
    "distance",
    "distances_from",
    "all_pairs_distances",
    "subgraph_length",
    "is_geodesic_cycle",
    "check_geodesic_with",
    "enumerate_cycles_up_to",
    "is_geodesic_algebraic",
]

DEFAULT_WORK_BUDGET = 10**7


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("bool is not a length")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"lengths must be exact rationals, got {type(value).__name__}")


class LengthFn:
    """Strictly positive rational length on every edge of a graph."""

    __slots__ = ("graph", "values", "_hash")

    def __init__(self, graph: Graph, values: Iterable) -> None:
        vals = tuple(to_fraction(x) for x in values)
        if len(vals) != graph.edge_count:
            raise ValueError(f"expected {graph.edge_count} lengths, got {len(vals)}")
        for eid, x in enumerate(vals):
            if x <= 0:
                raise ValueError(f"length of edge {eid} must be positive, got {x}")
        self.graph = graph
        self.values: tuple[Fraction, ...] = vals
        self._hash = hash((graph, vals))

    @classmethod
    def unit(cls, graph: Graph) -> LengthFn:
        return cls(graph, [1] * graph.edge_count)

    @classmethod
    def from_mapping(cls, graph: Graph, mapping: Mapping[int, object], default=1) -> LengthFn:
        return cls(graph, [mapping.get(eid, default) for eid in range(graph.edge_count)])

    def __getitem__(self, eid: int) -> Fraction:
        return self.values[eid]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LengthFn):
            return NotImplemented
        return self.values == other.values and self.graph == other.graph

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LengthFn({[str(x) for x in self.values]})"

    @property
    def is_unit(self) -> bool:
        return all(x == 1 for x in self.values)

    def scaled(self, factor) -> LengthFn:
        f = to_fraction(factor)
        return LengthFn(self.graph, [x * f for x in self.values])


def _check_same_graph(g: Graph, lengths: LengthFn) -> None:
    if lengths.graph != g:
        raise ValueError("length function belongs to a different graph")


@lru_cache(maxsize=4096)
def _dijkstra(lengths: LengthFn, source: int) -> tuple[Fraction | None, ...]:
    g = lengths.graph
    dist: list[Fraction | None] = [None] * g.vertex_count
    dist[source] = Fraction(0)
    heap = [(Fraction(0), source)]
    done = [False] * g.vertex_count
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for w, eid in g.incidence[u]:
            nd = du + lengths.values[eid]
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return tuple(dist)


def distances_from(g: Graph, lengths: LengthFn, source: int) -> tuple[Fraction | None, ...]:
    """Exact distances from ``source``; ``None`` marks unreachable vertices."""
    _check_same_graph(g, lengths)
    g.check_vertex(source)
    return _dijkstra(lengths, source)


def distance(g: Graph, lengths: LengthFn, u: int, v: int) -> Fraction | None:
    """Minimum length of a ``u``-``v`` path, or ``None`` when unreachable."""
    g.check_vertex(v)
    return distances_from(g, lengths, u)[v]


def all_pairs_distances(g: Graph, lengths: LengthFn) -> list[tuple[Fraction | None, ...]]:
    return [distances_from(g, lengths, s) for s in range(g.vertex_count)]


def subgraph_length(lengths: LengthFn, s: EdgeSet) -> Fraction:
    return sum((lengths.values[eid] for eid in s), Fraction(0))


@dataclass(frozen=True)
class GeodesicCheck:
    """Outcome of :func:`is_geodesic_cycle`; truthy iff geodesic.

    On failure ``pair`` is the first violating vertex pair in cycle order,
    ``arc_length`` its shorter arc along the cycle and ``graph_distance``
    the (strictly smaller) distance in the graph.
    """

    geodesic: bool
    pair: tuple[int, int] | None = None
    arc_length: Fraction | None = None
    graph_distance: Fraction | None = None

    def __bool__(self) -> bool:
        return self.geodesic


def _arc_prefix(lengths: LengthFn, c: Cycle) -> tuple[list[Fraction], Fraction]:
    prefix = [Fraction(0)]
    for eid in c.edge_ids():
        prefix.append(prefix[-1] + lengths.values[eid])
    total = prefix.pop()
    return prefix, total


def check_geodesic_with(c: Cycle, lengths: LengthFn, rows: Sequence[Sequence]) -> GeodesicCheck:
    """Geodesic check against precomputed distance rows indexed by vertex."""
    prefix, total = _arc_prefix(lengths, c)
    verts = c.vertices
    for i, a in enumerate(verts):
        row = rows[a]
        for j in range(i + 1, len(verts)):
            arc = prefix[j] - prefix[i]
            arc = min(arc, total - arc)
            d = row[verts[j]]
            if d != arc:
                return GeodesicCheck(False, (a, verts[j]), arc, d)
    return GeodesicCheck(True)


def is_geodesic_cycle(g: Graph, lengths: LengthFn, c: Cycle) -> GeodesicCheck:
    """Check that every pair of cycle vertices is joined along the cycle by a shortest path."""
    _check_same_graph(g, lengths)
    rows = {v: distances_from(g, lengths, v) for v in c.vertices}
    return check_geodesic_with(c, lengths, rows)


def enumerate_cycles_up_to(
    g: Graph, lengths: LengthFn, bound, budget: int = DEFAULT_WORK_BUDGET
) -> list[Cycle]:
    """All cycles of length at most ``bound``, each exactly once.

    Every cycle is found from its least edge id (the anchor) by a depth
    first search over higher-numbered edges, pruned with exact distances
    back to the anchor. Raises :class:`BudgetExceeded` after ``budget``
    edge extensions.
    """
    _check_same_graph(g, lengths)
    bound = to_fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    vals = lengths.values
    inc = g.incidence
    steps = 0
    found: list[Cycle] = []
    for anchor, (u, v) in enumerate(g.edges):
        base = vals[anchor]
        if base >= bound:
            continue
        back = _restricted_dijkstra(g, vals, u, anchor)
        if back[v] is None or base + back[v] > bound:
            continue
        path = [v]
        on_path = 1 << v
        stack = [(iter(inc[v]), base)]
        while stack:
            it, length = stack[-1]
            for y, eid in it:
                if eid <= anchor:
                    continue
                steps += 1
                if steps > budget:
                    raise BudgetExceeded("cycle enumeration", budget)
                nl = length + vals[eid]
                if y == u:
                    if nl <= bound:
                        found.append(as_cycle(g, EdgeSet.from_walk(g, [u, *path])))
                    continue
                if (on_path >> y) & 1 or back[y] is None or nl + back[y] > bound:
                    continue
                path.append(y)
                on_path |= 1 << y
                stack.append((iter(inc[y]), nl))
                break
            else:
                stack.pop()
                on_path &= ~(1 << path.pop())
    return found


def _restricted_dijkstra(g: Graph, vals, source: int, anchor: int) -> list[Fraction | None]:
    """Distances from ``source`` using only edges with id greater than ``anchor``."""
    dist: list[Fraction | None] = [None] * g.vertex_count
    dist[source] = Fraction(0)
    heap = [(Fraction(0), source)]
    done = [False] * g.vertex_count
    while heap:
        du, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for y, eid in g.incidence[x]:
            if eid <= anchor:
                continue
            nd = du + vals[eid]
            if dist[y] is None or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


@dataclass(frozen=True)
class AlgebraicGeodesicCheck:
    """Outcome of :func:`is_geodesic_algebraic`; truthy iff geodesic.

    On failure ``pair`` holds two strictly shorter cycles summing to the input.
    """

    geodesic: bool
    pair: tuple[Cycle, Cycle] | None = None

    def __bool__(self) -> bool:
        return self.geodesic


def is_geodesic_algebraic(
    g: Graph, lengths: LengthFn, c: Cycle, budget: int = DEFAULT_WORK_BUDGET
) -> AlgebraicGeodesicCheck:
    """Geodecity via decomposition: no two shorter cycles sum to ``c``."""
    total = subgraph_length(lengths, c.edges)
    shorter = [
        d
        for d in enumerate_cycles_up_to(g, lengths, total, budget)
        if subgraph_length(lengths, d.edges) < total
    ]
    by_bits = {d.edges.bits: d for d in shorter}
    for d1 in shorter:
        d2 = by_bits.get(d1.edges.bits ^ c.edges.bits)
        if d2 is not None:
            return AlgebraicGeodesicCheck(False, (d1, d2))
    return AlgebraicGeodesicCheck(True)
