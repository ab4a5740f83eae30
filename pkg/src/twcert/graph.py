"""Simple undirected graphs, GF(2) edge-set algebra and cycle recognition.

Edge and vertex sets are stored as Python ints used as bit vectors, so the
symmetric difference of two edge sets is a single ``^``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from twcert.errors import GraphMismatchError, NotACycle

__all__ = [
    "Graph",
    "EdgeSet",
    "VertexSet",
    "Cycle",
    "SpanBasis",
    "f2_sum",
    "as_cycle",
    "decompose_in_span",
    "components",
    "unit_distances",
    "Subdivision",
    "subdivide_edges",
]


class Graph:
    """Simple undirected graph on vertices ``0..vertex_count-1``.

    Edge ids are the positions in ``edges``; each edge is stored as a pair
    ``(u, v)`` with ``u < v``.
    """

    __slots__ = ("vertex_count", "edges", "_index", "__dict__")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if vertex_count < 0:
            raise ValueError(f"vertex_count must be >= 0, got {vertex_count}")
        normalized = []
        index: dict[tuple[int, int], int] = {}
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{vertex_count - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            pair = (u, v) if u < v else (v, u)
            if pair in index:
                raise ValueError(f"parallel edge {pair}")
            index[pair] = len(normalized)
            normalized.append(pair)
        self.vertex_count = vertex_count
        self.edges: tuple[tuple[int, int], ...] = tuple(normalized)
        self._index = index

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self is other or (
            self.vertex_count == other.vertex_count and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self.vertex_count}, edge_count={self.edge_count})"

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the sorted ``(neighbor, edge_id)`` pairs."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for eid, (u, v) in enumerate(self.edges):
            inc[u].append((v, eid))
            inc[v].append((u, eid))
        return tuple(tuple(sorted(row)) for row in inc)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self.incidence[v]]

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def edge_id(self, u: int, v: int) -> int:
        """Id of the edge ``uv``; raises ``KeyError`` if absent."""
        return self._index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._index

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise ValueError(f"invalid vertex id {v} for graph on {self.vertex_count} vertices")


class _Bits:
    """Immutable bit vector over the vertices or edges of a fixed graph."""

    __slots__ = ("graph", "bits")

    def __init__(self, graph: Graph, bits: int = 0) -> None:
        if bits < 0 or bits >> self._universe(graph):
            raise ValueError(f"bits out of range for {self.__class__.__name__}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "bits", bits)

    @staticmethod
    def _universe(graph: Graph) -> int:
        raise NotImplementedError

    @classmethod
    def from_ids(cls, graph: Graph, ids: Iterable[int]):
        size = cls._universe(graph)
        bits = 0
        for i in ids:
            if not 0 <= i < size:
                raise ValueError(f"id {i} out of range 0..{size - 1}")
            bits |= 1 << i
        return cls(graph, bits)

    def __setattr__(self, name, value):
        raise AttributeError(f"{self.__class__.__name__} is immutable")

    def _check(self, other: _Bits) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphMismatchError("operands belong to different graphs")

    def __xor__(self, other):
        self._check(other)
        return type(self)(self.graph, self.bits ^ other.bits)

    def __or__(self, other):
        self._check(other)
        return type(self)(self.graph, self.bits | other.bits)

    def __and__(self, other):
        self._check(other)
        return type(self)(self.graph, self.bits & other.bits)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.graph, self.bits & ~other.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __contains__(self, i: object) -> bool:
        return isinstance(i, int) and i >= 0 and (self.bits >> i) & 1 == 1

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.bits == other.bits and (other.graph is self.graph or other.graph == self.graph)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.bits))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({sorted(self)})"


class EdgeSet(_Bits):
    """Element of the edge space of a graph; ``^`` is the GF(2) sum."""

    __slots__ = ()

    @staticmethod
    def _universe(graph: Graph) -> int:
        return graph.edge_count

    @classmethod
    def from_walk(cls, graph: Graph, vertices: Sequence[int]) -> EdgeSet:
        """Edges of the closed walk ``vertices[0], ..., vertices[-1], vertices[0]``.

        Each step must be an edge of ``graph``; repeated edges cancel.
        """
        bits = 0
        n = len(vertices)
        for i in range(n):
            u, v = vertices[i], vertices[(i + 1) % n]
            try:
                bits ^= 1 << graph.edge_id(u, v)
            except KeyError:
                raise ValueError(f"({u}, {v}) is not an edge") from None
        return cls(graph, bits)

    def vertices(self) -> VertexSet:
        bits = 0
        for eid in self:
            u, v = self.graph.edges[eid]
            bits |= (1 << u) | (1 << v)
        return VertexSet(self.graph, bits)


class VertexSet(_Bits):
    __slots__ = ()

    @staticmethod
    def _universe(graph: Graph) -> int:
        return graph.vertex_count


@dataclass(frozen=True)
class Cycle:
    """A cycle of a graph: its edge set plus a cyclic vertex order.

    ``vertices[i]`` and ``vertices[i+1]`` (indices mod length) are adjacent
    along the cycle. Use :func:`as_cycle` or :meth:`from_vertices` to build
    one; both canonicalize the order to start at the least vertex id and
    continue towards its smaller cycle neighbor.
    """

    edges: EdgeSet
    vertices: tuple[int, ...]

    @property
    def graph(self) -> Graph:
        return self.edges.graph

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_set(self) -> VertexSet:
        return VertexSet.from_ids(self.graph, self.vertices)

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def edge_ids(self) -> list[int]:
        """Edge ids in traversal order; entry i joins vertices[i] and vertices[i+1]."""
        n = len(self.vertices)
        return [self.graph.edge_id(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    @classmethod
    def from_vertices(cls, graph: Graph, vertices: Sequence[int]) -> Cycle:
        """Cycle through ``vertices`` in order (closing edge implied)."""
        if len(set(vertices)) != len(vertices):
            raise NotACycle("degree", "vertex sequence repeats a vertex")
        if len(vertices) < 3:
            raise NotACycle("degree" if vertices else "empty", "fewer than three vertices")
        return as_cycle(graph, EdgeSet.from_walk(graph, vertices))


def f2_sum(sets: Iterable[EdgeSet], graph: Graph | None = None) -> EdgeSet:
    """Symmetric difference of all ``sets``.

    ``graph`` is only needed when ``sets`` may be empty.
    """
    total = None
    for s in sets:
        total = s if total is None else total ^ s
    if total is None:
        if graph is None:
            raise ValueError("f2_sum of no sets needs an explicit graph")
        return EdgeSet(graph)
    if graph is not None and total.graph != graph:
        raise GraphMismatchError("sets do not belong to the given graph")
    return total


def as_cycle(graph: Graph, s: EdgeSet) -> Cycle:
    """Return the :class:`Cycle` view of ``s`` or raise :class:`NotACycle`."""
    if s.graph != graph:
        raise GraphMismatchError("edge set belongs to a different graph")
    if not s:
        raise NotACycle("empty")
    around: dict[int, list[int]] = {}
    for eid in s:
        u, v = graph.edges[eid]
        around.setdefault(u, []).append(v)
        around.setdefault(v, []).append(u)
    for v, nbrs in sorted(around.items()):
        if len(nbrs) != 2:
            raise NotACycle("degree", f"vertex {v} has degree {len(nbrs)}")
    start = min(around)
    prev, cur = start, min(around[start])
    order = [start]
    while cur != start:
        order.append(cur)
        a, b = around[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != len(around):
        raise NotACycle("disconnected", f"{len(order)} of {len(around)} vertices reachable")
    return Cycle(s, tuple(order))


class SpanBasis:
    """Incremental GF(2) row echelon form keyed by lowest set bit.

    Each stored row remembers which input vectors it is the sum of, so a
    reduction also yields an explicit decomposition.
    """

    def __init__(self) -> None:
        self._rows: dict[int, tuple[int, int]] = {}
        self._count = 0

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: int) -> tuple[int, int]:
        """Return ``(residue, combination)`` with ``vec == residue ^ sum(combination)``."""
        combo = 0
        while vec:
            low = vec & -vec
            row = self._rows.get(low)
            if row is None:
                break
            vec ^= row[0]
            combo ^= row[1]
        return vec, combo

    def add(self, vec: int) -> bool:
        """Append ``vec`` as the next input; return True if it raised the rank."""
        tag = 1 << self._count
        self._count += 1
        residue, combo = self.reduce(vec)
        if not residue:
            return False
        self._rows[residue & -residue] = (residue, combo ^ tag)
        return True

    def contains(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0


def _mask_to_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def decompose_in_span(target: EdgeSet, generators: Sequence[EdgeSet]) -> list[int] | None:
    """Indices ``S`` with ``f2_sum(generators[i] for i in S) == target``, or None."""
    basis = SpanBasis()
    for gen in generators:
        if gen.graph != target.graph:
            raise GraphMismatchError("generator belongs to a different graph")
        basis.add(gen.bits)
    residue, combo = basis.reduce(target.bits)
    if residue:
        return None
    chosen = _mask_to_indices(combo)
    check = 0
    for i in chosen:
        check ^= generators[i].bits
    assert check == target.bits, "span decomposition does not re-sum to target"
    return chosen


def components(graph: Graph, removed: VertexSet | None = None) -> list[VertexSet]:
    """Connected components of ``graph - removed``, ordered by least vertex."""
    adj = graph.adjacency_masks
    remaining = ((1 << graph.vertex_count) - 1) & ~(removed.bits if removed is not None else 0)
    parts = []
    while remaining:
        seed = remaining & -remaining
        comp = frontier = seed
        while frontier:
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= adj[low.bit_length() - 1]
                f ^= low
            frontier = grow & remaining & ~comp
            comp |= frontier
        parts.append(VertexSet(graph, comp))
        remaining &= ~comp
    return parts


def unit_distances(
    graph: Graph, sources: Iterable[int], removed: VertexSet | None = None
) -> list[int | None]:
    """Breadth-first hop distances from the nearest source; None if unreachable."""
    dist: list[int | None] = [None] * graph.vertex_count
    blocked = removed.bits if removed is not None else 0
    queue: deque[int] = deque()
    for s in sources:
        graph.check_vertex(s)
        if dist[s] is None and not (blocked >> s) & 1:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        for w, _ in graph.incidence[u]:
            if dist[w] is None and not (blocked >> w) & 1:
                dist[w] = du + 1
                queue.append(w)
    return dist


@dataclass(frozen=True)
class Subdivision:
    """A subdivided graph and, per original edge, its branch path of new edge ids.

    Original vertices keep their ids; interior vertices are appended in
    original edge order. Branch paths run from the lower to the higher
    endpoint of the original edge.
    """

    original: Graph
    graph: Graph
    branch_paths: tuple[tuple[int, ...], ...]

    def lift(self, s: EdgeSet) -> EdgeSet:
        """Replace every original edge in ``s`` by its branch path."""
        if s.graph != self.original:
            raise GraphMismatchError("edge set does not belong to the original graph")
        bits = 0
        for eid in s:
            for new in self.branch_paths[eid]:
                bits |= 1 << new
        return EdgeSet(self.graph, bits)

    def lift_cycle(self, c: Cycle) -> Cycle:
        return as_cycle(self.graph, self.lift(c.edges))

    def origin(self) -> list[int]:
        """For each new edge id, the original edge it subdivides."""
        out = [0] * self.graph.edge_count
        for eid, path in enumerate(self.branch_paths):
            for new in path:
                out[new] = eid
        return out


def subdivide_edges(graph: Graph, counts) -> Subdivision:
    """Replace each edge ``e`` by a path with ``counts[e]`` edges (``counts`` >= 1)."""
    if hasattr(counts, "get"):
        counts = [counts[eid] for eid in range(graph.edge_count)]
    counts = list(counts)
    if len(counts) != graph.edge_count:
        raise ValueError(f"expected {graph.edge_count} subdivision counts, got {len(counts)}")
    next_vertex = graph.vertex_count
    new_edges: list[tuple[int, int]] = []
    paths = []
    for eid, ((u, v), k) in enumerate(zip(graph.edges, counts)):
        if int(k) != k or k < 1:
            raise ValueError(f"edge {eid}: subdivision count must be a positive integer, got {k}")
        chain = [u, *range(next_vertex, next_vertex + int(k) - 1), v]
        next_vertex += int(k) - 1
        start = len(new_edges)
        new_edges.extend(zip(chain, chain[1:]))
        paths.append(tuple(range(start, len(new_edges))))
    return Subdivision(graph, Graph(next_vertex, new_edges), tuple(paths))
