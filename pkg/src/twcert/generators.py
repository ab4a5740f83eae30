"""Grids, wheels and elementary walls with their named landmarks.

Coordinates are 1-based as in the usual drawings. For the wall, ``i`` runs
over the ``2t`` columns and ``j`` over the ``t`` rows; vertical edges join
``(i, j)`` and ``(i, j + 1)`` and are kept only when ``i + j`` is odd.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from twcert.certificate import Certificate, Flavor
from twcert.errors import LemmaViolation
from twcert.graph import Cycle, EdgeSet, Graph, Subdivision, as_cycle, subdivide_edges
from twcert.metric import LengthFn, is_geodesic_cycle, subgraph_length

__all__ = [
    "Grid",
    "Wheel",
    "Wall",
    "WallCertificate",
    "make_grid",
    "make_wheel",
    "make_wall",
    "intro_grid_lengths",
    "subdivide_edges",
    "wall_lengths",
    "wall_certificate",
]


@dataclass(frozen=True)
class Grid:
    n: int
    graph: Graph
    coords: tuple[tuple[int, int], ...]
    outer: Cycle
    faces: tuple[Cycle, ...]

    def vertex(self, i: int, j: int) -> int:
        return (i - 1) * self.n + (j - 1)


@dataclass(frozen=True)
class Wheel:
    n: int
    graph: Graph
    hub: int
    rim: Cycle
    triangles: tuple[Cycle, ...]


@dataclass(frozen=True)
class Wall:
    t: int
    graph: Graph
    coords: tuple[tuple[int, int], ...]
    outer: Cycle
    bricks: tuple[Cycle, ...]

    def vertex(self, i: int, j: int) -> int:
        return self.coords.index((i, j))


def make_grid(n: int) -> Grid:
    """The ``n x n`` grid; vertex ``(i, j)`` gets id ``(i-1)*n + (j-1)``."""
    if n < 2:
        raise ValueError(f"grid side must be >= 2, got {n}")
    vid = lambda i, j: (i - 1) * n + (j - 1)  # noqa: E731
    coords = tuple((i, j) for i in range(1, n + 1) for j in range(1, n + 1))
    edges = []
    for i, j in coords:
        if j < n:
            edges.append((vid(i, j), vid(i, j + 1)))
        if i < n:
            edges.append((vid(i, j), vid(i + 1, j)))
    g = Graph(n * n, edges)
    ring = (
        [(1, j) for j in range(1, n + 1)]
        + [(i, n) for i in range(2, n + 1)]
        + [(n, j) for j in range(n - 1, 0, -1)]
        + [(i, 1) for i in range(n - 1, 1, -1)]
    )
    outer = Cycle.from_vertices(g, [vid(i, j) for i, j in ring])
    faces = tuple(
        Cycle.from_vertices(g, [vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)])
        for i in range(1, n)
        for j in range(1, n)
    )
    return Grid(n, g, coords, outer, faces)


def make_wheel(n: int) -> Wheel:
    """Rim ``0..n-1`` in cyclic order, hub ``n``; rim edges first, then spokes."""
    if n < 3:
        raise ValueError(f"wheel rim must have >= 3 vertices, got {n}")
    hub = n
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, hub) for i in range(n)]
    g = Graph(n + 1, edges)
    rim = Cycle.from_vertices(g, list(range(n)))
    triangles = tuple(Cycle.from_vertices(g, [hub, i, (i + 1) % n]) for i in range(n))
    return Wheel(n, g, hub, rim, triangles)


def make_wall(t: int) -> Wall:
    """Elementary ``t``-wall cut out of the ``2t x t`` grid."""
    if t < 2:
        raise ValueError(f"wall parameter must be >= 2, got {t}")
    cols, rows = 2 * t, t
    cells = [(i, j) for j in range(1, rows + 1) for i in range(1, cols + 1)]
    pairs = []
    for i, j in cells:
        if i < cols:
            pairs.append(((i, j), (i + 1, j)))
        if j < rows and (i + j) % 2 == 1:
            pairs.append(((i, j), (i, j + 1)))
    degree = {c: 0 for c in cells}
    for a, b in pairs:
        degree[a] += 1
        degree[b] += 1
    dropped = {c for c, d in degree.items() if d == 1}
    assert len(dropped) == 2, dropped
    coords = tuple(c for c in cells if c not in dropped)
    index = {c: k for k, c in enumerate(coords)}
    g = Graph(
        len(coords),
        [(index[a], index[b]) for a, b in pairs if a not in dropped and b not in dropped],
    )

    bricks = []
    for j in range(1, rows):
        rungs = [i for i in range(1, cols + 1) if (i + j) % 2 == 1]
        for a, b in zip(rungs, rungs[1:]):
            ring = [(a, j), (a + 1, j), (b, j), (b, j + 1), (a + 1, j + 1), (a, j + 1)]
            bricks.append(Cycle.from_vertices(g, [index[c] for c in ring]))

    outer = Cycle.from_vertices(g, [index[c] for c in _wall_boundary(coords, t)])
    return Wall(t, g, coords, outer, tuple(bricks))


def _wall_boundary(coords: Sequence[tuple[int, int]], t: int) -> list[tuple[int, int]]:
    """Walk the outer face: bottom row, right side up, top row, left side down."""
    cols = 2 * t
    present = set(coords)

    def along(j: int, a: int, b: int) -> list[tuple[int, int]]:
        step = 1 if b >= a else -1
        return [(i, j) for i in range(a + step, b + step, step)]

    first = [i for i in range(1, cols + 1) if (i, 1) in present]
    walk = [(i, 1) for i in first]
    col = first[-1]
    for j in range(1, t):
        right = max(i for i in range(1, cols + 1) if (i + j) % 2 == 1)
        walk += along(j, col, right)
        walk.append((right, j + 1))
        col = right
    top_left = min(i for i in range(1, cols + 1) if (i, t) in present)
    walk += along(t, col, top_left)
    col = top_left
    for j in range(t, 1, -1):
        left = min(i for i in range(1, cols + 1) if (i + j - 1) % 2 == 1)
        walk += along(j, col, left)
        walk.append((left, j - 1))
        col = left
    walk += along(1, col, first[0])
    walk.pop()  # back at the start
    return walk


def intro_grid_lengths(grid: Grid) -> LengthFn:
    """Length 1 on the outer cycle of the grid and 2 on every other edge."""
    on_outer = grid.outer.edges
    return LengthFn(grid.graph, [1 if eid in on_outer else 2 for eid in range(grid.graph.edge_count)])


def wall_lengths(
    wall: Wall, sub: Subdivision, host: Graph | None = None, rescale: bool = True
) -> LengthFn:
    """Wall-certificate lengths on a (host of a) subdivided wall.

    A branch path of an outer-cycle edge has total length 1, any other
    branch path total length 3, and every host edge outside the wall gets
    ``10 t**3``. With ``rescale`` all lengths are divided by 18.
    """
    host = host or sub.graph
    off_wall = Fraction(10 * wall.t**3)
    values = [off_wall] * host.edge_count
    outer = wall.outer.edges
    for f, path in enumerate(sub.branch_paths):
        per_edge = Fraction(1 if f in outer else 3, len(path))
        for new in path:
            u, v = sub.graph.edges[new]
            values[host.edge_id(u, v)] = per_edge
    if rescale:
        values = [x / 18 for x in values]
    return LengthFn(host, values)


@dataclass(frozen=True)
class WallCertificate:
    wall: Wall
    subdivision: Subdivision
    graph: Graph
    lengths: LengthFn
    certificate: Certificate


def wall_certificate(
    t: int,
    m: Sequence[int] | None = None,
    extra_vertices: int = 0,
    extra_edges: Iterable[tuple[int, int]] = (),
) -> WallCertificate:
    """Certificate with generator bound 1 on a subdivided ``t``-wall.

    ``m[f]`` is the number of edges replacing wall edge ``f`` (default: no
    subdivision). The host graph is the subdivision plus ``extra_vertices``
    new vertices and ``extra_edges``. Raises :class:`LemmaViolation` if the
    outer cycle turns out non-geodesic or a brick is longer than 1.
    """
    wall = make_wall(t)
    sub = subdivide_edges(wall.graph, m if m is not None else [1] * wall.graph.edge_count)
    extra_edges = list(extra_edges)
    if extra_vertices or extra_edges:
        host = Graph(sub.graph.vertex_count + extra_vertices, [*sub.graph.edges, *extra_edges])
    else:
        host = sub.graph
    lengths = wall_lengths(wall, sub, host)

    def lifted(c: Cycle) -> Cycle:
        # host edge ids extend the subdivision's, so the bits carry over
        return as_cycle(host, EdgeSet(host, sub.lift(c.edges).bits))

    outer = lifted(wall.outer)
    bricks = tuple(lifted(b) for b in wall.bricks)
    outer_length = subgraph_length(lengths, outer.edges)
    if outer_length != Fraction(len(wall.outer), 18):
        raise LemmaViolation(f"outer cycle has length {outer_length}, expected {len(wall.outer)}/18")
    for b in bricks:
        if subgraph_length(lengths, b.edges) > 1:
            raise LemmaViolation(f"brick {b.vertices} is longer than 1")
    check = is_geodesic_cycle(host, lengths, outer)
    if not check:
        raise LemmaViolation(f"subdivided outer cycle is not geodesic: {check}")
    cert = Certificate(outer, bricks, Fraction(1), Flavor.RATIONAL_GEODESIC)
    return WallCertificate(wall, sub, host, lengths, cert)
