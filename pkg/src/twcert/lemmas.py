"""Constructive separator lemmas and brute-force oracles.

Everything here works with unit edge lengths (hop distances).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from twcert.errors import BudgetExceeded, LemmaViolation, OracleLimitExceeded
from twcert.graph import Cycle, Graph, VertexSet, components, f2_sum, unit_distances
from twcert.metric import DEFAULT_WORK_BUDGET

__all__ = [
    "SeparatorStep",
    "RFamily",
    "Witness",
    "Absorbed",
    "range_in",
    "ball",
    "extend_separator",
    "rfamily_violations",
    "is_cycle_arc",
    "absorb_component",
    "cycle_edge_counts",
    "check_precise_theorem",
    "balanced_separator",
    "exact_treewidth",
    "treewidth_elimination",
    "treewidth_subset_dp",
    "DEFAULT_ORACLE_LIMIT",
]

DEFAULT_ORACLE_LIMIT = 12


def ball(g: Graph, Y: VertexSet, y: int, radius: int) -> VertexSet:
    """Members of ``Y`` within hop distance ``radius`` of ``y``."""
    dist = unit_distances(g, [y])
    return VertexSet(g, sum(1 << z for z in Y if dist[z] is not None and dist[z] <= radius))


def range_in(g: Graph, Y: VertexSet, y: int, d: int) -> int:
    """Largest ``j`` whose radius ``j*d`` ball around ``y`` holds at least ``j+1`` members of ``Y``."""
    if y not in Y:
        raise ValueError(f"vertex {y} is not in Y")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    dist = unit_distances(g, [y])
    reach = sorted(dist[z] for z in Y if dist[z] is not None)
    best = 0
    # |B^j| <= |Y| caps j at |Y| - 1; the condition is not monotone in j
    for j in range(1, len(Y)):
        if bisect_right(reach, j * d) >= j + 1:
            best = j
    return best


@dataclass(frozen=True)
class SeparatorStep:
    """One round of :func:`extend_separator`."""

    remaining: VertexSet  # X_k before the round
    center: int
    range: int
    ball: VertexSet
    arc: VertexSet
    part: VertexSet


@dataclass(frozen=True)
class RFamily:
    graph: Graph
    cycle: Cycle
    d: int
    parts: tuple[VertexSet, ...]
    steps: tuple[SeparatorStep, ...] = ()

    @property
    def union(self) -> VertexSet:
        bits = 0
        for part in self.parts:
            bits |= part.bits
        return VertexSet(self.graph, bits)


def _arc_around(c: Cycle, center: int, reach: int, targets: VertexSet) -> VertexSet:
    """Shortest sub-path of ``c`` through ``center`` covering ``targets`` within ``reach`` steps."""
    verts = c.vertices
    n = len(verts)
    pos = c.position[center]
    limit = min(reach, n - 1)
    forward = max((o for o in range(1, limit + 1) if verts[(pos + o) % n] in targets), default=0)
    backward = max((o for o in range(1, limit + 1) if verts[(pos - o) % n] in targets), default=0)
    if forward + backward >= n:
        return c.vertex_set
    return VertexSet.from_ids(c.graph, (verts[(pos + o) % n] for o in range(-backward, forward + 1)))


def extend_separator(g: Graph, c: Cycle, X: VertexSet, d: int) -> RFamily:
    """Grow ``X`` along a geodesic cycle into pairwise far-apart parts.

    Repeatedly takes the vertex of ``X_k`` on the cycle with the largest
    range (least id on ties), removes its ball ``B_k`` from ``X_k`` and
    records the part ``B_k`` plus the minimal cycle arc through the centre
    covering ``B_k``. Leftover vertices of ``X`` off the cycle form a last
    part. The cycle must be geodesic for the guarantees to hold.
    """
    if c.graph != g or X.graph != g:
        raise ValueError("cycle and X must belong to g")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    on_cycle = c.vertex_set
    current = X
    parts = []
    steps = []
    while current & on_cycle:
        best_v, best_j = -1, -1
        for x in current & on_cycle:
            j = range_in(g, current, x, d)
            if j > best_j:
                best_v, best_j = x, j
        b = ball(g, current, best_v, best_j * d)
        arc = _arc_around(c, best_v, best_j * d, b)
        part = b | arc
        steps.append(SeparatorStep(current, best_v, best_j, b, arc, part))
        parts.append(part)
        current = current - b
    if current:
        parts.append(current)
    return RFamily(g, c, d, tuple(parts), tuple(steps))


def is_cycle_arc(c: Cycle, s: VertexSet) -> bool:
    """True when ``s`` meets ``c`` in nothing or in a connected sub-path."""
    verts = c.vertices
    hits = [v in s for v in verts]
    count = sum(hits)
    if count in (0, len(verts)):
        return True
    starts = sum(1 for i, h in enumerate(hits) if h and not hits[i - 1])
    return starts == 1


def rfamily_violations(fam: RFamily, X: VertexSet) -> list[str]:
    """Names of the family guarantees that fail (empty list when all hold)."""
    g, c, d = fam.graph, fam.cycle, fam.d
    failed = []
    seen = 0
    for part in fam.parts:
        if seen & part.bits:
            failed.append("disjoint")
            break
        seen |= part.bits
    union = fam.union
    if (X - union) or (union - (X | c.vertex_set)):
        failed.append("cover")
    if 2 * d * len(X) < len(union & c.vertex_set):
        failed.append("budget")
    if not all(is_cycle_arc(c, part) for part in fam.parts):
        failed.append("arc")
    for a, part in enumerate(fam.parts):
        dist = unit_distances(g, list(part))
        others = [v for b, other in enumerate(fam.parts) if b != a for v in other]
        if any(dist[v] is not None and dist[v] <= d for v in others):
            failed.append("separation")
            break
    return failed


@dataclass(frozen=True)
class Witness:
    """A generator meeting two distinct parts."""

    generator: Cycle
    first: VertexSet
    second: VertexSet


@dataclass(frozen=True)
class Absorbed:
    """A component of ``G`` minus all parts that holds every other cycle vertex.

    ``component`` is empty only when no vertex lies outside the parts.
    """

    component: VertexSet


def absorb_component(
    g: Graph, c: Cycle, generators: Sequence[Cycle], fam: RFamily | Sequence[VertexSet]
) -> Witness | Absorbed:
    """Either a generator touches two parts, or one component absorbs the cycle.

    ``generators`` must sum to ``c`` and the parts must be disjoint with
    connected cycle intersections; :class:`ValueError` otherwise. A
    :class:`LemmaViolation` means the dichotomy itself failed.
    """
    parts = list(fam.parts if isinstance(fam, RFamily) else fam)
    if f2_sum([d.edges for d in generators], g) != c.edges:
        raise ValueError("generators do not sum to the cycle")
    union = 0
    for part in parts:
        if union & part.bits:
            raise ValueError("parts are not pairwise disjoint")
        if not is_cycle_arc(c, part):
            raise ValueError("a part meets the cycle in a disconnected set")
        union |= part.bits
    for gen in generators:
        met = [part for part in parts if gen.vertex_set & part]
        if len(met) >= 2:
            return Witness(gen, met[0], met[1])
    removed = VertexSet(g, union)
    rest = c.vertex_set - removed
    comps = components(g, removed)
    if not rest:
        return Absorbed(comps[0] if comps else VertexSet(g))
    for q in comps:
        if not (rest - q):
            return Absorbed(q)
    raise LemmaViolation("no generator meets two parts, yet the cycle is split")


def cycle_edge_counts(g: Graph, c: Cycle, parts: Sequence[VertexSet]) -> dict[tuple[int, int], int]:
    """Number of cycle edges between component ``q`` of ``G - parts`` and part ``r``.

    Keys are ``(component index, part index)`` over all pairs.
    """
    union = 0
    for part in parts:
        union |= part.bits
    comps = components(g, VertexSet(g, union))
    where = {}
    for qi, q in enumerate(comps):
        for v in q:
            where[v] = ("q", qi)
    for ri, part in enumerate(parts):
        for v in part:
            where[v] = ("r", ri)
    counts = {(qi, ri): 0 for qi in range(len(comps)) for ri in range(len(parts))}
    for eid in c.edges:
        u, v = g.edges[eid]
        a, b = where[u], where[v]
        if a[0] == b[0]:
            continue
        q, r = (a, b) if a[0] == "q" else (b, a)
        counts[(q[1], r[1])] += 1
    return counts


def _colex(n: int, size: int) -> Iterator[tuple[int, ...]]:
    if size == 0:
        yield ()
        return
    for top in range(size - 1, n):
        for rest in _colex(top, size - 1):
            yield (*rest, top)


def check_precise_theorem(
    g: Graph,
    c: Cycle,
    generators: Sequence[Cycle],
    p: int,
    k: int,
    budget: int = DEFAULT_WORK_BUDGET,
) -> VertexSet | None:
    """Search all ``X`` with ``|X| <= k`` for one leaving no component with half the cycle.

    Returns the first such ``X`` (by size, then colexicographic) or None.
    ``generators`` and ``p`` document the premise and are not re-verified.
    """
    n = g.vertex_count
    total = sum(comb(n, s) for s in range(min(k, n) + 1))
    if total > budget:
        raise BudgetExceeded("precise-theorem search", budget)
    cbits = c.vertex_set.bits
    need = len(c)
    for size in range(min(k, n) + 1):
        for combo in _colex(n, size):
            X = VertexSet.from_ids(g, combo)
            if not any(2 * (q.bits & cbits).bit_count() >= need for q in components(g, X)):
                return X
    return None


def balanced_separator(
    g: Graph, A: VertexSet, k: int, budget: int = DEFAULT_WORK_BUDGET
) -> VertexSet | None:
    """Lexicographically least ``X``, ``|X| <= k``, leaving at most half of ``A - X`` per component."""
    if k < 0:
        raise ValueError("k must be >= 0")
    n = g.vertex_count
    abits = A.bits
    steps = 0

    def balanced(X: VertexSet) -> bool:
        rest = (abits & ~X.bits).bit_count()
        return all(2 * (q.bits & abits).bit_count() <= rest for q in components(g, X))

    stack: list[tuple[tuple[int, ...], int]] = [((), 0)]
    while stack:
        prefix, start = stack.pop()
        steps += 1
        if steps > budget:
            raise BudgetExceeded("balanced separator search", budget)
        X = VertexSet.from_ids(g, prefix)
        if balanced(X):
            return X
        if len(prefix) < k:
            stack.extend(((*prefix, v), v + 1) for v in reversed(range(start, n)))
    return None


def _popcount(x: int) -> int:
    return x.bit_count()


def _heuristic_width(adj: Sequence[int], n: int, by_fill: bool) -> int:
    adj = list(adj)
    alive = (1 << n) - 1
    width = 0
    while alive:
        best, best_key = -1, None
        rest = alive
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            nb = adj[v] & alive
            if by_fill:
                fill = 0
                m = nb
                while m:
                    lw = m & -m
                    u = lw.bit_length() - 1
                    m ^= lw
                    fill += _popcount(nb & ~adj[u] & ~(1 << u))
                key = (fill, _popcount(nb), v)
            else:
                key = (_popcount(nb), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        nb = adj[best] & alive
        width = max(width, _popcount(nb))
        m = nb
        while m:
            lw = m & -m
            u = lw.bit_length() - 1
            m ^= lw
            adj[u] |= nb & ~(1 << u)
        alive &= ~(1 << best)
    return width


def _degeneracy(adj: Sequence[int], alive: int) -> int:
    best = 0
    while alive:
        v, deg = -1, None
        rest = alive
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            du = _popcount(adj[u] & alive)
            if deg is None or du < deg:
                v, deg = u, du
        best = max(best, deg)
        alive &= ~(1 << v)
    return best


def treewidth_elimination(g: Graph) -> int:
    """Exact tree-width by branch and bound over elimination orderings.

    The graph left after eliminating a vertex set does not depend on the
    order, so states are memoized by the set of remaining vertices.
    """
    n = g.vertex_count
    if n == 0:
        return 0
    best = _heuristic_width(g.adjacency_masks, n, by_fill=True)
    seen: dict[int, int] = {}

    def eliminate(adj: list[int], v: int, alive: int) -> list[int]:
        nb = adj[v] & alive
        out = adj[:]
        m = nb
        while m:
            lw = m & -m
            u = lw.bit_length() - 1
            m ^= lw
            out[u] |= nb & ~(1 << u)
        return out

    def search(adj: list[int], alive: int, width: int) -> None:
        nonlocal best
        while True:
            size = _popcount(alive)
            if size - 1 <= width:
                best = min(best, width)
                return
            low = max(width, _degeneracy(adj, alive))
            if low >= best:
                return
            if seen.get(alive, best + 1) <= width:
                return
            seen[alive] = width
            # (almost) simplicial vertices of small degree are safe to eliminate
            forced = None
            rest = alive
            while rest and forced is None:
                bit = rest & -rest
                v = bit.bit_length() - 1
                rest ^= bit
                nb = adj[v] & alive
                deg = _popcount(nb)
                missing = [u for u in _bits(nb) if (nb & ~adj[u] & ~(1 << u))]
                if not missing or (deg <= low and _almost_clique(adj, nb)):
                    forced = v
            if forced is None:
                break
            width = max(width, _popcount(adj[forced] & alive))
            if width >= best:
                return
            adj = eliminate(adj, forced, alive)
            alive &= ~(1 << forced)
        order = sorted(_bits(alive), key=lambda v: (_popcount(adj[v] & alive), v))
        for v in order:
            deg = _popcount(adj[v] & alive)
            if max(width, deg) >= best:
                continue
            search(eliminate(adj, v, alive), alive & ~(1 << v), max(width, deg))

    search(list(g.adjacency_masks), (1 << n) - 1, 0)
    return best


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _almost_clique(adj: Sequence[int], nb: int) -> bool:
    """Some vertex of ``nb`` can be dropped so the rest is a clique."""
    for w in _bits(nb):
        rest = nb & ~(1 << w)
        if all(not (rest & ~adj[u] & ~(1 << u)) for u in _bits(rest)):
            return True
    return False


def treewidth_subset_dp(g: Graph) -> int:
    """Exact tree-width by dynamic programming over vertex subsets.

    ``TW(S ∪ {v}) = min_v max(TW(S), |Q(S, v)|)`` where ``Q(S, v)`` is the set
    of vertices outside ``S ∪ {v}`` reachable from ``v`` through ``S``.
    Subsets whose value reaches a min-degree upper bound are pruned.
    """
    n = g.vertex_count
    if n == 0:
        return 0
    adj = g.adjacency_masks
    full = (1 << n) - 1
    upper = _heuristic_width(adj, n, by_fill=False)
    layer = {0: -1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for s, value in layer.items():
            for v in _bits(full & ~s):
                q = _popcount(_reach_through(adj, s, v) & ~s & ~(1 << v))
                cand = max(value, q)
                if cand >= upper:
                    continue
                t = s | (1 << v)
                if cand < nxt.get(t, upper):
                    nxt[t] = cand
        if not nxt:
            return upper
        layer = nxt
    return max(layer[full], 0)


def _reach_through(adj: Sequence[int], inner: int, v: int) -> int:
    """Vertices adjacent to the component of ``v`` in ``G[inner ∪ {v}]``."""
    reach = adj[v]
    seen = (1 << v) | (reach & inner)
    frontier = reach & inner
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        nb = adj[low.bit_length() - 1]
        reach |= nb
        fresh = nb & inner & ~seen
        seen |= fresh
        frontier |= fresh
    return reach


def exact_treewidth(g: Graph, limit: int = DEFAULT_ORACLE_LIMIT) -> int:
    """Tree-width computed twice, by elimination search and by subset DP.

    Raises :class:`OracleLimitExceeded` above ``limit`` vertices and
    :class:`LemmaViolation` if the two methods disagree.
    """
    if g.vertex_count > limit:
        raise OracleLimitExceeded(f"{g.vertex_count} vertices exceed the oracle limit of {limit}")
    a = treewidth_elimination(g)
    b = treewidth_subset_dp(g)
    if a != b:
        raise LemmaViolation(f"tree-width oracles disagree: elimination {a}, subset DP {b}")
    return a
