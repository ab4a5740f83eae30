"""Acceptance gate: one test per build criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import itertools
import json
import random
import time
from fractions import Fraction

import networkx as nx
import pytest

from twcert.certificate import (
    Certificate,
    CertificateRejected,
    Flavor,
    fundamental_cycles,
    scale_factor,
    search_certificate,
    subdivide,
    verify_certificate,
)
from twcert.cli import main
from twcert.errors import LemmaViolation
from twcert.generators import intro_grid_lengths, make_grid, make_wall, make_wheel, wall_certificate
from twcert.graph import Graph, VertexSet, as_cycle, decompose_in_span
from twcert.lemmas import (
    Absorbed,
    Witness,
    absorb_component,
    check_precise_theorem,
    cycle_edge_counts,
    exact_treewidth,
    extend_separator,
    is_cycle_arc,
    rfamily_violations,
)
from twcert.metric import (
    LengthFn,
    enumerate_cycles_up_to,
    is_geodesic_algebraic,
    is_geodesic_cycle,
    subgraph_length,
)

from corpus import geodesic_instances, named_corpus, random_corpus, random_lengths

pytestmark = pytest.mark.acceptance

ORACLE_LIMIT = 16


def test_grid_pipeline(criterion, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    started = time.perf_counter()
    wrong = []
    for n in range(3, 10):
        assert main(["gen", "grid", str(n), "--lengths", "intro"]) == 0
        capsys.readouterr()
        code = main(["verify", f"grid-{n}.graph", f"grid-{n}.cert.json", "--length-file", f"grid-{n}.len"])
        report = json.loads(capsys.readouterr().out)
        expected = (4 * (n - 1)) // 16
        if code != 0 or report["k"] != expected or Fraction(report["cycle_length"]) != 4 * (n - 1):
            wrong.append((n, code, report.get("k")))
    elapsed = time.perf_counter() - started
    criterion(
        "grid pipeline",
        not wrong and elapsed < 5,
        f"n=3..9 gen+verify give k=floor(4(n-1)/16), mismatches={wrong}, {elapsed:.2f}s (limit 5s)",
    )


def test_soundness_against_treewidth_oracle(criterion):
    started = time.perf_counter()
    graphs = [(f"random-{i}", g) for i, g in enumerate(random_corpus(200, seed=2024, max_n=10))]
    graphs += named_corpus()
    rng = random.Random(99)
    certificates = positive = 0
    violations = []
    for name, g in graphs:
        tw = exact_treewidth(g, ORACLE_LIMIT)
        trials = [(LengthFn.unit(g), r) for r in (3, 4, 6)]
        trials.append((random_lengths(rng, g), Fraction(rng.choice([4, 6, 8]), 2)))
        for lengths, r in trials:
            cert = search_certificate(g, lengths, r)
            if cert is None:
                continue
            k = verify_certificate(g, lengths, cert).k
            certificates += 1
            positive += k > 0
            if k > tw:
                violations.append((name, str(r), k, tw))
    elapsed = time.perf_counter() - started
    criterion(
        "soundness vs oracle",
        not violations and elapsed < 600,
        f"{len(graphs)} graphs, {certificates} verified certificates ({positive} with k>=1), "
        f"violations={violations}, {elapsed:.1f}s (limit 600s)",
    )


@pytest.mark.xfail(
    strict=True,
    reason="the rims of W_4 and W_5 are geodesic under unit lengths (every rim pair is at most 2 apart "
    "either way), so they cannot be rejected; rejection holds for 6 <= n <= 9",
)
def test_wheel_rejection(criterion):
    bad = []
    for n in range(4, 10):
        wheel = make_wheel(n)
        cert = Certificate(wheel.rim, wheel.triangles, 3, Flavor.RATIONAL_GEODESIC)
        try:
            verify_certificate(wheel.graph, LengthFn.unit(wheel.graph), cert)
            bad.append((n, "accepted"))
        except CertificateRejected as exc:
            if [v.premise for v in exc.violations] != ["geodesic"]:
                bad.append((n, [v.premise for v in exc.violations]))
        if exact_treewidth(wheel.graph) != 3:
            bad.append((n, "treewidth"))
    criterion("wheel rejection", not bad, f"W_4..W_9 rejected as non-geodesic with treewidth 3, failures={bad}")


def test_geodesic_characterisations_agree(criterion):
    rng = random.Random(5)
    graphs = [g for g in random_corpus(200, seed=2024, max_n=10) if g.vertex_count <= 8]
    graphs += [g for _, g in named_corpus() if g.vertex_count <= 8]
    cycles = disagreements = non_geodesic = 0
    for g in graphs:
        for lengths in (LengthFn.unit(g), random_lengths(rng, g)):
            everything = sum(lengths.values, Fraction(0))
            for c in enumerate_cycles_up_to(g, lengths, everything):
                metric = bool(is_geodesic_cycle(g, lengths, c))
                algebraic = bool(is_geodesic_algebraic(g, lengths, c))
                cycles += 1
                non_geodesic += not metric
                disagreements += metric != algebraic
    criterion(
        "geodesic characterisations",
        disagreements == 0 and cycles > 0,
        f"{len(graphs)} graphs, {cycles} (graph, lengths, cycle) checks, {non_geodesic} non-geodesic, "
        f"disagreements={disagreements}",
    )


def test_extend_separator_guarantees(criterion):
    rng = random.Random(31)
    instances = geodesic_instances(200, seed=31)
    checked = 0
    failures = []
    while checked < 600:
        g, c = instances[checked % len(instances)]
        assert is_geodesic_cycle(g, LengthFn.unit(g), c)
        pool = list(c.vertices) if rng.random() < 0.5 else list(range(g.vertex_count))
        X = VertexSet.from_ids(g, rng.sample(pool, rng.randint(1, min(5, len(pool)))))
        d = rng.randint(1, 4)
        fam = extend_separator(g, c, X, d)
        failed = rfamily_violations(fam, X)
        if failed or 2 * d * len(X) < len(fam.union & c.vertex_set):
            failures.append((checked, failed))
        checked += 1
    criterion(
        "separator extension",
        not failures,
        f"{checked} (graph, geodesic cycle, X, d) instances, all five guarantees, failures={failures[:5]}",
    )


def _generators_for(g: Graph, c, rng: random.Random):
    """A random family of cycles summing to ``c``: short cycles if they suffice, else fundamental cycles."""
    pools = []
    bound = rng.randint(3, 6)
    short = [d.edges for d in enumerate_cycles_up_to(g, LengthFn.unit(g), bound)]
    pools.append(short)
    pools.append(fundamental_cycles(g))
    for pool in pools:
        rng.shuffle(pool)
        chosen = decompose_in_span(c.edges, pool)
        if chosen:
            return [as_cycle(g, pool[i]) for i in chosen]
    raise AssertionError("a cycle always lies in the cycle space")


def _random_parts(g: Graph, c, rng: random.Random):
    """Disjoint vertex sets, each meeting ``c`` in an arc or not at all."""
    n = len(c)
    used = set()
    parts = []
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.7:
            start, size = rng.randrange(n), rng.randint(1, max(1, n // 3))
            arc = {c.vertices[(start + i) % n] for i in range(size)}
            off = {v for v in rng.sample(range(g.vertex_count), min(2, g.vertex_count)) if v not in c.vertex_set}
            part = arc | off
        else:
            part = {v for v in rng.sample(range(g.vertex_count), min(2, g.vertex_count)) if v not in c.vertex_set}
        part -= used
        candidate = VertexSet.from_ids(g, part)
        if part and is_cycle_arc(c, candidate):
            parts.append(candidate)
            used |= part
    return parts


def test_absorb_component_dichotomy(criterion):
    rng = random.Random(47)
    instances = geodesic_instances(200, seed=47)
    checked = absorbed = witnesses = parity_checked = 0
    failures = []
    while checked < 600:
        g, c = instances[checked % len(instances)]
        gens = _generators_for(g, c, rng)
        if rng.random() < 0.5:
            X = VertexSet.from_ids(g, rng.sample(range(g.vertex_count), rng.randint(1, min(4, g.vertex_count))))
            parts = list(extend_separator(g, c, X, rng.randint(1, 3)).parts)
        else:
            parts = _random_parts(g, c, rng)
        checked += 1
        try:
            result = absorb_component(g, c, gens, parts)
        except LemmaViolation as exc:
            failures.append((checked, str(exc)))
            continue
        if isinstance(result, Witness):
            witnesses += 1
            if not (result.generator.vertex_set & result.first and result.generator.vertex_set & result.second):
                failures.append((checked, "bad witness"))
            continue
        absorbed += 1
        assert isinstance(result, Absorbed)
        union = VertexSet(g, 0)
        for part in parts:
            union = union | part
        if c.vertex_set - union - result.component:
            failures.append((checked, "component misses cycle vertices"))
        counts = cycle_edge_counts(g, c, parts)
        parity_checked += len(counts)
        if any(v % 2 for v in counts.values()):
            failures.append((checked, "odd cycle-edge count"))
    criterion(
        "cycle generation dichotomy",
        not failures and witnesses > 0 and absorbed > 0,
        f"{checked} instances ({witnesses} witness, {absorbed} absorbed), "
        f"{parity_checked} even (component, part) counts, failures={failures[:5]}",
    )


def test_precise_theorem_exhaustive(criterion):
    started = time.perf_counter()
    outcomes = []
    for n, k in ((5, 2), (4, 1)):
        grid = make_grid(n)
        outcomes.append(check_precise_theorem(grid.graph, grid.outer, grid.faces, 4, k))
    # the same conclusion where every premise holds: subdivided grid, p = 8, k = 1
    grid = make_grid(5)
    sm = subdivide(grid.graph, intro_grid_lengths(grid), 1)
    lifted = sm.lift_certificate(Certificate(grid.outer, grid.faces, 8, Flavor.RATIONAL_GEODESIC))
    assert is_geodesic_cycle(sm.graph, LengthFn.unit(sm.graph), lifted.cycle)
    outcomes.append(check_precise_theorem(sm.graph, lifted.cycle, lifted.generators, 8, 1))
    elapsed = time.perf_counter() - started
    criterion(
        "precise theorem exhaustive",
        all(x is None for x in outcomes) and elapsed < 60,
        f"grid-5 k=2, grid-4 k=1, subdivided grid-5 k=1: counterexamples={[x for x in outcomes if x]}, "
        f"{elapsed:.2f}s (limit 60s)",
    )


def _scaled_instance(g: Graph, rng: random.Random):
    for _ in range(40):
        values = [Fraction(1) if rng.random() < 0.6 else rng.choice([Fraction(2), Fraction(1, 2), Fraction(3, 2)])
                  for _ in range(g.edge_count)]
        lengths = LengthFn(g, values)
        m = scale_factor(lengths, 1)
        size = g.vertex_count + sum(int(m * x) - 1 for x in values)
        if size <= ORACLE_LIMIT and any(x != 1 for x in values):
            return lengths, m
    return None


def test_subdivision_invariance(criterion):
    rng = random.Random(77)
    pool = random_corpus(400, seed=77, min_n=4, max_n=8)
    done = 0
    failures = []
    lifts = 0
    for g in pool:
        if done == 50:
            break
        if g.edge_count > 11 or exact_treewidth(g) < 2:
            continue
        scaled = _scaled_instance(g, rng)
        if scaled is None:
            continue
        lengths, m = scaled
        sm = subdivide(g, lengths, m)
        before, after = exact_treewidth(g), exact_treewidth(sm.graph, ORACLE_LIMIT)
        if before != after:
            failures.append((done, before, after))
        unit = LengthFn.unit(sm.graph)
        for c in enumerate_cycles_up_to(g, lengths, sum(lengths.values, Fraction(0))):
            lifts += 1
            if subgraph_length(unit, sm.lift_cycle(c).edges) != m * subgraph_length(lengths, c.edges):
                failures.append((done, "length", c.vertices))
        done += 1
    criterion(
        "subdivision invariance",
        done == 50 and not failures,
        f"{done} graphs with treewidth >= 2, {lifts} lifted cycles, failures={failures[:5]}",
    )


def test_wall_certificate(criterion):
    rng = random.Random(3)
    problems = []
    for t in (2, 3, 4):
        wall = make_wall(t)
        for m in (None, [rng.randint(1, 3) for _ in range(wall.graph.edge_count)]):
            built = wall_certificate(t, m)
            if not is_geodesic_cycle(built.graph, built.lengths, built.certificate.cycle):
                problems.append((t, "not geodesic"))
            vc = verify_certificate(built.graph, built.lengths, built.certificate)
            if vc.max_generator_length > 1:
                problems.append((t, "generator longer than 1"))
        h = nx.Graph(wall.graph.edges)
        dist = dict(nx.all_pairs_shortest_path_length(h))
        verts = wall.outer.vertices
        n = len(verts)
        for a, b in itertools.combinations(range(n), 2):
            if min(b - a, n - b + a) > 3 * dist[verts[a]][verts[b]]:
                problems.append((t, "d_C > 3 d_W", verts[a], verts[b]))
    criterion(
        "wall certificate",
        not problems,
        f"t=2,3,4 identity and random subdivisions build, verify and stay within 3x distortion, problems={problems}",
    )
