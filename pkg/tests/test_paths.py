import math
import random

import pytest

from chronopath.dynamicity import DynamicityConfig, DynamicityReport, detect_hdv
from chronopath.errors import ConfigError, QueryError
from chronopath.evaluation import build_subgraphs
from chronopath.paths import (
    Chronopath,
    ChronopathEngine,
    PathQuery,
    PathSegment,
    find_chronopath,
    find_relaxed_chronopath,
    significance_score,
    sssp,
)
from chronopath.snapshots import build_snapshots

from conftest import make_graph, random_temporal_graph

INF = math.inf


# ---------------------------------------------------------------------------
# oracles


def bellman_ford(n, edges, source):
    """(src, dst, w) triples; returns exact distances."""
    dist = [INF] * n
    dist[source] = 0.0
    for _ in range(n - 1):
        changed = False
        for s, d, w in edges:
            if dist[s] + w < dist[d]:
                dist[d] = dist[s] + w
                changed = True
        if not changed:
            break
    return dist


def floyd_warshall(n, adj):
    """All-pairs over an adjacency dict restricted to its own keys."""
    dist = {u: {v: INF for v in adj} for u in adj}
    for u in adj:
        dist[u][u] = 0.0
        for v, w in adj[u]:
            if v in dist[u] and w < dist[u][v]:
                dist[u][v] = w
    for k in adj:
        for i in adj:
            dik = dist[i][k]
            if dik == INF:
                continue
            row_k = dist[k]
            row_i = dist[i]
            for j in adj:
                alt = dik + row_k[j]
                if alt < row_i[j]:
                    row_i[j] = alt
    return dist


def strict_layer_adjacency(seq, report, hop_cost):
    layers = {}
    for i in range(1, len(seq.snapshots)):
        allowed = report.hdv_at(i)
        adj = {v: [] for v in allowed}
        for s, d, w, _ in seq.snapshots[i].edge_pairs():
            if s in allowed and d in allowed:
                adj[s].append((d, 1.0 if hop_cost else w))
        layers[i] = adj
    return layers


def exhaustive_stitching_oracle(seq, report, q, target, hop_cost=False):
    """Minimum strict chronopath length by enumerating every start/end layer
    pair and every handoff-vertex combination over Floyd-Warshall all-pairs
    tables (independent of the layered Dijkstra implementation)."""
    layers = strict_layer_adjacency(seq, report, hop_cost)
    apsp = {i: floyd_warshall(seq.vertex_count, adj) for i, adj in layers.items()}
    indices = sorted(layers)
    best = INF
    for si, s in enumerate(indices):
        if q not in apsp[s]:
            continue
        for ei in range(si, len(indices)):
            e = indices[ei]
            if indices[si:ei + 1] != list(range(s, e + 1)):
                continue  # strict mode: consecutive layers only
            chain = indices[si:ei + 1]
            best = min(best, _best_over_handoffs(apsp, chain, q, target))
    return best


def _best_over_handoffs(apsp, chain, q, target):
    if target not in apsp[chain[-1]]:
        return INF

    def rec(layer_pos, vertex, acc):
        layer = chain[layer_pos]
        if vertex not in apsp[layer]:
            return INF
        if layer_pos == len(chain) - 1:
            return acc + apsp[layer][vertex][target]
        best = INF
        for handoff in apsp[layer]:
            leg = apsp[layer][vertex][handoff]
            if leg == INF:
                continue
            best = min(best, rec(layer_pos + 1, handoff, acc + leg))
        return best

    return rec(0, q, 0.0)


def verify_strict_output(path, report, q, targets):
    indices = [s.snapshot for s in path.segments]
    assert indices == list(range(indices[0], indices[0] + len(indices)))
    for seg in path.segments:
        for v in seg.vertices:
            assert v in report.hdv_at(seg.snapshot)
    for a, b in zip(path.segments, path.segments[1:]):
        assert a.vertices[-1] == b.vertices[0]
    assert path.segments[0].vertices[0] == q
    assert path.segments[-1].vertices[-1] in targets
    assert path.hdv_fraction == 1.0


# ---------------------------------------------------------------------------
# sssp


def line_snapshot():
    return build_snapshots(make_graph([(0, 1, 0), (1, 2, 0)]), 1).snapshots[-1]


def test_sssp_line_graph():
    tree = sssp(line_snapshot(), 0)
    assert tree.dist[2] == 2.0
    assert tree.path_to(2) == [0, 1, 2]


def test_sssp_detour_beats_heavy_edge():
    graph = make_graph([(0, 1, 0, 0, 1), (1, 2, 0, 0, 1), (0, 2, 0, 0, 3)])
    snap = build_snapshots(graph, 1).snapshots[-1]
    tree = sssp(snap, 0)
    assert tree.dist[2] == 2.0
    assert tree.path_to(2) == [0, 1, 2]


def test_sssp_tie_prefers_smaller_predecessor():
    # two equal-cost routes into 3: via 1 and via 2
    graph = make_graph(
        [(0, 1, 0, 0, 1), (0, 2, 0, 0, 1), (1, 3, 0, 0, 1), (2, 3, 0, 0, 1)]
    )
    snap = build_snapshots(graph, 1).snapshots[-1]
    tree = sssp(snap, 0)
    assert tree.dist[3] == 2.0
    assert tree.parent[3] == 1


def test_sssp_unreachable_absent():
    graph = make_graph([(0, 1, 0), (2, 3, 0)])
    snap = build_snapshots(graph, 1).snapshots[-1]
    tree = sssp(snap, 0)
    assert 3 not in tree.dist and tree.path_to(3) is None


def test_sssp_matches_bellman_ford_random():
    rng = random.Random(41)
    for _ in range(60):
        graph = random_temporal_graph(rng, max_vertices=20, max_edges=70)
        snap = build_snapshots(graph, 1).snapshots[-1]
        edges = [(s, d, w) for s, d, w, _ in snap.edge_pairs()]
        source = rng.randrange(snap.vertex_count)
        oracle = bellman_ford(snap.vertex_count, edges, source)
        tree = sssp(snap, source)
        for v in range(snap.vertex_count):
            assert tree.dist.get(v, INF) == oracle[v]


def test_sssp_rejects_negative_weight():
    graph = make_graph([(0, 1, 0, 0, 1)])
    snap = build_snapshots(graph, 1).snapshots[-1]
    snap.out_adj[0] = [(1, -2.0, 1)]
    with pytest.raises(ConfigError, match="negative"):
        sssp(snap, 0)


# ---------------------------------------------------------------------------
# significance


def make_path(snapshot, vertices, weights, fraction):
    p = Chronopath(
        segments=[PathSegment(snapshot, vertices, weights)],
        total_length=sum(weights),
        hdv_fraction=fraction,
    )
    return p


def test_significance_examples():
    self_path = make_path(1, [5], [], 1.0)
    assert significance_score(self_path, 0.5) == 1.0
    p = make_path(1, [0, 1, 2, 3], [1, 1, 1], 1.0)
    assert significance_score(p, 0.5) == pytest.approx(0.625)


def test_significance_monotonicity():
    short = make_path(1, [0, 1], [1], 0.5)
    long_ = make_path(1, [0, 1, 2], [1, 1], 0.5)
    assert significance_score(short, 0.5) > significance_score(long_, 0.5)
    low = make_path(1, [0, 1], [1], 0.5)
    high = make_path(1, [0, 1], [1], 1.0)
    for lam in (0.1, 0.5, 0.9):
        assert significance_score(high, lam) > significance_score(low, lam)
    assert significance_score(high, 0.0) == significance_score(low, 0.0)


# ---------------------------------------------------------------------------
# strict chronopaths


def report_with(seq, hdv_by_index):
    """Hand-pinned HDV sets, bypassing the scoring pipeline."""
    report = DynamicityReport(config=DynamicityConfig())
    for i in range(1, len(seq.snapshots)):
        report.scores[i] = {}
        report.hdv_sets[i] = set(hdv_by_index.get(i, set()))
        report.union_hdv |= report.hdv_sets[i]
    return report


def test_single_snapshot_strict_collapses_to_dijkstra():
    graph = make_graph([(0, 1, 5), (1, 2, 5), (0, 2, 5)], n=3)
    # boundary layout: everything arrives in snapshot 1
    graph = make_graph(
        [(9, 9, 0)] + [(0, 1, 5), (1, 2, 5)], n=10
    )
    seq = build_snapshots(graph, 1)
    report = report_with(seq, {1: {0, 1, 2}})
    query = PathQuery(source=0, targets=[2], mode="strict")
    results = find_chronopath(seq, None, report, query)
    path = results[2]
    assert len(path.segments) == 1
    assert path.segments[0].vertices == [0, 1, 2]
    assert path.total_length == 2.0
    verify_strict_output(path, report, 0, {2})


def test_strict_requires_dynamic_source():
    graph = make_graph([(0, 1, 0), (1, 2, 10)])
    seq = build_snapshots(graph, 2)
    report = report_with(seq, {1: {1, 2}})
    with pytest.raises(QueryError, match="never highly dynamic"):
        find_chronopath(
            seq, None, report, PathQuery(source=0, targets=[2], mode="strict")
        )


def test_empty_targets_rejected():
    with pytest.raises(QueryError):
        PathQuery(source=0, targets=[], mode="strict")


def test_strict_multi_snapshot_stitching():
    # snapshot 1: 0-1 available; snapshot 2 adds 1-2; strict path must
    # hand off at vertex 1 and 1 must stay dynamic in both snapshots
    graph = make_graph([(0, 1, 10), (1, 2, 20)])
    seq = build_snapshots(graph, 2)
    report = report_with(seq, {1: {0, 1}, 2: {1, 2}})
    query = PathQuery(source=0, targets=[2], mode="strict")
    path = find_chronopath(seq, None, report, query)[2]
    assert [s.snapshot for s in path.segments] == [1, 2]
    assert path.segments[0].vertices == [0, 1]
    assert path.segments[1].vertices == [1, 2]
    assert path.total_length == 2.0
    verify_strict_output(path, report, 0, {2})


def test_strict_waiting_requires_hdv_through_gap():
    # target edge only appears in snapshot 3; vertex 1 must stay HDV in
    # snapshot 2 to wait there
    graph = make_graph([(0, 1, 10), (9, 9, 20), (1, 2, 30)], n=10)
    seq = build_snapshots(graph, 3)
    waiting = report_with(seq, {1: {0, 1}, 2: {1}, 3: {1, 2}})
    q = PathQuery(source=0, targets=[2], mode="strict")
    path = find_chronopath(seq, None, waiting, q)[2]
    assert [s.snapshot for s in path.segments] == [1, 2, 3]
    assert path.segments[1].vertices == [1]  # pass-through segment
    verify_strict_output(path, waiting, 0, {2})

    broken = report_with(seq, {1: {0, 1}, 2: set(), 3: {1, 2}})
    assert find_chronopath(seq, None, broken, q) == {}


def test_strict_self_target():
    graph = make_graph([(0, 1, 10), (1, 2, 20)])
    seq = build_snapshots(graph, 2)
    report = report_with(seq, {1: {0}, 2: {0}})
    path = find_chronopath(
        seq, None, report, PathQuery(source=0, targets=[0], mode="strict")
    )[0]
    assert path.total_length == 0.0
    assert len(path.segments) == 1
    assert path.segments[0].vertices == [0]
    assert path.segments[0].snapshot == 1  # earliest feasible layer


def test_strict_exempt_targets_flag():
    graph = make_graph([(0, 1, 10), (1, 2, 10)])
    seq = build_snapshots(graph, 1)
    report = report_with(seq, {1: {0, 1}})
    q = PathQuery(source=0, targets=[2], mode="strict")
    assert find_chronopath(seq, None, report, q) == {}
    q_exempt = PathQuery(
        source=0, targets=[2], mode="strict", exempt_targets=True
    )
    path = find_chronopath(seq, None, report, q_exempt)[2]
    assert path.segments[-1].vertices == [0, 1, 2]
    assert path.hdv_fraction == pytest.approx(2 / 3)


def test_strict_uses_subgraph_region():
    graph = make_graph([(0, 1, 10), (1, 2, 10)])
    seq = build_snapshots(graph, 1)
    report = report_with(seq, {1: {0, 1, 2}})
    subgraphs = build_subgraphs(seq, report)
    path = find_chronopath(
        seq, subgraphs, report, PathQuery(source=0, targets=[2], mode="strict")
    )[2]
    assert path.total_length == 2.0


def test_strict_matches_exhaustive_oracle_random():
    rng = random.Random(47)
    checked = 0
    for _ in range(40):
        graph = random_temporal_graph(rng, max_vertices=12, max_edges=50)
        n_intervals = rng.randint(2, 4)
        seq = build_snapshots(graph, n_intervals)
        report = detect_hdv(seq, DynamicityConfig(theta=0.05))
        if not report.union_hdv:
            continue
        q = sorted(report.union_hdv)[rng.randrange(len(report.union_hdv))]
        targets = sorted(rng.sample(range(graph.vertex_count),
                                    min(3, graph.vertex_count)))
        query = PathQuery(source=q, targets=targets, mode="strict")
        results = find_chronopath(seq, None, report, query)
        for t in targets:
            oracle = exhaustive_stitching_oracle(seq, report, q, t)
            if t in results:
                assert results[t].total_length == oracle
                verify_strict_output(results[t], report, q, {t})
                checked += 1
            else:
                assert oracle == INF
    assert checked > 10


# ---------------------------------------------------------------------------
# relaxed chronopaths


def fig_style_fixture():
    """Strict route 0-1 / 1-2 / 2-3 over three snapshots (all vertices
    dynamic along it) versus a shorter relaxed shortcut through the regular
    vertex 4 that skips the middle snapshot."""
    graph = make_graph(
        [
            (0, 1, 10),   # snapshot 1
            (0, 4, 10),
            (1, 2, 20),   # snapshot 2
            (2, 3, 30),   # snapshot 3
            (4, 3, 30),
        ]
    )
    seq = build_snapshots(graph, 3)
    report = report_with(seq, {1: {0, 1}, 2: {1, 2}, 3: {2, 3}})
    return seq, report


def test_relaxed_skip_snapshot_candidate():
    seq, report = fig_style_fixture()
    strict_path = find_chronopath(
        seq, None, report, PathQuery(source=0, targets=[3], mode="strict")
    )[3]
    assert [s.snapshot for s in strict_path.segments] == [1, 2, 3]
    assert strict_path.total_length == 3.0

    query = PathQuery(source=0, targets=[3], mode="relaxed")
    candidates = find_relaxed_chronopath(seq, report, query)[3]
    identities = [c.identity() for c in candidates]
    # the skip path 0-4 (snapshot 1) then 4-3 (snapshot 3) bypasses snapshot 2
    skip = next(
        c for c in candidates
        if [s.snapshot for s in c.segments] == [1, 3]
    )
    assert skip.total_length == 2.0
    assert skip.flat_vertices() == (0, 4, 4, 3)
    # the strict winner is present with full dynamic fraction
    assert strict_path.identity() in identities
    winner = candidates[identities.index(strict_path.identity())]
    assert winner.hdv_fraction == 1.0


def test_relaxed_only_route_through_regular_vertex():
    graph = make_graph([(0, 4, 10), (4, 2, 10)])
    seq = build_snapshots(graph, 1)
    report = report_with(seq, {1: {0, 2}})
    strict = find_chronopath(
        seq, None, report, PathQuery(source=0, targets=[2], mode="strict")
    )
    assert strict == {}
    relaxed = find_relaxed_chronopath(
        seq, report, PathQuery(source=0, targets=[2], mode="relaxed")
    )
    assert relaxed[2][0].flat_vertices() == (0, 4, 2)
    assert relaxed[2][0].hdv_fraction == pytest.approx(2 / 3)


def test_relaxed_dominates_strict_score():
    rng = random.Random(53)
    for _ in range(25):
        graph = random_temporal_graph(rng, max_vertices=10, max_edges=40)
        seq = build_snapshots(graph, 3)
        report = detect_hdv(seq, DynamicityConfig(theta=0.05))
        if not report.union_hdv:
            continue
        q = sorted(report.union_hdv)[0]
        targets = sorted(rng.sample(range(graph.vertex_count),
                                    min(2, graph.vertex_count)))
        strict_results = find_chronopath(
            seq, None, report,
            PathQuery(source=q, targets=targets, mode="strict"),
        )
        relaxed_results = find_relaxed_chronopath(
            seq, report,
            PathQuery(source=q, targets=targets, mode="relaxed",
                      max_candidates=64),
        )
        for t, strict_path in strict_results.items():
            assert t in relaxed_results
            candidates = relaxed_results[t]
            assert candidates[0].significance >= strict_path.significance
            assert strict_path.identity() in {c.identity() for c in candidates}
            assert any(c.hdv_fraction == 1.0 for c in candidates)


def test_relaxed_ranking_deterministic():
    seq, report = fig_style_fixture()
    query = PathQuery(source=0, targets=[3], mode="relaxed")
    a = find_relaxed_chronopath(seq, report, query)[3]
    b = find_relaxed_chronopath(seq, report, query)[3]
    assert [c.identity() for c in a] == [c.identity() for c in b]
    scores = [c.significance for c in a]
    assert scores == sorted(scores, reverse=True)


def test_relaxed_max_candidates_cap():
    seq, report = fig_style_fixture()
    query = PathQuery(source=0, targets=[3], mode="relaxed", max_candidates=1)
    candidates = find_relaxed_chronopath(seq, report, query)[3]
    assert len(candidates) == 1


def test_mode_mismatch_rejected():
    seq, report = fig_style_fixture()
    with pytest.raises(ConfigError):
        find_chronopath(seq, None, report,
                        PathQuery(source=0, targets=[3], mode="relaxed"))
    with pytest.raises(ConfigError):
        find_relaxed_chronopath(seq, report,
                                PathQuery(source=0, targets=[3], mode="strict"))
