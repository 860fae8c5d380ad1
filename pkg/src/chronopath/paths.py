"""Cross-snapshot shortest-path queries.

A chronopath stitches per-snapshot shortest-path segments at handoff
vertices.  Strict mode confines every segment to the highly dynamic vertices
of its snapshot (searched inside that snapshot's significant subgraph) and
requires consecutive snapshot indices; a handoff vertex may wait through a
snapshot as a single-vertex segment provided it stays highly dynamic there.
Relaxed mode searches full snapshots, may skip snapshots entirely, and ranks
candidates by a significance score balancing path length against the fraction
of highly dynamic vertices.

Both modes run a layered dynamic program over (snapshot, vertex) states:
entry costs carried across layers, Dijkstra within each layer.  Tie-breaking
is fully deterministic: within a layer, equal-distance parents prefer the
smaller predecessor id (an entry state survives ties); across layers, equal
total length prefers fewer segments, then the lexicographically smallest
vertex sequence, then the smaller end snapshot.
"""

import heapq
import math
from dataclasses import dataclass, field

from .dynamicity import DynamicityReport
from .errors import ConfigError, QueryError
from .kcore import SignificantSubgraph
from .snapshots import Snapshot, SnapshotSequence

INF = math.inf

Adj = dict[int, list[tuple[int, float]]]


@dataclass
class PathQuery:
    source: int
    targets: list[int]
    mode: str = "strict"
    max_candidates: int = 16
    lam: float = 0.5
    hop_cost: bool = False
    exempt_targets: bool = False

    def __post_init__(self):
        if self.mode not in ("strict", "relaxed"):
            raise ConfigError(f"unknown query mode {self.mode!r}")
        if not self.targets:
            raise QueryError("query needs at least one target vertex")
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.max_candidates < 1:
            raise ConfigError("max_candidates must be >= 1")
        self.targets = sorted(set(self.targets))


@dataclass
class PathSegment:
    snapshot: int
    vertices: list[int]
    weights: list[float]

    @property
    def length(self) -> float:
        return sum(self.weights)

    @property
    def edge_count(self) -> int:
        return len(self.weights)


@dataclass
class Chronopath:
    segments: list[PathSegment]
    total_length: float
    hdv_fraction: float
    significance: float | None = None

    @property
    def edge_count(self) -> int:
        return sum(s.edge_count for s in self.segments)

    def vertex_occurrences(self) -> set[tuple[int, int]]:
        """Distinct (snapshot, vertex) pairs along the path."""
        return {
            (seg.snapshot, v) for seg in self.segments for v in seg.vertices
        }

    def distinct_vertices(self) -> set[int]:
        return {v for seg in self.segments for v in seg.vertices}

    def flat_vertices(self) -> tuple[int, ...]:
        return tuple(v for seg in self.segments for v in seg.vertices)

    def identity(self):
        return tuple((s.snapshot, tuple(s.vertices)) for s in self.segments)

    def edge_triples(self) -> list[tuple[int, int, int]]:
        """(src, dst, snapshot) for every traversed edge."""
        out = []
        for seg in self.segments:
            for a, b in zip(seg.vertices, seg.vertices[1:]):
                out.append((a, b, seg.snapshot))
        return out

    def to_dict(self) -> dict:
        return {
            "segments": [
                {
                    "snapshot": s.snapshot,
                    "vertices": list(s.vertices),
                    "weights": list(s.weights),
                    "length": s.length,
                }
                for s in self.segments
            ],
            "total_length": self.total_length,
            "hdv_fraction": self.hdv_fraction,
            "significance": self.significance,
        }


def significance_score(path: Chronopath, lam: float = 0.5) -> float:
    """lam * hdv_fraction + (1 - lam) / (1 + total_length); lies in (0, 1]."""
    return lam * path.hdv_fraction + (1.0 - lam) * (1.0 / (1.0 + path.total_length))


class ShortestPathTree:
    """Single-source Dijkstra result with deterministic parent choice."""

    def __init__(self, source: int, dist: dict[int, float],
                 parent: dict[int, int | None], pweight: dict[int, float]):
        self.source = source
        self.dist = dist
        self.parent = parent
        self.pweight = pweight

    def path_to(self, v: int) -> list[int] | None:
        if v not in self.dist:
            return None
        seq = [v]
        while self.parent.get(v) is not None:
            v = self.parent[v]
            seq.append(v)
        seq.reverse()
        return seq


def _dijkstra(adj: Adj, sources: dict[int, float]):
    """Multi-source Dijkstra.  Entry states carry parent None; on equal
    distance the smaller predecessor id wins and entry states survive ties."""
    dist = dict(sources)
    parent: dict[int, int | None] = {v: None for v in sources}
    pweight: dict[int, float] = {}
    finalized: set[int] = set()
    heap = sorted((c, v) for v, c in sources.items())
    while heap:
        d, u = heapq.heappop(heap)
        if u in finalized or d > dist[u]:
            continue
        finalized.add(u)
        for v, w in adj.get(u, ()):
            alt = d + w
            cur = dist.get(v, INF)
            if alt < cur:
                dist[v] = alt
                parent[v] = u
                pweight[v] = w
                heapq.heappush(heap, (alt, v))
            elif alt == cur and v not in finalized:
                p = parent.get(v)
                if p is not None and u < p:
                    parent[v] = u
                    pweight[v] = w
    return dist, parent, pweight


def _adjacency_of(search, hop_cost: bool = False,
                  allowed: set[int] | None = None) -> Adj:
    """Directed adjacency dict from a Snapshot or SignificantSubgraph,
    optionally masked to an allowed vertex set.  Rejects negative weights."""
    adj: Adj = {}
    if isinstance(search, Snapshot):
        entries = (
            (s, d, w) for s, d, w, _ in search.edge_pairs()
        )
        universe = range(search.vertex_count)
    elif isinstance(search, SignificantSubgraph):
        entries = iter(search.edges)
        universe = search.vertices
    else:
        raise ConfigError(f"cannot search a {type(search).__name__}")
    if allowed is None:
        for v in universe:
            adj[v] = []
    else:
        for v in allowed:
            adj[v] = []
    for s, d, w in entries:
        if w < 0:
            raise ConfigError(
                f"negative weight {w} on edge {s}->{d}; "
                "re-ingest with a signed-weight policy"
            )
        if allowed is not None and (s not in allowed or d not in allowed):
            continue
        adj[s].append((d, 1.0 if hop_cost else w))
    for v in adj:
        adj[v].sort()
    return adj


def sssp(search, source: int, hop_cost: bool = False) -> ShortestPathTree:
    """Exact single-source shortest paths over one snapshot or subgraph."""
    adj = _adjacency_of(search, hop_cost)
    if source not in adj:
        raise QueryError(f"source vertex {source} not in the search graph")
    dist, parent, pweight = _dijkstra(adj, {source: 0.0})
    return ShortestPathTree(source, dist, parent, pweight)


# ---------------------------------------------------------------------------
# Layered stitching


@dataclass
class _Layer:
    index: int
    adj: Adj
    allowed: set[int]
    dist: dict[int, float] = field(default_factory=dict)
    parent: dict[int, int | None] = field(default_factory=dict)
    pweight: dict[int, float] = field(default_factory=dict)
    started: set[int] = field(default_factory=set)  # fresh-start entries
    entry_from: dict[int, int] = field(default_factory=dict)  # handoff origin


class ChronopathEngine:
    """Precomputes per-snapshot search graphs once and answers many queries."""

    def __init__(self, seq: SnapshotSequence, report: DynamicityReport,
                 subgraphs: dict[int, SignificantSubgraph] | None = None,
                 hop_cost: bool = False):
        self.seq = seq
        self.report = report
        self.hop_cost = hop_cost
        self.n_layers = len(seq.snapshots)
        self._strict_adj: dict[int, Adj] = {}
        self._strict_allowed: dict[int, set[int]] = {}
        for i in range(1, self.n_layers):
            allowed = set(report.hdv_at(i))
            if subgraphs is not None and subgraphs.get(i) is not None:
                allowed &= subgraphs[i].vertices
            self._strict_allowed[i] = allowed
            self._strict_adj[i] = _adjacency_of(
                seq.snapshots[i], hop_cost, allowed
            )
        self._relaxed_adj: dict[int, Adj] | None = None

    def _relaxed_layers(self) -> dict[int, Adj]:
        if self._relaxed_adj is None:
            self._relaxed_adj = {
                i: _adjacency_of(self.seq.snapshots[i], self.hop_cost)
                for i in range(self.n_layers)
            }
        return self._relaxed_adj

    # -- strict ------------------------------------------------------------

    def strict(self, query: PathQuery) -> dict[int, Chronopath]:
        q = query.source
        self._check_vertex(q)
        for t in query.targets:
            self._check_vertex(t)
        if all(q not in self._strict_allowed[i] for i in self._strict_allowed):
            raise QueryError(
                f"source vertex {q} is never highly dynamic; "
                "strict queries require a highly dynamic source"
            )
        layers: dict[int, _Layer] = {}
        exempt: dict[int, dict[int, tuple[float, int, float]]] = {}
        prev: _Layer | None = None
        for i in range(1, self.n_layers):
            layer = _Layer(i, self._strict_adj[i], self._strict_allowed[i])
            sources: dict[int, float] = {}
            for v in layer.allowed:
                if prev is not None and v in prev.dist:
                    sources[v] = prev.dist[v]
                    layer.entry_from[v] = prev.index
            if q in layer.allowed:
                sources[q] = 0.0
                layer.started.add(q)
                layer.entry_from.pop(q, None)
            if sources:
                layer.dist, layer.parent, layer.pweight = _dijkstra(
                    layer.adj, sources
                )
            if query.exempt_targets:
                exempt[i] = self._exempt_arrivals(layer, query.targets)
            layers[i] = layer
            prev = layer
        results: dict[int, Chronopath] = {}
        for t in query.targets:
            best = self._pick_strict(layers, exempt, t, query)
            if best is not None:
                self._verify_strict(best, query)
                results[t] = best
        return results

    def _exempt_arrivals(self, layer: _Layer, targets) -> dict:
        """Best arrival at a non-HDV target via one final edge from the
        allowed set (terminal: no handoff continues from such a target)."""
        snap = self.seq.snapshots[layer.index]
        arrivals = {}
        for t in targets:
            if t in layer.allowed:
                continue
            best = None
            for u, w, _ in snap.in_adj[t]:
                if u in layer.dist:
                    cost = layer.dist[u] + (1.0 if self.hop_cost else w)
                    key = (cost, u)
                    if best is None or key < (best[0], best[1]):
                        best = (cost, u, 1.0 if self.hop_cost else w)
            if best is not None:
                arrivals[t] = best
        return arrivals

    def _pick_strict(self, layers, exempt, t: int,
                     query: PathQuery) -> Chronopath | None:
        candidates = []
        for i, layer in layers.items():
            if t in layer.dist:
                candidates.append((layer.dist[t], i, None))
            if i in exempt and t in exempt[i]:
                cost, u, w = exempt[i][t]
                candidates.append((cost, i, (u, w)))
        if not candidates:
            return None
        best_cost = min(c[0] for c in candidates)
        built = []
        for cost, i, extra in candidates:
            if cost != best_cost:
                continue
            segments = self._walk_strict(layers, i, t if extra is None else extra[0])
            if extra is not None:
                segments[-1].vertices.append(t)
                segments[-1].weights.append(extra[1])
            path = self._finish(segments, query.lam)
            built.append((len(path.segments), path.flat_vertices(), i, path))
        built.sort(key=lambda item: item[:3])
        return built[0][3]

    def _walk_strict(self, layers, end: int, t: int) -> list[PathSegment]:
        segments: list[PathSegment] = []
        i, v = end, t
        while True:
            layer = layers[i]
            seq_rev, weights_rev = [v], []
            while layer.parent.get(v) is not None:
                weights_rev.append(layer.pweight[v])
                v = layer.parent[v]
                seq_rev.append(v)
            segments.insert(
                0,
                PathSegment(i, list(reversed(seq_rev)), list(reversed(weights_rev))),
            )
            if v in layer.started:
                return segments
            i = layer.entry_from[v]

    def _verify_strict(self, path: Chronopath, query: PathQuery) -> None:
        indices = [s.snapshot for s in path.segments]
        if indices != list(range(indices[0], indices[0] + len(indices))):
            raise RuntimeError(f"strict path indices not consecutive: {indices}")
        for seg in path.segments:
            allowed = self._strict_allowed[seg.snapshot]
            vertices = seg.vertices
            if query.exempt_targets and seg is path.segments[-1]:
                vertices = vertices[:-1] if vertices[-1] not in allowed else vertices
            for v in vertices:
                if v not in allowed:
                    raise RuntimeError(
                        f"strict path vertex {v} not highly dynamic in "
                        f"snapshot {seg.snapshot}"
                    )
        for a, b in zip(path.segments, path.segments[1:]):
            if a.vertices[-1] != b.vertices[0]:
                raise RuntimeError("handoff vertices do not match")
        if path.segments[0].vertices[0] != query.source:
            raise RuntimeError("strict path does not start at the query source")

    # -- relaxed -----------------------------------------------------------

    def relaxed(self, query: PathQuery,
                strict_winners: dict[int, Chronopath] | None = None
                ) -> dict[int, list[Chronopath]]:
        q = query.source
        self._check_vertex(q)
        for t in query.targets:
            self._check_vertex(t)
        pool: dict[int, dict[tuple, Chronopath]] = {t: {} for t in query.targets}
        for s in range(self.n_layers):
            for t, path in self._relaxed_run(s, query):
                pool[t].setdefault(path.identity(), path)
        if strict_winners is None and self._strict_feasible(q):
            try:
                strict_winners = self.strict(
                    PathQuery(
                        source=q,
                        targets=list(query.targets),
                        mode="strict",
                        hop_cost=query.hop_cost,
                        lam=query.lam,
                        exempt_targets=query.exempt_targets,
                    )
                )
            except QueryError:
                strict_winners = {}
        for t, path in (strict_winners or {}).items():
            if t in pool:
                pool[t].setdefault(path.identity(), path)
        results: dict[int, list[Chronopath]] = {}
        for t in query.targets:
            ranked = sorted(
                pool[t].values(),
                key=lambda p: (-p.significance, p.total_length, p.flat_vertices()),
            )
            if ranked:
                results[t] = ranked[: query.max_candidates]
        return results

    def _strict_feasible(self, q: int) -> bool:
        return any(q in allowed for allowed in self._strict_allowed.values())

    def _relaxed_run(self, start: int, query: PathQuery):
        """Forward DP with first segment in layer `start`; yields, per end
        layer whose last movement happened there, the best path to each
        target."""
        adjs = self._relaxed_layers()
        q = query.source
        running: dict[int, tuple[float, int]] = {}
        layers: dict[int, _Layer] = {}
        found: list[tuple[int, Chronopath]] = []
        for i in range(start, self.n_layers):
            layer = _Layer(i, adjs[i], set())
            sources: dict[int, float] = {}
            for v, (cost, src_layer) in running.items():
                sources[v] = cost
                layer.entry_from[v] = src_layer
            if i == start:
                sources[q] = 0.0
                layer.started.add(q)
                layer.entry_from.pop(q, None)
            if not sources:
                break
            layer.dist, layer.parent, layer.pweight = _dijkstra(
                layer.adj, sources
            )
            layers[i] = layer
            for v, d in layer.dist.items():
                if d < running.get(v, (INF, -1))[0]:
                    running[v] = (d, i)
            for t in query.targets:
                moved = layer.parent.get(t) is not None
                self_start = t == q and i == start
                if t in layer.dist and (moved or self_start):
                    segments = self._walk_relaxed(layers, i, t)
                    found.append((t, self._finish(segments, query.lam)))
        return found

    def _walk_relaxed(self, layers, end: int, t: int) -> list[PathSegment]:
        segments: list[PathSegment] = []
        i, v = end, t
        while True:
            layer = layers[i]
            seq_rev, weights_rev = [v], []
            while layer.parent.get(v) is not None:
                weights_rev.append(layer.pweight[v])
                v = layer.parent[v]
                seq_rev.append(v)
            if weights_rev or not segments:
                segments.insert(
                    0,
                    PathSegment(
                        i, list(reversed(seq_rev)), list(reversed(weights_rev))
                    ),
                )
            if v in layer.started:
                return segments
            i = layer.entry_from[v]

    # -- shared ------------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.seq.vertex_count:
            raise QueryError(
                f"vertex {v} outside universe 0..{self.seq.vertex_count - 1}"
            )

    def _finish(self, segments: list[PathSegment], lam: float) -> Chronopath:
        occurrences = {
            (seg.snapshot, v) for seg in segments for v in seg.vertices
        }
        hits = sum(
            1 for (i, v) in occurrences if v in self.report.hdv_at(i)
        )
        path = Chronopath(
            segments=segments,
            total_length=sum(seg.length for seg in segments),
            hdv_fraction=hits / len(occurrences),
        )
        path.significance = significance_score(path, lam)
        return path


def find_chronopath(seq: SnapshotSequence,
                    subgraphs: dict[int, SignificantSubgraph] | None,
                    report: DynamicityReport,
                    query: PathQuery) -> dict[int, Chronopath]:
    """Best strict chronopath per target (absent when unreachable)."""
    if query.mode != "strict":
        raise ConfigError("find_chronopath answers strict queries")
    engine = ChronopathEngine(seq, report, subgraphs, query.hop_cost)
    return engine.strict(query)


def find_relaxed_chronopath(seq: SnapshotSequence,
                            report: DynamicityReport,
                            query: PathQuery) -> dict[int, list[Chronopath]]:
    """Ranked relaxed candidates per target, significance descending."""
    if query.mode != "relaxed":
        raise ConfigError("find_relaxed_chronopath answers relaxed queries")
    engine = ChronopathEngine(seq, report, None, query.hop_cost)
    return engine.relaxed(query)


def query_results_to_dict(query: PathQuery, results: dict) -> dict:
    """Export schema shared by strict (one path per target) and relaxed
    (candidate list per target) results."""
    out = []
    for t in query.targets:
        value = results.get(t)
        if value is None:
            paths = []
        elif isinstance(value, Chronopath):
            paths = [value.to_dict()]
        else:
            paths = [p.to_dict() for p in value]
        out.append({"target": t, "paths": paths})
    return {
        "query": {
            "q": query.source,
            "targets": list(query.targets),
            "mode": query.mode,
            "params": {
                "max_candidates": query.max_candidates,
                "lambda": query.lam,
                "hop_cost": query.hop_cost,
                "exempt_targets": query.exempt_targets,
            },
        },
        "results": out,
    }
