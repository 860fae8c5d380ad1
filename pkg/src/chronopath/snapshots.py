"""Cumulative snapshot materialization.

A snapshot at boundary ``t_i`` holds exactly the distinct edge records with
``t_end <= t_i``; edges never expire, so the sequence is monotone and the
final snapshot holds the graph's full distinct edge set.  Parallel records
between the same (src, dst) pair collapse to one adjacency entry carrying the
minimum weight and a multiplicity count.
"""

import bisect
from dataclasses import dataclass

from .errors import ConfigError
from .ingest import TemporalEdge, TemporalGraph

# Adjacency entry: (neighbor, min_weight, multiplicity), sorted by neighbor.
AdjEntry = tuple[int, float, int]


@dataclass
class Snapshot:
    index: int
    boundary: int
    vertex_count: int
    out_adj: list[list[AdjEntry]]
    in_adj: list[list[AdjEntry]]
    edge_count: int  # distinct temporal edge records present
    entry_count: int  # collapsed directed (src, dst) pairs

    def incident_entries(self, v: int) -> list[AdjEntry]:
        return self.out_adj[v] + self.in_adj[v]

    def degree(self, v: int) -> int:
        """Incident edge count: collapsed entries times multiplicity, out+in."""
        return sum(m for _, _, m in self.out_adj[v]) + sum(
            m for _, _, m in self.in_adj[v]
        )

    def neighbors_undirected(self, v: int) -> set[int]:
        nbrs = {u for u, _, _ in self.out_adj[v]} | {u for u, _, _ in self.in_adj[v]}
        nbrs.discard(v)
        return nbrs

    def edge_pairs(self) -> list[tuple[int, int, float, int]]:
        """All collapsed entries as (src, dst, weight, multiplicity), sorted."""
        out = []
        for src in range(self.vertex_count):
            for dst, w, m in self.out_adj[src]:
                out.append((src, dst, w, m))
        return out


@dataclass
class SnapshotSequence:
    boundaries: list[int]
    snapshots: list[Snapshot]
    graph: TemporalGraph

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count


def edge_in_snapshot(edge: TemporalEdge, boundary: int) -> bool:
    return edge.t_end <= boundary


def compute_boundaries(t_min: int, t_max: int, n_intervals: int) -> list[int]:
    """t_0 = t_min, t_i = t_min + ceil(i*span/n), always n+1 boundaries.

    Strictly increasing whenever span >= n_intervals; a smaller span repeats
    boundaries (the snapshots are then identical, which keeps degenerate
    graphs well-defined)."""
    if n_intervals < 1:
        raise ConfigError("n_intervals must be >= 1")
    span = t_max - t_min
    return [t_min] + [
        t_min + -(-i * span // n_intervals)  # ceiling division
        for i in range(1, n_intervals + 1)
    ]


def _materialize(edges: list[TemporalEdge], index: int, boundary: int,
                 vertex_count: int, prefix_len: int) -> Snapshot:
    seen: set[tuple] = set()
    collapsed: dict[tuple[int, int], tuple[float, int]] = {}
    for e in edges[:prefix_len]:
        rec = e.record()
        if rec in seen:
            continue
        seen.add(rec)
        key = (e.src, e.dst)
        cur = collapsed.get(key)
        if cur is None:
            collapsed[key] = (e.weight, 1)
        else:
            collapsed[key] = (min(cur[0], e.weight), cur[1] + 1)
    out_adj: list[list[AdjEntry]] = [[] for _ in range(vertex_count)]
    in_adj: list[list[AdjEntry]] = [[] for _ in range(vertex_count)]
    for (src, dst) in sorted(collapsed):
        w, m = collapsed[(src, dst)]
        out_adj[src].append((dst, w, m))
        in_adj[dst].append((src, w, m))
    for v in range(vertex_count):
        in_adj[v].sort()
    return Snapshot(
        index=index,
        boundary=boundary,
        vertex_count=vertex_count,
        out_adj=out_adj,
        in_adj=in_adj,
        edge_count=len(seen),
        entry_count=len(collapsed),
    )


def build_snapshots(graph: TemporalGraph, n_intervals: int,
                    workers: int = 1) -> SnapshotSequence:
    """Materialize the cumulative snapshot sequence.

    Each snapshot is built independently from the immutable sorted edge list,
    so the result is identical for any worker count.
    """
    if n_intervals < 1:
        raise ConfigError("n_intervals must be >= 1")
    if not graph.edges:
        raise ConfigError("graph has no edges")
    boundaries = compute_boundaries(graph.t_min, graph.t_max, n_intervals)
    t_ends = [e.t_end for e in graph.edges]
    prefix_lens = [bisect.bisect_right(t_ends, b) for b in boundaries]
    if workers > 1:
        from .parallel import parallel_map_shared

        snaps = parallel_map_shared(
            _materialize_task,
            (graph.edges, graph.vertex_count, boundaries, prefix_lens),
            list(range(len(boundaries))),
            workers,
        )
    else:
        snaps = [
            _materialize(graph.edges, i, boundaries[i], graph.vertex_count,
                         prefix_lens[i])
            for i in range(len(boundaries))
        ]
    return SnapshotSequence(boundaries=boundaries, snapshots=snaps, graph=graph)


def _materialize_task(shared, index: int) -> Snapshot:
    edges, vertex_count, boundaries, prefix_lens = shared
    return _materialize(edges, index, boundaries[index], vertex_count,
                        prefix_lens[index])


def snapshot_view(seq: SnapshotSequence, index: int,
                  hdv: set[int] | None = None) -> dict:
    """Deterministic vertex/edge listing for UI rendering and export."""
    if not 0 <= index < len(seq.snapshots):
        raise ConfigError(
            f"snapshot index {index} out of range 0..{len(seq.snapshots) - 1}"
        )
    snap = seq.snapshots[index]
    labels = seq.graph.vertex_labels
    vertices = []
    for v in range(snap.vertex_count):
        out_deg = len(snap.out_adj[v])
        in_deg = len(snap.in_adj[v])
        vertices.append(
            {
                "id": v,
                "label": labels[v],
                "degree": out_deg + in_deg,
                "out_degree": out_deg,
                "in_degree": in_deg,
            }
        )
    edges = [
        {"src": s, "dst": d, "weight": w, "multiplicity": m}
        for s, d, w, m in snap.edge_pairs()
    ]
    view = {
        "index": snap.index,
        "boundary": snap.boundary,
        "vertices": vertices,
        "edges": edges,
    }
    if hdv is not None:
        view["hdv"] = sorted(hdv)
    return view


def sequence_to_dict(seq: SnapshotSequence) -> dict:
    return {
        "kind": "snapshots",
        "boundaries": list(seq.boundaries),
        "snapshots": [snapshot_view(seq, i) for i in range(len(seq.snapshots))],
        "graph": {
            "vertices": seq.graph.vertex_count,
            "directed": seq.graph.directed,
        },
    }
