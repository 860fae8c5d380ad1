"""Frequent-edge summarization of chronopath sets.

Counts, for every (src, dst, snapshot) edge, how many input paths contain it
(an edge occurring twice within one path still counts once for that path).
Edges meeting the threshold become patterns carrying the exact union of their
member paths' vertices and edges.  A snapshot-agnostic mode merges the same
vertex pair across snapshots for the dashboard's aggregated view.
"""

from dataclasses import dataclass

from .errors import ConfigError
from .paths import Chronopath

EdgeKey = tuple[int, int, int | None]


@dataclass
class FrequentEdgePattern:
    edge: EdgeKey  # (src, dst, snapshot); snapshot None in agnostic mode
    frequency: int
    member_paths: list[int]  # indices into the input path list
    subgraph_vertices: list[int]
    subgraph_edges: list[EdgeKey]

    def to_dict(self) -> dict:
        src, dst, snap = self.edge
        return {
            "edge": {"src": src, "dst": dst, "snapshot": snap},
            "frequency": self.frequency,
            "path_ids": list(self.member_paths),
            "subgraph": {
                "vertices": list(self.subgraph_vertices),
                "edges": [
                    {"src": s, "dst": d, "snapshot": i}
                    for s, d, i in self.subgraph_edges
                ],
            },
        }


def _path_edges(path: Chronopath, snapshot_bound: bool) -> set[EdgeKey]:
    triples = path.edge_triples()
    if snapshot_bound:
        return set(triples)
    return {(s, d, None) for s, d, _ in triples}


def extract_frequent_edges(paths: list[Chronopath], threshold: int,
                           snapshot_bound: bool = True,
                           strictly_greater: bool = False
                           ) -> list[FrequentEdgePattern]:
    """Patterns for every edge whose per-path frequency reaches the
    threshold (>= by default, > with ``strictly_greater``), sorted by
    frequency descending then edge triple ascending."""
    if threshold < 1:
        raise ConfigError("threshold must be >= 1")
    members: dict[EdgeKey, list[int]] = {}
    edge_sets: list[set[EdgeKey]] = []
    for idx, path in enumerate(paths):
        edges = _path_edges(path, snapshot_bound)
        edge_sets.append(edges)
        for key in edges:
            members.setdefault(key, []).append(idx)
    patterns = []
    sort_key = lambda k: (k[0], k[1], -1 if k[2] is None else k[2])
    for key in sorted(members, key=sort_key):
        ids = members[key]
        freq = len(ids)
        if (freq > threshold) if strictly_greater else (freq >= threshold):
            vertices: set[int] = set()
            edges: set[EdgeKey] = set()
            for i in ids:
                vertices |= paths[i].distinct_vertices()
                edges |= edge_sets[i]
            patterns.append(
                FrequentEdgePattern(
                    edge=key,
                    frequency=freq,
                    member_paths=ids,
                    subgraph_vertices=sorted(vertices),
                    subgraph_edges=sorted(edges, key=sort_key),
                )
            )
    patterns.sort(key=lambda p: (-p.frequency, sort_key(p.edge)))
    return patterns


def patterns_to_dict(patterns: list[FrequentEdgePattern],
                     threshold: int) -> dict:
    return {
        "threshold": threshold,
        "patterns": [p.to_dict() for p in patterns],
    }
