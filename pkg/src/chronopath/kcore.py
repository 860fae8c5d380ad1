"""Core decomposition and significant-subgraph extraction.

Coreness is computed on the undirected simple view of a snapshot (directions,
multiplicities and self-loops dropped) with the classic linear-time bucket
peeling.  The significant subgraph of a snapshot is the maximal k-core that
still contains every highly dynamic vertex: k* = min coreness over the HDV
set, and the subgraph is the induced k*-core.
"""

from dataclasses import dataclass

from .snapshots import Snapshot


@dataclass
class CoreDecomposition:
    index: int
    coreness: list[int]

    def core_vertices(self, k: int) -> set[int]:
        return {v for v, c in enumerate(self.coreness) if c >= k}


@dataclass
class SignificantSubgraph:
    index: int
    k_star: int | None  # None when the HDV set is empty
    vertices: set[int]
    edges: list[tuple[int, int, float]]  # directed collapsed entries, sorted

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "k_star": self.k_star,
            "vertices": sorted(self.vertices),
            "edges": [[s, d, w] for s, d, w in self.edges],
        }


def core_decomposition(snapshot: Snapshot) -> CoreDecomposition:
    """Bucket peeling on the undirected simple view; O(V + E)."""
    n = snapshot.vertex_count
    adj = [sorted(snapshot.neighbors_undirected(v)) for v in range(n)]
    degree = [len(adj[v]) for v in range(n)]
    max_deg = max(degree, default=0)

    # Vertices bucketed by current degree, ids ascending within a bucket.
    bins = [0] * (max_deg + 2)
    for d in degree:
        bins[d] += 1
    start = 0
    for d in range(max_deg + 1):
        count = bins[d]
        bins[d] = start
        start += count
    order = [0] * n
    pos = [0] * n
    fill = bins[: max_deg + 1].copy()
    for v in range(n):
        order[fill[degree[v]]] = v
        pos[v] = fill[degree[v]]
        fill[degree[v]] += 1

    coreness = degree.copy()
    for i in range(n):
        v = order[i]
        for u in adj[v]:
            if coreness[u] > coreness[v]:
                du = coreness[u]
                pu = pos[u]
                pw = bins[du]
                w = order[pw]
                if u != w:
                    order[pu], order[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bins[du] += 1
                coreness[u] -= 1
    return CoreDecomposition(index=snapshot.index, coreness=coreness)


def significant_subgraph(snapshot: Snapshot, hdv: set[int],
                         decomposition: CoreDecomposition | None = None
                         ) -> SignificantSubgraph:
    """Maximal k-core containing the whole HDV set.

    k* = min coreness over the HDV vertices.  For k* = 0 (some HDV is
    isolated) the subgraph keeps every non-isolated vertex plus the isolated
    HDVs; an empty HDV set yields an empty subgraph with k* = None.
    """
    n = snapshot.vertex_count
    for v in hdv:
        if not 0 <= v < n:
            raise ValueError(f"HDV vertex {v} outside universe 0..{n - 1}")
    if not hdv:
        return SignificantSubgraph(snapshot.index, None, set(), [])
    decomposition = decomposition or core_decomposition(snapshot)
    k_star = min(decomposition.coreness[v] for v in hdv)
    if k_star == 0:
        vertices = {
            v for v in range(n) if snapshot.neighbors_undirected(v)
        } | set(hdv)
    else:
        vertices = decomposition.core_vertices(k_star)
    edges = [
        (s, d, w)
        for s, d, w, _ in snapshot.edge_pairs()
        if s in vertices and d in vertices
    ]
    return SignificantSubgraph(snapshot.index, k_star, vertices, edges)
