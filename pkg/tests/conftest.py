import random

import pytest

from chronopath import datasets as datasets_mod
from chronopath.ingest import TemporalEdge, TemporalGraph
from chronopath.snapshots import build_snapshots


def make_graph(edges, n=None, directed=True):
    """Graph from (src, dst, t) or (src, dst, t_start, t_end, weight) tuples."""
    full = []
    for e in edges:
        if len(e) == 3:
            s, d, t = e
            full.append(TemporalEdge(s, d, t, t, 1.0))
        else:
            s, d, ts, te, w = e
            full.append(TemporalEdge(s, d, ts, te, float(w)))
    if n is None:
        n = max(max(e.src, e.dst) for e in full) + 1
    full.sort(key=TemporalEdge.sort_key)
    return TemporalGraph(
        vertex_count=n,
        vertex_labels=[str(i) for i in range(n)],
        edges=full,
        t_min=min(e.t_start for e in full),
        t_max=max(e.t_end for e in full),
        directed=directed,
    )


def random_temporal_graph(rng: random.Random, max_vertices=30, max_edges=80,
                          max_time=100, weighted=True):
    n = rng.randint(2, max_vertices)
    m = rng.randint(1, max_edges)
    edges = []
    for _ in range(m):
        s = rng.randrange(n)
        d = rng.randrange(n)
        t = rng.randint(0, max_time)
        w = rng.randint(1, 10) if weighted else 1
        edges.append((s, d, t, t, w))
    return make_graph(edges, n=n)


def dataset_or_skip(name):
    if not datasets_mod.is_available(name):
        pytest.skip(
            f"dataset {name!r} not present under {datasets_mod.data_dir()}; "
            f"run `chronopath fetch {name}` with internet access"
        )
    return datasets_mod.load(name)


@pytest.fixture
def simple_seq():
    """Two vertices joined at t=10, a third arriving at t=20, richer by t=30."""
    graph = make_graph(
        [
            (0, 1, 10),
            (1, 2, 20),
            (2, 0, 30),
            (0, 2, 30),
        ]
    )
    return build_snapshots(graph, 3)
