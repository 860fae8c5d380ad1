"""Per-snapshot stage workload used for the parallel-speedup measurement.

The stage runs, for every snapshot, the core decomposition plus single-source
shortest paths from a seeded source set.  Work items are (snapshot, chunk)
pairs so the pool stays balanced; the returned digest is a deterministic
function of all results, letting callers check worker-count invariance while
keeping the computation honest.
"""

import random

from .kcore import core_decomposition
from .parallel import parallel_map_shared
from .paths import sssp
from .snapshots import SnapshotSequence


def seeded_sources(seq: SnapshotSequence, per_snapshot: int, seed: int = 0):
    rng = random.Random(seed)
    n = seq.vertex_count
    return {
        snap.index: sorted(
            rng.sample(range(n), min(per_snapshot, n))
        )
        for snap in seq.snapshots
    }


def _stage_task(seq: SnapshotSequence, item):
    index, sources = item
    snap = seq.snapshots[index]
    if sources is None:
        coreness = core_decomposition(snap).coreness
        return ("core", index, sum(coreness))
    total = 0.0
    reached = 0
    for src in sources:
        tree = sssp(snap, src)
        reached += len(tree.dist)
        total += sum(tree.dist.values())
    return ("sssp", index, (reached, total))


def per_snapshot_stage(seq: SnapshotSequence, sources: dict[int, list[int]],
                       workers: int = 1, chunk: int = 8) -> tuple:
    """Run the stage; returns a deterministic digest of every result."""
    items = []
    for snap in seq.snapshots:
        items.append((snap.index, None))
        srcs = sources.get(snap.index, [])
        for i in range(0, len(srcs), chunk):
            items.append((snap.index, srcs[i:i + chunk]))
    results = parallel_map_shared(_stage_task, seq, items, workers)
    return tuple(results)
