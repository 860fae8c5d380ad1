"""Per-vertex change scoring between consecutive snapshots.

The shipped metric combines the relative change of the harmonic mean of
incident edge weights (weight w1) with the relative change of the incident
degree (weight w2); each component lies in [0, 1], so scores do too.  A
vertex is highly dynamic in snapshot i when its score against snapshot i-1
reaches the threshold.  The degree-centrality baseline used for comparisons
lives here as well.
"""

from dataclasses import dataclass, field

from .errors import ConfigError
from .snapshots import Snapshot, SnapshotSequence


@dataclass(frozen=True)
class DynamicityConfig:
    w1: float = 0.8
    w2: float = 0.2
    theta: float = 0.1
    epsilon: float = 1e-9

    def __post_init__(self):
        if abs(self.w1 + self.w2 - 1.0) > 1e-9:
            raise ConfigError(f"w1 + w2 must equal 1, got {self.w1 + self.w2}")
        if not 0.0 <= self.w1 <= 1.0 or not 0.0 <= self.w2 <= 1.0:
            raise ConfigError("w1 and w2 must lie in [0, 1]")
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta}")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")


@dataclass
class DynamicityReport:
    """Scores and HDV sets per snapshot index i >= 1 (index 0 has no
    predecessor, hence no scores and an empty HDV set)."""

    scores: dict[int, dict[int, float]] = field(default_factory=dict)
    hdv_sets: dict[int, set[int]] = field(default_factory=dict)
    union_hdv: set[int] = field(default_factory=set)
    config: DynamicityConfig = field(default_factory=DynamicityConfig)

    def hdv_at(self, index: int) -> set[int]:
        return self.hdv_sets.get(index, set())

    def to_dict(self) -> dict:
        return {
            "per_snapshot": [
                {
                    "index": i,
                    "hdv": sorted(self.hdv_sets[i]),
                    "scores": {str(v): s for v, s in sorted(self.scores[i].items())},
                }
                for i in sorted(self.scores)
            ],
            "union_hdv": sorted(self.union_hdv),
        }


def harmonic_mean_weight(snapshot: Snapshot, v: int,
                         epsilon: float = 1e-9) -> float:
    """Harmonic mean of incident edge weights (out plus in, multiplicity
    counted); 0.0 for isolated vertices."""
    count = 0
    denom = 0.0
    for _, w, m in snapshot.incident_entries(v):
        count += m
        denom += m / max(w, epsilon)
    if count == 0:
        return 0.0
    return count / denom


def dynamicity_score(v: int, prev: Snapshot, curr: Snapshot,
                     config: DynamicityConfig) -> float:
    """w1 * relative harmonic-mean change + w2 * relative degree change.

    A vertex appearing from nothing maxes both components (score 1.0).
    """
    if prev.index + 1 != curr.index:
        raise ConfigError(
            f"snapshots must be consecutive, got {prev.index} and {curr.index}"
        )
    eps = config.epsilon
    hm_prev = harmonic_mean_weight(prev, v, eps)
    hm_curr = harmonic_mean_weight(curr, v, eps)
    deg_prev = prev.degree(v)
    deg_curr = curr.degree(v)
    delta_hm = abs(hm_curr - hm_prev) / max(hm_curr, hm_prev, eps)
    delta_deg = abs(deg_curr - deg_prev) / max(deg_curr, deg_prev, 1)
    return config.w1 * delta_hm + config.w2 * delta_deg


def detect_hdv(seq: SnapshotSequence,
               config: DynamicityConfig | None = None,
               metric=None) -> DynamicityReport:
    """Score every vertex that touches an edge in either snapshot of each
    consecutive pair; vertices isolated in both are skipped (never HDV).

    `metric(v, prev, curr, config) -> [0, 1]` is the extension point for
    alternative change measures; the default is the harmonic-mean score.
    """
    if len(seq.snapshots) < 2:
        raise ConfigError("need at least 2 snapshots to detect dynamic vertices")
    config = config or DynamicityConfig()
    metric = metric or dynamicity_score
    report = DynamicityReport(config=config)
    for i in range(1, len(seq.snapshots)):
        prev, curr = seq.snapshots[i - 1], seq.snapshots[i]
        scores: dict[int, float] = {}
        hdv: set[int] = set()
        for v in range(seq.vertex_count):
            if prev.degree(v) == 0 and curr.degree(v) == 0:
                continue
            s = metric(v, prev, curr, config)
            scores[v] = s
            if s >= config.theta:
                hdv.add(v)
        report.scores[curr.index] = scores
        report.hdv_sets[curr.index] = hdv
        report.union_hdv |= hdv
    return report


def baseline_hdv_degree(seq: SnapshotSequence, tau: float = 0.1) -> set[int]:
    """Degree-centrality surrogate: {v : deg(v)/(n-1) > tau} on the final
    snapshot, with deg counting distinct neighbors (undirected view)."""
    n = seq.vertex_count
    if n <= 1:
        raise ConfigError("degree centrality needs at least 2 vertices")
    final = seq.snapshots[-1]
    return {
        v
        for v in range(n)
        if len(final.neighbors_undirected(v)) / (n - 1) > tau
    }


def baseline_hdv_topk(seq: SnapshotSequence, k: int = 5) -> set[int]:
    """Top-k variant of the baseline (ties broken by smaller vertex id)."""
    final = seq.snapshots[-1]
    ranked = sorted(
        range(seq.vertex_count),
        key=lambda v: (-len(final.neighbors_undirected(v)), v),
    )
    return {v for v in ranked[:k] if len(final.neighbors_undirected(v)) > 0}


def baseline_report(seq: SnapshotSequence, hdv: set[int]) -> DynamicityReport:
    """Wrap a baseline HDV set as a report applying to every snapshot pair,
    so the same query machinery runs unchanged for the comparison protocol."""
    report = DynamicityReport(config=DynamicityConfig())
    for i in range(1, len(seq.snapshots)):
        report.scores[seq.snapshots[i].index] = {}
        report.hdv_sets[seq.snapshots[i].index] = set(hdv)
    report.union_hdv = set(hdv)
    return report
