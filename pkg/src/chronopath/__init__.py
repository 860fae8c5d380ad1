"""Temporal-graph analytics engine.

Identifies highly dynamic vertices across cumulative graph snapshots,
extracts the maximal k-core subgraphs that keep them connected, answers
cross-snapshot shortest-path queries constrained by vertex dynamicity, and
summarizes the resulting paths by frequent edges.  Served through a CLI and
an HTTP job service with a browser dashboard.
"""

from .dynamicity import (
    DynamicityConfig,
    DynamicityReport,
    baseline_hdv_degree,
    baseline_hdv_topk,
    detect_hdv,
    dynamicity_score,
    harmonic_mean_weight,
)
from .errors import (
    ChronopathError,
    ConfigError,
    DatasetMissingError,
    ParseError,
    QueryError,
)
from .evaluation import EvalProtocol, EvalSummary, render_comparison, run_protocol
from .ingest import (
    DatasetFormat,
    TemporalEdge,
    TemporalGraph,
    parse_edge_list,
    read_canonical,
    validate,
    write_canonical,
)
from .kcore import (
    CoreDecomposition,
    SignificantSubgraph,
    core_decomposition,
    significant_subgraph,
)
from .paths import (
    Chronopath,
    ChronopathEngine,
    PathQuery,
    PathSegment,
    find_chronopath,
    find_relaxed_chronopath,
    significance_score,
    sssp,
)
from .patterns import FrequentEdgePattern, extract_frequent_edges
from .snapshots import (
    Snapshot,
    SnapshotSequence,
    build_snapshots,
    edge_in_snapshot,
    snapshot_view,
)

__version__ = "0.1.0"

__all__ = [
    "ChronopathError",
    "ParseError",
    "ConfigError",
    "QueryError",
    "DatasetMissingError",
    "TemporalEdge",
    "TemporalGraph",
    "DatasetFormat",
    "parse_edge_list",
    "validate",
    "write_canonical",
    "read_canonical",
    "Snapshot",
    "SnapshotSequence",
    "build_snapshots",
    "edge_in_snapshot",
    "snapshot_view",
    "DynamicityConfig",
    "DynamicityReport",
    "harmonic_mean_weight",
    "dynamicity_score",
    "detect_hdv",
    "baseline_hdv_degree",
    "baseline_hdv_topk",
    "CoreDecomposition",
    "SignificantSubgraph",
    "core_decomposition",
    "significant_subgraph",
    "PathQuery",
    "PathSegment",
    "Chronopath",
    "ChronopathEngine",
    "sssp",
    "find_chronopath",
    "find_relaxed_chronopath",
    "significance_score",
    "FrequentEdgePattern",
    "extract_frequent_edges",
    "EvalProtocol",
    "EvalSummary",
    "run_protocol",
    "render_comparison",
    "__version__",
]
