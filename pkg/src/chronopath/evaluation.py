"""Comparison protocol and Table-style reporting.

The engine (dynamicity-detected HDVs) and the degree-centrality baseline are
compared on three metrics: HDV count, coverage rate (fraction of all graph
vertices appearing on any returned chronopath) and average path length (mean
edge count over returned chronopaths, zero-length self-paths included).

The query workload is explicit and reproducible: every vertex of the
engine's union HDV set serves once as a source, with a fixed-size uniform
sample of targets drawn from a seeded RNG; the baseline answers the identical
query list with only the HDV oracle substituted.  Returned paths are exactly
what the query operations return: the per-target winner in strict mode, the
retained candidate list in relaxed mode.
"""

import random
import time
from dataclasses import dataclass, field

from .dynamicity import (
    DynamicityConfig,
    baseline_hdv_degree,
    baseline_hdv_topk,
    baseline_report,
    detect_hdv,
)
from .errors import ConfigError, QueryError
from .ingest import TemporalGraph
from .kcore import core_decomposition, significant_subgraph
from .parallel import parallel_map_shared
from .paths import Chronopath, ChronopathEngine, PathQuery
from .snapshots import SnapshotSequence, build_snapshots

QUERY_RULES = ("each-hdv-to-sampled-targets", "fixed-query-list")


@dataclass
class EvalProtocol:
    dataset: str = ""
    n_intervals: int = 10
    dynamicity: DynamicityConfig = field(default_factory=DynamicityConfig)
    tau: float = 0.1
    baseline_selector: str = "threshold"  # or "top-k"
    baseline_k: int = 5
    query_rule: str = "each-hdv-to-sampled-targets"
    sample_size: int = 10
    seed: int = 7
    mode: str = "strict"
    fixed_queries: list[tuple[int, list[int]]] | None = None
    max_candidates: int = 16
    lam: float = 0.5
    workers: int = 1

    def __post_init__(self):
        if self.query_rule not in QUERY_RULES:
            raise ConfigError(f"unknown query rule {self.query_rule!r}")
        if self.query_rule == "fixed-query-list" and not self.fixed_queries:
            raise ConfigError("fixed-query-list rule needs fixed_queries")
        if self.mode not in ("strict", "relaxed"):
            raise ConfigError(f"unknown path mode {self.mode!r}")
        if self.sample_size < 1:
            raise ConfigError("sample_size must be >= 1")


@dataclass
class EvalSummary:
    method: str
    hdv_count: int
    coverage_rate: float
    avg_path_length: float
    n_queries: int
    n_paths: int
    runtime_s: float = 0.0

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "method": self.method,
            "hdv_count": self.hdv_count,
            "coverage_rate": self.coverage_rate,
            "avg_path_length": self.avg_path_length,
            "n_queries": self.n_queries,
            "n_paths": self.n_paths,
        }
        if include_runtime:
            out["runtime_s"] = self.runtime_s
        return out


def generate_queries(union_hdv: set[int], n_vertices: int,
                     sample_size: int, seed: int) -> list[tuple[int, list[int]]]:
    """One query per HDV source (ascending), targets drawn without
    replacement from the whole vertex universe; fully seeded."""
    rng = random.Random(seed)
    k = min(sample_size, n_vertices)
    return [
        (q, sorted(rng.sample(range(n_vertices), k)))
        for q in sorted(union_hdv)
    ]


def _answer_query(engine: ChronopathEngine, q: int, targets: list[int],
                  mode: str, max_candidates: int, lam: float,
                  hop_cost: bool) -> list[Chronopath]:
    query = PathQuery(
        source=q,
        targets=list(targets),
        mode=mode,
        max_candidates=max_candidates,
        lam=lam,
        hop_cost=hop_cost,
    )
    try:
        if mode == "strict":
            results = engine.strict(query)
            return [results[t] for t in sorted(results)]
        results = engine.relaxed(query)
        return [p for t in sorted(results) for p in results[t]]
    except QueryError:
        return []


def _query_chunk_task(shared, chunk):
    engine, mode, max_candidates, lam, hop_cost = shared
    return [
        _answer_query(engine, q, targets, mode, max_candidates, lam, hop_cost)
        for q, targets in chunk
    ]


def run_queries(engine: ChronopathEngine, queries,
                mode: str, max_candidates: int = 16, lam: float = 0.5,
                hop_cost: bool = False, workers: int = 1
                ) -> list[list[Chronopath]]:
    """Answer a query list; returns one path list per query, input order."""
    queries = list(queries)
    if workers <= 1 or len(queries) <= 1:
        return [
            _answer_query(engine, q, t, mode, max_candidates, lam, hop_cost)
            for q, t in queries
        ]
    chunk = max(1, len(queries) // (workers * 4))
    chunks = [queries[i:i + chunk] for i in range(0, len(queries), chunk)]
    shared = (engine, mode, max_candidates, lam, hop_cost)
    nested = parallel_map_shared(_query_chunk_task, shared, chunks, workers)
    return [answer for batch in nested for answer in batch]


def summarize(method: str, hdv_count: int,
              answers: list[list[Chronopath]], vertex_count: int,
              runtime_s: float = 0.0) -> EvalSummary:
    paths = [p for batch in answers for p in batch]
    covered: set[int] = set()
    for p in paths:
        covered |= p.distinct_vertices()
    return EvalSummary(
        method=method,
        hdv_count=hdv_count,
        coverage_rate=len(covered) / vertex_count if vertex_count else 0.0,
        avg_path_length=(
            sum(p.edge_count for p in paths) / len(paths) if paths else 0.0
        ),
        n_queries=len(answers),
        n_paths=len(paths),
        runtime_s=runtime_s,
    )


def build_subgraphs(seq: SnapshotSequence, report, workers: int = 1) -> dict:
    """Significant subgraph per snapshot index >= 1 (parallel-friendly)."""
    indices = list(range(1, len(seq.snapshots)))
    if workers > 1 and len(indices) > 1:
        shared = (seq, report)
        results = parallel_map_shared(_subgraph_task, shared, indices, workers)
        return dict(zip(indices, results))
    return {
        i: significant_subgraph(
            seq.snapshots[i], report.hdv_at(i),
            core_decomposition(seq.snapshots[i]),
        )
        for i in indices
    }


def _subgraph_task(shared, index: int):
    seq, report = shared
    snap = seq.snapshots[index]
    return significant_subgraph(
        snap, report.hdv_at(index), core_decomposition(snap)
    )


def run_protocol(graph: TemporalGraph, protocol: EvalProtocol
                 ) -> tuple[EvalSummary, EvalSummary]:
    """Run the full comparison; returns (engine summary, baseline summary)."""
    seq = build_snapshots(graph, protocol.n_intervals, protocol.workers)
    hop_cost = graph.is_unweighted()

    engine_report = detect_hdv(seq, protocol.dynamicity)
    if protocol.baseline_selector == "top-k":
        base_set = baseline_hdv_topk(seq, protocol.baseline_k)
    else:
        base_set = baseline_hdv_degree(seq, protocol.tau)
    base_report = baseline_report(seq, base_set)

    if protocol.query_rule == "fixed-query-list":
        queries = [(q, sorted(t)) for q, t in protocol.fixed_queries]
    else:
        queries = generate_queries(
            engine_report.union_hdv, graph.vertex_count,
            protocol.sample_size, protocol.seed,
        )

    summaries = []
    for method, report, hdv_count in (
        ("engine", engine_report, len(engine_report.union_hdv)),
        ("baseline", base_report, len(base_set)),
    ):
        started = time.perf_counter()
        subgraphs = build_subgraphs(seq, report, protocol.workers)
        engine = ChronopathEngine(seq, report, subgraphs, hop_cost)
        answers = run_queries(
            engine, queries, protocol.mode, protocol.max_candidates,
            protocol.lam, hop_cost, protocol.workers,
        )
        summaries.append(
            summarize(method, hdv_count, answers, graph.vertex_count,
                      runtime_s=time.perf_counter() - started)
        )
    return summaries[0], summaries[1]


def render_comparison(summaries: list[EvalSummary], title: str = "") -> str:
    """Aligned text table with the comparison columns."""
    if not summaries:
        raise ConfigError("nothing to render")
    header = ("Method", "HDV Count", "Coverage Rate", "Avg Path Length")
    rows = [
        (
            s.method,
            str(s.hdv_count),
            f"{s.coverage_rate:.3f}",
            f"{s.avg_path_length:.2f}",
        )
        for s in summaries
    ]
    widths = [
        max(len(header[c]), *(len(r[c]) for r in rows))
        for c in range(len(header))
    ]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(h.ljust(widths[c]) for c, h in enumerate(header)))
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append(
            "  ".join(
                r[c].ljust(widths[c]) if c == 0 else r[c].rjust(widths[c])
                for c in range(len(header))
            )
        )
    return "\n".join(lines)


def comparison_to_csv(summaries: list[EvalSummary],
                      dataset: str = "") -> str:
    """One CSV row per summary, for plotting."""
    lines = ["dataset,method,hdv_count,coverage_rate,avg_path_length,"
             "n_queries,n_paths"]
    for s in summaries:
        lines.append(
            f"{dataset},{s.method},{s.hdv_count},{s.coverage_rate:.6f},"
            f"{s.avg_path_length:.6f},{s.n_queries},{s.n_paths}"
        )
    return "\n".join(lines) + "\n"


def run_sweep(graph: TemporalGraph, base: EvalProtocol,
              sample_sizes=(5, 10, 20), thetas=(0.05, 0.1, 0.2),
              modes=("strict", "relaxed")) -> list[dict]:
    """Grid of protocol variants around the base; rows feed the committed
    parameter-sweep report that backs out-of-tolerance Table reproductions."""
    rows = []
    for mode in modes:
        for theta in thetas:
            for sample_size in sample_sizes:
                protocol = EvalProtocol(
                    dataset=base.dataset,
                    n_intervals=base.n_intervals,
                    dynamicity=DynamicityConfig(
                        w1=base.dynamicity.w1, w2=base.dynamicity.w2,
                        theta=theta,
                    ),
                    tau=base.tau,
                    baseline_selector=base.baseline_selector,
                    baseline_k=base.baseline_k,
                    sample_size=sample_size,
                    seed=base.seed,
                    mode=mode,
                    workers=base.workers,
                )
                engine, baseline = run_protocol(graph, protocol)
                rows.append(
                    {
                        "mode": mode,
                        "theta": theta,
                        "sample_size": sample_size,
                        "engine": engine.to_dict(),
                        "baseline": baseline.to_dict(),
                    }
                )
    return rows


def comparison_to_dict(summaries: list[EvalSummary],
                       protocol: EvalProtocol | None = None,
                       include_runtime: bool = False) -> dict:
    out = {
        "summaries": [s.to_dict(include_runtime) for s in summaries],
    }
    if protocol is not None:
        out["protocol"] = {
            "dataset": protocol.dataset,
            "n_intervals": protocol.n_intervals,
            "w1": protocol.dynamicity.w1,
            "w2": protocol.dynamicity.w2,
            "theta": protocol.dynamicity.theta,
            "tau": protocol.tau,
            "baseline_selector": protocol.baseline_selector,
            "baseline_k": protocol.baseline_k,
            "query_rule": protocol.query_rule,
            "sample_size": protocol.sample_size,
            "seed": protocol.seed,
            "mode": protocol.mode,
        }
    return out
