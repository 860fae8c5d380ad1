"""Full analysis pipeline: snapshots -> dynamicity -> subgraphs -> paths ->
patterns -> metrics.

Produces the result bundle consumed by the job service and the CLI.  The
bundle is fully deterministic for a given graph, configuration and seed
(independent of worker count); wall-clock timings are reported separately so
bundles stay byte-comparable.
"""

import json
import time
from dataclasses import dataclass, field

from .dynamicity import (
    DynamicityConfig,
    baseline_hdv_degree,
    baseline_hdv_topk,
    baseline_report,
    detect_hdv,
)
from .errors import ConfigError
from .evaluation import (
    build_subgraphs,
    generate_queries,
    run_queries,
    summarize,
)
from .ingest import TemporalGraph
from .paths import ChronopathEngine, PathQuery, query_results_to_dict
from .patterns import extract_frequent_edges, patterns_to_dict
from .snapshots import build_snapshots


@dataclass
class PipelineConfig:
    n_intervals: int = 10
    w1: float = 0.8
    w2: float = 0.2
    theta: float = 0.1
    use_subgraphs: bool = True
    mode: str = "strict"
    source: int | None = None  # explicit query; None = auto protocol
    targets: list[int] | None = None
    sample_size: int = 10
    seed: int = 7
    max_candidates: int = 16
    lam: float = 0.5
    pattern_threshold: int = 2
    tau: float = 0.1
    baseline_selector: str = "threshold"
    baseline_k: int = 5
    workers: int = 1

    def dynamicity(self) -> DynamicityConfig:
        return DynamicityConfig(w1=self.w1, w2=self.w2, theta=self.theta)

    def to_dict(self) -> dict:
        """Config echo for the result bundle.  Excludes `workers`: execution
        parameters must not break byte-identity across worker counts."""
        return {
            "n_intervals": self.n_intervals,
            "w1": self.w1,
            "w2": self.w2,
            "theta": self.theta,
            "use_subgraphs": self.use_subgraphs,
            "mode": self.mode,
            "source": self.source,
            "targets": self.targets,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "max_candidates": self.max_candidates,
            "lam": self.lam,
            "pattern_threshold": self.pattern_threshold,
            "tau": self.tau,
            "baseline_selector": self.baseline_selector,
            "baseline_k": self.baseline_k,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        errors = validate_config_dict(data)
        if errors:
            raise ConfigError("; ".join(f"{k}: {v}" for k, v in errors))
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


def validate_config_dict(data: dict) -> list[tuple[str, str]]:
    """Field-level validation messages for a raw config mapping."""
    errors: list[tuple[str, str]] = []
    known = set(PipelineConfig.__dataclass_fields__)
    for key in data:
        if key not in known:
            errors.append((key, "unknown configuration field"))
    w1 = data.get("w1", 0.8)
    w2 = data.get("w2", 0.2)
    if not isinstance(w1, (int, float)) or not isinstance(w2, (int, float)):
        errors.append(("w1", "weights must be numbers"))
    elif abs(w1 + w2 - 1.0) > 1e-9:
        errors.append(("w1", f"w1 + w2 must equal 1, got {w1 + w2}"))
    theta = data.get("theta", 0.1)
    if not isinstance(theta, (int, float)) or not 0.0 <= theta <= 1.0:
        errors.append(("theta", "theta must lie in [0, 1]"))
    if data.get("n_intervals", 10) < 1:
        errors.append(("n_intervals", "must be >= 1"))
    if data.get("workers", 1) < 1:
        errors.append(("workers", "must be >= 1"))
    if data.get("pattern_threshold", 2) < 1:
        errors.append(("pattern_threshold", "must be >= 1"))
    if data.get("mode", "strict") not in ("strict", "relaxed"):
        errors.append(("mode", "must be 'strict' or 'relaxed'"))
    if data.get("sample_size", 10) < 1:
        errors.append(("sample_size", "must be >= 1"))
    lam = data.get("lam", 0.5)
    if not isinstance(lam, (int, float)) or not 0.0 <= lam <= 1.0:
        errors.append(("lam", "must lie in [0, 1]"))
    if data.get("max_candidates", 16) < 1:
        errors.append(("max_candidates", "must be >= 1"))
    if data.get("source") is not None and not data.get("targets"):
        errors.append(("targets", "required when an explicit source is set"))
    return errors


def run_pipeline(graph: TemporalGraph, config: PipelineConfig,
                 log=lambda msg: None) -> dict:
    """Execute all stages, logging at least one line per stage; returns the
    result bundle."""
    timings: dict[str, float] = {}

    def staged(name):
        log(f"stage {name}: started")
        return time.perf_counter()

    def done(name, t0, detail=""):
        timings[name] = time.perf_counter() - t0
        log(f"stage {name}: done{' (' + detail + ')' if detail else ''}")

    t0 = staged("snapshots")
    seq = build_snapshots(graph, config.n_intervals, config.workers)
    done("snapshots", t0, f"{len(seq.snapshots)} snapshots")

    t0 = staged("dynamicity")
    report = detect_hdv(seq, config.dynamicity())
    done("dynamicity", t0, f"{len(report.union_hdv)} dynamic vertices")

    t0 = staged("subgraphs")
    if config.use_subgraphs:
        subgraphs = build_subgraphs(seq, report, config.workers)
        done("subgraphs", t0, f"{len(subgraphs)} subgraphs")
    else:
        subgraphs = None
        done("subgraphs", t0, "disabled")

    t0 = staged("paths")
    hop_cost = graph.is_unweighted()
    if config.source is not None:
        targets = config.targets or []
        queries = [(config.source, sorted(set(targets)))]
    else:
        queries = generate_queries(
            report.union_hdv, graph.vertex_count, config.sample_size,
            config.seed,
        )
    engine = ChronopathEngine(seq, report, subgraphs, hop_cost)
    answers = run_queries(
        engine, queries, config.mode, config.max_candidates, config.lam,
        hop_cost, config.workers,
    )
    path_exports = []
    for (q, targets), paths in zip(queries, answers):
        query = PathQuery(
            source=q, targets=list(targets), mode=config.mode,
            max_candidates=config.max_candidates, lam=config.lam,
            hop_cost=hop_cost,
        )
        by_target: dict[int, list] = {}
        for p in paths:
            by_target.setdefault(p.segments[-1].vertices[-1], []).append(p)
        path_exports.append(query_results_to_dict(query, by_target))
    flat_paths = [p for batch in answers for p in batch]
    done("paths", t0, f"{len(flat_paths)} paths from {len(queries)} queries")

    t0 = staged("patterns")
    found = extract_frequent_edges(flat_paths, config.pattern_threshold)
    done("patterns", t0, f"{len(found)} patterns")

    t0 = staged("metrics")
    engine_summary = summarize(
        "engine", len(report.union_hdv), answers, graph.vertex_count
    )
    if config.baseline_selector == "top-k":
        base_set = baseline_hdv_topk(seq, config.baseline_k)
    else:
        base_set = baseline_hdv_degree(seq, config.tau)
    base_rep = baseline_report(seq, base_set)
    base_subgraphs = build_subgraphs(seq, base_rep, config.workers) \
        if config.use_subgraphs else None
    base_engine = ChronopathEngine(seq, base_rep, base_subgraphs, hop_cost)
    base_answers = run_queries(
        base_engine, queries, config.mode, config.max_candidates, config.lam,
        hop_cost, config.workers,
    )
    base_summary = summarize(
        "baseline", len(base_set), base_answers, graph.vertex_count
    )
    done("metrics", t0)

    bundle = {
        "config": config.to_dict(),
        "hdv": report.to_dict(),
        "subgraphs": [
            subgraphs[i].to_dict() for i in sorted(subgraphs)
        ] if subgraphs else [],
        "paths": path_exports,
        "patterns": patterns_to_dict(found, config.pattern_threshold),
        "eval": {
            "summaries": [
                engine_summary.to_dict(),
                base_summary.to_dict(),
            ],
        },
    }
    return bundle, timings


def bundle_to_bytes(bundle: dict) -> bytes:
    """Canonical JSON encoding (stable key order, compact separators)."""
    return json.dumps(bundle, sort_keys=True, separators=(",", ":")).encode()
