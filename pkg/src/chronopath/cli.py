"""Command-line driver.

One subcommand per pipeline stage plus `eval`, `serve` and `fetch`.  Stage
subcommands read and emit a JSON bundle: each stage adds its own section, so
outputs pipe straight into the next stage's --input.  Exit codes: 0 success,
1 domain error (one-line diagnostic, no traceback), 2 usage error.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import datasets as datasets_mod
from . import ingest
from .dynamicity import (
    DynamicityConfig,
    baseline_hdv_degree,
    baseline_hdv_topk,
    baseline_report,
    detect_hdv,
)
from .errors import ChronopathError, ConfigError
from .evaluation import (
    EvalProtocol,
    build_subgraphs,
    comparison_to_csv,
    comparison_to_dict,
    render_comparison,
    run_protocol,
    run_sweep,
)
from .paths import ChronopathEngine, PathQuery, query_results_to_dict
from .patterns import extract_frequent_edges, patterns_to_dict
from .pipeline import PipelineConfig, run_pipeline
from .snapshots import build_snapshots, sequence_to_dict


def _read_input(path: str | None) -> dict:
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChronopathError(f"input is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "graph" not in data:
        raise ChronopathError("input bundle lacks a 'graph' section")
    return data


def _emit(data, output: str | None) -> None:
    if isinstance(data, (dict, list)):
        text = json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = str(data)
        if not text.endswith("\n"):
            text += "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _graph_from_bundle(bundle: dict) -> ingest.TemporalGraph:
    return ingest.graph_from_dict(bundle["graph"])


def _prepare(bundle: dict, args):
    """Rebuild snapshots, dynamicity report and subgraphs from a bundle;
    stages downstream of `hdv` reuse its recorded parameters."""
    graph = _graph_from_bundle(bundle)
    params = bundle.get("params", {})
    intervals = getattr(args, "intervals", None) or params.get("intervals", 10)
    w1 = getattr(args, "w1", None)
    w1 = params.get("w1", 0.8) if w1 is None else w1
    w2 = getattr(args, "w2", None)
    w2 = params.get("w2", 0.2) if w2 is None else w2
    theta = getattr(args, "theta", None)
    theta = params.get("theta", 0.1) if theta is None else theta
    workers = getattr(args, "workers", 1) or 1
    seq = build_snapshots(graph, intervals, workers)
    report = detect_hdv(seq, DynamicityConfig(w1=w1, w2=w2, theta=theta))
    bundle["params"] = {"intervals": intervals, "w1": w1, "w2": w2,
                        "theta": theta}
    return graph, seq, report


def cmd_ingest(args) -> int:
    fmt = _format_from_args(args)
    content = (
        sys.stdin.buffer.read() if args.input in (None, "-")
        else Path(args.input).read_bytes()
    )
    graph = ingest.parse_edge_list(content, fmt, not args.undirected)
    report = ingest.validate(graph)
    if args.canonical:
        _emit(ingest.write_canonical(graph), args.output)
        return 0
    _emit(
        {
            "kind": "bundle",
            "graph": ingest.graph_to_dict(graph),
            "validation": report.to_dict(),
        },
        args.output,
    )
    return 0


def _format_from_args(args) -> ingest.DatasetFormat:
    if args.format_file:
        return ingest.parse_format_descriptor(Path(args.format_file).read_text())
    return ingest.DatasetFormat(
        kind=args.format, signed_weight_policy=args.signed_weights
    )


def cmd_snapshots(args) -> int:
    bundle = _read_input(args.input)
    graph = _graph_from_bundle(bundle)
    seq = build_snapshots(graph, args.intervals, args.workers or 1)
    bundle["params"] = {"intervals": args.intervals}
    section = sequence_to_dict(seq)
    section.pop("kind")
    bundle["snapshots"] = section
    _emit(bundle, args.output)
    return 0


def cmd_hdv(args) -> int:
    bundle = _read_input(args.input)
    _, seq, report = _prepare(bundle, args)
    bundle["hdv"] = report.to_dict()
    if args.baseline:
        if args.baseline == "top-k":
            base = baseline_hdv_topk(seq, args.top_k)
        else:
            base = baseline_hdv_degree(seq, args.tau)
        bundle["hdv"]["baseline"] = sorted(base)
    _emit(bundle, args.output)
    return 0


def cmd_subgraph(args) -> int:
    bundle = _read_input(args.input)
    _, seq, report = _prepare(bundle, args)
    subgraphs = build_subgraphs(seq, report, args.workers or 1)
    bundle["subgraphs"] = [subgraphs[i].to_dict() for i in sorted(subgraphs)]
    _emit(bundle, args.output)
    return 0


def cmd_chronopath(args) -> int:
    bundle = _read_input(args.input)
    graph, seq, report = _prepare(bundle, args)
    subgraphs = build_subgraphs(seq, report, args.workers or 1)
    hop_cost = args.cost == "hops" or (
        args.cost == "auto" and graph.is_unweighted()
    )
    targets = [int(t) for t in args.targets.split(",") if t != ""]
    query = PathQuery(
        source=args.source,
        targets=targets,
        mode=args.mode,
        max_candidates=args.max_candidates,
        lam=args.lam,
        hop_cost=hop_cost,
        exempt_targets=args.exempt_targets,
    )
    engine = ChronopathEngine(seq, report, subgraphs, hop_cost)
    if args.mode == "strict":
        results = engine.strict(query)
    else:
        results = engine.relaxed(query)
    bundle["paths"] = [query_results_to_dict(query, results)]
    _emit(bundle, args.output)
    return 0


def cmd_patterns(args) -> int:
    bundle = _read_input(args.input)
    if "paths" not in bundle:
        raise ChronopathError(
            "input bundle lacks a 'paths' section; run the chronopath stage first"
        )
    from .paths import Chronopath, PathSegment

    paths = []
    for export in bundle["paths"]:
        for result in export["results"]:
            for p in result["paths"]:
                paths.append(
                    Chronopath(
                        segments=[
                            PathSegment(
                                s["snapshot"], list(s["vertices"]),
                                list(s["weights"]),
                            )
                            for s in p["segments"]
                        ],
                        total_length=p["total_length"],
                        hdv_fraction=p["hdv_fraction"],
                        significance=p.get("significance"),
                    )
                )
    found = extract_frequent_edges(
        paths, args.threshold, snapshot_bound=not args.merge_snapshots
    )
    bundle["patterns"] = patterns_to_dict(found, args.threshold)
    _emit(bundle, args.output)
    return 0


def cmd_eval(args) -> int:
    bundle = _read_input(args.input)
    graph = _graph_from_bundle(bundle)
    protocol = EvalProtocol(
        dataset=args.dataset or "input",
        n_intervals=args.intervals or 10,
        dynamicity=DynamicityConfig(
            w1=args.w1 if args.w1 is not None else 0.8,
            w2=args.w2 if args.w2 is not None else 0.2,
            theta=args.theta if args.theta is not None else 0.1,
        ),
        tau=args.tau,
        baseline_selector=args.baseline or "threshold",
        baseline_k=args.top_k,
        sample_size=args.sample_size,
        seed=args.seed,
        mode=args.mode,
        workers=args.workers or 1,
    )
    if args.sweep:
        rows = run_sweep(graph, protocol)
        report = {"dataset": protocol.dataset, "rows": rows}
        out = args.output or f"reports/{protocol.dataset}_parameter_sweep.json"
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        _emit(report, out)
        sys.stdout.write(f"sweep report written to {out}\n")
        return 0
    engine_summary, base_summary = run_protocol(graph, protocol)
    table = render_comparison(
        [engine_summary, base_summary], title=protocol.dataset
    )
    if args.output:
        _emit(
            comparison_to_dict([engine_summary, base_summary], protocol),
            args.output,
        )
    if args.csv:
        Path(args.csv).write_text(
            comparison_to_csv([engine_summary, base_summary],
                              protocol.dataset)
        )
    sys.stdout.write(table + "\n")
    return 0


def cmd_run(args) -> int:
    bundle = _read_input(args.input)
    graph = _graph_from_bundle(bundle)
    config = PipelineConfig(
        n_intervals=args.intervals or 10,
        w1=args.w1 if args.w1 is not None else 0.8,
        w2=args.w2 if args.w2 is not None else 0.2,
        theta=args.theta if args.theta is not None else 0.1,
        mode=args.mode,
        sample_size=args.sample_size,
        seed=args.seed,
        pattern_threshold=args.threshold,
        workers=args.workers or 1,
    )
    result, _ = run_pipeline(
        graph, config, log=lambda m: print(m, file=sys.stderr)
    )
    _emit(result, args.output)
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.workspace, port=args.port, host=args.host,
          max_upload_bytes=args.max_upload_mb * 1024 * 1024,
          ui_dir=args.ui_dir)
    return 0


def cmd_fetch(args) -> int:
    for name in args.names or sorted(datasets_mod.REGISTRY):
        path = datasets_mod.fetch(name)
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronopath",
        description="Temporal-graph analytics: dynamic vertices, significant "
                    "subgraphs, cross-snapshot paths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, workers=True):
        p.add_argument("--input", "-i", help="input file (default stdin)")
        p.add_argument("--output", "-o", help="output file (default stdout)")
        if workers:
            p.add_argument("--workers", type=int, default=1,
                           help="stage parallelism (0 = all cores)")

    p = sub.add_parser("ingest", help="parse an edge list into a graph bundle")
    add_common(p, workers=False)
    p.add_argument("--format", default="whitespace-triple",
                   choices=["whitespace-triple", "csv-quad", "generic",
                            "canonical"])
    p.add_argument("--format-file", help="generic format descriptor file")
    p.add_argument("--signed-weights", default="reject",
                   choices=["reject", "shift", "absolute"])
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--canonical", action="store_true",
                   help="emit canonical text instead of a JSON bundle")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("snapshots", help="materialize cumulative snapshots")
    add_common(p)
    p.add_argument("--intervals", type=int, default=10)
    p.set_defaults(func=cmd_snapshots)

    p = sub.add_parser("hdv", help="detect highly dynamic vertices")
    add_common(p)
    p.add_argument("--intervals", type=int)
    p.add_argument("--w1", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--baseline", choices=["threshold", "top-k"],
                   help="also report the degree-centrality baseline set")
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--top-k", type=int, default=5)
    p.set_defaults(func=cmd_hdv)

    p = sub.add_parser("subgraph", help="extract significant subgraphs")
    add_common(p)
    p.add_argument("--intervals", type=int)
    p.add_argument("--w1", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--theta", type=float)
    p.set_defaults(func=cmd_subgraph)

    p = sub.add_parser("chronopath", help="answer a cross-snapshot path query")
    add_common(p)
    p.add_argument("--intervals", type=int)
    p.add_argument("--w1", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--mode", default="strict", choices=["strict", "relaxed"])
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--targets", required=True, help="comma-separated ids")
    p.add_argument("--max-candidates", type=int, default=16)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--cost", default="auto", choices=["auto", "weight", "hops"])
    p.add_argument("--exempt-targets", action="store_true")
    p.set_defaults(func=cmd_chronopath)

    p = sub.add_parser("patterns", help="summarize paths by frequent edges")
    add_common(p, workers=False)
    p.add_argument("--threshold", type=int, default=2)
    p.add_argument("--merge-snapshots", action="store_true",
                   help="snapshot-agnostic edge identity")
    p.set_defaults(func=cmd_patterns)

    p = sub.add_parser("eval", help="run the engine-vs-baseline comparison")
    add_common(p)
    p.add_argument("--dataset", help="name echoed into the report")
    p.add_argument("--intervals", type=int)
    p.add_argument("--w1", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--baseline", choices=["threshold", "top-k"])
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--mode", default="strict", choices=["strict", "relaxed"])
    p.add_argument("--sample-size", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--csv", help="also write CSV rows for plotting")
    p.add_argument("--sweep", action="store_true",
                   help="run the parameter grid and write a sweep report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="full pipeline to a result bundle")
    add_common(p)
    p.add_argument("--intervals", type=int)
    p.add_argument("--w1", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--mode", default="strict", choices=["strict", "relaxed"])
    p.add_argument("--sample-size", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--threshold", type=int, default=2)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="start the HTTP job service")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("CHRONOPATH_PORT", "8790")))
    p.add_argument("--host",
                   default=os.environ.get("CHRONOPATH_HOST", "127.0.0.1"))
    p.add_argument("--workspace",
                   default=os.environ.get("CHRONOPATH_WORKSPACE", "workspace"))
    p.add_argument("--max-upload-mb", type=int,
                   default=int(os.environ.get("CHRONOPATH_MAX_UPLOAD_MB",
                                              "256")))
    p.add_argument("--ui-dir", default=os.environ.get("CHRONOPATH_UI"),
                   help="static dashboard directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("fetch", help="download reference datasets")
    p.add_argument("names", nargs="*", help="dataset names (default: all)")
    p.set_defaults(func=cmd_fetch)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChronopathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    sys.exit(main())
