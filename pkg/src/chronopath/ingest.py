"""Timestamped edge-list ingestion.

Supported input layouts:

* ``whitespace-triple`` -- ``SRC DST TIMESTAMP`` per line (SNAP temporal
  email layout).  Weight defaults to 1.0, t_start = t_end = TIMESTAMP.
* ``csv-quad`` -- ``SOURCE,TARGET,RATING,TIME`` (SNAP signed-trust layout).
  RATING becomes the edge weight subject to the signed-weight policy;
  fractional TIME values are truncated to integer seconds.
* ``generic`` -- arbitrary delimited columns described by a key-value
  descriptor (see :func:`parse_format_descriptor`).
* ``canonical`` -- this package's own serialized form: a header line
  ``#vertices=<n> directed=<bool>``, optional ``#label <id> <label>`` lines,
  then sorted ``src dst t_start t_end weight`` quints.

External vertex labels are mapped to dense integer ids by first appearance;
duplicate records are kept as parallel edges.
"""

import io
import math
from dataclasses import dataclass, field

from .errors import ParseError

SIGNED_POLICIES = ("reject", "shift", "absolute")
COLUMN_ROLES = ("src", "dst", "time", "t_start", "t_end", "weight", "ignore")


@dataclass(frozen=True)
class TemporalEdge:
    """One timestamped edge record.  ``raw_weight`` keeps the pre-policy
    value (e.g. a negative trust rating) when a signed policy rewrote it."""

    src: int
    dst: int
    t_start: int
    t_end: int
    weight: float = 1.0
    raw_weight: float | None = None

    def sort_key(self):
        return (self.t_end, self.t_start, self.src, self.dst, self.weight)

    def record(self):
        """Identity quintuple used for distinct-edge semantics."""
        return (self.src, self.dst, self.t_start, self.t_end, self.weight)


@dataclass
class TemporalGraph:
    vertex_count: int
    vertex_labels: list[str]
    edges: list[TemporalEdge]
    t_min: int
    t_max: int
    directed: bool = True

    def label_of(self, v: int) -> str:
        return self.vertex_labels[v]

    def distinct_edge_count(self) -> int:
        return len({e.record() for e in self.edges})

    def is_unweighted(self) -> bool:
        return all(e.weight == 1.0 for e in self.edges)


@dataclass
class DatasetFormat:
    """Describes how to read one edge-list layout.

    ``columns`` maps positional columns to roles; it must cover ``src``,
    ``dst`` and one timestamp column (``time``, or ``t_start``/``t_end``).
    """

    kind: str = "whitespace-triple"
    columns: tuple[str, ...] = ("src", "dst", "time")
    delimiter: str | None = None  # None = any whitespace
    has_header: bool = False
    signed_weight_policy: str = "reject"

    def __post_init__(self):
        if self.kind == "whitespace-triple":
            self.columns = ("src", "dst", "time")
            self.delimiter = None
        elif self.kind == "csv-quad":
            self.columns = ("src", "dst", "weight", "time")
            self.delimiter = ","
        elif self.kind not in ("generic", "canonical"):
            raise ParseError(f"unknown format kind {self.kind!r}")
        if self.signed_weight_policy not in SIGNED_POLICIES:
            raise ParseError(
                f"unknown signed_weight_policy {self.signed_weight_policy!r}"
            )
        roles = set(self.columns)
        bad = roles - set(COLUMN_ROLES)
        if bad:
            raise ParseError(f"unknown column roles: {sorted(bad)}")
        if self.kind != "canonical":
            if "src" not in roles or "dst" not in roles:
                raise ParseError("column roles must include src and dst")
            if not roles & {"time", "t_start", "t_end"}:
                raise ParseError("column roles must include a timestamp column")


@dataclass
class ValidationReport:
    vertex_count: int = 0
    edge_count: int = 0
    distinct_edge_count: int = 0
    multi_edge_count: int = 0
    isolated_vertex_count: int = 0
    t_min: int | None = None
    t_max: int | None = None
    violations: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "edges": self.edge_count,
            "distinct_edges": self.distinct_edge_count,
            "multi_edges": self.multi_edge_count,
            "isolated_vertices": self.isolated_vertex_count,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "violations": list(self.violations),
        }


def parse_format_descriptor(text: str) -> DatasetFormat:
    """Parse the small ``key=value`` descriptor for generic layouts.

    Recognized keys: ``kind``, ``delimiter`` (``whitespace`` or a literal),
    ``has_header`` (true/false), ``columns`` (comma list of roles),
    ``signed_weights`` (reject/shift/absolute).
    """
    values: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"descriptor entry missing '=': {line!r}", ln)
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    kind = values.get("kind", "generic")
    if kind in ("whitespace-triple", "csv-quad", "canonical"):
        return DatasetFormat(
            kind=kind,
            signed_weight_policy=values.get("signed_weights", "reject"),
        )
    delim = values.get("delimiter", "whitespace")
    columns = tuple(
        c.strip() for c in values.get("columns", "src,dst,time").split(",")
    )
    return DatasetFormat(
        kind="generic",
        columns=columns,
        delimiter=None if delim in ("whitespace", "") else delim,
        has_header=values.get("has_header", "false").lower() in ("true", "1", "yes"),
        signed_weight_policy=values.get("signed_weights", "reject"),
    )


def _decode(content) -> str:
    if isinstance(content, str):
        return content
    if isinstance(content, (bytes, bytearray)):
        try:
            return content.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    if isinstance(content, io.IOBase) or hasattr(content, "read"):
        return _decode(content.read())
    raise ParseError(f"unsupported content type {type(content).__name__}")


def _parse_number(token: str, what: str, ln: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad {what} value {token!r}", ln) from None


def _parse_timestamp(token: str, ln: int) -> int:
    value = _parse_number(token, "timestamp", ln)
    if math.isnan(value) or math.isinf(value):
        raise ParseError(f"bad timestamp value {token!r}", ln)
    return int(value)


class _LabelInterner:
    def __init__(self):
        self.labels: list[str] = []
        self._ids: dict[str, int] = {}

    def intern(self, label: str) -> int:
        vid = self._ids.get(label)
        if vid is None:
            vid = len(self.labels)
            self._ids[label] = vid
            self.labels.append(label)
        return vid


def parse_edge_list(content, fmt: DatasetFormat, directed: bool = True) -> TemporalGraph:
    """Parse an edge-list byte stream or string into a normalized graph.

    Raises :class:`ParseError` naming the offending line on malformed input,
    on a negative weight under the ``reject`` policy, and on empty input.
    """
    text = _decode(content)
    if fmt.kind == "canonical":
        return read_canonical(text)

    interner = _LabelInterner()
    edges: list[TemporalEdge] = []
    saw_header = not fmt.has_header

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", "%")):
            continue
        if not saw_header:
            saw_header = True
            continue
        parts = line.split(fmt.delimiter) if fmt.delimiter else line.split()
        if len(parts) < len(fmt.columns):
            raise ParseError(
                f"expected {len(fmt.columns)} columns, found {len(parts)}", ln
            )
        row = dict(zip(fmt.columns, parts))
        src = interner.intern(row["src"].strip())
        dst = interner.intern(row["dst"].strip())
        if "time" in row:
            t_start = t_end = _parse_timestamp(row["time"], ln)
        else:
            t_start = _parse_timestamp(row.get("t_start", row.get("t_end")), ln)
            t_end = _parse_timestamp(row.get("t_end", row.get("t_start")), ln)
        if t_start > t_end:
            raise ParseError(f"t_start {t_start} > t_end {t_end}", ln)
        raw_weight = None
        weight = 1.0
        if "weight" in row:
            weight = _parse_number(row["weight"], "weight", ln)
            if math.isnan(weight) or math.isinf(weight):
                raise ParseError(f"bad weight value {row['weight']!r}", ln)
            if weight < 0:
                if fmt.signed_weight_policy == "reject":
                    raise ParseError(f"negative weight {weight}", ln)
                raw_weight = weight
                if fmt.signed_weight_policy == "absolute":
                    weight = abs(weight)
                # "shift" is applied after the full pass (needs the minimum)
        edges.append(TemporalEdge(src, dst, t_start, t_end, weight, raw_weight))

    if not edges:
        raise ParseError("empty input: no edge records found")

    if fmt.signed_weight_policy == "shift":
        low = min(e.raw_weight if e.raw_weight is not None else e.weight for e in edges)
        if low < 0:
            edges = [
                TemporalEdge(
                    e.src,
                    e.dst,
                    e.t_start,
                    e.t_end,
                    (e.raw_weight if e.raw_weight is not None else e.weight) - low,
                    e.raw_weight if e.raw_weight is not None else e.weight,
                )
                for e in edges
            ]

    edges.sort(key=TemporalEdge.sort_key)
    return TemporalGraph(
        vertex_count=len(interner.labels),
        vertex_labels=interner.labels,
        edges=edges,
        t_min=min(e.t_start for e in edges),
        t_max=max(e.t_end for e in edges),
        directed=directed,
    )


def validate(graph: TemporalGraph) -> ValidationReport:
    """Check every TemporalGraph invariant; reports violations, never raises."""
    report = ValidationReport(
        vertex_count=graph.vertex_count,
        edge_count=len(graph.edges),
        distinct_edge_count=graph.distinct_edge_count(),
    )
    if len(graph.vertex_labels) != graph.vertex_count:
        report.violations.append(
            f"vertex_labels has {len(graph.vertex_labels)} entries, "
            f"expected {graph.vertex_count}"
        )
    touched = [False] * graph.vertex_count
    pair_counts: dict[tuple[int, int], int] = {}
    prev_key = None
    for i, e in enumerate(graph.edges):
        if e.t_start > e.t_end:
            report.violations.append(
                f"edge {i} ({e.src}->{e.dst}) violates t_start <= t_end"
            )
        if e.weight < 0:
            report.violations.append(
                f"edge {i} ({e.src}->{e.dst}) has negative weight {e.weight}"
            )
        for v in (e.src, e.dst):
            if not 0 <= v < graph.vertex_count:
                report.violations.append(f"edge {i} references unknown vertex {v}")
            else:
                touched[v] = True
        key = e.sort_key()
        if prev_key is not None and key < prev_key:
            report.violations.append(f"edge list not sorted at position {i}")
        prev_key = key
        pair_counts[(e.src, e.dst)] = pair_counts.get((e.src, e.dst), 0) + 1
    if graph.edges:
        t_min = min(e.t_start for e in graph.edges)
        t_max = max(e.t_end for e in graph.edges)
        if graph.t_min != t_min:
            report.violations.append(f"t_min={graph.t_min}, edges say {t_min}")
        if graph.t_max != t_max:
            report.violations.append(f"t_max={graph.t_max}, edges say {t_max}")
        report.t_min, report.t_max = graph.t_min, graph.t_max
    report.multi_edge_count = sum(1 for c in pair_counts.values() if c > 1)
    report.isolated_vertex_count = sum(1 for t in touched if not t)
    return report


def write_canonical(graph: TemporalGraph) -> str:
    """Serialize to the canonical text form (sorted, label-preserving)."""
    out = [f"#vertices={graph.vertex_count} directed={str(graph.directed).lower()}"]
    for vid, label in enumerate(graph.vertex_labels):
        if label != str(vid):
            out.append(f"#label {vid} {label}")
    for e in sorted(graph.edges, key=TemporalEdge.sort_key):
        out.append(f"{e.src} {e.dst} {e.t_start} {e.t_end} {_fmt_weight(e.weight)}")
    return "\n".join(out) + "\n"


def _fmt_weight(w: float) -> str:
    return repr(int(w)) if float(w).is_integer() else repr(w)


def read_canonical(text: str) -> TemporalGraph:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#vertices="):
        raise ParseError("canonical input must start with a #vertices= header", 1)
    header = lines[0][1:].split()
    fields = dict(part.split("=", 1) for part in header if "=" in part)
    try:
        vertex_count = int(fields["vertices"])
    except (KeyError, ValueError):
        raise ParseError("bad canonical header", 1) from None
    directed = fields.get("directed", "true") == "true"
    labels = [str(i) for i in range(vertex_count)]
    edges: list[TemporalEdge] = []
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#label "):
            parts = line.split(" ", 2)
            if len(parts) != 3:
                raise ParseError("bad #label line", ln)
            vid = int(parts[1])
            if not 0 <= vid < vertex_count:
                raise ParseError(f"label for unknown vertex {vid}", ln)
            labels[vid] = parts[2]
            continue
        if line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError(f"expected 5 columns, found {len(parts)}", ln)
        src, dst = int(parts[0]), int(parts[1])
        if not (0 <= src < vertex_count and 0 <= dst < vertex_count):
            raise ParseError(f"edge references unknown vertex", ln)
        t_start, t_end = _parse_timestamp(parts[2], ln), _parse_timestamp(parts[3], ln)
        weight = _parse_number(parts[4], "weight", ln)
        if weight < 0:
            raise ParseError(f"negative weight {weight}", ln)
        if t_start > t_end:
            raise ParseError(f"t_start {t_start} > t_end {t_end}", ln)
        edges.append(TemporalEdge(src, dst, t_start, t_end, weight))
    if not edges:
        raise ParseError("empty input: no edge records found")
    edges.sort(key=TemporalEdge.sort_key)
    return TemporalGraph(
        vertex_count=vertex_count,
        vertex_labels=labels,
        edges=edges,
        t_min=min(e.t_start for e in edges),
        t_max=max(e.t_end for e in edges),
        directed=directed,
    )


def graph_to_dict(graph: TemporalGraph) -> dict:
    """JSON-friendly graph export used by the CLI stage pipeline."""
    return {
        "kind": "graph",
        "vertices": graph.vertex_count,
        "directed": graph.directed,
        "labels": list(graph.vertex_labels),
        "edges": [
            [e.src, e.dst, e.t_start, e.t_end, e.weight] for e in graph.edges
        ],
    }


def graph_from_dict(data: dict) -> TemporalGraph:
    if data.get("kind") != "graph":
        raise ParseError("expected a graph JSON object (kind='graph')")
    edges = [
        TemporalEdge(int(s), int(d), int(ts), int(te), float(w))
        for s, d, ts, te, w in data["edges"]
    ]
    if not edges:
        raise ParseError("empty input: no edge records found")
    edges.sort(key=TemporalEdge.sort_key)
    return TemporalGraph(
        vertex_count=int(data["vertices"]),
        vertex_labels=[str(x) for x in data["labels"]],
        edges=edges,
        t_min=min(e.t_start for e in edges),
        t_max=max(e.t_end for e in edges),
        directed=bool(data.get("directed", True)),
    )
