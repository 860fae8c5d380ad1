"""HTTP job service: dataset upload, pipeline jobs, live logs, results.

Persistence is filesystem-based under a workspace root:

    workspace/
      datasets/<id>/graph.txt   canonical edge list
      datasets/<id>/meta.json
      jobs/<id>/job.json        config + status
      jobs/<id>/log.txt         append-only timestamped lines
      jobs/<id>/result.json     canonical bundle (present iff succeeded)
      jobs/<id>/timings.json    wall-clock sidecar (not part of the bundle)

One job executes at a time on a background worker thread; stage parallelism
inside a job follows the job's worker count.  Finished jobs and datasets are
immutable; after a restart, jobs that were queued or running resurface as
failed with a restart marker in their log.
"""

import hashlib
import json
import queue
import threading
import time
import uuid
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, File, Form, HTTPException, Query, UploadFile
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import ingest
from .dynamicity import DynamicityConfig, detect_hdv
from .errors import ChronopathError, ParseError
from .pipeline import PipelineConfig, bundle_to_bytes, run_pipeline, validate_config_dict
from .snapshots import build_snapshots, snapshot_view

DEFAULT_MAX_UPLOAD = 256 * 1024 * 1024


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _write_atomic(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)


class WorkspaceStore:
    """Filesystem-backed dataset and job state with in-memory log mirrors."""

    def __init__(self, root: Path):
        self.root = Path(root)
        (self.root / "datasets").mkdir(parents=True, exist_ok=True)
        (self.root / "jobs").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._graph_cache: dict[str, ingest.TemporalGraph] = {}
        self._view_cache: dict[tuple, tuple] = {}
        self._logs: dict[str, list[str]] = {}
        self.recover()

    # -- datasets -----------------------------------------------------------

    def dataset_ids(self) -> list[str]:
        return sorted(p.name for p in (self.root / "datasets").iterdir()
                      if (p / "meta.json").exists())

    def dataset_meta(self, dataset_id: str) -> dict:
        path = self.root / "datasets" / dataset_id / "meta.json"
        if not path.exists():
            raise KeyError(dataset_id)
        return json.loads(path.read_text())

    def dataset_graph(self, dataset_id: str) -> ingest.TemporalGraph:
        if dataset_id not in self._graph_cache:
            path = self.root / "datasets" / dataset_id / "graph.txt"
            if not path.exists():
                raise KeyError(dataset_id)
            self._graph_cache[dataset_id] = ingest.read_canonical(
                path.read_text()
            )
            if len(self._graph_cache) > 4:
                self._graph_cache.pop(next(iter(self._graph_cache)))
        return self._graph_cache[dataset_id]

    def add_dataset(self, content: bytes, fmt: ingest.DatasetFormat,
                    directed: bool, name: str) -> dict:
        graph = ingest.parse_edge_list(content, fmt, directed)
        canonical = ingest.write_canonical(graph).encode()
        dataset_id = hashlib.sha256(canonical).hexdigest()[:12]
        meta = {
            "dataset_id": dataset_id,
            "name": name or dataset_id,
            "vertices": graph.vertex_count,
            "edges": len(graph.edges),
            "directed": graph.directed,
            "t_min": graph.t_min,
            "t_max": graph.t_max,
            "created": _now(),
        }
        with self._lock:
            ddir = self.root / "datasets" / dataset_id
            if not (ddir / "meta.json").exists():
                ddir.mkdir(parents=True, exist_ok=True)
                _write_atomic(ddir / "graph.txt", canonical)
                _write_atomic(ddir / "meta.json",
                              json.dumps(meta, sort_keys=True).encode())
            else:
                meta = json.loads((ddir / "meta.json").read_text())
        return meta

    def snapshot_view(self, dataset_id: str, index: int, intervals: int,
                      w1: float, w2: float, theta: float) -> dict:
        key = (dataset_id, intervals, w1, w2, theta)
        if key not in self._view_cache:
            graph = self.dataset_graph(dataset_id)
            seq = build_snapshots(graph, intervals)
            report = detect_hdv(
                seq, DynamicityConfig(w1=w1, w2=w2, theta=theta)
            ) if len(seq.snapshots) >= 2 else None
            if len(self._view_cache) > 4:
                self._view_cache.pop(next(iter(self._view_cache)))
            self._view_cache[key] = (seq, report)
        seq, report = self._view_cache[key]
        if not 0 <= index < len(seq.snapshots):
            raise IndexError(index)
        hdv = report.hdv_at(index) if report else set()
        view = snapshot_view(seq, index, hdv)
        view["snapshot_count"] = len(seq.snapshots)
        return view

    # -- jobs ---------------------------------------------------------------

    def job_ids(self) -> list[str]:
        return sorted(p.name for p in (self.root / "jobs").iterdir()
                      if (p / "job.json").exists())

    def job_meta(self, job_id: str) -> dict:
        path = self.root / "jobs" / job_id / "job.json"
        if not path.exists():
            raise KeyError(job_id)
        return json.loads(path.read_text())

    def create_job(self, dataset_id: str, config: dict) -> dict:
        job_id = uuid.uuid4().hex[:12]
        meta = {
            "job_id": job_id,
            "dataset_id": dataset_id,
            "config": config,
            "status": "queued",
            "created": _now(),
            "finished": None,
        }
        jdir = self.root / "jobs" / job_id
        jdir.mkdir(parents=True)
        _write_atomic(jdir / "job.json", json.dumps(meta, sort_keys=True).encode())
        self._logs[job_id] = []
        self.append_log(job_id, "job queued")
        return meta

    def set_status(self, job_id: str, status: str) -> None:
        with self._lock:
            meta = self.job_meta(job_id)
            meta["status"] = status
            if status in ("succeeded", "failed"):
                meta["finished"] = _now()
            _write_atomic(self.root / "jobs" / job_id / "job.json",
                          json.dumps(meta, sort_keys=True).encode())
        self.append_log(job_id, f"status -> {status}")

    def append_log(self, job_id: str, message: str) -> None:
        line = f"[{_now()}] {message}"
        with self._lock:
            self._logs.setdefault(job_id, []).append(line)
            with open(self.root / "jobs" / job_id / "log.txt", "a") as fh:
                fh.write(line + "\n")

    def log_lines(self, job_id: str, start: int = 0) -> tuple[list[str], int]:
        if job_id not in self._logs:
            path = self.root / "jobs" / job_id / "log.txt"
            if not path.exists():
                raise KeyError(job_id)
            self._logs[job_id] = path.read_text().splitlines()
        lines = self._logs[job_id]
        start = max(0, start)
        return lines[start:], len(lines)

    def store_result(self, job_id: str, bundle: dict, timings: dict) -> None:
        jdir = self.root / "jobs" / job_id
        _write_atomic(jdir / "result.json", bundle_to_bytes(bundle))
        _write_atomic(jdir / "timings.json",
                      json.dumps(timings, sort_keys=True).encode())

    def result_bytes(self, job_id: str) -> bytes:
        path = self.root / "jobs" / job_id / "result.json"
        if not path.exists():
            raise FileNotFoundError(job_id)
        return path.read_bytes()

    def recover(self) -> None:
        """Mark jobs interrupted by a process restart as failed."""
        for job_id in self.job_ids():
            meta = self.job_meta(job_id)
            if meta["status"] in ("queued", "running"):
                meta["status"] = "failed"
                meta["finished"] = _now()
                _write_atomic(self.root / "jobs" / job_id / "job.json",
                              json.dumps(meta, sort_keys=True).encode())
                self.append_log(
                    job_id, "job failed: process restarted while job was active"
                )


class JobRunner:
    """Single background worker executing queued jobs in FIFO order."""

    def __init__(self, store: WorkspaceStore):
        self.store = store
        self.queue: queue.Queue = queue.Queue()
        self.thread = threading.Thread(target=self._loop, daemon=True)
        self.thread.start()

    def submit(self, job_id: str) -> None:
        self.queue.put(job_id)

    def _loop(self) -> None:
        while True:
            job_id = self.queue.get()
            try:
                self._run(job_id)
            except Exception as exc:  # job must never kill the worker
                try:
                    self.store.append_log(job_id, f"job failed: {exc}")
                    self.store.set_status(job_id, "failed")
                except Exception:
                    pass
            finally:
                self.queue.task_done()

    def _run(self, job_id: str) -> None:
        store = self.store
        meta = store.job_meta(job_id)
        store.set_status(job_id, "running")
        stage = "setup"
        try:
            graph = store.dataset_graph(meta["dataset_id"])
            config = PipelineConfig.from_dict(meta["config"])

            def log(message: str) -> None:
                nonlocal stage
                if message.startswith("stage "):
                    stage = message.split()[1].rstrip(":")
                store.append_log(job_id, message)

            bundle, timings = run_pipeline(graph, config, log)
            store.store_result(job_id, bundle, timings)
            store.set_status(job_id, "succeeded")
        except Exception as exc:
            store.append_log(job_id, f"stage {stage} failed: {exc}")
            store.set_status(job_id, "failed")


def create_app(workspace: str | Path, max_upload_bytes: int = DEFAULT_MAX_UPLOAD,
               ui_dir: str | Path | None = None) -> FastAPI:
    store = WorkspaceStore(Path(workspace))
    runner = JobRunner(store)
    app = FastAPI(title="chronopath", version="0.1.0")
    app.state.store = store
    app.state.runner = runner

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(
        file: UploadFile = File(...),
        format: str = Form("whitespace-triple"),
        descriptor: str = Form(""),
        signed_weights: str = Form("reject"),
        undirected: bool = Form(False),
        name: str = Form(""),
    ):
        content = await file.read()
        if len(content) > max_upload_bytes:
            raise HTTPException(413, detail="upload exceeds the size cap")
        try:
            if descriptor:
                fmt = ingest.parse_format_descriptor(descriptor)
            else:
                fmt = ingest.DatasetFormat(
                    kind=format, signed_weight_policy=signed_weights
                )
            meta = store.add_dataset(
                content, fmt, not undirected, name or file.filename or ""
            )
        except ParseError as exc:
            raise HTTPException(
                400, detail={"message": str(exc), "line": exc.line}
            ) from None
        return {
            "dataset_id": meta["dataset_id"],
            "vertices": meta["vertices"],
            "edges": meta["edges"],
        }

    @app.get("/api/datasets")
    def list_datasets():
        return {
            "datasets": [store.dataset_meta(d) for d in store.dataset_ids()]
        }

    @app.get("/api/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        try:
            return store.dataset_meta(dataset_id)
        except KeyError:
            raise HTTPException(404, detail="unknown dataset") from None

    @app.get("/api/datasets/{dataset_id}/snapshots/{index}")
    def get_snapshot(dataset_id: str, index: int, intervals: int = 10,
                     w1: float = 0.8, w2: float = 0.2, theta: float = 0.1):
        try:
            return store.snapshot_view(dataset_id, index, intervals,
                                       w1, w2, theta)
        except KeyError:
            raise HTTPException(404, detail="unknown dataset") from None
        except IndexError:
            raise HTTPException(404, detail="snapshot index out of range") from None
        except ChronopathError as exc:
            raise HTTPException(422, detail=str(exc)) from None

    @app.post("/api/jobs", status_code=202)
    def create_job(body: dict):
        dataset_id = body.get("dataset_id")
        if not dataset_id:
            raise HTTPException(422, detail=[{"field": "dataset_id",
                                              "message": "required"}])
        try:
            store.dataset_meta(dataset_id)
        except KeyError:
            raise HTTPException(404, detail="unknown dataset") from None
        config = body.get("config", {})
        errors = validate_config_dict(config)
        if errors:
            raise HTTPException(
                422,
                detail=[{"field": f, "message": m} for f, m in errors],
            )
        meta = store.create_job(dataset_id, config)
        runner.submit(meta["job_id"])
        return {"job_id": meta["job_id"]}

    @app.get("/api/jobs")
    def list_jobs():
        return {"jobs": [store.job_meta(j) for j in store.job_ids()]}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        try:
            return store.job_meta(job_id)
        except KeyError:
            raise HTTPException(404, detail="unknown job") from None

    @app.get("/api/jobs/{job_id}/log")
    def get_log(job_id: str, start: int = Query(0, alias="from")):
        try:
            lines, next_index = store.log_lines(job_id, start)
        except KeyError:
            raise HTTPException(404, detail="unknown job") from None
        meta = store.job_meta(job_id)
        return {
            "lines": lines,
            "from": min(start, next_index),
            "next": next_index,
            "status": meta["status"],
        }

    @app.get("/api/jobs/{job_id}/result")
    def get_result(job_id: str):
        try:
            meta = store.job_meta(job_id)
        except KeyError:
            raise HTTPException(404, detail="unknown job") from None
        if meta["status"] != "succeeded":
            raise HTTPException(
                409, detail=f"job status is {meta['status']}, not succeeded"
            )
        return Response(content=store.result_bytes(job_id),
                        media_type="application/json")

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")
    else:
        @app.get("/")
        def index():
            return JSONResponse(
                {"service": "chronopath", "api": "/api", "ui": "not bundled"}
            )

    return app


def serve(workspace: str, port: int = 8790, host: str = "127.0.0.1",
          max_upload_bytes: int = DEFAULT_MAX_UPLOAD,
          ui_dir: str | None = None) -> None:
    import uvicorn

    app = create_app(workspace, max_upload_bytes, ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
