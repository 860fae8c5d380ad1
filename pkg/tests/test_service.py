import json
import time

import pytest
from fastapi.testclient import TestClient

from chronopath.service import WorkspaceStore, create_app

EDGELIST = "\n".join(
    f"{s} {d} {t}"
    for s, d, t in [
        (0, 1, 0), (1, 2, 0), (2, 0, 0),
        (0, 3, 10), (3, 4, 20), (4, 0, 20),
        (1, 3, 30), (3, 2, 30), (2, 4, 40), (4, 1, 40),
    ]
)


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "ws")
    with TestClient(app) as c:
        yield c


def upload(client, content=EDGELIST, **form):
    form.setdefault("format", "whitespace-triple")
    return client.post(
        "/api/datasets",
        files={"file": ("graph.txt", content.encode())},
        data=form,
    )


def wait_for(client, job_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        status = client.get(f"/api/jobs/{job_id}").json()["status"]
        if status in ("succeeded", "failed"):
            return status
        time.sleep(0.05)
    raise TimeoutError(f"job {job_id} still running")


def test_upload_dataset(client):
    resp = upload(client, "0 1 10\n1 2 20")
    assert resp.status_code == 201
    body = resp.json()
    assert body["vertices"] == 3 and body["edges"] == 2
    listing = client.get("/api/datasets").json()["datasets"]
    assert listing[0]["dataset_id"] == body["dataset_id"]


def test_upload_malformed_names_line(client):
    resp = upload(client, "0 1 10\n0 1 10\n0 1 10\n0 1 10\n0 1 10\n0 1 10\nbad line!")
    assert resp.status_code == 400
    assert resp.json()["detail"]["line"] == 7


def test_upload_size_cap(tmp_path):
    app = create_app(tmp_path / "ws", max_upload_bytes=64)
    with TestClient(app) as client:
        resp = upload(client, "0 1 10\n" * 100)
        assert resp.status_code == 413


def test_upload_csv_quad_with_policy(client):
    resp = upload(client, "5,2,-3,100\n2,5,4,200\n",
                  format="csv-quad", signed_weights="absolute")
    assert resp.status_code == 201
    assert resp.json()["vertices"] == 2


def test_snapshot_view_endpoint(client):
    dataset_id = upload(client).json()["dataset_id"]
    resp = client.get(f"/api/datasets/{dataset_id}/snapshots/0?intervals=4")
    assert resp.status_code == 200
    view = resp.json()
    assert view["index"] == 0
    assert view["snapshot_count"] == 5
    assert "hdv" in view
    assert client.get(
        f"/api/datasets/{dataset_id}/snapshots/99?intervals=4"
    ).status_code == 404
    assert client.get("/api/datasets/nope/snapshots/0").status_code == 404


def test_snapshot_cumulativity_over_slider(client):
    dataset_id = upload(client).json()["dataset_id"]
    counts = []
    for i in range(5):
        view = client.get(
            f"/api/datasets/{dataset_id}/snapshots/{i}?intervals=4"
        ).json()
        counts.append(len(view["edges"]))
    assert counts == sorted(counts)


def test_job_lifecycle_and_result(client):
    dataset_id = upload(client).json()["dataset_id"]
    resp = client.post(
        "/api/jobs",
        json={
            "dataset_id": dataset_id,
            "config": {"n_intervals": 4, "sample_size": 3, "seed": 1},
        },
    )
    assert resp.status_code == 202
    job_id = resp.json()["job_id"]
    assert wait_for(client, job_id) == "succeeded"

    result = client.get(f"/api/jobs/{job_id}/result")
    assert result.status_code == 200
    bundle = result.json()
    assert set(bundle) >= {"config", "hdv", "subgraphs", "paths", "patterns",
                           "eval"}
    # immutable: refetch is byte-identical
    assert result.content == client.get(f"/api/jobs/{job_id}/result").content


def test_job_unknown_dataset(client):
    resp = client.post("/api/jobs", json={"dataset_id": "missing",
                                          "config": {}})
    assert resp.status_code == 404


def test_job_invalid_config_field_messages(client):
    dataset_id = upload(client).json()["dataset_id"]
    resp = client.post(
        "/api/jobs",
        json={"dataset_id": dataset_id, "config": {"w1": 0.9, "w2": 0.2}},
    )
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert any(d["field"] == "w1" for d in detail)


def test_result_conflict_before_success(client):
    dataset_id = upload(client).json()["dataset_id"]
    job_id = client.post(
        "/api/jobs",
        json={"dataset_id": dataset_id,
              "config": {"n_intervals": 4, "sample_size": 2}},
    ).json()["job_id"]
    resp = client.get(f"/api/jobs/{job_id}/result")
    assert resp.status_code in (200, 409)  # may already have finished
    wait_for(client, job_id)
    assert client.get(f"/api/jobs/{job_id}/result").status_code == 200
    assert client.get("/api/jobs/missing/result").status_code == 404


def test_log_polling_cursor(client):
    dataset_id = upload(client).json()["dataset_id"]
    job_id = client.post(
        "/api/jobs",
        json={"dataset_id": dataset_id,
              "config": {"n_intervals": 4, "sample_size": 2}},
    ).json()["job_id"]

    collected = []
    cursor = 0
    deadline = time.time() + 30
    while time.time() < deadline:
        page = client.get(f"/api/jobs/{job_id}/log?from={cursor}").json()
        assert page["from"] <= cursor
        collected.extend(page["lines"])
        assert page["next"] == cursor + len(page["lines"]) or not page["lines"]
        cursor = page["next"]
        if page["status"] in ("succeeded", "failed"):
            break
        time.sleep(0.02)
    assert page["status"] == "succeeded"
    # every stage logged, terminal line present, no gaps
    text = "\n".join(collected)
    for stage in ("snapshots", "dynamicity", "subgraphs", "paths",
                  "patterns", "metrics"):
        assert f"stage {stage}" in text
    assert collected[-1].endswith("status -> succeeded")
    full = client.get(f"/api/jobs/{job_id}/log?from=0").json()
    assert full["lines"] == collected
    beyond = client.get(f"/api/jobs/{job_id}/log?from={cursor + 50}").json()
    assert beyond["lines"] == [] and beyond["next"] == cursor


def test_worker_count_does_not_change_bundle(client):
    dataset_id = upload(client).json()["dataset_id"]
    bundles = []
    for workers in (1, 4):
        job_id = client.post(
            "/api/jobs",
            json={
                "dataset_id": dataset_id,
                "config": {"n_intervals": 4, "sample_size": 3, "seed": 5,
                           "workers": workers},
            },
        ).json()["job_id"]
        assert wait_for(client, job_id) == "succeeded"
        bundles.append(client.get(f"/api/jobs/{job_id}/result").content)
    assert bundles[0] == bundles[1]


def test_crash_recovery(tmp_path):
    ws = tmp_path / "ws"
    app = create_app(ws)
    with TestClient(app) as client:
        dataset_id = upload(client).json()["dataset_id"]
        job_id = client.post(
            "/api/jobs",
            json={"dataset_id": dataset_id,
                  "config": {"n_intervals": 4, "sample_size": 2}},
        ).json()["job_id"]
        wait_for(client, job_id)
        finished_result = client.get(f"/api/jobs/{job_id}/result").content

    # simulate a crash mid-job: job.json left in running state
    stuck = ws / "jobs" / "deadbeef0000"
    stuck.mkdir(parents=True)
    (stuck / "job.json").write_text(json.dumps({
        "job_id": "deadbeef0000", "dataset_id": dataset_id,
        "config": {}, "status": "running", "created": "x", "finished": None,
    }))
    (stuck / "log.txt").write_text("[t] stage snapshots: started\n")

    app2 = create_app(ws)
    with TestClient(app2) as client:
        # finished artifacts survive
        assert client.get(f"/api/datasets/{dataset_id}").status_code == 200
        assert client.get(f"/api/jobs/{job_id}/result").content == finished_result
        # interrupted job resurfaces as failed with a restart marker
        meta = client.get("/api/jobs/deadbeef0000").json()
        assert meta["status"] == "failed"
        log = client.get("/api/jobs/deadbeef0000/log?from=0").json()
        assert any("restart" in line for line in log["lines"])


def test_unknown_job_endpoints(client):
    assert client.get("/api/jobs/nope").status_code == 404
    assert client.get("/api/jobs/nope/log").status_code == 404


def test_explicit_query_job(client):
    dataset_id = upload(client).json()["dataset_id"]
    job_id = client.post(
        "/api/jobs",
        json={
            "dataset_id": dataset_id,
            "config": {"n_intervals": 4, "source": 3, "targets": [0, 2],
                       "mode": "relaxed"},
        },
    ).json()["job_id"]
    assert wait_for(client, job_id) == "succeeded"
    bundle = client.get(f"/api/jobs/{job_id}/result").json()
    assert len(bundle["paths"]) == 1
    assert bundle["paths"][0]["query"]["q"] == 3
