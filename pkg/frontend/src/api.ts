/** Thin fetch client for the service endpoints. */

import type {
  DatasetMeta,
  JobMeta,
  LogPage,
  ResultBundle,
  SnapshotPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail: unknown = resp.statusText;
    try {
      detail = (await resp.json()).detail;
    } catch {
      /* keep statusText */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export async function listDatasets(): Promise<DatasetMeta[]> {
  const data = await asJson<{ datasets: DatasetMeta[] }>(
    await fetch("/api/datasets"),
  );
  return data.datasets;
}

export async function uploadDataset(
  file: File,
  format: string,
  signedWeights: string,
  undirected: boolean,
): Promise<{ dataset_id: string; vertices: number; edges: number }> {
  const body = new FormData();
  body.append("file", file);
  body.append("format", format);
  body.append("signed_weights", signedWeights);
  body.append("undirected", String(undirected));
  return asJson(await fetch("/api/datasets", { method: "POST", body }));
}

export async function fetchSnapshot(
  datasetId: string,
  index: number,
  intervals: number,
  w1: number,
  w2: number,
  theta: number,
): Promise<SnapshotPayload> {
  const params = new URLSearchParams({
    intervals: String(intervals),
    w1: String(w1),
    w2: String(w2),
    theta: String(theta),
  });
  return asJson(
    await fetch(`/api/datasets/${datasetId}/snapshots/${index}?${params}`),
  );
}

export async function submitJob(
  datasetId: string,
  config: Record<string, unknown>,
): Promise<{ job_id: string }> {
  return asJson(
    await fetch("/api/jobs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ dataset_id: datasetId, config }),
    }),
  );
}

export async function fetchJob(jobId: string): Promise<JobMeta> {
  return asJson(await fetch(`/api/jobs/${jobId}`));
}

export async function fetchLog(jobId: string, from: number): Promise<LogPage> {
  return asJson(await fetch(`/api/jobs/${jobId}/log?from=${from}`));
}

export async function fetchResult(jobId: string): Promise<ResultBundle> {
  return asJson(await fetch(`/api/jobs/${jobId}/result`));
}
