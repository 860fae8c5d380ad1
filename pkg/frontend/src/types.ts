/** JSON payload shapes consumed verbatim from the service API. */

export interface DatasetMeta {
  dataset_id: string;
  name: string;
  vertices: number;
  edges: number;
  directed: boolean;
  t_min: number;
  t_max: number;
}

export interface SnapshotVertex {
  id: number;
  label: string;
  degree: number;
  out_degree: number;
  in_degree: number;
}

export interface SnapshotEdge {
  src: number;
  dst: number;
  weight: number;
  multiplicity: number;
}

export interface SnapshotPayload {
  index: number;
  boundary: number;
  vertices: SnapshotVertex[];
  edges: SnapshotEdge[];
  hdv: number[];
  snapshot_count: number;
}

export interface JobMeta {
  job_id: string;
  dataset_id: string;
  status: "queued" | "running" | "succeeded" | "failed";
  config: Record<string, unknown>;
}

export interface LogPage {
  lines: string[];
  from: number;
  next: number;
  status: JobMeta["status"];
}

export interface PathSegmentJson {
  snapshot: number;
  vertices: number[];
  weights: number[];
  length: number;
}

export interface ChronopathJson {
  segments: PathSegmentJson[];
  total_length: number;
  hdv_fraction: number;
  significance: number | null;
}

export interface QueryResultJson {
  target: number;
  paths: ChronopathJson[];
}

export interface QueryExportJson {
  query: {
    q: number;
    targets: number[];
    mode: "strict" | "relaxed";
    params: Record<string, unknown>;
  };
  results: QueryResultJson[];
}

export interface PatternJson {
  edge: { src: number; dst: number; snapshot: number | null };
  frequency: number;
  path_ids: number[];
  subgraph: {
    vertices: number[];
    edges: { src: number; dst: number; snapshot: number | null }[];
  };
}

export interface ResultBundle {
  config: Record<string, unknown>;
  hdv: {
    per_snapshot: { index: number; hdv: number[] }[];
    union_hdv: number[];
  };
  subgraphs: {
    index: number;
    k_star: number | null;
    vertices: number[];
    edges: [number, number, number][];
  }[];
  paths: QueryExportJson[];
  patterns: { threshold: number; patterns: PatternJson[] };
  eval: {
    summaries: {
      method: string;
      hdv_count: number;
      coverage_rate: number;
      avg_path_length: number;
      n_queries: number;
      n_paths: number;
    }[];
  };
}
