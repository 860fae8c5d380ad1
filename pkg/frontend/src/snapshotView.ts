/**
 * View model for the snapshot explorer.  The HDV styling comes straight
 * from the payload's `hdv` list -- the client never recomputes dynamicity.
 */

import type { SnapshotPayload } from "./types.js";

export interface VertexView {
  id: number;
  label: string;
  degree: number;
  hdv: boolean;
}

export interface SnapshotViewModel {
  index: number;
  boundary: number;
  snapshotCount: number;
  vertices: VertexView[];
  edges: { src: number; dst: number; weight: number; multiplicity: number }[];
  hdvSet: Set<number>;
  edgeCount: number;
}

export function buildSnapshotViewModel(
  payload: SnapshotPayload,
  includeIsolated = false,
): SnapshotViewModel {
  const hdvSet = new Set(payload.hdv);
  const vertices = payload.vertices
    .filter((v) => includeIsolated || v.degree > 0 || hdvSet.has(v.id))
    .map((v) => ({
      id: v.id,
      label: v.label,
      degree: v.degree,
      hdv: hdvSet.has(v.id),
    }));
  return {
    index: payload.index,
    boundary: payload.boundary,
    snapshotCount: payload.snapshot_count,
    vertices,
    edges: payload.edges,
    hdvSet,
    edgeCount: payload.edges.length,
  };
}

/** The ids rendered in the HDV style; must equal the payload list exactly. */
export function renderedHdvIds(model: SnapshotViewModel): number[] {
  return model.vertices
    .filter((v) => v.hdv)
    .map((v) => v.id)
    .sort((a, b) => a - b);
}
