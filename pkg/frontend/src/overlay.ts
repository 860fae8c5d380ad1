/**
 * Path-overlay model: flattens a result bundle's chronopaths, groups them by
 * shared vertices and assigns group colors for the aggregated view.
 */

import { buildGroups, colorForGroup, groupBySharedVertices } from "./grouping.js";
import type { OverlayPath, PathGroup } from "./grouping.js";
import type { ChronopathJson, QueryExportJson } from "./types.js";

export interface OverlayEdge {
  src: number;
  dst: number;
  snapshot: number;
  color: string;
  pathId: string;
}

export interface OverlayModel {
  paths: (OverlayPath & {
    mode: string;
    group: number;
    color: string;
    totalLength: number;
    hdvFraction: number;
    significance: number | null;
    label: string;
  })[];
  edges: OverlayEdge[];
  groups: PathGroup[];
  vertexIds: number[];
}

function distinctVertices(path: ChronopathJson): number[] {
  const seen = new Set<number>();
  for (const seg of path.segments) {
    for (const v of seg.vertices) seen.add(v);
  }
  return [...seen].sort((a, b) => a - b);
}

export function buildOverlayModel(
  exports: QueryExportJson[],
  mode?: "strict" | "relaxed",
): OverlayModel {
  const flat: { id: string; path: ChronopathJson; mode: string; label: string }[] = [];
  exports.forEach((exp, qi) => {
    if (mode && exp.query.mode !== mode) return;
    for (const result of exp.results) {
      result.paths.forEach((path, pi) => {
        const id = `q${qi}:${exp.query.q}->${result.target}#${pi}`;
        flat.push({
          id,
          path,
          mode: exp.query.mode,
          label: `${exp.query.q} -> ${result.target} (len ${path.total_length})`,
        });
      });
    }
  });
  const overlayPaths: OverlayPath[] = flat.map((f) => ({
    id: f.id,
    vertices: distinctVertices(f.path),
  }));
  const assignment = groupBySharedVertices(overlayPaths);
  const groups = buildGroups(overlayPaths);
  const edges: OverlayEdge[] = [];
  const vertexIds = new Set<number>();
  flat.forEach((f, i) => {
    const color = colorForGroup(assignment[i]);
    for (const seg of f.path.segments) {
      for (const v of seg.vertices) vertexIds.add(v);
      for (let j = 0; j + 1 < seg.vertices.length; j++) {
        edges.push({
          src: seg.vertices[j],
          dst: seg.vertices[j + 1],
          snapshot: seg.snapshot,
          color,
          pathId: f.id,
        });
      }
    }
  });
  return {
    paths: flat.map((f, i) => ({
      id: f.id,
      vertices: overlayPaths[i].vertices,
      mode: f.mode,
      group: assignment[i],
      color: colorForGroup(assignment[i]),
      totalLength: f.path.total_length,
      hdvFraction: f.path.hdv_fraction,
      significance: f.path.significance,
      label: f.label,
    })),
    edges,
    groups,
    vertexIds: [...vertexIds].sort((a, b) => a - b),
  };
}
