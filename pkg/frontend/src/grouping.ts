/**
 * Chronopath overlay grouping: paths sharing at least one vertex belong to
 * the same group and render in the same color.  Groups are the connected
 * components of the vertex-sharing relation; group order follows the first
 * member path, so coloring is deterministic for a fixed path order.
 */

export interface OverlayPath {
  id: string;
  vertices: number[];
}

export interface PathGroup {
  index: number;
  color: string;
  pathIds: string[];
}

export const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#17becf",
  "#bcbd22",
  "#7f7f7f",
];

export function colorForGroup(index: number): string {
  return PALETTE[index % PALETTE.length];
}

/** Group index per path, aligned with the input order. */
export function groupBySharedVertices(paths: OverlayPath[]): number[] {
  const parent = paths.map((_, i) => i);
  const find = (i: number): number => {
    while (parent[i] !== i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  const union = (a: number, b: number): void => {
    const ra = find(a);
    const rb = find(b);
    if (ra !== rb) parent[Math.max(ra, rb)] = Math.min(ra, rb);
  };

  const firstOwner = new Map<number, number>();
  paths.forEach((path, i) => {
    for (const v of path.vertices) {
      const owner = firstOwner.get(v);
      if (owner === undefined) {
        firstOwner.set(v, i);
      } else {
        union(owner, i);
      }
    }
  });

  const groupOfRoot = new Map<number, number>();
  return paths.map((_, i) => {
    const root = find(i);
    let g = groupOfRoot.get(root);
    if (g === undefined) {
      g = groupOfRoot.size;
      groupOfRoot.set(root, g);
    }
    return g;
  });
}

/** Legend entries: one per group, listing its member paths. */
export function buildGroups(paths: OverlayPath[]): PathGroup[] {
  const assignment = groupBySharedVertices(paths);
  const groups: PathGroup[] = [];
  assignment.forEach((g, i) => {
    if (!groups[g]) {
      groups[g] = { index: g, color: colorForGroup(g), pathIds: [] };
    }
    groups[g].pathIds.push(paths[i].id);
  });
  return groups;
}
