/**
 * Small deterministic force-directed layout: seeded initial placement,
 * fixed iteration count, no randomness afterwards -- identical inputs give
 * identical pictures, which keeps screenshots diffable.
 */

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  ids: number[],
  edges: [number, number][],
  width: number,
  height: number,
  seed = 1,
  iterations = 120,
): Map<number, LayoutNode> {
  const rand = mulberry32(seed);
  const nodes = new Map<number, LayoutNode>();
  for (const id of ids) {
    nodes.set(id, {
      id,
      x: width * (0.08 + 0.84 * rand()),
      y: height * (0.08 + 0.84 * rand()),
    });
  }
  if (ids.length <= 1) return nodes;

  const area = width * height;
  const k = Math.sqrt(area / ids.length);
  let temperature = Math.min(width, height) / 8;
  const cooling = temperature / (iterations + 1);

  for (let step = 0; step < iterations; step++) {
    const dx = new Map<number, number>();
    const dy = new Map<number, number>();
    for (const id of ids) {
      dx.set(id, 0);
      dy.set(id, 0);
    }
    // repulsion
    for (let i = 0; i < ids.length; i++) {
      const a = nodes.get(ids[i])!;
      for (let j = i + 1; j < ids.length; j++) {
        const b = nodes.get(ids[j])!;
        let ddx = a.x - b.x;
        let ddy = a.y - b.y;
        let dist = Math.sqrt(ddx * ddx + ddy * ddy);
        if (dist < 0.01) {
          ddx = 0.01 * (i - j);
          ddy = 0.01;
          dist = 0.014;
        }
        const force = (k * k) / dist;
        dx.set(a.id, dx.get(a.id)! + (ddx / dist) * force);
        dy.set(a.id, dy.get(a.id)! + (ddy / dist) * force);
        dx.set(b.id, dx.get(b.id)! - (ddx / dist) * force);
        dy.set(b.id, dy.get(b.id)! - (ddy / dist) * force);
      }
    }
    // attraction along edges
    for (const [s, t] of edges) {
      const a = nodes.get(s);
      const b = nodes.get(t);
      if (!a || !b || s === t) continue;
      const ddx = a.x - b.x;
      const ddy = a.y - b.y;
      const dist = Math.max(Math.sqrt(ddx * ddx + ddy * ddy), 0.01);
      const force = (dist * dist) / k;
      dx.set(a.id, dx.get(a.id)! - (ddx / dist) * force);
      dy.set(a.id, dy.get(a.id)! - (ddy / dist) * force);
      dx.set(b.id, dx.get(b.id)! + (ddx / dist) * force);
      dy.set(b.id, dy.get(b.id)! + (ddy / dist) * force);
    }
    for (const id of ids) {
      const n = nodes.get(id)!;
      const mx = dx.get(id)!;
      const my = dy.get(id)!;
      const len = Math.max(Math.sqrt(mx * mx + my * my), 0.01);
      n.x += (mx / len) * Math.min(len, temperature);
      n.y += (my / len) * Math.min(len, temperature);
      n.x = Math.min(width - 16, Math.max(16, n.x));
      n.y = Math.min(height - 16, Math.max(16, n.y));
    }
    temperature -= cooling;
  }
  return nodes;
}
