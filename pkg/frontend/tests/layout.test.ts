import { describe, expect, it } from "vitest";

import { forceLayout } from "../src/layout.js";

const ids = [0, 1, 2, 3, 4];
const edges: [number, number][] = [[0, 1], [1, 2], [2, 3], [3, 4], [4, 0]];

describe("deterministic force layout", () => {
  it("reproduces positions exactly for the same seed", () => {
    const a = forceLayout(ids, edges, 800, 600, 42);
    const b = forceLayout(ids, edges, 800, 600, 42);
    for (const id of ids) {
      expect(a.get(id)!.x).toBe(b.get(id)!.x);
      expect(a.get(id)!.y).toBe(b.get(id)!.y);
    }
  });

  it("changes with the seed", () => {
    const a = forceLayout(ids, edges, 800, 600, 1);
    const b = forceLayout(ids, edges, 800, 600, 2);
    const moved = ids.some(
      (id) => a.get(id)!.x !== b.get(id)!.x || a.get(id)!.y !== b.get(id)!.y,
    );
    expect(moved).toBe(true);
  });

  it("keeps every node inside the viewport", () => {
    const layout = forceLayout(ids, edges, 400, 300, 7);
    for (const id of ids) {
      const n = layout.get(id)!;
      expect(n.x).toBeGreaterThanOrEqual(16);
      expect(n.x).toBeLessThanOrEqual(400 - 16);
      expect(n.y).toBeGreaterThanOrEqual(16);
      expect(n.y).toBeLessThanOrEqual(300 - 16);
    }
  });

  it("handles empty and single-node graphs", () => {
    expect(forceLayout([], [], 100, 100).size).toBe(0);
    expect(forceLayout([5], [], 100, 100).get(5)).toBeDefined();
  });
});
