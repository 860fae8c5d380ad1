import { describe, expect, it } from "vitest";

import { buildOverlayModel } from "../src/overlay.js";
import type { ChronopathJson, QueryExportJson } from "../src/types.js";

function path(
  segments: [number, number[]][],
  significance = 0.5,
): ChronopathJson {
  return {
    segments: segments.map(([snapshot, vertices]) => ({
      snapshot,
      vertices,
      weights: new Array(Math.max(vertices.length - 1, 0)).fill(1),
      length: Math.max(vertices.length - 1, 0),
    })),
    total_length: segments.reduce(
      (acc, [, v]) => acc + Math.max(v.length - 1, 0),
      0,
    ),
    hdv_fraction: 1,
    significance,
  };
}

function exportFor(
  q: number,
  mode: "strict" | "relaxed",
  results: [number, ChronopathJson[]][],
): QueryExportJson {
  return {
    query: { q, targets: results.map(([t]) => t), mode, params: {} },
    results: results.map(([target, paths]) => ({ target, paths })),
  };
}

describe("overlay model", () => {
  it("colors vertex-disjoint paths differently, shared paths alike", () => {
    const exports = [
      exportFor(0, "strict", [
        [3, [path([[1, [0, 1, 3]]])]],
        [5, [path([[1, [1, 5]]])]],
        [9, [path([[2, [7, 8, 9]]])]],
      ]),
    ];
    const model = buildOverlayModel(exports);
    expect(model.paths).toHaveLength(3);
    const colorOf = Object.fromEntries(
      model.paths.map((p) => [p.id, p.color]),
    );
    // first two share vertex 1, third is disjoint
    expect(model.groups).toHaveLength(2);
    expect(colorOf[model.paths[0].id]).toBe(colorOf[model.paths[1].id]);
    expect(colorOf[model.paths[0].id]).not.toBe(colorOf[model.paths[2].id]);
  });

  it("emits one overlay edge per traversed segment edge", () => {
    const exports = [
      exportFor(0, "strict", [[2, [path([[1, [0, 1]], [2, [1, 2]]])]]]),
    ];
    const model = buildOverlayModel(exports);
    expect(model.edges).toEqual([
      expect.objectContaining({ src: 0, dst: 1, snapshot: 1 }),
      expect.objectContaining({ src: 1, dst: 2, snapshot: 2 }),
    ]);
    expect(model.vertexIds).toEqual([0, 1, 2]);
  });

  it("filters by mode for the side-by-side toggles", () => {
    const exports = [
      exportFor(0, "strict", [[3, [path([[1, [0, 3]]])]]]),
      exportFor(0, "relaxed", [[3, [path([[1, [0, 2, 3]]])]]]),
    ];
    expect(buildOverlayModel(exports).paths).toHaveLength(2);
    expect(buildOverlayModel(exports, "strict").paths).toHaveLength(1);
    expect(
      buildOverlayModel(exports, "relaxed").paths[0].vertices,
    ).toEqual([0, 2, 3]);
  });
});
