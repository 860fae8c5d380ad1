/** SVG rendering for snapshot and overlay views. */

import { forceLayout } from "./layout.js";
import type { SnapshotViewModel } from "./snapshotView.js";
import type { OverlayModel } from "./overlay.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const HDV_COLOR = "#d62728";
export const NEUTRAL_COLOR = "#9db2c4";

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function renderSnapshot(
  svg: SVGSVGElement,
  model: SnapshotViewModel,
): void {
  svg.replaceChildren();
  const width = svg.clientWidth || 760;
  const height = svg.clientHeight || 520;
  const ids = model.vertices.map((v) => v.id);
  const positions = forceLayout(
    ids,
    model.edges.map((e) => [e.src, e.dst]),
    width,
    height,
    model.index + 1,
  );
  for (const edge of model.edges) {
    const a = positions.get(edge.src);
    const b = positions.get(edge.dst);
    if (!a || !b) continue;
    svg.appendChild(
      el("line", {
        x1: a.x,
        y1: a.y,
        x2: b.x,
        y2: b.y,
        stroke: "#c7d2dc",
        "stroke-width": Math.min(1 + Math.log2(edge.multiplicity), 4),
      }),
    );
  }
  for (const vertex of model.vertices) {
    const p = positions.get(vertex.id);
    if (!p) continue;
    const radius = Math.min(4 + Math.sqrt(vertex.degree), 11);
    const circle = el("circle", {
      cx: p.x,
      cy: p.y,
      r: radius,
      fill: vertex.hdv ? HDV_COLOR : NEUTRAL_COLOR,
      "data-vertex": vertex.id,
      "data-hdv": String(vertex.hdv),
    });
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent =
      `${vertex.label} (id ${vertex.id}, degree ${vertex.degree}` +
      (vertex.hdv ? ", highly dynamic)" : ")");
    circle.appendChild(title);
    svg.appendChild(circle);
  }
}

export function renderOverlay(svg: SVGSVGElement, model: OverlayModel): void {
  svg.replaceChildren();
  const width = svg.clientWidth || 760;
  const height = svg.clientHeight || 520;
  const positions = forceLayout(
    model.vertexIds,
    model.edges.map((e) => [e.src, e.dst]),
    width,
    height,
    7,
  );
  for (const edge of model.edges) {
    const a = positions.get(edge.src);
    const b = positions.get(edge.dst);
    if (!a || !b) continue;
    svg.appendChild(
      el("line", {
        x1: a.x,
        y1: a.y,
        x2: b.x,
        y2: b.y,
        stroke: edge.color,
        "stroke-width": 2.2,
        "stroke-opacity": 0.85,
        "data-path": edge.pathId,
      }),
    );
  }
  for (const id of model.vertexIds) {
    const p = positions.get(id)!;
    const circle = el("circle", {
      cx: p.x,
      cy: p.y,
      r: 5,
      fill: "#4a6072",
      "data-vertex": id,
    });
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `vertex ${id}`;
    circle.appendChild(title);
    svg.appendChild(circle);
  }
}
