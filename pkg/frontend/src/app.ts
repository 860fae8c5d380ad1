/** Dashboard wiring: upload, job console, snapshot explorer, path overlay. */

import {
  ApiError,
  fetchLog,
  fetchResult,
  fetchSnapshot,
  listDatasets,
  submitJob,
  uploadDataset,
} from "./api.js";
import {
  applyLogError,
  applyLogPage,
  initialLogState,
  nextDelayMs,
} from "./logConsole.js";
import type { LogConsoleState } from "./logConsole.js";
import { buildOverlayModel } from "./overlay.js";
import { renderOverlay, renderSnapshot } from "./render.js";
import { buildSnapshotViewModel } from "./snapshotView.js";
import type { DatasetMeta, ResultBundle } from "./types.js";

interface ViewState {
  dataset: DatasetMeta | null;
  snapshotIndex: number;
  snapshotCount: number;
  jobId: string | null;
  log: LogConsoleState;
  result: ResultBundle | null;
  overlayMode: "all" | "strict" | "relaxed";
}

const state: ViewState = {
  dataset: null,
  snapshotIndex: 0,
  snapshotCount: 1,
  jobId: null,
  log: initialLogState(),
  result: null,
  overlayMode: "all",
};

let pollTimer: number | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const svgEl = (id: string): SVGSVGElement => {
  const node = document.getElementById(id);
  if (!(node instanceof SVGSVGElement)) {
    throw new Error(`#${id} is not an <svg> element`);
  }
  return node;
};

function banner(message: string, kind: "info" | "error" = "info"): void {
  const box = $("banner");
  box.textContent = message;
  box.className = `banner ${kind}`;
  box.hidden = !message;
}

function showTab(name: string): void {
  for (const section of document.querySelectorAll<HTMLElement>(".tab-body")) {
    section.hidden = section.dataset.tab !== name;
  }
  for (const button of document.querySelectorAll<HTMLElement>(".tab-button")) {
    button.classList.toggle("active", button.dataset.tab === name);
  }
}

// -- datasets ---------------------------------------------------------------

async function refreshDatasets(): Promise<void> {
  const datasets = await listDatasets();
  const list = $("dataset-list");
  list.replaceChildren();
  for (const meta of datasets) {
    const row = document.createElement("div");
    row.className =
      "dataset-row" +
      (state.dataset?.dataset_id === meta.dataset_id ? " selected" : "");
    row.textContent =
      `${meta.name} - ${meta.vertices} vertices, ${meta.edges} edges ` +
      `[${meta.dataset_id}]`;
    row.onclick = () => {
      state.dataset = meta;
      state.snapshotIndex = 0;
      banner(`selected dataset ${meta.name}`);
      refreshDatasets();
      void refreshSnapshot();
    };
    list.appendChild(row);
  }
}

async function onUpload(event: Event): Promise<void> {
  event.preventDefault();
  const input = $<HTMLInputElement>("upload-file");
  const file = input.files?.[0];
  if (!file) {
    banner("choose a file first", "error");
    return;
  }
  try {
    const fmt = $<HTMLSelectElement>("upload-format").value;
    const signed = $<HTMLSelectElement>("upload-signed").value;
    const undirected = $<HTMLInputElement>("upload-undirected").checked;
    const created = await uploadDataset(file, fmt, signed, undirected);
    banner(
      `uploaded: ${created.vertices} vertices, ${created.edges} edges ` +
      `(id ${created.dataset_id})`,
    );
    await refreshDatasets();
  } catch (err) {
    banner(describe(err), "error");
  }
}

// -- job console ------------------------------------------------------------

function readConfig(): { config: Record<string, unknown>; errors: string[] } {
  const num = (id: string) => Number($<HTMLInputElement>(id).value);
  const config: Record<string, unknown> = {
    n_intervals: num("cfg-intervals"),
    w1: num("cfg-w1"),
    w2: num("cfg-w2"),
    theta: num("cfg-theta"),
    mode: $<HTMLSelectElement>("cfg-mode").value,
    sample_size: num("cfg-sample"),
    seed: num("cfg-seed"),
    pattern_threshold: num("cfg-threshold"),
    workers: num("cfg-workers"),
    use_subgraphs: $<HTMLInputElement>("cfg-subgraphs").checked,
  };
  const source = $<HTMLInputElement>("cfg-source").value.trim();
  const targets = $<HTMLInputElement>("cfg-targets").value.trim();
  if (source) {
    config.source = Number(source);
    config.targets = targets
      .split(",")
      .filter((t) => t.trim() !== "")
      .map((t) => Number(t.trim()));
  }
  // client-side echo of the server constraints
  const errors: string[] = [];
  if (Math.abs((config.w1 as number) + (config.w2 as number) - 1) > 1e-9) {
    errors.push("w1 + w2 must equal 1");
  }
  const theta = config.theta as number;
  if (!(theta >= 0 && theta <= 1)) errors.push("theta must lie in [0, 1]");
  if ((config.workers as number) < 1) errors.push("workers must be >= 1");
  if (source && (config.targets as number[]).length === 0) {
    errors.push("targets required when a source is set");
  }
  return { config, errors };
}

async function onSubmitJob(event: Event): Promise<void> {
  event.preventDefault();
  if (!state.dataset) {
    banner("select a dataset first", "error");
    return;
  }
  const { config, errors } = readConfig();
  const errorBox = $("config-errors");
  errorBox.replaceChildren();
  if (errors.length) {
    for (const message of errors) {
      const li = document.createElement("li");
      li.textContent = message;
      errorBox.appendChild(li);
    }
    return;
  }
  try {
    const { job_id } = await submitJob(state.dataset.dataset_id, config);
    startJob(job_id);
  } catch (err) {
    if (err instanceof ApiError && Array.isArray(err.detail)) {
      for (const item of err.detail as { field: string; message: string }[]) {
        const li = document.createElement("li");
        li.textContent = `${item.field}: ${item.message}`;
        errorBox.appendChild(li);
      }
    } else {
      banner(describe(err), "error");
    }
  }
}

function startJob(jobId: string): void {
  state.jobId = jobId;
  state.log = initialLogState();
  state.result = null;
  $("job-id").textContent = jobId;
  $("log-lines").replaceChildren();
  $<HTMLButtonElement>("results-button").disabled = true;
  banner(`job ${jobId} submitted`);
  if (pollTimer !== null) window.clearTimeout(pollTimer);
  void pollLog();
}

async function pollLog(): Promise<void> {
  if (!state.jobId) return;
  try {
    const page = await fetchLog(state.jobId, state.log.cursor);
    const before = state.log.lines.length;
    state.log = applyLogPage(state.log, page);
    const pre = $("log-lines");
    for (const line of state.log.lines.slice(before)) {
      const div = document.createElement("div");
      div.textContent = line;
      pre.appendChild(div);
    }
    pre.scrollTop = pre.scrollHeight;
    $("job-status").textContent = state.log.status;
    if (state.log.terminal) {
      if (state.log.status === "succeeded") {
        $<HTMLButtonElement>("results-button").disabled = false;
        await loadResult();
      }
      return;
    }
  } catch {
    state.log = applyLogError(state.log);
  }
  pollTimer = window.setTimeout(() => void pollLog(), nextDelayMs(state.log));
}

async function loadResult(): Promise<void> {
  if (!state.jobId) return;
  try {
    state.result = await fetchResult(state.jobId);
    renderResultTabs();
    banner(`job ${state.jobId} finished; results loaded`);
  } catch (err) {
    banner(describe(err), "error");
  }
}

// -- snapshot explorer --------------------------------------------------------

async function refreshSnapshot(): Promise<void> {
  if (!state.dataset) return;
  const intervals = Number($<HTMLInputElement>("explore-intervals").value) || 10;
  try {
    const payload = await fetchSnapshot(
      state.dataset.dataset_id,
      state.snapshotIndex,
      intervals,
      Number($<HTMLInputElement>("cfg-w1").value) || 0.8,
      Number($<HTMLInputElement>("cfg-w2").value) || 0.2,
      Number($<HTMLInputElement>("cfg-theta").value) || 0.1,
    );
    state.snapshotCount = payload.snapshot_count;
    const slider = $<HTMLInputElement>("snapshot-slider");
    slider.max = String(payload.snapshot_count - 1);
    slider.value = String(payload.index);
    const model = buildSnapshotViewModel(payload);
    renderSnapshot(svgEl("snapshot-svg"), model);
    $("snapshot-stats").textContent =
      `snapshot ${payload.index}/${payload.snapshot_count - 1} - ` +
      `boundary ${payload.boundary}, ${model.edgeCount} edges, ` +
      `${model.hdvSet.size} highly dynamic vertices (red)`;
  } catch (err) {
    banner(describe(err) + " - retry with the slider", "error");
  }
}

// -- results ------------------------------------------------------------------

function renderResultTabs(): void {
  const bundle = state.result;
  if (!bundle) return;
  const mode = state.overlayMode === "all" ? undefined : state.overlayMode;
  const overlay = buildOverlayModel(bundle.paths, mode);
  renderOverlay(svgEl("overlay-svg"), overlay);

  const legend = $("overlay-legend");
  legend.replaceChildren();
  for (const group of overlay.groups) {
    const item = document.createElement("div");
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = group.color;
    item.appendChild(swatch);
    item.append(
      ` group ${group.index + 1}: ${group.pathIds.length} path(s)`,
    );
    legend.appendChild(item);
  }
  const pathList = $("path-list");
  pathList.replaceChildren();
  for (const path of overlay.paths) {
    const row = document.createElement("div");
    row.className = "path-row";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = path.color;
    row.appendChild(swatch);
    row.append(
      ` [${path.mode}] ${path.label}, dynamic fraction ` +
      `${path.hdvFraction.toFixed(2)}` +
      (path.significance !== null
        ? `, significance ${path.significance.toFixed(3)}`
        : ""),
    );
    pathList.appendChild(row);
  }

  const patternBody = $("pattern-rows");
  patternBody.replaceChildren();
  for (const pattern of bundle.patterns.patterns) {
    const tr = document.createElement("tr");
    const snapshot = pattern.edge.snapshot === null ? "-" : pattern.edge.snapshot;
    for (const cell of [
      `${pattern.edge.src} -> ${pattern.edge.dst}`,
      String(snapshot),
      String(pattern.frequency),
      pattern.path_ids.join(", "),
      `${pattern.subgraph.vertices.length} vertices / ` +
      `${pattern.subgraph.edges.length} edges`,
    ]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    patternBody.appendChild(tr);
  }

  const evalBody = $("eval-rows");
  evalBody.replaceChildren();
  for (const summary of bundle.eval.summaries) {
    const tr = document.createElement("tr");
    for (const cell of [
      summary.method,
      String(summary.hdv_count),
      summary.coverage_rate.toFixed(3),
      summary.avg_path_length.toFixed(2),
    ]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    evalBody.appendChild(tr);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `request failed: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

// -- boot ---------------------------------------------------------------------

export function boot(): void {
  for (const button of document.querySelectorAll<HTMLElement>(".tab-button")) {
    button.onclick = () => showTab(button.dataset.tab!);
  }
  $("upload-form").onsubmit = (e) => void onUpload(e);
  $("job-form").onsubmit = (e) => void onSubmitJob(e);
  $("results-button").onclick = () => {
    showTab("paths");
    renderResultTabs();
  };
  const slider = $<HTMLInputElement>("snapshot-slider");
  slider.oninput = () => {
    state.snapshotIndex = Number(slider.value);
    void refreshSnapshot();
  };
  $("explore-refresh").onclick = () => void refreshSnapshot();
  for (const mode of ["all", "strict", "relaxed"] as const) {
    $(`overlay-${mode}`).onclick = () => {
      state.overlayMode = mode;
      renderResultTabs();
    };
  }
  showTab("data");
  void refreshDatasets().catch((err) => banner(describe(err), "error"));
}

if (typeof document !== "undefined" && document.getElementById("banner")) {
  boot();
}
