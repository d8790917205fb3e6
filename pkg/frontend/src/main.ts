/** Explorer wiring: graph view, query builder, candidate list, what-if
 * job panel, and the comparison table. All domain numbers come from the
 * API; this file only routes data between panels. */

import { ApiClient, ApiRequestError } from "./api.js";
import { buildCandidateTable, formatScore, scoreBarWidths, type CandidateRow } from "./candidates.js";
import { overheadBars, polylinePath, sweepChart, CHART } from "./charts.js";
import { candidateEntry, withReport, ComparisonSet } from "./compare.js";
import { GraphView } from "./graphView.js";
import { pollJob } from "./jobs.js";
import {
  ALL_CAPABILITIES,
  ALL_ENTRY_MODES,
  ALL_FAULT_MODELS,
  emptyDraft,
  toggle,
  validateDraft,
} from "./queryForm.js";
import type {
  DesignQueryDraft,
  JobRecord,
  SimReportSummary,
  SolutionCandidate,
  SweepResult,
  SynthesizeResponse,
} from "./types.js";

const client = new ApiClient("");
const graphView = new GraphView({ onSelect: showPatternDetail });
const comparison = new ComparisonSet();

let draft: DesignQueryDraft = emptyDraft();
let lastResponse: SynthesizeResponse | null = null;
let selected: { row: CandidateRow; index: number } | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function banner(message: string, isError = true): void {
  const node = el<HTMLDivElement>("banner");
  node.textContent = message;
  node.className = message ? (isError ? "banner error" : "banner info") : "banner hidden";
  if (!message) node.classList.add("hidden");
}

async function loadGraph(): Promise<void> {
  try {
    const snapshot = await client.graph();
    graphView.render(el("graph-panel"), snapshot);
    banner("");
  } catch (error) {
    banner(`graph fetch failed: ${String(error)} — retry below`);
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void loadGraph());
    el("graph-panel").replaceChildren(retry);
  }
}

async function showPatternDetail(id: string): Promise<void> {
  try {
    const detail = await client.pattern(id);
    const panel = el("detail-panel");
    panel.replaceChildren();
    const title = document.createElement("h3");
    title.textContent = `${detail.name} (${detail.class})`;
    panel.appendChild(title);
    for (const field of ["problem", "solution", "forces", "consequences"] as const) {
      const para = document.createElement("p");
      const label = document.createElement("strong");
      label.textContent = `${field}: `;
      para.appendChild(label);
      para.appendChild(document.createTextNode(detail[field]));
      panel.appendChild(para);
    }
  } catch (error) {
    banner(`pattern fetch failed: ${String(error)}`);
  }
}

function renderQueryForm(): void {
  const form = el("query-form");
  form.replaceChildren();

  const group = (title: string): HTMLFieldSetElement => {
    const fs = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = title;
    fs.appendChild(legend);
    form.appendChild(fs);
    return fs;
  };

  const fmGroup = group("Fault models");
  for (const fm of ALL_FAULT_MODELS) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = draft.fault_models.includes(fm);
    box.addEventListener("change", () => {
      draft = { ...draft, fault_models: toggle(draft.fault_models, fm) };
      refreshSubmitState();
    });
    label.append(box, ` ${fm}`);
    fmGroup.appendChild(label);
  }

  const capGroup = group("Capabilities");
  for (const cap of ALL_CAPABILITIES) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = draft.capabilities.includes(cap);
    box.addEventListener("change", () => {
      draft = { ...draft, capabilities: toggle(draft.capabilities, cap) };
      refreshSubmitState();
    });
    label.append(box, ` ${cap}`);
    capGroup.appendChild(label);
  }

  const modeGroup = group("Entry mode");
  const select = document.createElement("select");
  for (const mode of ALL_ENTRY_MODES) {
    const option = document.createElement("option");
    option.value = mode;
    option.textContent = mode;
    select.appendChild(option);
  }
  select.value = draft.entry_mode;
  select.addEventListener("change", () => {
    draft = { ...draft, entry_mode: select.value as DesignQueryDraft["entry_mode"] };
    refreshSubmitState();
  });
  modeGroup.appendChild(select);

  const seedsGroup = group("Seed patterns (comma-separated, required for implementation-first)");
  const seeds = document.createElement("input");
  seeds.type = "text";
  seeds.value = draft.seed_patterns.join(",");
  seeds.addEventListener("input", () => {
    draft = {
      ...draft,
      seed_patterns: seeds.value
        .split(",")
        .map((s) => s.trim())
        .filter(Boolean),
    };
    refreshSubmitState();
  });
  seedsGroup.appendChild(seeds);

  const submit = document.createElement("button");
  submit.id = "submit-query";
  submit.textContent = "Synthesize";
  submit.addEventListener("click", () => void submitQuery());
  form.appendChild(submit);

  const problems = document.createElement("ul");
  problems.id = "query-problems";
  form.appendChild(problems);
  refreshSubmitState();
}

function refreshSubmitState(): void {
  const verdict = validateDraft(draft);
  el<HTMLButtonElement>("submit-query").disabled = !verdict.ok;
  const list = el<HTMLUListElement>("query-problems");
  list.replaceChildren(
    ...verdict.problems.map((p) => {
      const li = document.createElement("li");
      li.textContent = p;
      return li;
    }),
  );
}

async function submitQuery(): Promise<void> {
  try {
    const response = await client.synthesize(draft);
    lastResponse = response;
    banner("");
    renderCandidates(response);
  } catch (error) {
    if (error instanceof ApiRequestError && error.status === 422) {
      el("candidates-panel").replaceChildren();
      const note = document.createElement("p");
      note.className = "nearest-miss";
      note.textContent = `Unsatisfiable: ${error.body.message}`;
      el("candidates-panel").appendChild(note);
      return;
    }
    banner(`synthesis failed: ${String(error)}`);
  }
}

function renderCandidates(response: SynthesizeResponse): void {
  const panel = el("candidates-panel");
  panel.replaceChildren();
  const narrative = document.createElement("p");
  narrative.className = "narrative";
  narrative.textContent = response.narrative;
  panel.appendChild(narrative);

  const rows = buildCandidateTable(response.candidates);
  const widths = scoreBarWidths(rows);
  const table = document.createElement("table");
  table.id = "candidate-table";
  const head = document.createElement("tr");
  for (const column of ["rank", "score", "domain", "patterns", "sequence", ""]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);
  rows.forEach((row, i) => {
    const tr = document.createElement("tr");
    tr.dataset.rank = String(row.rank);
    const cells = [
      String(row.rank),
      formatScore(row.score),
      row.stateBinding,
      row.patterns.join("+"),
      row.sequence.join(" > "),
    ];
    for (const cell of cells) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    const bar = document.createElement("td");
    const fill = document.createElement("div");
    fill.className = "score-bar";
    fill.style.width = `${Math.round(widths[i] * 100)}%`;
    bar.appendChild(fill);
    tr.appendChild(bar);
    tr.addEventListener("click", () => selectCandidate(row, i));
    table.appendChild(tr);
  });
  panel.appendChild(table);
}

function selectCandidate(row: CandidateRow, index: number): void {
  selected = { row, index };
  graphView.highlightCandidate(row.raw);
  const panel = el("explanation-panel");
  panel.replaceChildren();
  const pre = document.createElement("pre");
  pre.textContent = lastResponse?.explanations[index] ?? "";
  panel.appendChild(pre);
  el<HTMLButtonElement>("run-whatif").disabled = false;
  el<HTMLButtonElement>("run-sweep").disabled = false;
  el<HTMLButtonElement>("pin-candidate").disabled = false;
}

function currentSimConfig(candidate: SolutionCandidate): unknown {
  const seed = Number(el<HTMLInputElement>("whatif-seed").value) || 42;
  const trials = Number(el<HTMLInputElement>("whatif-trials").value) || 200;
  const work = Number(el<HTMLInputElement>("whatif-work").value) || 10000;
  const rate = Number(el<HTMLInputElement>("whatif-rate").value) || 3.6;
  return {
    system: {
      node_count: 1,
      fault_rate_per_node: rate,
      p_activation: 1.0,
      p_error_to_failure: 1.0,
    },
    workload: { total_work: work },
    solution: {
      state_binding: candidate.state_binding,
      instances: candidate.instances,
    },
    seed,
    trials,
  };
}

function jobStatusLine(job: JobRecord): string {
  return `${job.kind} ${job.id}: ${job.status}`;
}

async function runWhatIf(kind: "simulate" | "sweep"): Promise<void> {
  if (!selected) return;
  const candidate = selected.row.raw;
  const config = currentSimConfig(candidate);
  try {
    const { job_id } =
      kind === "simulate"
        ? await client.simulate(config)
        : await client.sweep(config, parseSweepGrid());
    const status = document.createElement("li");
    status.dataset.jobId = job_id;
    status.textContent = `${kind} ${job_id}: Queued`;
    el("job-list").appendChild(status);
    pollJob(
      client,
      job_id,
      (job) => {
        status.textContent = jobStatusLine(job);
        if (job.status === "Done" && job.result) {
          renderJobResult(job, candidate);
        }
        if (job.status === "Failed") {
          status.textContent += ` — ${job.error ?? "unknown error"}`;
          status.classList.add("failed");
        }
      },
      (error) => banner(`job poll failed: ${String(error)}`),
    );
  } catch (error) {
    banner(`${kind} submission failed: ${String(error)}`);
  }
}

function parseSweepGrid(): Record<string, number[]> {
  const text = el<HTMLInputElement>("sweep-grid").value || "interval=50,100,150,200,250";
  const grid: Record<string, number[]> = {};
  for (const chunk of text.split(";")) {
    const [name, values] = chunk.split("=");
    if (!name || !values) continue;
    grid[name.trim()] = values
      .split(",")
      .map((v) => Number(v.trim()))
      .filter((v) => Number.isFinite(v));
  }
  return grid;
}

function renderJobResult(job: JobRecord, candidate: SolutionCandidate): void {
  const panel = el("charts-panel");
  panel.replaceChildren();
  if (job.kind === "Sweep") {
    const result = job.result as SweepResult;
    const chart = sweepChart(result);
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${CHART.width} ${CHART.height}`);
    svg.classList.add("sweep-chart");
    const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
    path.setAttribute("d", polylinePath(chart.points));
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", "#1f4e79");
    path.setAttribute("stroke-width", "1.5");
    svg.appendChild(path);
    const minimum = chart.points[chart.minIndex];
    const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    dot.setAttribute("cx", String(minimum.px));
    dot.setAttribute("cy", String(minimum.py));
    dot.setAttribute("r", "4");
    dot.setAttribute("fill", chart.interiorMinimum ? "#2e7d32" : "#c0392b");
    svg.appendChild(dot);
    panel.appendChild(svg);
    const caption = document.createElement("p");
    caption.textContent =
      `${chart.parameter} sweep: minimum makespan ${minimum.y.toFixed(1)} s at ` +
      `${chart.parameter}=${minimum.x}` +
      (chart.interiorMinimum ? " (interior minimum)" : "");
    panel.appendChild(caption);
  } else {
    const report = job.result as SimReportSummary;
    const list = document.createElement("ul");
    const items: [string, string][] = [
      ["makespan mean", `${report.makespan_mean.toFixed(2)} s`],
      ["makespan p50", `${report.makespan_p50.toFixed(2)} s`],
      ["makespan p95", `${report.makespan_p95.toFixed(2)} s`],
      ["efficiency", report.efficiency_mean.toFixed(4)],
    ];
    for (const [label, value] of items) {
      const li = document.createElement("li");
      li.textContent = `${label}: ${value}`;
      list.appendChild(li);
    }
    panel.appendChild(list);
    const bars = document.createElement("div");
    bars.className = "overhead-bars";
    for (const bar of overheadBars(report)) {
      const row = document.createElement("div");
      row.className = "overhead-row";
      const label = document.createElement("span");
      label.textContent = `${bar.category} (${bar.seconds.toFixed(1)} s)`;
      const track = document.createElement("div");
      track.className = "bar-track";
      const fill = document.createElement("div");
      fill.className = "bar-fill";
      fill.style.width = `${Math.round(bar.width * 100)}%`;
      track.appendChild(fill);
      row.append(label, track);
      bars.appendChild(row);
    }
    panel.appendChild(bars);
    const entry = withReport(candidateEntry(job.id, candidate), report);
    comparison.pin(entry);
    renderComparison();
  }
}

function renderComparison(): void {
  const panel = el("comparison-panel");
  panel.replaceChildren();
  const entries = comparison.list();
  if (entries.length === 0) return;
  const table = document.createElement("table");
  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (const column of comparison.columns()) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const entry of entries) {
    const tr = document.createElement("tr");
    const name = document.createElement("td");
    name.textContent = entry.label;
    tr.appendChild(name);
    for (const column of comparison.columns()) {
      const td = document.createElement("td");
      const value = entry.values[column];
      td.textContent = value === null ? "—" : value.toFixed(4);
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  panel.appendChild(table);
}

function pinSelected(): void {
  if (!selected) return;
  comparison.pin(candidateEntry(`candidate-${selected.row.rank}`, selected.row.raw));
  renderComparison();
}

export function boot(): void {
  renderQueryForm();
  void loadGraph();
  el("run-whatif").addEventListener("click", () => void runWhatIf("simulate"));
  el("run-sweep").addEventListener("click", () => void runWhatIf("sweep"));
  el("pin-candidate").addEventListener("click", pinSelected);
}

if (typeof document !== "undefined" && document.getElementById("graph-panel")) {
  boot();
}
