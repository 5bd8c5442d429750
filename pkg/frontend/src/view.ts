// DOM construction and rendering. Everything here is synchronous and takes
// plain data; the controller in app.ts decides what to show and when.

import type { DotEdge, DotGraph } from "./dot.js";
import type { Layout } from "./layout.js";
import { describeEvent, formatRational } from "./format.js";
import type {
  AdvicePacketMsg,
  AdviserInfoMsg,
  BundleSummary,
  Rational,
  StepEventMsg,
} from "./wire.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface Shell {
  fixtureSelect: HTMLSelectElement;
  fixtureStart: HTMLButtonElement;
  arenaInput: HTMLTextAreaElement;
  documentStart: HTMLButtonElement;
  sessionPanel: HTMLElement;
  statusLine: HTMLElement;
  adviserBadge: HTMLElement;
  averageDisplay: HTMLElement;
  bannerArea: HTMLElement;
  graphSvg: SVGSVGElement;
  movePanel: HTMLElement;
  summaryPanel: HTMLElement;
  replaySlider: HTMLInputElement;
  replayLabel: HTMLElement;
  exportButton: HTMLButtonElement;
  resetButton: HTMLButtonElement;
  eventLog: HTMLOListElement;
  errorLine: HTMLElement;
}

// ────────────────────────────────────────────────────────────────────────────
// static skeleton
// ────────────────────────────────────────────────────────────────────────────

export function buildShell(root: HTMLElement): Shell {
  root.innerHTML = `
    <header class="masthead">
      <h1>adviserkit</h1>
      <p class="tagline">play the adversary against the synthesized adviser</p>
    </header>
    <section class="setup">
      <label for="fixture-select">fixture</label>
      <select id="fixture-select"></select>
      <button id="fixture-start">start session</button>
      <details class="document-entry">
        <summary>or paste an arena document</summary>
        <textarea id="arena-input" rows="8" spellcheck="false"></textarea>
        <button id="document-start">start from document</button>
      </details>
    </section>
    <p id="error-line" class="error" hidden></p>
    <section id="session-panel" hidden>
      <div class="session-head">
        <span id="status-line"></span>
        <span id="adviser-badge"></span>
        <span id="average-display"></span>
      </div>
      <div id="banner-area"></div>
      <div class="play-area">
        <svg id="graph-svg" xmlns="${SVG_NS}"></svg>
        <aside class="side-panel">
          <h2>your move</h2>
          <div id="move-panel"></div>
          <div class="legend">
            <span class="chip hard">hard</span> forbidden by the nominal adviser;
            violating it makes unsafety unavoidable and halts the session
            <span class="chip soft">soft</span> forbidden only by the current
            richer adviser; violating it switches advisers
            <span class="chip allowed">allowed</span> compliant move
          </div>
          <h2>candidates</h2>
          <div id="summary-panel"></div>
        </aside>
      </div>
      <section class="history">
        <div class="replay-controls">
          <input type="range" id="replay-slider" min="0" max="0" value="0" />
          <span id="replay-label"></span>
          <button id="export-button">export script</button>
          <button id="reset-button">reset session</button>
        </div>
        <ol id="event-log"></ol>
      </section>
    </section>
  `;

  const grab = <T extends Element>(id: string): T => {
    const el = root.querySelector(`#${id}`);
    if (el === null) throw new Error(`shell is missing #${id}`);
    return el as T;
  };

  return {
    fixtureSelect: grab<HTMLSelectElement>("fixture-select"),
    fixtureStart: grab<HTMLButtonElement>("fixture-start"),
    arenaInput: grab<HTMLTextAreaElement>("arena-input"),
    documentStart: grab<HTMLButtonElement>("document-start"),
    sessionPanel: grab<HTMLElement>("session-panel"),
    statusLine: grab<HTMLElement>("status-line"),
    adviserBadge: grab<HTMLElement>("adviser-badge"),
    averageDisplay: grab<HTMLElement>("average-display"),
    bannerArea: grab<HTMLElement>("banner-area"),
    graphSvg: grab<SVGSVGElement>("graph-svg"),
    movePanel: grab<HTMLElement>("move-panel"),
    summaryPanel: grab<HTMLElement>("summary-panel"),
    replaySlider: grab<HTMLInputElement>("replay-slider"),
    replayLabel: grab<HTMLElement>("replay-label"),
    exportButton: grab<HTMLButtonElement>("export-button"),
    resetButton: grab<HTMLButtonElement>("reset-button"),
    eventLog: grab<HTMLOListElement>("event-log"),
    errorLine: grab<HTMLElement>("error-line"),
  };
}

// ────────────────────────────────────────────────────────────────────────────
// graph rendering
// ────────────────────────────────────────────────────────────────────────────

export interface GraphOverlay {
  /** Live advice at the current adversary state; null hides move styling. */
  advice: AdvicePacketMsg | null;
  /** State to draw as current; overrides the marker baked into the DOT text. */
  highlight: string | null;
  /** Move handler for clickable edges; null disables edge clicks. */
  onMove: ((input: string) => void) | null;
}

const NODE_RADIUS = 22;

function adviceClass(advice: AdvicePacketMsg, label: string): string | null {
  if (advice.hard.includes(label)) return "hard";
  if (advice.soft.includes(label)) return "soft";
  if (advice.allowed.includes(label)) return "allowed";
  return null;
}

function edgePath(
  from: { x: number; y: number },
  to: { x: number; y: number },
  bend: number,
): { d: string; labelX: number; labelY: number } {
  if (from.x === to.x && from.y === to.y) {
    const d =
      `M ${from.x + 8} ${from.y - NODE_RADIUS} ` +
      `C ${from.x + 52} ${from.y - 64}, ${from.x - 52} ${from.y - 64}, ` +
      `${from.x - 8} ${from.y - NODE_RADIUS}`;
    return { d, labelX: from.x, labelY: from.y - 58 };
  }
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const length = Math.hypot(dx, dy) || 1;
  const unitX = dx / length;
  const unitY = dy / length;
  const startX = from.x + unitX * NODE_RADIUS;
  const startY = from.y + unitY * NODE_RADIUS;
  const endX = to.x - unitX * (NODE_RADIUS + 6);
  const endY = to.y - unitY * (NODE_RADIUS + 6);
  if (bend === 0) {
    return {
      d: `M ${startX} ${startY} L ${endX} ${endY}`,
      labelX: (startX + endX) / 2 + unitY * 12,
      labelY: (startY + endY) / 2 - unitX * 12 - 4,
    };
  }
  const midX = (startX + endX) / 2 - unitY * bend;
  const midY = (startY + endY) / 2 + unitX * bend;
  return {
    d: `M ${startX} ${startY} Q ${midX} ${midY} ${endX} ${endY}`,
    labelX: midX,
    labelY: midY - 4,
  };
}

/** Curvature per edge so parallel and opposite edges stay distinguishable. */
function bendFor(edge: DotEdge, edges: DotEdge[]): number {
  const siblings = edges.filter((e) => e.from === edge.from && e.to === edge.to);
  const reverse = edges.some((e) => e.from === edge.to && e.to === edge.from);
  const slot = siblings.indexOf(edge);
  if (siblings.length === 1 && !reverse) return 0;
  const base = reverse ? 26 : 0;
  return base + slot * 26 - (reverse ? 0 : ((siblings.length - 1) * 26) / 2);
}

export function renderGraph(
  svg: SVGSVGElement,
  graph: DotGraph,
  layout: Layout,
  overlay: GraphOverlay,
): void {
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  svg.setAttribute("width", String(layout.width));
  svg.setAttribute("height", String(layout.height));
  while (svg.firstChild !== null) svg.removeChild(svg.firstChild);

  const defs = document.createElementNS(SVG_NS, "defs");
  const marker = document.createElementNS(SVG_NS, "marker");
  marker.setAttribute("id", "arrowhead");
  marker.setAttribute("viewBox", "0 0 10 10");
  marker.setAttribute("refX", "9");
  marker.setAttribute("refY", "5");
  marker.setAttribute("markerWidth", "7");
  marker.setAttribute("markerHeight", "7");
  marker.setAttribute("orient", "auto-start-reverse");
  const tip = document.createElementNS(SVG_NS, "path");
  tip.setAttribute("d", "M 0 0 L 10 5 L 0 10 z");
  tip.setAttribute("fill", "context-stroke");
  marker.appendChild(tip);
  defs.appendChild(marker);
  svg.appendChild(defs);

  const highlight = overlay.highlight ?? graph.current;

  const edgeGroup = document.createElementNS(SVG_NS, "g");
  edgeGroup.setAttribute("class", "edges");
  for (const edge of graph.edges) {
    const from = layout.positions.get(edge.from);
    const to = layout.positions.get(edge.to);
    if (from === undefined || to === undefined) continue;

    const classes = ["edge"];
    let advicePart: string | null = null;
    if (overlay.advice !== null && edge.from === overlay.advice.state) {
      advicePart = adviceClass(overlay.advice, edge.label);
    }
    if (advicePart !== null) {
      classes.push(advicePart);
    } else {
      if (edge.forbidden) classes.push("forbidden");
      if (edge.strategy) classes.push("strategy");
    }
    const clickable = advicePart !== null && overlay.onMove !== null;
    if (clickable) classes.push("clickable");

    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", classes.join(" "));
    group.setAttribute("data-from", edge.from);
    group.setAttribute("data-to", edge.to);
    group.setAttribute("data-input", edge.label);

    const { d, labelX, labelY } = edgePath(from, to, bendFor(edge, graph.edges));
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", d);
    path.setAttribute("fill", "none");
    path.setAttribute("marker-end", "url(#arrowhead)");
    group.appendChild(path);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("class", "edge-label");
    text.setAttribute("x", String(labelX));
    text.setAttribute("y", String(labelY));
    text.textContent = edge.label;
    group.appendChild(text);

    if (clickable && overlay.onMove !== null) {
      const handler = overlay.onMove;
      group.addEventListener("click", () => handler(edge.label));
    }
    edgeGroup.appendChild(group);
  }
  svg.appendChild(edgeGroup);

  const nodeGroup = document.createElementNS(SVG_NS, "g");
  nodeGroup.setAttribute("class", "nodes");
  for (const node of graph.nodes) {
    const point = layout.positions.get(node.id);
    if (point === undefined) continue;
    const classes = ["node", node.owner];
    if (node.unsafe) classes.push("unsafe");
    if (node.losing) classes.push("losing");
    if (node.initial) classes.push("init");
    if (node.id === highlight) classes.push("current");

    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", classes.join(" "));
    group.setAttribute("data-id", node.id);
    group.setAttribute("transform", `translate(${point.x}, ${point.y})`);

    if (node.owner === "protagonist") {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(-NODE_RADIUS - 8));
      rect.setAttribute("y", String(-NODE_RADIUS + 4));
      rect.setAttribute("width", String(2 * NODE_RADIUS + 16));
      rect.setAttribute("height", String(2 * NODE_RADIUS - 8));
      rect.setAttribute("rx", "4");
      group.appendChild(rect);
    } else {
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("r", String(NODE_RADIUS));
      group.appendChild(circle);
    }

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("class", "node-label");
    label.setAttribute("dy", "5");
    label.textContent = node.id;
    group.appendChild(label);

    if (node.initial) {
      const tag = document.createElementNS(SVG_NS, "text");
      tag.setAttribute("class", "init-tag");
      tag.setAttribute("y", String(-NODE_RADIUS - 8));
      tag.textContent = "init";
      group.appendChild(tag);
    }
    nodeGroup.appendChild(group);
  }
  svg.appendChild(nodeGroup);
}

// ────────────────────────────────────────────────────────────────────────────
// panels
// ────────────────────────────────────────────────────────────────────────────

export function renderMovePanel(
  panel: HTMLElement,
  advice: AdvicePacketMsg | null,
  options: { frozen: boolean; note?: string; onMove: (input: string) => void },
): void {
  panel.innerHTML = "";
  if (advice === null) {
    const note = document.createElement("p");
    note.className = "move-note";
    note.textContent = options.note ?? "no move to make";
    panel.appendChild(note);
    return;
  }
  const inputs = [...advice.hard, ...advice.soft, ...advice.allowed].sort();
  for (const input of inputs) {
    const button = document.createElement("button");
    button.className = `move-btn ${adviceClass(advice, input) ?? "allowed"}`;
    button.dataset.input = input;
    button.textContent = input;
    button.disabled = options.frozen;
    button.addEventListener("click", () => options.onMove(input));
    panel.appendChild(button);
  }
}

export function renderStatus(el: HTMLElement, text: string): void {
  el.textContent = text;
}

export function renderBadge(
  el: HTMLElement,
  adviser: AdviserInfoMsg,
  bestIndex: number | null,
): void {
  const star = bestIndex !== null && adviser.index === bestIndex ? " ★" : "";
  const nominal = adviser.nominal ? " (nominal)" : "";
  el.textContent = `adviser #${adviser.index}${star}${nominal} λ ${formatRational(adviser.lambda)}`;
}

export function renderAverage(el: HTMLElement, average: Rational | null, rounds: number): void {
  if (average === null) {
    el.textContent = "running average n/a (no adversary rounds yet)";
  } else {
    el.textContent = `running average ${formatRational(average)} over ${rounds} round${rounds === 1 ? "" : "s"}`;
  }
}

export function showBanner(area: HTMLElement, kind: "switch" | "terminal", text: string): void {
  area.innerHTML = "";
  const banner = document.createElement("div");
  banner.className = `banner ${kind}`;
  banner.textContent = text;
  area.appendChild(banner);
}

export function clearBanner(area: HTMLElement): void {
  area.innerHTML = "";
}

export function renderSummary(el: HTMLElement, summary: BundleSummary | null): void {
  el.innerHTML = "";
  if (summary === null) {
    const note = document.createElement("p");
    note.className = "summary-note";
    note.textContent =
      "candidate list unavailable (it is only sent when the session is created)";
    el.appendChild(note);
    return;
  }
  const head = document.createElement("p");
  const cap = summary.truncated ? ", cap hit (list truncated)" : "";
  head.textContent = `${summary.generated} candidates, ${summary.good} good${cap}`;
  el.appendChild(head);
  const list = document.createElement("ol");
  list.className = "candidate-list";
  list.start = 0;
  summary.lambdas.forEach((lambda, index) => {
    const item = document.createElement("li");
    item.dataset.index = String(index);
    if (lambda === null) {
      item.textContent = `#${index} not good`;
      item.className = "bad";
    } else {
      item.textContent = `#${index} λ ${formatRational(lambda)}`;
      if (index === summary.best_index) {
        item.className = "best";
        item.textContent += " ★ least limiting";
      }
    }
    list.appendChild(item);
  });
  el.appendChild(list);
}

export function renderLog(
  log: HTMLOListElement,
  history: StepEventMsg[],
  position: number | null,
): void {
  log.innerHTML = "";
  history.forEach((event, index) => {
    const item = document.createElement("li");
    item.textContent = describeEvent(event);
    if (position !== null && index >= position) item.className = "future";
    log.appendChild(item);
  });
}

export function renderSlider(
  slider: HTMLInputElement,
  label: HTMLElement,
  total: number,
  position: number | null,
): void {
  slider.max = String(total);
  slider.value = String(position ?? total);
  slider.disabled = total === 0;
  const shown = position ?? total;
  label.textContent = position === null ? `step ${shown}/${total} (live)` : `step ${shown}/${total}`;
}

export function showError(el: HTMLElement, message: string | null): void {
  if (message === null) {
    el.hidden = true;
    el.textContent = "";
  } else {
    el.hidden = false;
    el.textContent = message;
  }
}
