// Pure DOM renderers: each one rebuilds its panel from the latest API
// payloads. Every visible number is a formatted response value; pixel
// geometry lives in attributes, never in text.

import { fixed, oddsRatio, percent } from "./format";
import type {
  DagResponse,
  DagVerdict,
  LogisticModel,
  OlsModel,
  SimulateResponse,
  SweepResponse,
} from "./types";
import { SBP, SODIUM, termOf } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

const OLS_MODELS: { key: OlsModel; label: string; color: string }[] = [
  { key: "crude", label: "crude", color: "#7f8c8d" },
  { key: "age_adjusted", label: "age-adjusted", color: "#2d6cdf" },
  { key: "collider_adjusted", label: "collider-adjusted", color: "#d64545" },
];

const LOGISTIC_MODELS: { key: LogisticModel; label: string }[] = [
  { key: "logistic_crude", label: "crude" },
  { key: "logistic_age_adjusted", label: "age-adjusted" },
  { key: "logistic_collider_adjusted", label: "collider-adjusted" },
];

function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

class Scale {
  constructor(
    private d0: number,
    private d1: number,
    private r0: number,
    private r1: number,
  ) {}

  at(v: number): number {
    const span = this.d1 - this.d0 || 1;
    return this.r0 + ((v - this.d0) / span) * (this.r1 - this.r0);
  }
}

export function renderScatter(container: HTMLElement, response: SimulateResponse): void {
  container.replaceChildren();
  container.appendChild(el("h2", "panel-title", "sodium vs systolic blood pressure"));

  const width = 560;
  const height = 360;
  const margin = { left: 52, right: 12, top: 10, bottom: 40 };
  const curves = OLS_MODELS.map((m) => response.curves[m.key]);
  const xValues = curves.flatMap((c) => c.grid);
  const yValues = curves.flatMap((c) => [...c.ci_low, ...c.ci_high]);
  if (response.points) {
    xValues.push(...response.points[SODIUM]);
    yValues.push(...response.points[SBP]);
  }
  const xMin = Math.min(...xValues);
  const xMax = Math.max(...xValues);
  const yMin = Math.min(...yValues);
  const yMax = Math.max(...yValues);
  const x = new Scale(xMin, xMax, margin.left, width - margin.right);
  const y = new Scale(yMin, yMax, height - margin.bottom, margin.top);

  const plot = svg("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "scatter-plot",
    role: "img",
  });

  if (response.points) {
    const group = svg("g", { class: "points" });
    const xs = response.points[SODIUM];
    const ys = response.points[SBP];
    for (let i = 0; i < xs.length; i++) {
      group.appendChild(
        svg("circle", { cx: x.at(xs[i]), cy: y.at(ys[i]), r: 2.2, class: "point" }),
      );
    }
    plot.appendChild(group);
  }

  for (const model of OLS_MODELS) {
    const curve = response.curves[model.key];
    const band = svg("polygon", {
      class: "ci-band",
      fill: model.color,
      points: [
        ...curve.grid.map((g, i) => `${x.at(g)},${y.at(curve.ci_low[i])}`),
        ...[...curve.grid].reverse().map(
          (g, i) => `${x.at(g)},${y.at(curve.ci_high[curve.grid.length - 1 - i])}`,
        ),
      ].join(" "),
    });
    plot.appendChild(band);
    const line = svg("polyline", {
      class: `fit-line fit-${model.key}`,
      stroke: model.color,
      points: curve.grid.map((g, i) => `${x.at(g)},${y.at(curve.predicted[i])}`).join(" "),
      "data-model": model.key,
      "data-start": curve.predicted[0],
      "data-end": curve.predicted[curve.predicted.length - 1],
    });
    plot.appendChild(line);
  }

  // axis extremes are labeled with response values, nothing recomputed
  const axis = svg("g", { class: "axis" });
  axis.appendChild(svg("line", {
    x1: margin.left, y1: height - margin.bottom,
    x2: width - margin.right, y2: height - margin.bottom,
  }));
  axis.appendChild(svg("line", {
    x1: margin.left, y1: margin.top, x2: margin.left, y2: height - margin.bottom,
  }));
  const labels: [number, number, string, string][] = [
    [x.at(xMin), height - margin.bottom + 16, fixed(xMin, 2), "x-tick"],
    [x.at(xMax), height - margin.bottom + 16, fixed(xMax, 2), "x-tick"],
    [margin.left - 6, y.at(yMin), fixed(yMin, 1), "y-tick"],
    [margin.left - 6, y.at(yMax), fixed(yMax, 1), "y-tick"],
  ];
  for (const [lx, ly, text, cls] of labels) {
    const label = svg("text", { x: lx, y: ly, class: cls });
    label.textContent = text;
    axis.appendChild(label);
  }
  plot.appendChild(axis);
  container.appendChild(plot);

  const legend = el("div", "legend");
  for (const model of OLS_MODELS) {
    const item = el("span", "legend-item", model.label);
    item.style.setProperty("--swatch", model.color);
    legend.appendChild(item);
  }
  container.appendChild(legend);
}

export function renderForest(container: HTMLElement, response: SimulateResponse): void {
  container.replaceChildren();
  container.appendChild(el("h2", "panel-title", "odds of hypertension per unit sodium"));

  const width = 560;
  const rowHeight = 34;
  const margin = { left: 150, right: 110, top: 8, bottom: 26 };
  const height = margin.top + rowHeight * LOGISTIC_MODELS.length + margin.bottom;

  const rows = LOGISTIC_MODELS.map((m) => {
    const term = termOf(response.fits[m.key], SODIUM);
    return { ...m, or: term.or!, ci: term.ci! };
  });
  const logValues = rows.flatMap((r) => [Math.log10(r.ci[0]), Math.log10(r.ci[1]), 0]);
  const x = new Scale(
    Math.min(...logValues), Math.max(...logValues),
    margin.left, width - margin.right,
  );

  const plot = svg("svg", { viewBox: `0 0 ${width} ${height}`, class: "forest-plot" });
  plot.appendChild(svg("line", {
    class: "reference",
    x1: x.at(0), y1: margin.top, x2: x.at(0), y2: height - margin.bottom,
    "data-reference-or": 1,
  }));
  const refLabel = svg("text", {
    x: x.at(0), y: height - margin.bottom + 14, class: "x-tick",
  });
  refLabel.textContent = "OR = 1";
  plot.appendChild(refLabel);

  rows.forEach((row, i) => {
    const cy = margin.top + rowHeight * (i + 0.5);
    const group = svg("g", {
      class: "forest-row",
      "data-model": row.key,
      "data-or": row.or,
    });
    const name = svg("text", { x: 6, y: cy + 4, class: "row-label" });
    name.textContent = row.label;
    group.appendChild(name);
    group.appendChild(svg("line", {
      class: "whisker",
      x1: x.at(Math.log10(row.ci[0])), y1: cy,
      x2: x.at(Math.log10(row.ci[1])), y2: cy,
    }));
    group.appendChild(svg("circle", {
      class: "estimate", cx: x.at(Math.log10(row.or)), cy, r: 5,
    }));
    const value = svg("text", {
      x: width - margin.right + 8, y: cy + 4, class: "row-value",
    });
    value.textContent = `${oddsRatio(row.or)} (${oddsRatio(row.ci[0])}, ${oddsRatio(row.ci[1])})`;
    group.appendChild(value);
    plot.appendChild(group);
  });
  container.appendChild(plot);
}

export function renderSweep(container: HTMLElement, sweep: SweepResponse): void {
  container.replaceChildren();
  container.appendChild(
    el("h2", "panel-title", "collider-model estimate against collider strength"),
  );
  const strip = el("div", "sweep-strip");
  const magnitudes = sweep.rows.map((r) => Math.abs(r.estimate));
  const top = Math.max(...magnitudes, 1e-9);
  for (const row of sweep.rows) {
    const cell = el("div", "sweep-cell");
    cell.dataset.alpha = String(row.alpha);
    cell.dataset.estimate = String(row.estimate);
    const share = Math.abs(row.estimate) / top;
    cell.style.background = row.estimate >= 0
      ? `rgba(45, 108, 223, ${0.15 + 0.6 * share})`
      : `rgba(214, 69, 69, ${0.15 + 0.6 * share})`;
    cell.appendChild(el("span", "sweep-alpha", fixed(row.alpha, 1)));
    cell.appendChild(el("span", "sweep-value", fixed(row.estimate, 3)));
    strip.appendChild(cell);
  }
  container.appendChild(strip);
  container.appendChild(el(
    "p", "panel-note",
    "cells show the fitted sodium coefficient as the collider ties strengthen",
  ));
}

interface Arrow {
  from: string;
  to: string;
}

function parsePath(path: string): Arrow[] {
  // "SOD -> PRO <- SBP" becomes its directed edges
  const tokens = path.split(/\s+/);
  const arrows: Arrow[] = [];
  for (let i = 1; i < tokens.length; i += 2) {
    const [left, op, right] = [tokens[i - 1], tokens[i], tokens[i + 1]];
    arrows.push(op === "->" ? { from: left, to: right } : { from: right, to: left });
  }
  return arrows;
}

const NODE_POSITIONS: Record<string, [number, number]> = {
  AGE: [280, 40],
  SOD: [80, 150],
  SBP: [480, 150],
  PRO: [280, 260],
};

export function renderDag(
  container: HTMLElement,
  dag: DagResponse,
  verdict: DagVerdict,
): void {
  container.replaceChildren();
  container.appendChild(el("h2", "panel-title", "graph audit"));

  const openEdges = new Set(
    verdict.opened_collider_paths
      .concat(verdict.open_backdoor_paths)
      .flatMap(parsePath)
      .map((a) => `${a.from}>${a.to}`),
  );
  const adjusted = new Set(verdict.adjust);

  const plot = svg("svg", { viewBox: "0 0 560 300", class: "dag-plot" });
  const defs = svg("defs");
  for (const [id, cls] of [["arrow", "edge-head"], ["arrow-open", "edge-head-open"]]) {
    const marker = svg("marker", {
      id, markerWidth: 10, markerHeight: 10, refX: 24, refY: 3,
      orient: "auto", markerUnits: "strokeWidth",
    });
    marker.appendChild(svg("path", { d: "M0,0 L0,6 L7,3 z", class: cls }));
    defs.appendChild(marker);
  }
  plot.appendChild(defs);

  for (const [from, to] of dag.edges) {
    const [x1, y1] = NODE_POSITIONS[from];
    const [x2, y2] = NODE_POSITIONS[to];
    const open = openEdges.has(`${from}>${to}`);
    plot.appendChild(svg("line", {
      class: open ? "dag-edge open" : "dag-edge",
      x1, y1, x2, y2,
      "data-edge": `${from}->${to}`,
      "data-open": String(open),
      "marker-end": open ? "url(#arrow-open)" : "url(#arrow)",
    }));
  }
  for (const node of dag.nodes) {
    const [cx, cy] = NODE_POSITIONS[node];
    const group = svg("g", {
      class: adjusted.has(node) ? "dag-node adjusted" : "dag-node",
      "data-node": node,
    });
    group.appendChild(svg("circle", { cx, cy, r: 22 }));
    const label = svg("text", { x: cx, y: cy + 4, class: "node-label" });
    label.textContent = node;
    group.appendChild(label);
    plot.appendChild(group);
  }
  container.appendChild(plot);

  const status = el(
    "p",
    verdict.valid ? "verdict valid" : "verdict invalid",
    `adjusting for {${verdict.adjust.join(", ")}}: ` +
      (verdict.valid ? "valid adjustment set" : "invalid adjustment set"),
  );
  status.setAttribute("data-valid", String(verdict.valid));
  container.appendChild(status);

  const notes = el("ul", "path-notes");
  for (const path of verdict.opened_collider_paths) {
    notes.appendChild(el("li", "path-open", `${path} - opened by conditioning`));
  }
  for (const path of verdict.open_backdoor_paths) {
    notes.appendChild(el("li", "path-open", `${path} - open back-door path`));
  }
  for (const name of verdict.descendants_of_exposure_in_set) {
    notes.appendChild(el("li", "path-warn", `${name} descends from the exposure`));
  }
  if (!notes.childElementCount) {
    notes.appendChild(el("li", "path-ok", "every non-causal path is blocked"));
  }
  container.appendChild(notes);
}

export function renderReadouts(container: HTMLElement, response: SimulateResponse): void {
  container.replaceChildren();

  const collider = termOf(response.fits.collider_adjusted, SODIUM);
  const ageAdjusted = termOf(response.fits.age_adjusted, SODIUM);
  const colliderOr = termOf(response.fits.logistic_collider_adjusted, SODIUM);

  const badge = el("span", "flip-badge", "sign flipped");
  badge.id = "flip-badge";
  badge.hidden = !(collider.coef < 0);
  const heading = el("h2", "panel-title", "model readouts");
  heading.appendChild(badge);
  container.appendChild(heading);

  const table = el("dl", "readout-grid");
  const entries: [string, string][] = [
    ["age-adjusted sodium effect", `${fixed(ageAdjusted.coef)} (se ${fixed(ageAdjusted.se)})`],
    ["collider-adjusted sodium effect", `${fixed(collider.coef)} (se ${fixed(collider.se)})`],
    ["analytic collider-model value", fixed(response.analytic_collider_coef)],
    ["collider-adjusted odds ratio", oddsRatio(colliderOr.or!)],
    ["magnitude bias", fixed(response.bias.bias_magnitude)],
    ["relative bias", percent(response.bias.relative_bias_pct)],
    ["simple bias", fixed(response.bias.bias_simple)],
  ];
  for (const [label, value] of entries) {
    table.appendChild(el("dt", undefined, label));
    const dd = el("dd", undefined, value);
    if (label === "collider-adjusted sodium effect") dd.id = "collider-coef";
    table.appendChild(dd);
  }
  container.appendChild(table);
}
