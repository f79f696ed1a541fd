import { type Backend, createHttpBackend } from "./api";
import { buildMcCommand } from "./command";
import { exact } from "./format";
import {
  renderDag,
  renderForest,
  renderReadouts,
  renderScatter,
  renderSweep,
} from "./render";
import {
  CONTROL_BOUNDS,
  type ControlName,
  DEFAULT_CONTROLS,
  Explorer,
  type ExplorerState,
} from "./state";
import type { DagResponse } from "./types";

const SLIDERS: { name: ControlName; label: string }[] = [
  { name: "beta1", label: "true sodium effect" },
  { name: "alpha1", label: "collider-sodium strength" },
  { name: "alpha2", label: "collider-pressure strength" },
  { name: "n", label: "sample size" },
];

const ADJUSTMENT_CHOICES: { label: string; adjust: string[] }[] = [
  { label: "nothing", adjust: [] },
  { label: "age", adjust: ["AGE"] },
  { label: "age + proteinuria", adjust: ["AGE", "PRO"] },
];

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export interface BootOptions {
  backend?: Backend;
}

export function boot(options: BootOptions = {}): Explorer {
  const root = document;
  const backend = options.backend ?? createHttpBackend();
  const explorer = new Explorer(backend);
  let dagInfo: DagResponse | null = null;
  let selectedAdjust = 2;

  const controlsHost = byId<HTMLElement>("controls");
  const valueLabels = new Map<ControlName, HTMLElement>();
  for (const { name, label } of SLIDERS) {
    const bounds = CONTROL_BOUNDS[name];
    const row = root.createElement("label");
    row.className = "control-row";
    const caption = root.createElement("span");
    caption.textContent = label;
    const slider = root.createElement("input");
    slider.type = "range";
    slider.min = String(bounds.min);
    slider.max = String(bounds.max);
    slider.step = String(bounds.step);
    slider.value = String(DEFAULT_CONTROLS[name]);
    slider.id = `slider-${name}`;
    slider.addEventListener("input", () => {
      explorer.setControl(name, Number(slider.value));
    });
    const value = root.createElement("output");
    value.textContent = exact(DEFAULT_CONTROLS[name]);
    valueLabels.set(name, value);
    row.append(caption, slider, value);
    controlsHost.appendChild(row);
  }

  const seedRow = root.createElement("label");
  seedRow.className = "control-row";
  const seedCaption = root.createElement("span");
  seedCaption.textContent = "seed";
  const seedInput = root.createElement("input");
  seedInput.type = "number";
  seedInput.id = "seed-input";
  seedInput.min = "0";
  seedInput.value = String(DEFAULT_CONTROLS.seed);
  seedInput.addEventListener("change", () => {
    explorer.setControl("seed", Number(seedInput.value));
  });
  seedRow.append(seedCaption, seedInput);
  controlsHost.appendChild(seedRow);

  const adjustHost = byId<HTMLElement>("adjust-choices");
  ADJUSTMENT_CHOICES.forEach((choice, i) => {
    const label = root.createElement("label");
    const radio = root.createElement("input");
    radio.type = "radio";
    radio.name = "adjust";
    radio.checked = i === selectedAdjust;
    radio.addEventListener("change", () => {
      selectedAdjust = i;
      if (dagInfo) renderDagPanel();
    });
    label.append(radio, root.createTextNode(` adjust for ${choice.label}`));
    adjustHost.appendChild(label);
  });

  function renderDagPanel(): void {
    if (!dagInfo) return;
    const want = ADJUSTMENT_CHOICES[selectedAdjust].adjust.join(",");
    const verdict = dagInfo.verdicts.find((v) => v.adjust.join(",") === want);
    if (verdict) renderDag(byId("dag"), dagInfo, verdict);
  }

  const banner = byId<HTMLElement>("banner");
  const bannerText = byId<HTMLElement>("banner-text");
  byId<HTMLButtonElement>("banner-retry").addEventListener("click", () => {
    void explorer.retry();
  });

  const commandField = byId<HTMLElement>("command-text");
  const copyButton = byId<HTMLButtonElement>("copy-command");
  copyButton.addEventListener("click", () => {
    const command = commandField.textContent ?? "";
    void navigator.clipboard?.writeText(command).catch(() => {
      // clipboard unavailable (insecure context); the text stays selectable
    });
  });

  function onState(state: ExplorerState): void {
    for (const [name, label] of valueLabels) {
      label.textContent = exact(state.controls[name]);
    }
    commandField.textContent = buildMcCommand(state.controls);
    document.body.classList.toggle("pending", state.pending);
    banner.hidden = state.error === null;
    if (state.error !== null) bannerText.textContent = state.error;
    if (state.response) {
      renderReadouts(byId("readouts"), state.response);
      renderScatter(byId("scatter"), state.response);
      renderForest(byId("forest"), state.response);
    }
    if (state.sweep) renderSweep(byId("sweep"), state.sweep);
  }

  explorer.subscribe(onState);
  void backend.dag().then((payload) => {
    dagInfo = payload;
    renderDagPanel();
  });
  void explorer.refresh();
  return explorer;
}
