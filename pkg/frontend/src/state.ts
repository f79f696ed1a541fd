// Explorer state machine: slider bounds, debounced fetching, and a strict
// "latest request wins" rule. Responses carry a sequence number; anything
// stale is dropped, and the previous in-flight request is aborted so at most
// one is running at a time.

import type { Backend } from "./api";
import { ApiError } from "./api";
import type { SimulateResponse, SweepResponse } from "./types";

export interface Controls {
  beta1: number;
  alpha1: number;
  alpha2: number;
  n: number;
  seed: number;
}

export type ControlName = keyof Controls;

export interface Bounds {
  min: number;
  max: number;
  step: number;
}

export const CONTROL_BOUNDS: Record<ControlName, Bounds> = {
  beta1: { min: 0, max: 5, step: 0.05 },
  alpha1: { min: 0, max: 5, step: 0.1 },
  alpha2: { min: 0, max: 5, step: 0.1 },
  n: { min: 100, max: 10000, step: 100 },
  seed: { min: 0, max: Number.MAX_SAFE_INTEGER, step: 1 },
};

export const DEFAULT_CONTROLS: Controls = {
  beta1: 1.05,
  alpha1: 2.8,
  alpha2: 2.0,
  n: 1000,
  seed: 777,
};

export const SWEEP_ALPHAS = "0.5:5:0.5";
export const DEBOUNCE_MS = 150;

export function clampControl(name: ControlName, value: number): number {
  const { min, max, step } = CONTROL_BOUNDS[name];
  if (!Number.isFinite(value)) return min;
  const snapped = Math.round((value - min) / step) * step + min;
  // snap to the step grid without accumulating float dust
  const decimals = step < 1 ? String(step).split(".")[1].length : 0;
  const clean = Number(snapped.toFixed(decimals));
  return Math.min(max, Math.max(min, clean));
}

export interface ExplorerState {
  controls: Controls;
  response: SimulateResponse | null;
  sweep: SweepResponse | null;
  pending: boolean;
  error: string | null;
}

export type Listener = (state: ExplorerState) => void;

export class Explorer {
  private controls: Controls = { ...DEFAULT_CONTROLS };
  private response: SimulateResponse | null = null;
  private sweep: SweepResponse | null = null;
  private pending = false;
  private error: string | null = null;
  private seq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private listeners: Listener[] = [];

  constructor(
    private backend: Backend,
    private debounceMs: number = DEBOUNCE_MS,
  ) {}

  get state(): ExplorerState {
    return {
      controls: { ...this.controls },
      response: this.response,
      sweep: this.sweep,
      pending: this.pending,
      error: this.error,
    };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  setControl(name: ControlName, value: number): void {
    const clamped = clampControl(name, value);
    if (this.controls[name] === clamped) return;
    this.controls[name] = clamped;
    this.notify();
    this.scheduleRefresh();
  }

  /** Debounced refresh; collapses bursts of slider events into one request. */
  private scheduleRefresh(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.refresh();
    }, this.debounceMs);
  }

  /** Fire the API calls immediately; stale responses are discarded. */
  async refresh(): Promise<void> {
    const mySeq = ++this.seq;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    this.pending = true;
    this.notify();
    const { beta1, alpha1, alpha2, n, seed } = this.controls;
    try {
      const [response, sweep] = await Promise.all([
        this.backend.simulate(
          { beta1, alpha1, alpha2, n, seed, include_points: true, max_points: 500 },
          controller.signal,
        ),
        this.backend.sweep(beta1, SWEEP_ALPHAS, 1000, seed, controller.signal),
      ]);
      if (mySeq !== this.seq) return; // a newer request owns the screen
      this.response = response;
      this.sweep = sweep;
      this.error = null;
    } catch (err) {
      if (mySeq !== this.seq) return;
      if (err instanceof DOMException && err.name === "AbortError") return;
      this.error = err instanceof ApiError ? err.message : `network error: ${err}`;
    } finally {
      if (mySeq === this.seq) {
        this.pending = false;
        this.notify();
      }
    }
  }

  /** Banner retry affordance. */
  retry(): Promise<void> {
    return this.refresh();
  }

  private notify(): void {
    const snapshot = this.state;
    for (const listener of this.listeners) listener(snapshot);
  }
}
