import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { Backend } from "../src/api";
import { ApiError } from "../src/api";
import { clampControl, DEFAULT_CONTROLS, Explorer } from "../src/state";
import type { SimulateResponse, SweepResponse } from "../src/types";
import flagship from "./fixtures/simulate_flagship.json";
import sweepFixture from "./fixtures/sweep_flagship.json";

const response = flagship as unknown as SimulateResponse;
const sweep = sweepFixture as unknown as SweepResponse;

function instantBackend(): Backend & { simulateCalls: number[] } {
  const calls: number[] = [];
  return {
    simulateCalls: calls,
    async simulate(req) {
      calls.push(req.beta1);
      return { ...response, request: { ...response.request, ...req } };
    },
    async sweep() {
      return sweep;
    },
    async dag() {
      throw new Error("unused");
    },
  };
}

describe("clampControl", () => {
  it("keeps values inside their bounds", () => {
    expect(clampControl("beta1", -3)).toBe(0);
    expect(clampControl("beta1", 99)).toBe(5);
    expect(clampControl("n", 17)).toBe(100);
    expect(clampControl("n", 20000)).toBe(10000);
  });

  it("snaps to the step grid without float dust", () => {
    expect(clampControl("beta1", 1.049999)).toBe(1.05);
    expect(clampControl("alpha1", 2.7500001)).toBe(2.8);
    expect(clampControl("n", 850)).toBe(900);
  });

  it("maps non-finite input to the minimum", () => {
    expect(clampControl("alpha2", Number.NaN)).toBe(0);
  });
});

describe("Explorer", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces slider bursts into a single request", async () => {
    const backend = instantBackend();
    const explorer = new Explorer(backend, 150);
    explorer.setControl("beta1", 1.1);
    explorer.setControl("beta1", 1.2);
    explorer.setControl("beta1", 1.3);
    expect(backend.simulateCalls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(149);
    expect(backend.simulateCalls).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(2);
    expect(backend.simulateCalls).toEqual([1.3]);
    expect(explorer.state.response?.request.beta1).toBe(1.3);
  });

  it("ignores a no-op control change", async () => {
    const backend = instantBackend();
    const explorer = new Explorer(backend, 150);
    explorer.setControl("beta1", DEFAULT_CONTROLS.beta1);
    await vi.advanceTimersByTimeAsync(400);
    expect(backend.simulateCalls).toHaveLength(0);
  });

  it("discards stale responses by sequence number", async () => {
    const resolvers: ((r: SimulateResponse) => void)[] = [];
    const backend: Backend = {
      simulate(req) {
        return new Promise((resolve) => {
          resolvers.push((r) =>
            resolve({ ...r, request: { ...r.request, beta1: req.beta1 } }),
          );
        });
      },
      async sweep() {
        return sweep;
      },
      async dag() {
        throw new Error("unused");
      },
    };
    const explorer = new Explorer(backend, 0);
    const first = explorer.refresh();
    explorer.setControl("beta1", 2.5);
    await vi.advanceTimersByTimeAsync(1); // debounced refresh fires (request 2)
    expect(resolvers).toHaveLength(2);
    // resolve out of order: newest first, then the stale one
    resolvers[1](response);
    await vi.advanceTimersByTimeAsync(1);
    expect(explorer.state.response?.request.beta1).toBe(2.5);
    resolvers[0](response);
    await first;
    expect(explorer.state.response?.request.beta1).toBe(2.5);
    expect(explorer.state.pending).toBe(false);
  });

  it("surfaces API failures in the banner and recovers on retry", async () => {
    let fail = true;
    const backend: Backend = {
      async simulate(req) {
        if (fail) throw new ApiError(422, "Separation", "data are separated");
        return { ...response, request: { ...response.request, ...req } };
      },
      async sweep() {
        return sweep;
      },
      async dag() {
        throw new Error("unused");
      },
    };
    const explorer = new Explorer(backend, 0);
    await explorer.refresh();
    expect(explorer.state.error).toContain("Separation");
    fail = false;
    await explorer.retry();
    expect(explorer.state.error).toBeNull();
    expect(explorer.state.response).not.toBeNull();
  });

  it("aborts the previous in-flight request", async () => {
    const seen: (AbortSignal | undefined)[] = [];
    const backend: Backend = {
      simulate(_req, signal) {
        seen.push(signal);
        return new Promise((resolve, reject) => {
          signal?.addEventListener("abort", () =>
            reject(new DOMException("aborted", "AbortError")),
          );
          setTimeout(() => resolve(response), 10_000);
        });
      },
      async sweep() {
        return sweep;
      },
      async dag() {
        throw new Error("unused");
      },
    };
    const explorer = new Explorer(backend, 0);
    void explorer.refresh();
    void explorer.refresh();
    expect(seen).toHaveLength(2);
    expect(seen[0]?.aborted).toBe(true);
    expect(seen[1]?.aborted).toBe(false);
  });
});
