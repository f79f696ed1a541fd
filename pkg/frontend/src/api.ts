import type {
  DagResponse,
  SimulateRequest,
  SimulateResponse,
  SweepResponse,
} from "./types";

export interface Backend {
  simulate(req: SimulateRequest, signal?: AbortSignal): Promise<SimulateResponse>;
  sweep(
    beta1: number,
    alphas: string,
    n: number,
    seed: number,
    signal?: AbortSignal,
  ): Promise<SweepResponse>;
  dag(): Promise<DagResponse>;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public errorName: string,
    detail: string,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (response.ok) return (await response.json()) as T;
  let name = `HTTP ${response.status}`;
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") {
      name = body.error;
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, name, detail);
}

export function createHttpBackend(baseUrl = ""): Backend {
  return {
    async simulate(req, signal) {
      const response = await fetch(`${baseUrl}/api/simulate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(req),
        signal,
      });
      return parseOrThrow<SimulateResponse>(response);
    },
    async sweep(beta1, alphas, n, seed, signal) {
      const params = new URLSearchParams({
        beta1: String(beta1),
        alphas,
        n: String(n),
        seed: String(seed),
      });
      const response = await fetch(`${baseUrl}/api/sweep?${params}`, { signal });
      return parseOrThrow<SweepResponse>(response);
    },
    async dag() {
      return parseOrThrow<DagResponse>(await fetch(`${baseUrl}/api/dag`));
    },
  };
}
