// Shapes of the /api JSON payloads. Every number the UI shows comes from
// these objects; nothing statistical is recomputed client-side.

export interface FitTerm {
  name: string;
  coef: number;
  se: number;
  or?: number;
  ci?: [number, number];
}

export interface FitReport {
  outcome: string;
  terms: FitTerm[];
  n: number;
  p: number;
  rss?: number;
  deviance?: number;
  aic: number;
  loglik: number;
  converged?: boolean;
}

export interface CurveSeries {
  focal: string;
  grid: number[];
  predicted: number[];
  ci_low: number[];
  ci_high: number[];
}

export type OlsModel = "crude" | "age_adjusted" | "collider_adjusted";
export type LogisticModel =
  | "logistic_crude"
  | "logistic_age_adjusted"
  | "logistic_collider_adjusted";

export interface SimulateRequest {
  beta1: number;
  alpha1: number;
  alpha2: number;
  n: number;
  seed: number;
  include_points: boolean;
  max_points: number;
}

export interface BiasReadout {
  bias_magnitude: number;
  relative_bias_pct: number;
  bias_simple: number;
}

export interface SimulateResponse {
  request: SimulateRequest;
  resolved_seed: number;
  fits: Record<OlsModel | LogisticModel, FitReport>;
  analytic_collider_coef: number;
  bias: BiasReadout;
  curves: Record<OlsModel, CurveSeries>;
  points: Record<string, number[]> | null;
  version: string;
}

export interface SweepRow {
  beta1: number;
  alpha: number;
  estimate: number;
  analytic: number;
  abs_bias: number;
}

export interface SweepResponse {
  n: number;
  seed: number;
  rows: SweepRow[];
}

export interface DagVerdict {
  adjust: string[];
  valid: boolean;
  open_backdoor_paths: string[];
  opened_collider_paths: string[];
  descendants_of_exposure_in_set: string[];
}

export interface DagResponse {
  nodes: string[];
  edges: [string, string][];
  exposure: string;
  outcome: string;
  verdicts: DagVerdict[];
}

export const SODIUM = "Sodium_gr";
export const SBP = "sbp_in_mmHg";

export function termOf(fit: FitReport, name: string): FitTerm {
  const term = fit.terms.find((t) => t.name === name);
  if (!term) throw new Error(`fit ${fit.outcome} has no term ${name}`);
  return term;
}
