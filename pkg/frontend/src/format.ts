// Number formatting for display. Inputs are always values taken verbatim
// from an API response, so what the user reads is exactly what the server
// computed (rounded for the screen, never re-derived).

export function fixed(value: number, decimals = 3): string {
  return value.toFixed(decimals);
}

export function oddsRatio(value: number): string {
  if (value !== 0 && (Math.abs(value) < 0.001 || Math.abs(value) >= 1000)) {
    return value.toExponential(2);
  }
  return value.toFixed(3);
}

export function percent(value: number): string {
  return `${value.toFixed(1)}%`;
}

/** Exact decimal form of a float; round-trips through JSON unchanged. */
export function exact(value: number): string {
  return String(value);
}
