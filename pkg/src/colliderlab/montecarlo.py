"""Replicated simulation experiments quantifying collider bias.

Per-replicate seeds derive from the master seed through a splittable scheme
(``SeedSequence(entropy=master, spawn_key=(index,))`` reduced to one 64-bit
word), so results are independent of execution order and worker count.

Three bias readouts are reported side by side: the magnitude-gap convention
``mean(true - |collider|)`` with its relative percentage, and the plain
``mean(collider) - beta1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoRoot
from .library import AGE, PROTEINURIA, SBP, SODIUM, sodium_pressure_model
from .regression import Z_95, fit_ols
from .sem import generate

TRUE_MODEL = (SODIUM, AGE)
COLLIDER_MODEL = (SODIUM, AGE, PROTEINURIA)


def derive_seed(master: int, index: int) -> int:
    """Deterministic 64-bit seed for the ``index``-th child of ``master``."""
    entropy = master if master >= 0 else master % (1 << 64)
    ss = np.random.SeedSequence(entropy=entropy, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def analytic_collider_coef(beta1: float, alpha1: float, alpha2: float) -> float:
    """Population sodium coefficient of the collider-adjusted regression.

    For the unit-noise generator, conditioning on the collider shrinks the
    structural effect to ``beta1 - alpha2*(alpha1 + alpha2*beta1)/(1 + alpha2^2)``.
    """
    return beta1 - alpha2 * (alpha1 + alpha2 * beta1) / (1.0 + alpha2 * alpha2)


@dataclass(frozen=True)
class Scenario:
    """One replicated experiment: generator coefficients, size, and seeding."""

    beta1: float
    alpha1: float
    alpha2: float
    n: int
    replicates: int
    seed: int
    beta2: float = 2.00

    def __post_init__(self):
        if self.n < 10:
            raise ValueError(f"n must be >= 10, got {self.n}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        for name in ("beta1", "beta2", "alpha1", "alpha2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class McSummary:
    """Aggregates over replicates; the CI is mean estimate +/- 1.96 * mean se."""

    mean_true_model_coef: float
    mean_collider_model_coef: float
    mean_collider_se: float
    ci_low: float
    ci_high: float
    bias_magnitude: float
    relative_bias_pct: float
    bias_simple: float
    replicates: int

    def to_dict(self) -> dict:
        return {
            "mean_true_model_coef": self.mean_true_model_coef,
            "mean_collider_model_coef": self.mean_collider_model_coef,
            "mean_collider_se": self.mean_collider_se,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "bias_magnitude": self.bias_magnitude,
            "relative_bias_pct": self.relative_bias_pct,
            "bias_simple": self.bias_simple,
            "replicates": self.replicates,
        }


def _replicate(sc: Scenario, r: int) -> tuple[float, float, float]:
    sem = sodium_pressure_model(sc.beta1, sc.beta2, sc.alpha1, sc.alpha2,
                                include_hypertension=False)
    data = generate(sem, sc.n, derive_seed(sc.seed, r))
    try:
        fit_true = fit_ols(data, SBP, TRUE_MODEL)
        fit_collider = fit_ols(data, SBP, COLLIDER_MODEL)
    except Exception as exc:
        raise type(exc)(f"replicate {r}: {exc}") from exc
    return (fit_true.coef_of(SODIUM), fit_collider.coef_of(SODIUM),
            fit_collider.se_of(SODIUM))


def run_mc(sc: Scenario, workers: int = 1) -> McSummary:
    """Fit the correctly specified and collider-adjusted models per replicate.

    The result is identical for any ``workers``; replicates are independent
    tasks collected by index and aggregated by commutative means.
    """
    indices = range(sc.replicates)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _replicate(sc, r), indices))
    else:
        results = [_replicate(sc, r) for r in indices]
    true_coefs = np.array([t for t, _, _ in results])
    collider_coefs = np.array([c for _, c, _ in results])
    ses = np.array([s for _, _, s in results])

    mean_true = float(true_coefs.mean())
    mean_collider = float(collider_coefs.mean())
    mean_se = float(ses.mean())
    gaps = true_coefs - np.abs(collider_coefs)
    return McSummary(
        mean_true_model_coef=mean_true,
        mean_collider_model_coef=mean_collider,
        mean_collider_se=mean_se,
        ci_low=mean_collider - Z_95 * mean_se,
        ci_high=mean_collider + Z_95 * mean_se,
        bias_magnitude=float(gaps.mean()),
        relative_bias_pct=float(100.0 * (gaps / true_coefs).mean()),
        bias_simple=mean_collider - sc.beta1,
        replicates=sc.replicates,
    )


@dataclass(frozen=True)
class SweepRow:
    """One grid cell: simulated estimate vs. the closed-form population value."""

    beta1: float
    alpha: float
    estimate: float
    analytic: float
    abs_bias: float                      # beta1 - estimate


def run_sweep(beta1_values: Sequence[float], alpha_values: Sequence[float],
              n: int, seed: int) -> list[SweepRow]:
    """One dataset and collider-model fit per (beta1, alpha) pair, row-major.

    ``alpha`` plays both collider roles (alpha1 = alpha2). Each cell draws its
    own dataset from a seed derived from (seed, cell index).
    """
    if not beta1_values or not alpha_values:
        raise ValueError("beta1_values and alpha_values must be non-empty")
    rows: list[SweepRow] = []
    for i, beta1 in enumerate(beta1_values):
        for j, alpha in enumerate(alpha_values):
            cell = i * len(alpha_values) + j
            sem = sodium_pressure_model(beta1, 2.00, alpha, alpha,
                                        include_hypertension=False)
            data = generate(sem, n, derive_seed(seed, cell))
            try:
                fit = fit_ols(data, SBP, COLLIDER_MODEL)
            except Exception as exc:
                raise type(exc)(
                    f"sweep cell (beta1={beta1}, alpha={alpha}): {exc}"
                ) from exc
            estimate = fit.coef_of(SODIUM)
            rows.append(SweepRow(
                beta1=beta1,
                alpha=alpha,
                estimate=estimate,
                analytic=analytic_collider_coef(beta1, alpha, alpha),
                abs_bias=beta1 - estimate,
            ))
    return rows


def sign_flip_boundary(beta1: float, upper: float = 100.0) -> float:
    """Smallest alpha (= alpha1 = alpha2) at which the collider-adjusted
    coefficient crosses zero, by bisection to 1e-9.

    Raises NoRoot when the coefficient keeps its sign on (0, ``upper``].
    """
    if beta1 <= 0:
        raise ValueError("beta1 must be positive")
    f = lambda a: analytic_collider_coef(beta1, a, a)
    lo, hi = 0.0, upper
    if f(hi) > 0.0:
        raise NoRoot(f"no sign change for beta1={beta1} with alpha in (0, {upper}]")
    while hi - lo > 1e-9:
        mid = (lo + hi) / 2.0
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
