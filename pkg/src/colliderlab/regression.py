"""Regression estimators written against the Dataset column format.

OLS is solved by Householder QR (never an explicit normal-equation inverse);
logistic regression by iteratively reweighted least squares with step halving,
so the deviance is non-increasing across iterations. Confidence bounds use the
conventional two-sided 95% normal quantile.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InsufficientData,
    NotBinary,
    PerfectFit,
    RankDeficient,
    Separation,
    TermMissing,
    UnknownRegressor,
)
from .sem import Dataset

Z_95 = 1.96

# singular-value ratio below which the design counts as collinear
RANK_TOL = 1e-10

# |coef * sd(column)| beyond which a non-convergent logistic trajectory is
# declared diverging; the hard bound catches runaway fits mid-iteration
SEPARATION_COEF_BOUND = 30.0
SEPARATION_COEF_HARD_BOUND = 5000.0

# a fit whose total deviance falls below this predicts every observation
# essentially perfectly: the likelihood has no interior maximum
DEVIANCE_COLLAPSE = 1e-3

INTERCEPT = "intercept"


def _design(data: Dataset, regressors: Sequence[str]) -> np.ndarray:
    cols = [data.column(name) for name in regressors]
    return np.column_stack([np.ones(data.n)] + cols)


def _check_rank(x: np.ndarray) -> None:
    svals = np.linalg.svd(x, compute_uv=False)
    if svals[-1] < RANK_TOL * svals[0]:
        raise RankDeficient(
            f"collinear design (singular-value ratio {svals[-1] / svals[0]:.2e})"
        )


@dataclass(frozen=True)
class OlsFit:
    """Least-squares fit; ``coef[0]``/``se[0]`` belong to the intercept."""

    outcome: str
    regressors: tuple[str, ...]
    coef: np.ndarray
    se: np.ndarray
    cov: np.ndarray
    rss: float
    n: int
    p: int
    loglik: float
    aic: float

    def coef_of(self, name: str) -> float:
        return float(self.coef[self._index(name)])

    def se_of(self, name: str) -> float:
        return float(self.se[self._index(name)])

    def _index(self, name: str) -> int:
        if name == INTERCEPT:
            return 0
        try:
            return self.regressors.index(name) + 1
        except ValueError:
            raise TermMissing(f"{name!r} is not a term of this fit") from None

    def label(self) -> str:
        return f"{self.outcome} ~ {' + '.join(self.regressors)}"

    def to_dict(self) -> dict:
        terms = [{"name": INTERCEPT, "coef": float(self.coef[0]), "se": float(self.se[0])}]
        terms += [
            {"name": name, "coef": float(c), "se": float(s)}
            for name, c, s in zip(self.regressors, self.coef[1:], self.se[1:])
        ]
        return {
            "outcome": self.outcome,
            "terms": terms,
            "n": self.n,
            "p": self.p,
            "rss": self.rss,
            "aic": self.aic,
            "loglik": self.loglik,
        }


def fit_ols(data: Dataset, outcome: str, regressors: Sequence[str]) -> OlsFit:
    """Fit ``outcome ~ 1 + regressors`` by QR least squares.

    Standard errors come from ``sigma^2 (X'X)^-1`` with ``sigma^2 =
    RSS/(n-p)``; the Gaussian log-likelihood evaluates the variance at its
    MLE ``RSS/n`` and the AIC counts that variance as a parameter.

    Raises:
        InsufficientData: fewer observations than coefficients plus one.
        RankDeficient: collinear design.
        PerfectFit: residuals numerically zero (standard errors undefined).
    """
    y = data.column(outcome)
    x = _design(data, regressors)
    n, p = x.shape
    if n <= p:
        raise InsufficientData(f"n={n} observations cannot support p={p} coefficients")
    _check_rank(x)

    q, r = np.linalg.qr(x)
    coef = np.linalg.solve(r, q.T @ y)
    resid = y - x @ coef
    rss = float(resid @ resid)
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss == 0.0 or rss <= 1e-12 * tss:
        raise PerfectFit(
            f"{outcome} is fit exactly by {list(regressors)}; residual variance is zero"
        )

    sigma2 = rss / (n - p)
    r_inv = np.linalg.inv(r)
    cov = sigma2 * (r_inv @ r_inv.T)
    se = np.sqrt(np.diag(cov))
    loglik = -0.5 * n * (np.log(2.0 * np.pi * rss / n) + 1.0)
    aic = -2.0 * loglik + 2.0 * (p + 1)
    return OlsFit(outcome, tuple(regressors), coef, se, cov, rss, n, p,
                  float(loglik), float(aic))


@dataclass(frozen=True)
class LogisticFit:
    """Logit fit with Wald standard errors and odds-ratio intervals."""

    outcome: str
    regressors: tuple[str, ...]
    coef: np.ndarray
    se: np.ndarray
    odds_ratio: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    deviance: float
    loglik: float
    aic: float
    converged: bool
    iterations: int
    n: int
    p: int

    def _index(self, name: str) -> int:
        if name == INTERCEPT:
            return 0
        try:
            return self.regressors.index(name) + 1
        except ValueError:
            raise TermMissing(f"{name!r} is not a term of fit {self.label()!r}") from None

    def coef_of(self, name: str) -> float:
        return float(self.coef[self._index(name)])

    def or_of(self, name: str) -> tuple[float, float, float]:
        i = self._index(name)
        return float(self.odds_ratio[i]), float(self.ci_low[i]), float(self.ci_high[i])

    def label(self) -> str:
        return f"{self.outcome} ~ {' + '.join(self.regressors)}"

    def to_dict(self) -> dict:
        names = (INTERCEPT,) + self.regressors
        terms = [
            {
                "name": name,
                "coef": float(c),
                "se": float(s),
                "or": float(o),
                "ci": [float(lo), float(hi)],
            }
            for name, c, s, o, lo, hi in zip(
                names, self.coef, self.se, self.odds_ratio, self.ci_low, self.ci_high
            )
        ]
        return {
            "outcome": self.outcome,
            "terms": terms,
            "n": self.n,
            "p": self.p,
            "deviance": self.deviance,
            "aic": self.aic,
            "loglik": self.loglik,
            "converged": self.converged,
        }


def _bernoulli_deviance(y: np.ndarray, mu: np.ndarray) -> float:
    eps = 1e-300
    return float(-2.0 * np.sum(y * np.log(mu + eps) + (1.0 - y) * np.log(1.0 - mu + eps)))


def logistic_score(x: np.ndarray, y: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """Gradient of the Bernoulli log-likelihood at ``coef``."""
    mu = _sigmoid(x @ coef)
    return x.T @ (y - mu)


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(eta, -36.0, 36.0)))


def fit_logistic(data: Dataset, outcome: str, regressors: Sequence[str],
                 max_iter: int = 50, tol: float = 1e-8) -> LogisticFit:
    """Maximize the Bernoulli likelihood of ``outcome ~ 1 + regressors`` by IRLS.

    Convergence means ``max |score| < tol``. Each Newton step is solved as a
    weighted QR least-squares problem and halved until the deviance does not
    increase.

    Raises:
        NotBinary: outcome values outside {0, 1}.
        Separation: the likelihood is unbounded. Detected as a constant
            outcome, a deviance collapsing to zero (perfect separation), or a
            coefficient trajectory that keeps growing past
            ``SEPARATION_COEF_BOUND`` on the standardized scale without the
            score converging. Strong-but-estimable models (near-deterministic
            regressors) legitimately converge with large standardized
            coefficients and are not flagged.
        RankDeficient / InsufficientData: as for OLS.
    """
    y = data.column(outcome)
    if not np.all((y == 0.0) | (y == 1.0)):
        raise NotBinary(f"column {outcome!r} is not 0/1 valued")
    x = _design(data, regressors)
    n, p = x.shape
    if n <= p:
        raise InsufficientData(f"n={n} observations cannot support p={p} coefficients")
    _check_rank(x)
    ybar = y.mean()
    if ybar == 0.0 or ybar == 1.0:
        raise Separation(f"outcome {outcome!r} is constant; likelihood is unbounded")

    col_scale = x[:, 1:].std(axis=0)
    coef = np.zeros(p)
    coef[0] = np.log(ybar / (1.0 - ybar))
    mu = _sigmoid(x @ coef)
    deviance = _bernoulli_deviance(y, mu)
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        w = mu * (1.0 - mu)
        score = x.T @ (y - mu)
        if np.max(np.abs(score)) < tol:
            converged = True
            iterations -= 1
            break
        sw = np.sqrt(w)
        # Newton step as weighted least squares on the working response
        q, r = np.linalg.qr(sw[:, None] * x)
        step = np.linalg.solve(r, q.T @ ((y - mu) / sw))
        new_coef = coef + step
        new_mu = _sigmoid(x @ new_coef)
        new_dev = _bernoulli_deviance(y, new_mu)
        halvings = 0
        while (not np.isfinite(new_dev) or new_dev > deviance + 1e-10) and halvings < 30:
            step /= 2.0
            new_coef = coef + step
            new_mu = _sigmoid(x @ new_coef)
            new_dev = _bernoulli_deviance(y, new_mu)
            halvings += 1
        coef, mu, deviance = new_coef, new_mu, new_dev
        if not np.all(np.isfinite(coef)):
            raise Separation("coefficients diverged (non-finite values)")
        if p > 1 and np.max(np.abs(coef[1:]) * col_scale) > SEPARATION_COEF_HARD_BOUND:
            raise Separation("coefficients diverging: data are (quasi-)separated")
    else:
        converged = False
        if p > 1 and np.max(np.abs(coef[1:]) * col_scale) > SEPARATION_COEF_BOUND:
            raise Separation(
                "coefficients still growing without score convergence: "
                "data are (quasi-)separated"
            )
    if deviance < DEVIANCE_COLLAPSE:
        raise Separation("deviance collapsed to zero: data are separated")

    w = mu * (1.0 - mu)
    q, r = np.linalg.qr(np.sqrt(w)[:, None] * x)
    r_inv = np.linalg.inv(r)
    cov = r_inv @ r_inv.T
    se = np.sqrt(np.diag(cov))
    # exponent clipped at +/-700 so intervals of saturated terms stay finite
    odds = np.exp(np.clip(coef, -700.0, 700.0))
    ci_low = np.exp(np.clip(coef - Z_95 * se, -700.0, 700.0))
    ci_high = np.exp(np.clip(coef + Z_95 * se, -700.0, 700.0))
    loglik = -deviance / 2.0
    aic = deviance + 2.0 * p
    return LogisticFit(outcome, tuple(regressors), coef, se, odds, ci_low, ci_high,
                       deviance, loglik, aic, converged, iterations, n, p)


@dataclass(frozen=True)
class PartialCurve:
    """Predicted outcome along one regressor, the others pinned at medians."""

    focal: str
    grid: np.ndarray
    predicted: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray

    def to_dict(self) -> dict:
        return {
            "focal": self.focal,
            "grid": self.grid.tolist(),
            "predicted": self.predicted.tolist(),
            "ci_low": self.ci_low.tolist(),
            "ci_high": self.ci_high.tolist(),
        }


def partial_curve(fit: OlsFit, data: Dataset, focal: str,
                  grid_size: int = 100) -> PartialCurve:
    """Prediction curve for ``focal`` over its observed range.

    Non-focal regressors are pinned at their dataset medians; the pointwise
    95% band comes from the coefficient covariance of the linear predictor.
    """
    if focal not in fit.regressors:
        raise UnknownRegressor(f"{focal!r} is not a regressor of fit {fit.label()!r}")
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    grid = np.linspace(data.column(focal).min(), data.column(focal).max(), grid_size)
    rows = np.empty((grid_size, fit.p))
    rows[:, 0] = 1.0
    for j, name in enumerate(fit.regressors, start=1):
        rows[:, j] = grid if name == focal else np.median(data.column(name))
    predicted = rows @ fit.coef
    band = Z_95 * np.sqrt(np.einsum("ij,jk,ik->i", rows, fit.cov, rows))
    return PartialCurve(focal, grid, predicted, predicted - band, predicted + band)


def forest_rows(fits: Sequence[LogisticFit], term: str) -> list[tuple[str, float, float, float]]:
    """One ``(label, odds ratio, ci_low, ci_high)`` row per fit, in input order."""
    rows = []
    for fit in fits:
        odds, lo, hi = fit.or_of(term)
        rows.append((fit.label(), odds, lo, hi))
    return rows
