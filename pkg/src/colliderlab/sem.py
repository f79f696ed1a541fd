"""Linear-Gaussian structural equation models: compilation, generation, oracles.

Each variable is an ordered assignment ``value = intercept + sum(coef * parent)
+ Normal(mean, sd)``; binary indicators threshold an existing variable.
Generation is seeded and chunked: observations are processed in fixed blocks
of :data:`GENERATION_CHUNK` rows, block ``c`` drawing from a PCG64 generator
seeded by ``SeedSequence(entropy=seed, spawn_key=(c,))``. Within a block every
observation consumes exactly one standard-normal draw per assignment, in
declaration order (numpy's ziggurat sampler, row-major), even when the noise
sd is zero or the variable is intervened on. The stream layout therefore never
shifts when coefficients change, and chunk-parallel generation reproduces the
sequential output bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import (
    ConstantColumn,
    DuplicateVariable,
    ForwardReference,
    NegativeSd,
    SingularDesign,
    UnknownVariable,
)
from .graph import Dag, build_dag

GENERATION_CHUNK = 65536

# singular-value ratio below which a moment matrix counts as rank-deficient
SINGULAR_TOL = 1e-10


@dataclass(frozen=True)
class Term:
    var: str
    coef: float


@dataclass(frozen=True)
class Noise:
    mean: float = 0.0
    sd: float = 1.0


@dataclass(frozen=True)
class Assignment:
    name: str
    intercept: float = 0.0
    parents: tuple[Term, ...] = ()
    noise: Noise = Noise()


@dataclass(frozen=True)
class Indicator:
    """Binary column thresholding ``source``; ``op`` is strict or inclusive."""

    name: str
    source: str
    cutoff: float
    op: Literal["gt", "ge"] = "gt"


@dataclass(frozen=True)
class SemSpec:
    """Ordered assignments plus threshold indicators.

    Declaration order must already be topological: every parent appears
    earlier in the assignment list (checked by :func:`compile_sem`).
    """

    assignments: tuple[Assignment, ...] = ()
    indicators: tuple[Indicator, ...] = ()

    def to_dict(self) -> dict:
        return {
            "assign": [
                {
                    "name": a.name,
                    "intercept": a.intercept,
                    "parents": [{"var": t.var, "coef": t.coef} for t in a.parents],
                    "noise": {"mean": a.noise.mean, "sd": a.noise.sd},
                }
                for a in self.assignments
            ],
            "indicator": [
                {"name": i.name, "source": i.source, "cutoff": i.cutoff, "op": i.op}
                for i in self.indicators
            ],
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class CompiledSem:
    """Validated model: declaration order is the topological order.

    ``dag`` is derived with one node per assignment plus one per indicator
    (edge from its source), so graph audits and generation share a single
    structure.
    """

    spec: SemSpec
    order: tuple[str, ...]
    dag: Dag
    digest: str

    @property
    def assignments(self) -> tuple[Assignment, ...]:
        return self.spec.assignments

    @property
    def indicators(self) -> tuple[Indicator, ...]:
        return self.spec.indicators

    def variable_names(self) -> tuple[str, ...]:
        return self.order + tuple(i.name for i in self.indicators)


def compile_sem(spec: SemSpec) -> CompiledSem:
    """Validate ``spec`` and derive its DAG.

    Raises:
        ForwardReference: a parent is used before (or without) being defined.
        DuplicateVariable: an assignment or indicator name repeats.
        NegativeSd: a noise sd is negative.
        UnknownVariable: an indicator sources an undefined assignment.
    """
    defined: set[str] = set()
    for a in spec.assignments:
        if a.name in defined:
            raise DuplicateVariable(f"assignment {a.name!r} defined twice")
        for t in a.parents:
            if t.var not in defined:
                raise ForwardReference(
                    f"assignment {a.name!r} uses {t.var!r} before it is defined"
                )
        if a.noise.sd < 0:
            raise NegativeSd(f"assignment {a.name!r} has sd {a.noise.sd}")
        defined.add(a.name)
    for ind in spec.indicators:
        if ind.name in defined:
            raise DuplicateVariable(f"indicator {ind.name!r} collides with another variable")
        if ind.source not in {a.name for a in spec.assignments}:
            raise UnknownVariable(f"indicator {ind.name!r} sources undefined {ind.source!r}")
        if ind.op not in ("gt", "ge"):
            raise ValueError(f"indicator {ind.name!r}: op must be 'gt' or 'ge'")
        defined.add(ind.name)

    order = tuple(a.name for a in spec.assignments)
    nodes = list(order) + [i.name for i in spec.indicators]
    edges = [(t.var, a.name) for a in spec.assignments for t in a.parents]
    edges += [(i.source, i.name) for i in spec.indicators]
    dag = build_dag(nodes, edges)
    return CompiledSem(spec, order, dag, spec.digest())


@dataclass(frozen=True)
class Provenance:
    seed: int | None
    spec_digest: str | None


@dataclass(frozen=True)
class Dataset:
    """Column table of generated observations; immutable after creation."""

    n: int
    columns: dict[str, np.ndarray]
    provenance: Provenance = Provenance(None, None)

    def __post_init__(self):
        for name, col in self.columns.items():
            if col.shape != (self.n,):
                raise ValueError(f"column {name!r} has length {col.shape}, expected {self.n}")
            col.flags.writeable = False

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise UnknownVariable(f"no column named {name!r}") from None

    def names(self) -> tuple[str, ...]:
        return tuple(self.columns)


def _normalize_seed(seed: int) -> int:
    # SeedSequence needs non-negative entropy; map negatives via 64-bit wrap
    return seed if seed >= 0 else seed % (1 << 64)


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=_normalize_seed(seed), spawn_key=(chunk,))
    return np.random.default_rng(ss)


def generate(sem: CompiledSem, n: int, seed: int) -> Dataset:
    """Draw ``n`` observations; identical ``(sem, n, seed)`` is bit-identical."""
    return generate_do(sem, {}, n, seed)


def generate_do(sem: CompiledSem, intervened: Mapping[str, float], n: int,
                seed: int) -> Dataset:
    """Generate under ``do(var = value)`` interventions.

    Intervened variables are held at their constants in place of their
    structural equation; downstream assignments see the constant, upstream
    ones are untouched. The noise draw of an intervened variable is still
    consumed (and discarded), so the realization of every other variable
    matches the unintervened dataset for the same seed.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    assignment_names = set(sem.order)
    for name in intervened:
        if name not in assignment_names:
            raise UnknownVariable(f"cannot intervene on {name!r}: not an assignment")

    cols = {a.name: np.empty(n) for a in sem.assignments}
    k = len(sem.assignments)
    for c, lo in enumerate(range(0, n, GENERATION_CHUNK)):
        hi = min(lo + GENERATION_CHUNK, n)
        rng = _chunk_rng(seed, c)
        z = rng.standard_normal((hi - lo, k)) if k else np.empty((hi - lo, 0))
        for j, a in enumerate(sem.assignments):
            if a.name in intervened:
                cols[a.name][lo:hi] = float(intervened[a.name])
                continue
            value = a.intercept + a.noise.mean + a.noise.sd * z[:, j]
            for t in a.parents:
                value += t.coef * cols[t.var][lo:hi]
            cols[a.name][lo:hi] = value

    for ind in sem.indicators:
        source = cols[ind.source]
        hit = source > ind.cutoff if ind.op == "gt" else source >= ind.cutoff
        cols[ind.name] = hit.astype(float)

    return Dataset(n, cols, Provenance(seed, sem.digest))


@dataclass(frozen=True)
class ImpliedMoments:
    """Exact population mean vector and covariance of the continuous variables."""

    names: tuple[str, ...]
    mean: np.ndarray
    cov: np.ndarray

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a continuous model variable") from None

    def mean_of(self, name: str) -> float:
        return float(self.mean[self.index(name)])

    def cov_of(self, a: str, b: str) -> float:
        return float(self.cov[self.index(a), self.index(b)])

    def var_of(self, name: str) -> float:
        return self.cov_of(name, name)


def implied_moments(sem: CompiledSem) -> ImpliedMoments:
    """Moments of the linear-Gaussian system by forward recursion.

    With B the strictly lower-triangular coefficient matrix in declaration
    order, X = (I-B)^-1 (intercepts + noise) gives mean (I-B)^-1 m and
    covariance (I-B)^-1 D (I-B)^-T with D = diag(sd^2). Indicators excluded.
    """
    k = len(sem.assignments)
    names = sem.order
    if k == 0:
        return ImpliedMoments((), np.zeros(0), np.zeros((0, 0)))
    idx = {name: i for i, name in enumerate(names)}
    B = np.zeros((k, k))
    shift = np.zeros(k)
    sds = np.zeros(k)
    for i, a in enumerate(sem.assignments):
        for t in a.parents:
            B[i, idx[t.var]] = t.coef
        shift[i] = a.intercept + a.noise.mean
        sds[i] = a.noise.sd
    A = np.linalg.solve(np.eye(k) - B, np.eye(k))
    mean = A @ shift
    cov = (A * sds**2) @ A.T
    cov = (cov + cov.T) / 2.0
    return ImpliedMoments(names, mean, cov)


def population_ols(sem: CompiledSem, outcome: str,
                   regressors: Sequence[str]) -> dict[str, float]:
    """Large-sample limit of sample OLS, from the implied moments.

    Solves ``Sigma_XX b = Sigma_XY``; intercept is ``E[outcome] - b'E[X]``.
    Returns a coefficient map with key ``"intercept"`` first.

    Raises SingularDesign when the regressor moment matrix has a singular
    value below ``SINGULAR_TOL`` times its largest.
    """
    mom = implied_moments(sem)
    yi = mom.index(outcome)
    xi = [mom.index(r) for r in regressors]
    sxx = mom.cov[np.ix_(xi, xi)]
    sxy = mom.cov[xi, yi]
    if len(xi) > 0:
        svals = np.linalg.svd(sxx, compute_uv=False)
        if svals[-1] < SINGULAR_TOL * svals[0]:
            raise SingularDesign(
                f"regressor moments are rank-deficient (singular-value ratio "
                f"{svals[-1] / svals[0]:.2e})"
            )
        b = np.linalg.solve(sxx, sxy)
    else:
        b = np.zeros(0)
    intercept = mom.mean[yi] - b @ mom.mean[xi]
    out = {"intercept": float(intercept)}
    for name, coef in zip(regressors, b):
        out[name] = float(coef)
    return out


@dataclass(frozen=True)
class ColumnSummary:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float


def describe(data: Dataset) -> dict[str, ColumnSummary]:
    """Six-number summary per column; quartiles by linear interpolation."""
    if data.n < 1:
        raise ValueError("describe needs at least one observation")
    out: dict[str, ColumnSummary] = {}
    for name, col in data.columns.items():
        q1, med, q3 = np.quantile(col, [0.25, 0.5, 0.75])
        out[name] = ColumnSummary(
            float(col.min()), float(q1), float(med),
            float(col.mean()), float(q3), float(col.max()),
        )
    return out


def _average_ranks(x: np.ndarray) -> np.ndarray:
    # ties get the mean of the ranks they span
    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    cum = np.cumsum(counts)
    rank_of_value = cum - (counts - 1) / 2.0
    return rank_of_value[inverse]


def spearman_matrix(data: Dataset, vars: Sequence[str]) -> np.ndarray:
    """Spearman rank-correlation matrix with average-rank ties handling."""
    if data.n < 2:
        raise ValueError("rank correlation needs at least two observations")
    ranks = []
    for name in vars:
        col = data.column(name)
        if np.all(col == col[0]):
            raise ConstantColumn(f"column {name!r} is constant; rho undefined")
        ranks.append(_average_ranks(col))
    rho = np.corrcoef(np.vstack(ranks))
    np.fill_diagonal(rho, 1.0)
    return rho
