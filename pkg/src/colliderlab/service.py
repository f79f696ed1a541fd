"""Stateless HTTP service behind the interactive explorer.

Every request carries its own seed, so identical requests produce identical
response bytes; nothing is stored server-side. Fit failures that are a
legitimate consequence of extreme coefficient choices (separation, collinear
designs) surface as structured 422 payloads; bound violations are 400s with
field-level messages.
"""

from __future__ import annotations

import os

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import __version__
from .errors import ColliderLabError, FitError
from .graph import check_adjustment_set
from .library import (
    AGE,
    AGE_NODE,
    HYPERTENSION,
    PROTEINURIA,
    PROTEINURIA_NODE,
    SBP,
    SBP_NODE,
    SODIUM,
    SODIUM_NODE,
    sodium_pressure_dag,
    sodium_pressure_model,
)
from .montecarlo import analytic_collider_coef, derive_seed, run_sweep
from .regression import fit_logistic, fit_ols, partial_curve
from .sem import generate

SWEEP_CELL_CAP = 200

OLS_MODELS = {
    "crude": (SODIUM,),
    "age_adjusted": (SODIUM, AGE),
    "collider_adjusted": (SODIUM, AGE, PROTEINURIA),
}


class SimulateRequest(BaseModel):
    beta1: float = Field(allow_inf_nan=False)
    alpha1: float = Field(allow_inf_nan=False)
    alpha2: float = Field(allow_inf_nan=False)
    n: int = Field(ge=100, le=100_000)
    seed: int
    include_points: bool = False
    max_points: int = Field(default=1000, ge=1, le=100_000)


def simulate_payload(req: SimulateRequest) -> dict:
    """Generate one dataset per the request and fit all six models.

    The dataset seed resolves to ``derive_seed(seed, 0)``, which makes the
    endpoint reproduce replicate 0 of an ``mc`` run with the same master
    seed (the basis of the UI's copy-command affordance).
    """
    resolved_seed = derive_seed(req.seed, 0)
    sem = sodium_pressure_model(req.beta1, 2.00, req.alpha1, req.alpha2)
    data = generate(sem, req.n, resolved_seed)

    fits = {name: fit_ols(data, SBP, regs) for name, regs in OLS_MODELS.items()}
    logistic = {
        f"logistic_{name}": fit_logistic(data, HYPERTENSION, regs)
        for name, regs in OLS_MODELS.items()
    }
    curves = {
        name: partial_curve(fit, data, SODIUM, grid_size=50).to_dict()
        for name, fit in fits.items()
    }

    true_coef = fits["age_adjusted"].coef_of(SODIUM)
    collider_coef = fits["collider_adjusted"].coef_of(SODIUM)
    gap = true_coef - abs(collider_coef)

    points = None
    if req.include_points:
        if data.n > req.max_points:
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=resolved_seed, spawn_key=(1, 0))
            )
            keep = np.sort(rng.choice(data.n, size=req.max_points, replace=False))
        else:
            keep = np.arange(data.n)
        points = {
            SODIUM: data.column(SODIUM)[keep].tolist(),
            SBP: data.column(SBP)[keep].tolist(),
        }

    return {
        "request": req.model_dump(),
        "resolved_seed": resolved_seed,
        "fits": {name: fit.to_dict() for name, fit in fits.items()}
        | {name: fit.to_dict() for name, fit in logistic.items()},
        "analytic_collider_coef": analytic_collider_coef(req.beta1, req.alpha1, req.alpha2),
        "bias": {
            "bias_magnitude": gap,
            "relative_bias_pct": 100.0 * gap / true_coef,
            "bias_simple": collider_coef - req.beta1,
        },
        "curves": curves,
        "points": points,
        "version": __version__,
    }


def dag_payload() -> dict:
    dag = sodium_pressure_dag()
    verdicts = []
    for adjust in ((), (AGE_NODE,), (AGE_NODE, PROTEINURIA_NODE)):
        verdict = check_adjustment_set(dag, SODIUM_NODE, SBP_NODE, adjust)
        verdicts.append({"adjust": list(adjust)} | verdict.to_dict())
    return {
        "nodes": list(dag.nodes),
        "edges": [list(e) for e in dag.edges],
        "exposure": SODIUM_NODE,
        "outcome": SBP_NODE,
        "verdicts": verdicts,
    }


def parse_grid(text: str) -> list[float]:
    """Parse ``start:stop[:step]`` (inclusive) or a comma list of reals."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) == 2:
            start, stop, step = float(parts[0]), float(parts[1]), 1.0
        elif len(parts) == 3:
            start, stop, step = float(parts[0]), float(parts[1]), float(parts[2])
        else:
            raise ValueError(f"bad grid {text!r}: expected start:stop[:step]")
        if step <= 0:
            raise ValueError(f"bad grid {text!r}: step must be positive")
        if stop < start:
            raise ValueError(f"bad grid {text!r}: stop below start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(v) for v in text.split(",") if v.strip()]


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="colliderlab", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        detail = [
            {
                "field": ".".join(str(loc) for loc in err["loc"][1:]) or str(err["loc"][0]),
                "message": err["msg"],
            }
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "validation", "detail": detail})

    @app.exception_handler(FitError)
    async def on_fit_error(request: Request, exc: FitError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ColliderLabError)
    async def on_library_error(request: Request, exc: ColliderLabError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.post("/api/simulate")
    def api_simulate(req: SimulateRequest):
        return simulate_payload(req)

    @app.get("/api/sweep")
    def api_sweep(
        beta1: str = Query(),
        alphas: str = Query(),
        n: int = Query(default=1000, ge=100, le=100_000),
        seed: int = Query(default=777),
    ):
        try:
            beta1_values = parse_grid(beta1)
            alpha_values = parse_grid(alphas)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"error": "grid", "detail": str(exc)})
        cells = len(beta1_values) * len(alpha_values)
        if cells == 0 or cells > SWEEP_CELL_CAP:
            return JSONResponse(
                status_code=400,
                content={
                    "error": "grid",
                    "detail": f"grid has {cells} cells; allowed range is 1..{SWEEP_CELL_CAP}",
                },
            )
        rows = run_sweep(beta1_values, alpha_values, n, seed)
        return {
            "n": n,
            "seed": seed,
            "rows": [
                {
                    "beta1": r.beta1,
                    "alpha": r.alpha,
                    "estimate": r.estimate,
                    "analytic": r.analytic,
                    "abs_bias": r.abs_bias,
                }
                for r in rows
            ],
        }

    @app.get("/api/dag")
    def api_dag():
        return dag_payload()

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
