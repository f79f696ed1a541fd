"""Command-line entry points for scripted reproduction of every capability.

Exit codes: 0 success, 2 usage or spec-file errors, 3 numeric/model failures.
Data (CSV or JSON) goes to stdout or ``--out``; a provenance line naming the
package version, spec digest and seed goes to stderr so output files stay
machine-clean and byte-reproducible.
"""

from __future__ import annotations

import io as _io
import json
import sys

import click

from . import __version__
from .errors import ColliderLabError, SemError, SpecFormatError
from .graph import check_adjustment_set, enumerate_paths, is_path_blocked
from .io import format_real, load_dag, load_sem_spec, read_dataset_csv, write_dataset_csv
from .montecarlo import Scenario, run_mc, run_sweep
from .regression import fit_logistic, fit_ols
from .sem import CompiledSem, compile_sem, describe, generate
from .service import create_app, parse_grid

DEFAULT_SEED = 777


def _provenance(**fields) -> None:
    pairs = " ".join(f"{k}={v}" for k, v in fields.items())
    click.echo(f"# colliderlab {__version__} {pairs}", err=True)


def _load_compiled(path: str) -> CompiledSem:
    try:
        return compile_sem(load_sem_spec(path))
    except (SpecFormatError, SemError) as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(2)


def _fail(exc: ColliderLabError) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(3)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


@click.group()
@click.version_option(__version__)
def main():
    """Simulation laboratory for collider bias."""


@main.command("generate")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "n", required=True, type=click.IntRange(min=1))
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output CSV path (default stdout).")
def cmd_generate(spec_path, n, seed, out):
    """Generate a dataset from a model spec file as CSV."""
    sem = _load_compiled(spec_path)
    data = generate(sem, n, seed)
    buffer = _io.StringIO()
    write_dataset_csv(data, buffer)
    _provenance(spec=sem.digest[:12], seed=seed, n=n)
    _write_output(buffer.getvalue(), out)


@main.command("fit")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--outcome", required=True)
@click.option("--regressors", required=True, help="Comma-separated regressor names.")
@click.option("--family", type=click.Choice(["linear", "logistic"]), default="linear",
              show_default=True)
@click.option("--max-iter", type=int, default=50, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
def cmd_fit(data_path, outcome, regressors, family, max_iter, tol):
    """Fit a regression on a dataset CSV and print the JSON report."""
    try:
        data = read_dataset_csv(data_path)
    except SpecFormatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    names = [r.strip() for r in regressors.split(",") if r.strip()]
    try:
        if family == "linear":
            fit = fit_ols(data, outcome, names)
        else:
            fit = fit_logistic(data, outcome, names, max_iter=max_iter, tol=tol)
    except ColliderLabError as exc:
        _fail(exc)
    _provenance(data=data.provenance.spec_digest[:12], family=family)
    click.echo(json.dumps(fit.to_dict(), indent=2))


@main.command("mc")
@click.option("--beta1", type=float, default=1.05, show_default=True)
@click.option("--beta2", type=float, default=2.00, show_default=True)
@click.option("--alpha1", type=float, default=2.80, show_default=True)
@click.option("--alpha2", type=float, default=2.00, show_default=True)
@click.option("-n", "n", type=click.IntRange(min=10), default=10_000, show_default=True)
@click.option("-R", "--replicates", "replicates", type=click.IntRange(min=1), default=1000,
              show_default=True)
@click.option("--seed", type=int, default=50472, show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker threads (affects speed only, never output).")
def cmd_mc(beta1, beta2, alpha1, alpha2, n, replicates, seed, threads):
    """Replicated simulation comparing the true and collider-adjusted models."""
    sc = Scenario(beta1=beta1, beta2=beta2, alpha1=alpha1, alpha2=alpha2,
                  n=n, replicates=replicates, seed=seed)
    try:
        summary = run_mc(sc, workers=threads)
    except ColliderLabError as exc:
        _fail(exc)
    _provenance(seed=seed, n=n, replicates=replicates)
    click.echo(json.dumps(summary.to_dict(), indent=2))


@main.command("sweep")
@click.option("--beta1", required=True, help="Grid: start:stop[:step] or comma list.")
@click.option("--alpha", required=True, help="Grid: start:stop[:step] or comma list.")
@click.option("-n", "n", type=click.IntRange(min=10), default=1000, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_sweep(beta1, alpha, n, seed, fmt, out):
    """Grid of collider-model fits over true effects and collider strengths."""
    try:
        beta1_values = parse_grid(beta1)
        alpha_values = parse_grid(alpha)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        rows = run_sweep(beta1_values, alpha_values, n, seed)
    except ColliderLabError as exc:
        _fail(exc)
    _provenance(seed=seed, n=n, cells=len(rows))
    if fmt == "csv":
        lines = ["beta1,alpha,estimate,analytic,abs_bias"]
        lines += [
            ",".join(format_real(v) for v in (r.beta1, r.alpha, r.estimate, r.analytic, r.abs_bias))
            for r in rows
        ]
        _write_output("\n".join(lines) + "\n", out)
    else:
        payload = [
            {"beta1": r.beta1, "alpha": r.alpha, "estimate": r.estimate,
             "analytic": r.analytic, "abs_bias": r.abs_bias}
            for r in rows
        ]
        _write_output(json.dumps(payload, indent=2) + "\n", out)


@main.command("dag-check")
@click.argument("dag_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--exposure", required=True)
@click.option("--outcome", required=True)
@click.option("--adjust", default="", help="Comma-separated adjustment set.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def cmd_dag_check(dag_path, exposure, outcome, adjust, fmt):
    """Audit an adjustment set against the back-door criterion."""
    try:
        dag = load_dag(dag_path)
    except SpecFormatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    adjust_set = tuple(a.strip() for a in adjust.split(",") if a.strip())
    try:
        verdict = check_adjustment_set(dag, exposure, outcome, adjust_set)
        paths = enumerate_paths(dag, exposure, outcome)
        statuses = [
            (str(p), "blocked" if is_path_blocked(dag, p, adjust_set) else "open")
            for p in paths
        ]
    except ColliderLabError as exc:
        _fail(exc)
    if fmt == "json":
        click.echo(json.dumps(
            {"adjust": list(adjust_set)} | verdict.to_dict()
            | {"paths": [{"path": s, "status": st} for s, st in statuses]},
            indent=2,
        ))
        return
    click.echo(f"adjustment set {{{', '.join(adjust_set) or ''}}} for "
               f"{exposure} -> {outcome}: {'VALID' if verdict.valid else 'INVALID'}")
    click.echo("paths:")
    for text, status in statuses:
        click.echo(f"  [{status:>7}] {text}")
    if verdict.open_backdoor_paths:
        click.echo("open back-door paths:")
        for p in verdict.open_backdoor_paths:
            click.echo(f"  {p}")
    if verdict.opened_collider_paths:
        click.echo("paths opened by conditioning:")
        for p in verdict.opened_collider_paths:
            click.echo(f"  {p}")
    if verdict.descendants_of_exposure_in_set:
        click.echo("descendants of the exposure in the set: "
                   + ", ".join(verdict.descendants_of_exposure_in_set))


@main.command("describe")
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("-n", "n", type=click.IntRange(min=1), default=1000, show_default=True,
              help="Rows to generate when using --spec.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
def cmd_describe(data_path, spec_path, n, seed, fmt):
    """Six-number summary per column of a dataset (or a fresh generation)."""
    if (data_path is None) == (spec_path is None):
        raise click.UsageError("provide exactly one of --data or --spec")
    if data_path is not None:
        try:
            data = read_dataset_csv(data_path)
        except SpecFormatError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        _provenance(data=data.provenance.spec_digest[:12])
    else:
        sem = _load_compiled(spec_path)
        data = generate(sem, n, seed)
        _provenance(spec=sem.digest[:12], seed=seed, n=n)
    summary = describe(data)
    if fmt == "json":
        click.echo(json.dumps(
            {name: vars(s) for name, s in summary.items()}, indent=2))
    else:
        click.echo("column,min,q1,median,mean,q3,max")
        for name, s in summary.items():
            cells = (s.min, s.q1, s.median, s.mean, s.q3, s.max)
            click.echo(name + "," + ",".join(format_real(v) for v in cells))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--static", "static_dir", type=click.Path(file_okay=False), default="frontend/dist",
              show_default=True, help="Directory of the built web UI (skipped if absent).")
def cmd_serve(host, port, static_dir):
    """Run the interactive explorer service."""
    import uvicorn

    uvicorn.run(create_app(static_dir=static_dir), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
