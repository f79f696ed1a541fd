"""File formats: model spec files (TOML or JSON), DAG JSON, dataset CSV.

A model spec file holds ordered ``[[assign]]`` blocks and optional
``[[indicator]]`` blocks::

    [[assign]]
    name = "Age_years"
    intercept = 0.0
    parents = []
    noise = {mean = 65.0, sd = 5.0}

    [[indicator]]
    name = "hypertension"
    source = "sbp_in_mmHg"
    cutoff = 140.0
    op = "gt"

The JSON mirror uses the same keys (``{"assign": [...], "indicator": [...]}``).
Dataset CSV carries one header row and reals at 17 significant digits, which
round-trips binary doubles exactly.
"""

from __future__ import annotations

import csv
import json
import os
from typing import IO, Iterable

import numpy as np
import tomli

from .errors import SpecFormatError
from .graph import Dag, build_dag
from .sem import Assignment, Dataset, Indicator, Noise, Provenance, SemSpec, Term

REAL_FORMAT = "%.17g"


def format_real(x: float) -> str:
    return REAL_FORMAT % x


# --- model spec files -------------------------------------------------------

def parse_sem_spec(raw: dict) -> SemSpec:
    """Build a SemSpec from the parsed TOML/JSON structure."""
    assigns = []
    for i, block in enumerate(raw.get("assign", [])):
        try:
            noise = block.get("noise", {})
            assigns.append(Assignment(
                name=str(block["name"]),
                intercept=float(block.get("intercept", 0.0)),
                parents=tuple(
                    Term(str(t["var"]), float(t["coef"])) for t in block.get("parents", [])
                ),
                noise=Noise(float(noise.get("mean", 0.0)), float(noise.get("sd", 1.0))),
            ))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SpecFormatError(f"assign block {i + 1}: {exc}") from exc
    indicators = []
    for i, block in enumerate(raw.get("indicator", [])):
        try:
            indicators.append(Indicator(
                str(block["name"]), str(block["source"]), float(block["cutoff"]),
                str(block.get("op", "gt")),
            ))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SpecFormatError(f"indicator block {i + 1}: {exc}") from exc
    return SemSpec(tuple(assigns), tuple(indicators))


def load_sem_spec(path: str | os.PathLike) -> SemSpec:
    """Read a spec file; ``.json`` parses as JSON, anything else as TOML."""
    path = os.fspath(path)
    try:
        if path.endswith(".json"):
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        else:
            with open(path, "rb") as fh:
                raw = tomli.load(fh)
    except (tomli.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecFormatError(f"{path}: top level must be a table/object")
    return parse_sem_spec(raw)


def dump_sem_toml(spec: SemSpec) -> str:
    """Serialize a spec to the canonical TOML block layout."""
    lines: list[str] = []
    for a in spec.assignments:
        lines.append("[[assign]]")
        lines.append(f'name = "{a.name}"')
        lines.append(f"intercept = {_toml_real(a.intercept)}")
        parents = ", ".join(
            f'{{var = "{t.var}", coef = {_toml_real(t.coef)}}}' for t in a.parents
        )
        lines.append(f"parents = [{parents}]")
        lines.append(
            f"noise = {{mean = {_toml_real(a.noise.mean)}, sd = {_toml_real(a.noise.sd)}}}"
        )
        lines.append("")
    for ind in spec.indicators:
        lines.append("[[indicator]]")
        lines.append(f'name = "{ind.name}"')
        lines.append(f'source = "{ind.source}"')
        lines.append(f"cutoff = {_toml_real(ind.cutoff)}")
        lines.append(f'op = "{ind.op}"')
        lines.append("")
    return "\n".join(lines)


def _toml_real(x: float) -> str:
    # repr is the shortest exact round-trip; TOML floats need a point/exponent
    text = repr(float(x))
    return text if any(c in text for c in ".eE") else text + ".0"


# --- DAG JSON ----------------------------------------------------------------

def load_dag(path: str | os.PathLike) -> Dag:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(f"{os.fspath(path)}: {exc}") from exc
    try:
        return build_dag(raw["nodes"], [tuple(e) for e in raw["edges"]])
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(
            f"{os.fspath(path)}: expected {{'nodes': [...], 'edges': [[from, to], ...]}}"
        ) from exc


def dump_dag(dag: Dag) -> str:
    return json.dumps(dag.to_dict(), indent=2) + "\n"


# --- dataset CSV --------------------------------------------------------------

def write_dataset_csv(data: Dataset, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    names = data.names()
    writer.writerow(names)
    columns = [data.columns[name] for name in names]
    for i in range(data.n):
        writer.writerow([format_real(col[i]) for col in columns])


def read_dataset_csv(path: str | os.PathLike) -> Dataset:
    """Load a dataset written by :func:`write_dataset_csv`.

    Lines starting with ``#`` are skipped; provenance records only a content
    digest since the generating seed is not part of the format.
    """
    import hashlib

    with open(path, encoding="utf-8") as fh:
        rows = [line for line in fh if line.strip() and not line.startswith("#")]
    if not rows:
        raise SpecFormatError(f"{os.fspath(path)}: empty dataset file")
    reader = csv.reader(rows)
    header = next(reader)
    try:
        matrix = np.array([[float(v) for v in row] for row in reader])
    except ValueError as exc:
        raise SpecFormatError(f"{os.fspath(path)}: non-numeric cell ({exc})") from exc
    if matrix.ndim != 2 or matrix.shape[1] != len(header):
        raise SpecFormatError(f"{os.fspath(path)}: ragged rows")
    digest = hashlib.sha256("".join(rows).encode()).hexdigest()
    columns = {name: matrix[:, j].copy() for j, name in enumerate(header)}
    return Dataset(matrix.shape[0], columns, Provenance(None, digest))
