#!/usr/bin/env python3
"""Regenerate the canonical fixture files under fixtures/ and figures/.

Model spec fixtures are serialized from the library constructors so the files
and the in-code models can never drift; tests assert the round trip.
"""

import json
import pathlib

from colliderlab import library
from colliderlab.io import dump_sem_toml

ROOT = pathlib.Path(__file__).resolve().parent.parent

DAGS = {
    "fig1a.dag.json": {
        "nodes": ["A", "W", "Y"],
        "edges": [["W", "A"], ["W", "Y"], ["A", "Y"]],
    },
    "fig1b.dag.json": {
        "nodes": ["A", "C", "Y"],
        "edges": [["A", "C"], ["Y", "C"], ["A", "Y"]],
    },
    "fig1c.dag.json": {
        "nodes": ["A", "C", "W1", "W2", "Y"],
        "edges": [["W1", "A"], ["W1", "C"], ["W2", "C"], ["W2", "Y"], ["A", "Y"]],
    },
    "fig3.dag.json": {
        "nodes": ["AGE", "SOD", "SBP", "PRO"],
        "edges": [["AGE", "SOD"], ["AGE", "SBP"], ["SOD", "SBP"], ["SOD", "PRO"],
                  ["SBP", "PRO"]],
    },
}

SPECS = {
    "box1.sem": library.confounder_demo().spec,
    "box2.sem": library.collider_demo().spec,
    "box3.sem": library.sodium_pressure_spec(),
}


def main():
    figures = ROOT / "figures"
    fixtures = ROOT / "fixtures"
    figures.mkdir(exist_ok=True)
    fixtures.mkdir(exist_ok=True)
    for name, payload in DAGS.items():
        (figures / name).write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote figures/{name}")
    for name, spec in SPECS.items():
        (fixtures / name).write_text(dump_sem_toml(spec))
        print(f"wrote fixtures/{name}")


if __name__ == "__main__":
    main()
