"""Regenerate the bundled model-file fixtures under src/ontocheck/data/fixtures."""

import json
from pathlib import Path

from ontocheck.cli.modelfile import dumps, to_document
from ontocheck.ontology import (
    build_hidden_outcome_model,
    build_incomplete_tomography_model,
    build_near_degenerate_model,
    build_no_free_choice_counterexample,
    gen_compliant_model,
)
from ontocheck.spacetime import SpacetimeVariable

OUT = Path(__file__).resolve().parents[1] / "src" / "ontocheck" / "data" / "fixtures"


def spacetime():
    coords = {"Psi": (-2, 0, 0, 0), "Lambda": (-1, 0, 0, 0), "A": (0, 0, 0, 0), "X": (1, 0, 0, 0)}
    return {n: SpacetimeVariable(n, c) for n, c in coords.items()}


def dense_preset_document():
    """Hand-written style: Pauli presets, every assignment listed explicitly."""
    s = 2 ** -0.5
    states = {"zero": [[1, 0], [0, 0]], "plus": [[s, 0], [s, 0]]}
    born = {
        ("zero", "x"): {"0": 0.5, "1": 0.5}, ("zero", "y"): {"0": 0.5, "1": 0.5}, ("zero", "z"): {"0": 1.0, "1": 0.0},
        ("plus", "x"): {"0": 1.0, "1": 0.0}, ("plus", "y"): {"0": 0.5, "1": 0.5}, ("plus", "z"): {"0": 0.5, "1": 0.5},
    }
    lambdas = ["l_zero", "l_plus"]
    owner = {"l_zero": "zero", "l_plus": "plus"}
    prior = [{"assignment": {"Lambda": l, "Psi": p}, "weight": 0.5 if owner[l] == p else 0.0}
             for l in lambdas for p in states]
    response = [{"assignment": {"Lambda": l, "Psi": p, "A": a}, "outcome_distribution": born[(owner[l], a)]}
                for l in lambdas for p in states for a in "xyz"]
    return {
        "name": "dense preset model",
        "dimension": 2,
        "states": [{"label": k, "amplitudes": v} for k, v in states.items()],
        "measurements": [{"label": a, "probability": 1 / 3, "preset": f"pauli-{a}"} for a in "xyz"],
        "lambda_values": lambdas,
        "prior": prior,
        "response": response,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    files = {
        "compliant_qubit.json": dumps(gen_compliant_model(2, 2, seed=1), spacetime()),
        "compliant_qutrit.json": dumps(gen_compliant_model(3, 3, seed=3)),
        "no_free_choice.json": dumps(build_no_free_choice_counterexample()),
        "single_measurement.json": dumps(build_incomplete_tomography_model()),
        "hidden_outcome.json": dumps(build_hidden_outcome_model()),
        "near_degenerate.json": dumps(build_near_degenerate_model()),
        "dense_preset.json": json.dumps(dense_preset_document(), indent=1) + "\n",
    }
    bad = to_document(gen_compliant_model(2, 2, seed=1))
    bad["name"] = "bad projectors"
    bad["measurements"][1]["projectors"][0]["matrix"] = [[1, 0], [0, 0], [0, 0], [0, 0]]
    files["bad_projectors.json"] = json.dumps(bad, indent=1) + "\n"
    text = files["compliant_qubit.json"]
    files["truncated.json"] = text[: len(text) // 2]
    for name, text in files.items():
        (OUT / name).write_text(text, encoding="utf-8")
        print("wrote", OUT / name)


if __name__ == "__main__":
    main()
