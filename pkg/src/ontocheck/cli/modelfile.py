"""JSON model files: parsing, validation and serialization.

Structural problems (bad JSON, wrong types, missing keys) raise
:class:`ModelFileError`; semantic problems (non-normalized weights, invalid
projectors, unknown labels, ...) are collected and raised together as a
:class:`~ontocheck.errors.ValidationError`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from ..errors import OntocheckError, ValidationError
from ..ontology.model import LAMBDA, PSI, RESERVED, SETTING, OntologicalModel
from ..prob import EPS_NORM, EPS_SUPPORT, JointDistribution, VariableSpace
from ..quantum import Measurement, MeasurementSet, PureState, measurement_problems, pauli_measurement
from ..spacetime import SpacetimeVariable

PRESETS = {"pauli-x": "x", "pauli-y": "y", "pauli-z": "z"}


class ModelFileError(OntocheckError):
    """The document cannot be parsed into the model-file structure."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def load_schema(name: str) -> dict:
    return json.loads(resources.files("ontocheck.schemas").joinpath(name).read_text(encoding="utf-8"))


@dataclass
class ModelFile:
    model: OntologicalModel
    spacetime: dict = field(default_factory=dict)  # name -> SpacetimeVariable


def _pointer(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_text(text: str, source: str = "<model>") -> ModelFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse_document(doc)


def load(path) -> ModelFile:
    path = Path(path)
    return parse_text(path.read_text(encoding="utf-8"), str(path))


def _complex_vector(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs])


def parse_document(doc) -> ModelFile:
    validator = jsonschema.Draft202012Validator(load_schema("model.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ModelFileError(_pointer(err.absolute_path), err.message)

    problems = []
    d = doc["dimension"]

    states = []
    for i, s in enumerate(doc["states"]):
        amps = _complex_vector(s["amplitudes"])
        where = f"states[{i}]"
        if amps.size != d:
            problems.append(f"{where}: {amps.size} amplitudes for dimension {d}")
            continue
        try:
            states.append(PureState(amps, str(s["label"])))
        except ValidationError as exc:
            problems.extend(f"{where}: {p}" for p in exc.problems)

    measurements, p_a = [], {}
    for i, m in enumerate(doc["measurements"]):
        label = str(m["label"])
        where = f"measurements[{i}]"
        p_a[label] = float(m["probability"])
        if "preset" in m:
            if d != 2:
                problems.append(f"{where}: preset {m['preset']!r} requires dimension 2")
                continue
            measurements.append(pauli_measurement(PRESETS[m["preset"]], label))
            continue
        projs, bad = {}, False
        for j, p in enumerate(m["projectors"]):
            mat = _complex_vector(p["matrix"])
            if mat.size != d * d:
                problems.append(f"{where}.projectors[{j}]: matrix has {mat.size} entries, expected {d * d}")
                bad = True
                continue
            x = str(p["outcome"])
            if x in projs:
                problems.append(f"{where}.projectors[{j}]: duplicate outcome {x!r}")
                bad = True
            projs[x] = mat.reshape(d, d)
        if bad:
            continue
        msgs = measurement_problems(label, projs)
        if msgs:
            problems.extend(f"{where}: {p}" for p in msgs)
            continue
        measurements.append(Measurement(label, projs))

    ms = None
    if len(measurements) == len(doc["measurements"]):
        try:
            ms = MeasurementSet(tuple(measurements), p_a)
        except ValidationError as exc:
            problems.extend(f"measurements: {p}" for p in exc.problems)

    extras = []
    for i, e in enumerate(doc.get("extra_gamma", [])):
        if e["name"] in RESERVED:
            problems.append(f"extra_gamma[{i}]: name {e['name']!r} is reserved")
            continue
        try:
            extras.append(VariableSpace(e["name"], tuple(str(v) for v in e["values"])))
        except ValidationError as exc:
            problems.extend(f"extra_gamma[{i}]: {p}" for p in exc.problems)
    try:
        lam = VariableSpace(LAMBDA, tuple(str(v) for v in doc["lambda_values"]))
    except ValidationError as exc:
        problems.extend(f"lambda_values: {p}" for p in exc.problems)
        lam = None

    if problems or ms is None or lam is None or len(states) != len(doc["states"]):
        raise ValidationError(problems)
    try:
        psi = VariableSpace(PSI, tuple(s.label for s in states))
    except ValidationError as exc:
        raise ValidationError([f"states: {p}" for p in exc.problems]) from None

    gamma = (lam, psi) + tuple(extras)
    sparse = bool(doc.get("sparse", False))
    gamma_shape = tuple(len(s) for s in gamma)
    a_space = VariableSpace(SETTING, ms.labels)
    outcomes = ms.outcomes

    def index_of(assignment, spaces, where):
        keys = {str(k): str(v) for k, v in assignment.items()}
        names = [s.name for s in spaces]
        if set(keys) != set(names):
            problems.append(f"{where}: assignment must name exactly {names}, got {sorted(keys)}")
            return None
        idx = []
        for sp in spaces:
            if keys[sp.name] not in sp.values:
                problems.append(f"{where}: {keys[sp.name]!r} is not a value of {sp.name}")
                return None
            idx.append(sp.values.index(keys[sp.name]))
        return tuple(idx)

    prior = np.zeros(gamma_shape)
    seen_prior = np.zeros(gamma_shape, dtype=bool)
    for i, entry in enumerate(doc["prior"]):
        where = f"prior[{i}]"
        idx = index_of(entry["assignment"], gamma, where)
        if idx is None:
            continue
        if seen_prior[idx]:
            problems.append(f"{where}: duplicate assignment")
        if entry["weight"] < 0:
            problems.append(f"{where}: negative weight")
        prior[idx] += entry["weight"]
        seen_prior[idx] = True
    if not sparse and not seen_prior.all():
        problems.append(f"prior: {int((~seen_prior).sum())} assignment(s) omitted; set \"sparse\": true to default them to 0")
    if abs(prior.sum() - 1.0) > EPS_NORM:
        problems.append(f"prior: weights sum to {prior.sum()!r}, not 1")

    setting = None
    if "setting" in doc:
        setting = np.zeros(gamma_shape + (len(a_space),))
        seen = np.zeros(gamma_shape, dtype=bool)
        for i, entry in enumerate(doc["setting"]):
            where = f"setting[{i}]"
            idx = index_of(entry["assignment"], gamma, where)
            if idx is None:
                continue
            if seen[idx]:
                problems.append(f"{where}: duplicate assignment")
            seen[idx] = True
            for a, p in entry["setting_distribution"].items():
                if a not in a_space.values:
                    problems.append(f"{where}: unknown setting {a!r}")
                    continue
                setting[idx + (a_space.values.index(a),)] = p
            row = setting[idx]
            if np.any(row < 0) or abs(row.sum() - 1) > EPS_NORM:
                problems.append(f"{where}: setting distribution is not normalized")
        for idx in zip(*np.nonzero(~seen)):
            if not sparse or prior[idx] > EPS_SUPPORT:
                problems.append(f"setting: no entry for supported assignment {_describe(gamma, idx)}")
            setting[idx] = 1.0 / len(a_space)

    response = np.zeros(gamma_shape + (len(a_space), len(outcomes)))
    seen_resp = np.zeros(gamma_shape + (len(a_space),), dtype=bool)
    spaces_a = gamma + (a_space,)
    for i, entry in enumerate(doc["response"]):
        where = f"response[{i}]"
        idx = index_of(entry["assignment"], spaces_a, where)
        if idx is None:
            continue
        if seen_resp[idx]:
            problems.append(f"{where}: duplicate assignment")
        seen_resp[idx] = True
        m = ms[a_space.values[idx[-1]]]
        for x, p in entry["outcome_distribution"].items():
            if x not in m.outcomes:
                problems.append(f"{where}: {x!r} is not an outcome of measurement {m.label!r}")
                continue
            response[idx + (outcomes.index(x),)] = p
        row = response[idx]
        if np.any(row < 0) or abs(row.sum() - 1) > EPS_NORM:
            problems.append(f"{where}: outcome distribution sums to {row.sum()!r}, not 1")
    if not sparse and not seen_resp.all():
        problems.append(f"response: {int((~seen_resp).sum())} row(s) omitted; set \"sparse\": true to allow omissions")
    for idx in zip(*np.nonzero(~seen_resp)):
        if prior[idx[:-1]] > EPS_SUPPORT and (setting is None or setting[idx] > EPS_SUPPORT) \
                and ms.setting_distribution[a_space.values[idx[-1]]] > EPS_SUPPORT:
            problems.append(f"response: no entry for supported assignment {_describe(spaces_a, idx)}")
        m = ms[a_space.values[idx[-1]]]
        for x in m.outcomes:
            response[idx + (outcomes.index(x),)] = 1.0 / len(m.outcomes)

    spacetime = {}
    known = set(s.name for s in gamma) | {SETTING, "X"}
    for name, coords in doc.get("spacetime", {}).items():
        if name not in known:
            problems.append(f"spacetime: {name!r} is not a model variable")
            continue
        spacetime[name] = SpacetimeVariable(name, tuple(coords))

    if problems:
        raise ValidationError(problems)
    model = OntologicalModel(lam, tuple(states), ms, JointDistribution(gamma, prior), response,
                             tuple(extras), setting, name=doc.get("name", "model"))
    return ModelFile(model, spacetime)


def _describe(spaces, idx) -> str:
    return "{" + ", ".join(f"{s.name}={s.values[i]}" for s, i in zip(spaces, idx)) + "}"


def _pairs(arr) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(arr).ravel()]


def to_document(model: OntologicalModel, spacetime: dict | None = None) -> dict:
    """Sparse JSON document; only supported prior cells and their response rows are written."""
    ms = model.measurement_set
    gamma = model.gamma_spaces
    doc = {
        "name": model.name,
        "dimension": model.dim,
        "sparse": True,
        "states": [{"label": s.label, "amplitudes": _pairs(s.amplitudes)} for s in model.states],
        "measurements": [
            {"label": m.label, "probability": ms.setting_distribution[m.label],
             "projectors": [{"outcome": x, "matrix": _pairs(p)} for x, p in m.projectors.items()]}
            for m in ms.measurements
        ],
        "lambda_values": list(model.lambda_space.values),
    }
    if model.extra_gamma:
        doc["extra_gamma"] = [{"name": s.name, "values": list(s.values)} for s in model.extra_gamma]
    prior, response, setting = [], [], []
    a_labels = model.setting_space.values
    x_labels = model.outcome_space.values
    for idx in itertools.product(*(range(len(s)) for s in gamma)):
        w = float(model.prior.table[idx])
        if w <= 0.0:
            continue
        assignment = {s.name: s.values[i] for s, i in zip(gamma, idx)}
        prior.append({"assignment": assignment, "weight": w})
        if model.setting is not None:
            setting.append({"assignment": assignment,
                            "setting_distribution": {a: float(model.setting[idx + (j,)])
                                                     for j, a in enumerate(a_labels)}})
        for j, a in enumerate(a_labels):
            m = ms[a]
            row = {x: float(model.response[idx + (j, x_labels.index(x))]) for x in m.outcomes}
            response.append({"assignment": {**assignment, SETTING: a}, "outcome_distribution": row})
    doc["prior"] = prior
    doc["response"] = response
    if model.setting is not None:
        doc["setting"] = setting
    if spacetime:
        doc["spacetime"] = {n: list(sv.coordinates) for n, sv in spacetime.items()}
    return doc


def dumps(model: OntologicalModel, spacetime: dict | None = None) -> str:
    return json.dumps(to_document(model, spacetime), indent=1) + "\n"
