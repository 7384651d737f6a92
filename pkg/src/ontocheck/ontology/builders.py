"""Generators for compliant models and the standard counterexamples."""

from __future__ import annotations

import numpy as np

from ..errors import ArgumentError
from ..prob import JointDistribution, VariableSpace
from ..quantum import (
    MAX_DIM,
    MeasurementSet,
    PureState,
    basis_state,
    born_rule,
    computational_basis,
    haar_state,
    pairwise_tomography_set,
    pauli_set,
)
from .model import OntologicalModel


def _born_response(states_by_label, ms):
    def response(lam, psi, extras, a):
        return born_rule(states_by_label[psi], ms[a])
    return response


def gen_compliant_model(dim: int, n_states: int, seed: int, aux: int = 2,
                        states=None) -> OntologicalModel:
    """Random psi-complete model that satisfies every hypothesis.

    ``Lambda = (psi index, auxiliary uniform value)``; the response is the
    Born rule of the state encoded in lambda, the measurement set is
    :func:`pairwise_tomography_set` with a random strictly positive ``P_A``.
    Pass ``states`` to override the Haar-random draw.
    """
    if not 2 <= dim <= MAX_DIM:
        raise ArgumentError(f"dim must lie in [2, {MAX_DIM}]")
    if n_states < 2 or aux < 1:
        raise ArgumentError("need n_states >= 2 and aux >= 1")
    rng = np.random.default_rng(seed)
    if states is None:
        states = [haar_state(dim, rng, f"psi{i}") for i in range(n_states)]
    else:
        states = list(states)
        if len(states) != n_states:
            raise ArgumentError("len(states) must equal n_states")
    labels = [s.label for s in states]
    n_meas = 1 + dim * (dim - 1)
    p_a = rng.dirichlet(np.ones(n_meas)) * 0.9 + 0.1 / n_meas
    ms = pairwise_tomography_set(dim)
    ms = MeasurementSet(ms.measurements, dict(zip(ms.labels, p_a / p_a.sum())))
    p_psi = rng.dirichlet(np.ones(n_states)) * 0.9 + 0.1 / n_states
    p_psi = p_psi / p_psi.sum()
    lambdas = [f"{i}:{k}" for i in range(n_states) for k in range(aux)]
    prior = {(f"{i}:{k}", labels[i]): p_psi[i] / aux for i in range(n_states) for k in range(aux)}
    by_lambda = {lam: states[int(lam.split(":")[0])] for lam in lambdas}

    def response(lam, psi, extras, a):
        return born_rule(by_lambda[lam], ms[a])

    return OntologicalModel.build(lambdas, states, ms, prior, response,
                                  name=f"compliant(d={dim}, n={n_states}, seed={seed})")


def perturb_model(m: OntologicalModel, scale: float, seed: int,
                  prior: bool = True) -> OntologicalModel:
    """Add uniform noise of size up to ``scale`` to prior and response, renormalized.

    Every entry, including zero ones, is nudged.  Noise on the prior gives
    weight to previously unsupported ``(lambda, psi)`` pairs, whose
    conditionals can differ by O(1) however small ``scale`` is; pass
    ``prior=False`` to perturb the response only, which moves the Markov
    deviations by O(scale).
    """
    rng = np.random.default_rng(seed)
    noise = scale * rng.random(m.prior.table.shape)
    table = m.prior.table + noise if prior else m.prior.table.copy()
    table /= table.sum()
    resp = m.response + scale * rng.random(m.response.shape)
    resp /= resp.sum(axis=-1, keepdims=True)
    return OntologicalModel(m.lambda_space, m.states, m.measurement_set,
                            JointDistribution(m.prior.spaces, table), resp,
                            m.extra_gamma, m.setting, name=f"{m.name}+noise({scale:g}, seed={seed}, prior={prior})")


def build_no_free_choice_counterexample() -> OntologicalModel:
    """Qubit model in which the ontic state is just the outcome.

    A pre-existing record ``R`` fixes the setting (``A = R``) and ``Lambda``
    holds the outcome that will be observed, drawn with Born probabilities
    for ``(psi, R)``.  Completeness holds trivially, free choice fails, and
    the outcome value ``0`` is compatible with both preparations.
    """
    ms = pauli_set()
    states = [basis_state(2, 0, "zero"), PureState.normalized([1, 1], "plus")]
    record = VariableSpace("R", ms.labels)
    prior = {}
    for s in states:
        for r in ms.labels:
            for x, p in born_rule(s, ms[r]).items():
                if p > 0:
                    prior[(x, s.label, r)] = prior.get((x, s.label, r), 0.0) + 0.5 * p / len(ms.labels)
    return OntologicalModel.build(
        ms.outcomes, states, ms, prior,
        response=lambda lam, psi, extras, a: {lam: 1.0},
        extra_gamma=(record,),
        setting=lambda lam, psi, extras: {extras[0]: 1.0},
        name="no-free-choice counterexample",
    )


def build_incomplete_tomography_model() -> OntologicalModel:
    """One lambda shared by ``|+>`` and ``|+i>`` with only a Z measurement.

    Both states give uniform Z statistics, so every hypothesis except
    tomographic completeness holds while Psi is not determined.
    """
    states = [PureState.normalized([1, 1], "plus"), PureState.normalized([1, 1j], "plus_i")]
    ms = MeasurementSet((computational_basis(2),))
    by_label = {s.label: s for s in states}
    prior = {("shared", "plus"): 0.5, ("shared", "plus_i"): 0.5}
    return OntologicalModel.build(["shared"], states, ms, prior, _born_response(by_label, ms),
                                  name="single-measurement model")


def build_hidden_outcome_model() -> OntologicalModel:
    """Deterministic hidden variable for ``|+>`` measured in Z.

    ``Lambda`` is a fair coin that fixes the outcome.  The Born statistics are
    reproduced on average, but ``Lambda`` predicts ``X`` better than ``Psi``:
    the non-extendibility deviation is 0.5.
    """
    states = [PureState.normalized([1, 1], "plus")]
    ms = MeasurementSet((computational_basis(2),))
    prior = {("0", "plus"): 0.5, ("1", "plus"): 0.5}
    return OntologicalModel.build(["0", "1"], states, ms, prior,
                                  lambda lam, psi, extras, a: {lam: 1.0},
                                  name="hidden-outcome model")


def build_near_degenerate_model(angle: float = 1e-4) -> OntologicalModel:
    """Two states ``angle`` apart sharing one lambda, Born response, Pauli set.

    At loose check tolerances (around ``10 * angle``) every hypothesis
    passes while the states are still distinguishable at the default phase
    tolerance, which the theorem report flags as a violation.  Used to
    exercise that path; at the default tolerance the model fails completeness.
    """
    states = [basis_state(2, 0, "zero"),
              PureState.normalized([np.cos(angle), np.sin(angle)], "tilted")]
    ms = pauli_set()
    by_label = {s.label: s for s in states}
    prior = {("shared", "zero"): 0.5, ("shared", "tilted"): 0.5}
    return OntologicalModel.build(["shared"], states, ms, prior, _born_response(by_label, ms),
                                  name="near-degenerate model")


def build_born_model(states, ms: MeasurementSet, name="born model") -> OntologicalModel:
    """``Lambda`` is a copy of the state label; response is the Born rule."""
    by_label = {s.label: s for s in states}
    n = len(states)
    prior = {(s.label, s.label): 1.0 / n for s in states}
    return OntologicalModel.build([s.label for s in states], states, ms, prior,
                                  _born_response(by_label, ms), name=name)
