"""The finite ontological model type and its joint law."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import ValidationError
from ..prob import EPS_NORM, JointDistribution, VariableSpace
from ..quantum import MeasurementSet, PureState

LAMBDA = "Lambda"
PSI = "Psi"
SETTING = "A"
OUTCOME = "X"
RESERVED = (LAMBDA, PSI, SETTING, OUTCOME)


@dataclass(frozen=True, eq=False)
class OntologicalModel:
    """Finite model of a prepare-and-measure experiment.

    The pre-measurement information is ``Gamma = (Lambda, Psi, *extra_gamma)``.

    Attributes
    ----------
    lambda_space
        Values of the ontic variable ``Lambda``.
    states
        Values of ``Psi``; all of one dimension, labels unique.
    measurement_set
        Settings ``A`` and the setting distribution ``P_A``.
    prior
        Joint law of ``(Lambda, Psi, *extras)`` with exactly those names and
        that axis order.
    response
        ``P_{X|Lambda,Psi,extras,A}`` as an array with axes
        ``(Lambda, Psi, *extras, A, X)``; ``X`` ranges over the union of
        outcome labels of all measurements.
    extra_gamma
        Additional pre-measurement variables.
    setting
        Optional ``P_{A|Lambda,Psi,extras}`` with axes ``(Lambda, Psi, *extras, A)``.
        ``None`` means the setting is drawn from ``P_A`` independently of
        ``Gamma``.  When present, ``P_A`` of ``measurement_set`` is ignored in
        favour of the induced marginal.
    """

    lambda_space: VariableSpace
    states: tuple
    measurement_set: MeasurementSet
    prior: JointDistribution
    response: np.ndarray
    extra_gamma: tuple = ()
    setting: np.ndarray | None = None
    name: str = "model"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "extra_gamma", tuple(self.extra_gamma))
        resp = np.array(self.response, dtype=float)
        resp.setflags(write=False)
        object.__setattr__(self, "response", resp)
        if self.setting is not None:
            st = np.array(self.setting, dtype=float)
            st.setflags(write=False)
            object.__setattr__(self, "setting", st)
        problems = self.problems()
        if problems:
            raise ValidationError(problems)

    def problems(self) -> list:
        out = []
        if self.lambda_space.name != LAMBDA:
            out.append(f"lambda space must be named {LAMBDA!r}")
        if not self.states:
            out.append("at least one state is required")
            return out
        labels = [s.label for s in self.states]
        if len(set(labels)) != len(labels):
            out.append("state labels must be unique")
        dims = {s.dim for s in self.states}
        if len(dims) != 1:
            out.append("states have different dimensions")
        elif dims != {self.measurement_set.dim}:
            out.append("state dimension differs from measurement dimension")
        for sp in self.extra_gamma:
            if sp.name in RESERVED:
                out.append(f"extra variable name {sp.name!r} is reserved")
        if out:
            return out
        expected = tuple(s.name for s in self.gamma_spaces)
        if self.prior.names != expected or self.prior.spaces != self.gamma_spaces:
            out.append(f"prior must be over {expected} with matching value labels")
        shape = self.gamma_shape + (len(self.setting_space), len(self.outcome_space))
        if self.response.shape != shape:
            out.append(f"response has shape {self.response.shape}, expected {shape}")
        else:
            if np.any(self.response < 0):
                out.append("response probabilities must be nonnegative")
            bad = np.abs(self.response.sum(axis=-1) - 1.0) > EPS_NORM
            if bad.any():
                n = int(bad.sum())
                out.append(f"{n} response row(s) do not sum to 1")
        if self.setting is not None:
            sshape = self.gamma_shape + (len(self.setting_space),)
            if self.setting.shape != sshape:
                out.append(f"setting table has shape {self.setting.shape}, expected {sshape}")
            elif np.any(self.setting < 0) or np.any(np.abs(self.setting.sum(axis=-1) - 1) > EPS_NORM):
                out.append("setting rows must be probability distributions")
        return out

    @property
    def psi_space(self) -> VariableSpace:
        return VariableSpace(PSI, tuple(s.label for s in self.states))

    @property
    def gamma_spaces(self) -> tuple:
        return (self.lambda_space, self.psi_space) + self.extra_gamma

    @property
    def gamma_shape(self) -> tuple:
        return tuple(len(s) for s in self.gamma_spaces)

    @property
    def extra_names(self) -> list:
        return [s.name for s in self.extra_gamma]

    @property
    def setting_space(self) -> VariableSpace:
        return VariableSpace(SETTING, self.measurement_set.labels)

    @property
    def outcome_space(self) -> VariableSpace:
        return VariableSpace(OUTCOME, self.measurement_set.outcomes)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def state(self, label: str) -> PureState:
        for s in self.states:
            if s.label == label:
                return s
        raise KeyError(label)

    def setting_table(self) -> np.ndarray:
        """``P_{A|Gamma}`` broadcast to axes ``(Lambda, Psi, *extras, A)``."""
        if self.setting is not None:
            return self.setting
        p_a = np.array([self.measurement_set.setting_distribution[a] for a in self.setting_space.values])
        return np.broadcast_to(p_a, self.gamma_shape + (len(p_a),))

    @classmethod
    def build(
        cls,
        lambda_values: Sequence,
        states: Sequence[PureState],
        measurement_set: MeasurementSet,
        prior: Mapping[tuple, float],
        response: Callable[..., Mapping[str, float]],
        extra_gamma: Sequence[VariableSpace] = (),
        setting: Callable[..., Mapping[str, float]] | None = None,
        name: str = "model",
    ) -> "OntologicalModel":
        """Assemble a model from a sparse prior and response callables.

        ``prior`` maps ``(lambda, psi_label, *extras)`` to weights.
        ``response(lam, psi, extras, a)`` returns ``{outcome: prob}`` where
        ``extras`` is a tuple of extra-variable values; ``setting(lam, psi,
        extras)`` returns ``{a: prob}``.
        """
        lam = VariableSpace(LAMBDA, tuple(lambda_values))
        psi = VariableSpace(PSI, tuple(s.label for s in states))
        spaces = (lam, psi) + tuple(extra_gamma)
        prior_d = JointDistribution.from_dict(spaces, prior)
        a_labels = measurement_set.labels
        x_labels = measurement_set.outcomes
        shape = tuple(len(s) for s in spaces)
        resp = np.zeros(shape + (len(a_labels), len(x_labels)))
        st = None if setting is None else np.zeros(shape + (len(a_labels),))
        for idx in itertools.product(*(range(n) for n in shape)):
            values = [sp.values[i] for sp, i in zip(spaces, idx)]
            extras = tuple(values[2:])
            for j, a in enumerate(a_labels):
                row = response(values[0], values[1], extras, a)
                for x, p in row.items():
                    resp[idx + (j, x_labels.index(x))] = p
            if st is not None:
                for a, p in setting(values[0], values[1], extras).items():
                    st[idx + (a_labels.index(a),)] = p
        return cls(lam, tuple(states), measurement_set, prior_d, resp, tuple(extra_gamma), st, name)


def full_joint(m: OntologicalModel) -> JointDistribution:
    """Law of ``(Lambda, Psi, *extras, A, X)`` = prior x P_{A|Gamma} x response."""
    pa = m.setting_table()
    table = m.prior.table[..., None, None] * pa[..., None] * m.response
    return JointDistribution(m.gamma_spaces + (m.setting_space, m.outcome_space), table)
