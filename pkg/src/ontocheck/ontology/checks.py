"""Checkers for the hypotheses and conclusion of the psi-completeness argument.

Markov conditions are evaluated in the prediction direction: for
``Gamma <-> (Lambda, A) <-> X`` the deviation is the largest total-variation
distance between ``P_{X|Lambda,A,Gamma-rest}`` and ``P_{X|Lambda,A}``.  A
Markov chain is symmetric, so this vanishes exactly when the chain holds,
and it makes the consistency bound ``dev(consistency) <= dev(completeness)
+ dev(non-extendibility)`` a triangle inequality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..prob import DEFAULT_TOL, EPS_SUPPORT, independence_deviation, markov_deviation
from ..quantum import MeasurementSet, born_rule, span_rank, states_equal_up_to_phase
from .model import LAMBDA, OUTCOME, PSI, SETTING, OntologicalModel, full_joint

# name -> (condition, citation)
CONDITIONS = {
    "quantum statistics": ("P_{X|Psi=psi,A=a}(x) = <psi|Pi^a_x|psi>", "QMa"),
    "free choice": ("P_{A|Gamma} = P_A", "free choice"),
    "completeness": ("Gamma <-> (Lambda, A) <-> X", "Eq. 1"),
    "non-extendibility": ("Lambda <-> (Psi, A) <-> X", "Eq. 2"),
    "tomographic completeness": ("span{Pi^a_x : P_A(a) > 0} = Herm(d)", "proof"),
    "consistency": ("P_{X|Psi=psi,A=a} = P_{X|Lambda=lambda,A=a}", "Eq. 3"),
    "free choice (spacetime)": ("P_{A Omega'} = P_A x P_{Omega'}", "SV free choice"),
    "bipartite free choice": ("P_{A|B,Y,Gamma} = P_A, P_{B|A,X,Gamma} = P_B", "bipartite free choice"),
}

HYPOTHESES = ("quantum statistics", "free choice", "completeness", "non-extendibility",
              "tomographic completeness")


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    @property
    def condition(self) -> str:
        return CONDITIONS.get(self.name, ("", ""))[0]

    @property
    def reference(self) -> str:
        return CONDITIONS.get(self.name, ("", ""))[1]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "condition": self.condition,
            "reference": self.reference,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


def _result(name, deviation, tol, detail=""):
    return CheckResult(name, max(float(deviation), 0.0), float(tol), detail)


def _conditional(t: np.ndarray, given_axes: tuple) -> tuple:
    """``P_{X|given}`` for a table whose last axis is X; returns (cond, mass)."""
    drop = tuple(i for i in range(t.ndim - 1) if i not in given_axes)
    marg = t.sum(axis=drop) if drop else t
    mass = marg.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = marg / mass[..., None]
    return cond, mass


def check_free_choice(m: OntologicalModel, tol: float = DEFAULT_TOL, joint=None) -> CheckResult:
    joint = full_joint(m) if joint is None else joint
    gamma = [LAMBDA, PSI] + m.extra_names
    return _result("free choice", independence_deviation(joint, [SETTING], gamma), tol)


def check_qma(m: OntologicalModel, tol: float = DEFAULT_TOL, joint=None) -> CheckResult:
    """Largest TV distance between the model's ``P_{X|psi,a}`` and the Born rule."""
    joint = full_joint(m) if joint is None else joint
    t = joint.array([PSI, SETTING, OUTCOME])
    cond, mass = _conditional(t, (0, 1))
    outcomes = m.outcome_space.values
    worst, where = 0.0, ""
    for i, s in enumerate(m.states):
        for j, a in enumerate(m.setting_space.values):
            if mass[i, j] <= EPS_SUPPORT:
                continue
            born = born_rule(s, m.measurement_set[a])
            ref = np.array([born.get(x, 0.0) for x in outcomes])
            dev = 0.5 * float(np.abs(cond[i, j] - ref).sum())
            if dev > worst:
                worst, where = dev, f"psi={s.label}, a={a}"
    return _result("quantum statistics", worst, tol, where)


def check_completeness_eq1(m: OntologicalModel, tol: float = DEFAULT_TOL, joint=None) -> CheckResult:
    joint = full_joint(m) if joint is None else joint
    dev = markov_deviation(joint, [OUTCOME], [LAMBDA, SETTING], [PSI] + m.extra_names)
    return _result("completeness", dev, tol)


def check_nonextendibility_eq2(m: OntologicalModel, tol: float = DEFAULT_TOL, joint=None) -> CheckResult:
    joint = full_joint(m) if joint is None else joint
    dev = markov_deviation(joint, [OUTCOME], [PSI, SETTING], [LAMBDA] + m.extra_names)
    return _result("non-extendibility", dev, tol)


def check_consistency_eq3(m: OntologicalModel, tol: float = DEFAULT_TOL, joint=None) -> CheckResult:
    """Largest ``tv(P_{X|psi,a}, P_{X|lambda,a})`` over supported ``(lambda, psi, a)``."""
    joint = full_joint(m) if joint is None else joint
    t = joint.array([LAMBDA, PSI, SETTING, OUTCOME])
    by_psi, _ = _conditional(t, (1, 2))
    by_lam, _ = _conditional(t, (0, 2))
    support = t.sum(axis=-1) > EPS_SUPPORT
    if not support.any():
        return _result("consistency", 0.0, tol)
    diff = 0.5 * np.abs(by_psi[None, :, :, :] - by_lam[:, None, :, :]).sum(axis=-1)
    return _result("consistency", diff[support].max(), tol)


def check_tomographic_completeness(m: OntologicalModel, joint=None) -> CheckResult:
    """Missing span dimensions ``d^2 - rank`` of the supported projectors.

    Support is taken from the model's actual setting marginal, so a
    measurement that is never chosen does not count.
    """
    ms = m.measurement_set
    if m.setting is not None:
        joint = full_joint(m) if joint is None else joint
        p_a = joint.array([SETTING])
        ms = MeasurementSet(ms.measurements, dict(zip(ms.labels, p_a / p_a.sum())))
    rank = span_rank(ms)
    missing = m.dim ** 2 - rank
    return _result("tomographic completeness", missing, 0.0, f"span rank {rank} of {m.dim ** 2}")


@dataclass(frozen=True)
class PsiDetermination:
    """Supported wave functions for each supported ontic value."""

    support: dict
    determined: bool

    def ambiguous(self) -> dict:
        return {lam: psis for lam, psis in self.support.items() if len(psis) > 1}

    def to_dict(self) -> dict:
        return {"determined": self.determined,
                "support": {str(k): list(v) for k, v in self.support.items()}}


def psi_determination(m: OntologicalModel, phase_tol: float = 1e-9) -> PsiDetermination:
    """Map each supported lambda to the states it is jointly supported with.

    States equal up to global phase count as one value.
    """
    t = m.prior.array([LAMBDA, PSI])
    support = {}
    determined = True
    for i, lam in enumerate(m.lambda_space.values):
        if t[i].sum() <= EPS_SUPPORT:
            continue
        psis = [m.states[j] for j in range(len(m.states)) if t[i, j] > EPS_SUPPORT]
        support[lam] = tuple(s.label for s in psis)
        classes = []
        for s in psis:
            if not any(states_equal_up_to_phase(s, c, phase_tol) for c in classes):
                classes.append(s)
        if len(classes) > 1:
            determined = False
    return PsiDetermination(support, determined)


@dataclass(frozen=True)
class TheoremReport:
    model: str
    checks: tuple
    consistency: CheckResult
    determination: PsiDetermination

    @property
    def applicable(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def violation(self) -> bool:
        return self.applicable and not self.determination.determined

    def check(self, name: str) -> CheckResult:
        for c in self.checks + (self.consistency,):
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def verdict(self) -> str:
        if self.violation:
            return "THEOREM VIOLATION"
        if self.applicable:
            return "determined"
        failed = ", ".join(c.name for c in self.checks if not c.passed)
        state = "determined" if self.determination.determined else "not determined"
        return f"theorem not applicable ({failed} failed); {state}"

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "checks": [c.to_dict() for c in self.checks],
            "derived": [self.consistency.to_dict()],
            "psi_determination": self.determination.to_dict(),
            "applicable": self.applicable,
            "theorem_violation": self.violation,
            "verdict": self.verdict,
        }


def run_theorem_check(m: OntologicalModel, tol: float = DEFAULT_TOL, phase_tol: float = 1e-9) -> TheoremReport:
    """Evaluate every hypothesis, the derived consistency condition and psi-determination.

    When all hypotheses pass the model must be psi-determined; a model that
    passes them and is not determined is flagged as a violation.
    """
    joint = full_joint(m)
    checks = (
        check_qma(m, tol, joint),
        check_free_choice(m, tol, joint),
        check_completeness_eq1(m, tol, joint),
        check_nonextendibility_eq2(m, tol, joint),
        check_tomographic_completeness(m, joint),
    )
    return TheoremReport(m.name, checks, check_consistency_eq3(m, tol, joint), psi_determination(m, phase_tol))
