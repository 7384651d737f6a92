"""Random variables located in Minkowski spacetime (units with c = 1).

Null separation counts as inside the future lightcone; equal time
coordinates never do.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ArgumentError, ShapeError
from .ontology.checks import CheckResult
from .prob import DEFAULT_TOL, JointDistribution, conditional_shift, independence_deviation

LIGHTCONE_TOL = 0.0


@dataclass(frozen=True)
class SpacetimeVariable:
    name: str
    coordinates: tuple

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coordinates)
        if len(coords) != 4:
            raise ShapeError("coordinates must be (t, r1, r2, r3)")
        object.__setattr__(self, "coordinates", coords)

    @property
    def t(self) -> float:
        return self.coordinates[0]

    @property
    def r(self) -> np.ndarray:
        return np.array(self.coordinates[1:])


def in_future_lightcone(b: SpacetimeVariable, a: SpacetimeVariable) -> bool:
    """True iff ``b`` lies in the (closed) future lightcone of ``a``."""
    dt = b.t - a.t
    return dt > 0 and float(np.linalg.norm(b.r - a.r)) <= dt + LIGHTCONE_TOL


could_have_been_caused_by = in_future_lightcone


def omega_prime(a: SpacetimeVariable, omega: Iterable[SpacetimeVariable]) -> list:
    """Members of ``omega`` outside the future lightcone of ``a``."""
    return [w for w in omega if not in_future_lightcone(w, a)]


def boost(coords: Sequence[float], velocity: float, axis: int = 1) -> tuple:
    """Lorentz boost along spatial ``axis`` (1, 2 or 3) with speed ``velocity``."""
    if not 1 <= axis <= 3:
        raise ArgumentError("axis must be 1, 2 or 3")
    if abs(velocity) >= 1:
        raise ArgumentError("|velocity| must be below 1")
    gamma = 1.0 / np.sqrt(1.0 - velocity ** 2)
    t, x = coords[0], coords[axis]
    out = list(coords)
    out[0] = gamma * (t - velocity * x)
    out[axis] = gamma * (x - velocity * t)
    return tuple(out)


def is_free_sv(a: SpacetimeVariable, omega: Iterable[SpacetimeVariable], d: JointDistribution,
               tol: float = DEFAULT_TOL) -> CheckResult:
    """Is ``a`` independent of every member of ``omega`` outside its future lightcone?"""
    omega = list(omega)
    d.axis(a.name)
    for w in omega:
        d.axis(w.name)
    outside = [w.name for w in omega_prime(a, omega) if w.name != a.name]
    dev = independence_deviation(d, [a.name], outside) if outside else 0.0
    return CheckResult("free choice (spacetime)", dev, tol, f"{a.name} vs {outside}")


def _role(roles: Mapping[str, object], key: str) -> list:
    v = roles.get(key, [])
    return [v] if isinstance(v, str) else list(v)


def bipartite_free_choice_check(d: JointDistribution, roles: Mapping[str, object],
                                tol: float = DEFAULT_TOL) -> CheckResult:
    """``P_{A|B,Y,Gamma} = P_A`` and ``P_{B|A,X,Gamma} = P_B``.

    ``roles`` maps ``"A"``, ``"B"``, ``"X"``, ``"Y"`` and optionally
    ``"Gamma"`` to variable names (a name or a list of names).  The deviation
    is the larger of the two worst-case conditional shifts.
    """
    sets = {k: _role(roles, k) for k in ("A", "B", "X", "Y", "Gamma")}
    for k in ("A", "B", "X", "Y"):
        if not sets[k]:
            raise ArgumentError(f"role {k!r} is unassigned")
    flat = [n for v in sets.values() for n in v]
    if len(set(flat)) != len(flat):
        raise ArgumentError("roles must be assigned to disjoint variables")
    for n in flat:
        d.axis(n)
    dev_a = conditional_shift(d, sets["A"], sets["B"] + sets["Y"] + sets["Gamma"])
    dev_b = conditional_shift(d, sets["B"], sets["A"] + sets["X"] + sets["Gamma"])
    return CheckResult("bipartite free choice", max(dev_a, dev_b), tol,
                       f"A-shift {dev_a:.3e}, B-shift {dev_b:.3e}")
