"""Measurement dilations into system x environment.

A projective measurement is modelled by the isometry
``E|psi> = sum_x (Pi_x |psi>) (x) |x>_E`` whose environment register records
the outcome.  Tensor ordering is system first, so the composite index is
``s * env_dimension + e``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, ValidationError
from .quantum import MATRIX_TOL, Measurement, PureState


@dataclass(frozen=True, eq=False)
class Isometry:
    matrix: np.ndarray
    env_dimension: int

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        e = int(self.env_dimension)
        if m.ndim != 2 or e < 1 or m.shape[0] != m.shape[1] * e:
            raise ShapeError(f"isometry matrix of shape {m.shape} is incompatible with env dimension {e}")
        if isometry_deviation(m) > MATRIX_TOL:
            raise ValidationError("matrix is not an isometry (V^dagger V != 1)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "env_dimension", e)

    @property
    def system_dimension(self) -> int:
        return self.matrix.shape[1]

    def apply(self, s: PureState) -> np.ndarray:
        if s.dim != self.system_dimension:
            raise ShapeError("state dimension does not match the isometry input")
        return self.matrix @ s.amplitudes

    def output_density(self, s: PureState) -> np.ndarray:
        out = self.apply(s)
        return np.outer(out, out.conj())


def isometry_deviation(matrix: np.ndarray) -> float:
    """Entrywise max of ``|V^dagger V - 1|``."""
    return float(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[1])).max())


def build_isometry(m: Measurement) -> Isometry:
    """Canonical dilation with one environment level per outcome."""
    if not isinstance(m, Measurement):
        raise ValidationError("build_isometry expects a validated Measurement")
    k = len(m.outcomes)
    cols = []
    for i, x in enumerate(m.outcomes):
        ket = np.zeros((k, 1))
        ket[i, 0] = 1
        cols.append(np.kron(m.projectors[x], ket))
    return Isometry(sum(cols), k)


def partial_trace_env(rho: np.ndarray, d: int, e: int) -> np.ndarray:
    return np.einsum("iaja->ij", rho.reshape(d, e, d, e))


def dephase(s: PureState, m: Measurement) -> np.ndarray:
    """``sum_x Pi_x |psi><psi| Pi_x``."""
    rho = s.density()
    return sum(p @ rho @ p for p in m.projectors.values())


def verify_restriction(iso: Isometry, m: Measurement, s: PureState) -> float:
    """Entrywise max deviation between ``tr_E(E rho E^dagger)`` and the dephased state."""
    d = iso.system_dimension
    if m.dim != d or s.dim != d:
        raise ShapeError("isometry, measurement and state dimensions disagree")
    reduced = partial_trace_env(iso.output_density(s), d, iso.env_dimension)
    return float(np.abs(reduced - dephase(s, m)).max())


def joint_statistics(iso: Isometry, s: PureState, ma: Measurement, mb: Measurement) -> dict:
    """``{(x, y): tr(E rho E^dagger (Pi^a_x (x) Pi^b_y))}``; ``mb`` acts on the environment."""
    d, e = iso.system_dimension, iso.env_dimension
    if ma.dim != d or mb.dim != e or s.dim != d:
        raise ShapeError("measurement dimensions do not match system/environment")
    out = iso.apply(s)
    stats = {}
    for x, pa in ma.projectors.items():
        for y, pb in mb.projectors.items():
            stats[(x, y)] = float(np.real(out.conj() @ np.kron(pa, pb) @ out))
    return stats
