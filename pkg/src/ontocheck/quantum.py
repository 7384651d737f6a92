"""Pure states, projective measurements and Born-rule statistics.

States are compared up to global phase throughout: no measurement statistic
can resolve a phase, so two amplitude vectors differing only by one are the
same wave function here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ArgumentError, CompletenessError, NotPureError, ShapeError, ValidationError
from .prob import EPS_NORM, EPS_SUPPORT

MATRIX_TOL = 1e-9
RANK_RTOL = 1e-8
DISTINGUISH_TOL = 1e-7
MAX_DIM = 8


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector in ``C^d`` with a label."""

    amplitudes: np.ndarray
    label: str = "psi"

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise ValidationError(f"state {self.label!r}: dimension must be at least 2")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > EPS_NORM:
            raise ValidationError(f"state {self.label!r}: norm is {norm!r}, not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes, label: str = "psi") -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex)
        return cls(amps / np.linalg.norm(amps), label)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def basis_state(d: int, k: int, label: str | None = None) -> PureState:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return PureState(v, label if label is not None else f"e{k}")


def haar_state(d: int, rng: np.random.Generator, label: str = "psi") -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.normalized(z, label)


@dataclass(frozen=True, eq=False)
class Measurement:
    """Projective measurement ``{outcome: projector}``."""

    label: str
    projectors: Mapping[str, np.ndarray]

    def __post_init__(self):
        projs = {}
        for x, p in dict(self.projectors).items():
            m = np.array(p, dtype=complex)
            m.setflags(write=False)
            projs[str(x)] = m
        object.__setattr__(self, "projectors", projs)
        problems = measurement_problems(self.label, projs)
        if problems:
            raise ValidationError(problems)

    @classmethod
    def from_basis(cls, label: str, vectors, outcomes: Sequence[str] | None = None) -> "Measurement":
        """Rank-one measurement onto the columns of ``vectors``."""
        vectors = np.asarray(vectors, dtype=complex)
        d = vectors.shape[1]
        outcomes = [str(k) for k in range(d)] if outcomes is None else list(outcomes)
        return cls(label, {x: np.outer(vectors[:, k], vectors[:, k].conj()) for k, x in enumerate(outcomes)})

    @property
    def outcomes(self) -> tuple:
        return tuple(self.projectors)

    @property
    def dim(self) -> int:
        return next(iter(self.projectors.values())).shape[0]


def measurement_problems(label, projectors: Mapping[str, np.ndarray]) -> list:
    """Every violated projective-measurement invariant, as messages."""
    where = f"measurement {label!r}"
    if not projectors:
        return [f"{where}: no projectors"]
    mats = list(projectors.values())
    d = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for x, p in projectors.items():
        if p.shape != (d, d):
            return [f"{where}: projector {x!r} has shape {p.shape}, expected square {d}x{d}"]
    problems = []
    for x, p in projectors.items():
        if np.abs(p - p.conj().T).max() > MATRIX_TOL:
            problems.append(f"{where}: projector {x!r} is not Hermitian")
        if np.abs(p @ p - p).max() > MATRIX_TOL:
            problems.append(f"{where}: projector {x!r} is not idempotent")
    keys = list(projectors)
    for i, x in enumerate(keys):
        for y in keys[i + 1:]:
            if np.abs(projectors[x] @ projectors[y]).max() > MATRIX_TOL:
                problems.append(f"{where}: projectors {x!r} and {y!r} are not orthogonal")
    total = sum(mats)
    if np.abs(total - np.eye(d)).max() > MATRIX_TOL:
        problems.append(f"{where}: projectors do not sum to the identity")
    return problems


def computational_basis(d: int, label: str = "z") -> Measurement:
    return Measurement.from_basis(label, np.eye(d))


_PAULI_BASES = {
    "x": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "y": np.array([[1, 1], [1j, -1j]]) / np.sqrt(2),
    "z": np.eye(2),
}


def pauli_measurement(axis: str, label: str | None = None) -> Measurement:
    """Qubit measurement in the eigenbasis of a Pauli operator.

    Outcome ``"0"`` is the +1 eigenvector, ``"1"`` the -1 eigenvector.
    """
    axis = axis.lower()
    if axis not in _PAULI_BASES:
        raise ArgumentError(f"unknown Pauli axis {axis!r}")
    return Measurement.from_basis(label or axis, _PAULI_BASES[axis])


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Measurements together with the setting distribution ``P_A``."""

    measurements: tuple
    setting_distribution: Mapping[str, float] = field(default=None)

    def __post_init__(self):
        ms = tuple(self.measurements)
        object.__setattr__(self, "measurements", ms)
        if not ms:
            raise ValidationError("measurement set is empty")
        labels = [m.label for m in ms]
        if len(set(labels)) != len(labels):
            raise ValidationError("measurement labels must be unique")
        dist = self.setting_distribution
        if dist is None:
            dist = {l: 1.0 / len(ms) for l in labels}
        dist = {str(k): float(v) for k, v in dict(dist).items()}
        problems = []
        if set(dist) != set(labels):
            problems.append("setting distribution must cover exactly the measurement labels")
        if any(p < 0 for p in dist.values()):
            problems.append("setting probabilities must be nonnegative")
        if abs(sum(dist.values()) - 1.0) > EPS_NORM:
            problems.append(f"setting probabilities sum to {sum(dist.values())!r}, not 1")
        if len({m.dim for m in ms}) != 1:
            problems.append("measurements act on different dimensions")
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "setting_distribution", {l: dist[l] for l in labels})

    @property
    def labels(self) -> tuple:
        return tuple(m.label for m in self.measurements)

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    @property
    def outcomes(self) -> tuple:
        """Union of outcome labels, in first-seen order."""
        seen = {}
        for m in self.measurements:
            for x in m.outcomes:
                seen.setdefault(x, None)
        return tuple(seen)

    def __getitem__(self, label: str) -> Measurement:
        for m in self.measurements:
            if m.label == label:
                return m
        raise KeyError(label)

    def supported(self) -> list:
        return [m for m in self.measurements if self.setting_distribution[m.label] > EPS_SUPPORT]


def pauli_set(probabilities: Mapping[str, float] | None = None) -> MeasurementSet:
    return MeasurementSet(tuple(pauli_measurement(a) for a in "xyz"), probabilities)


def pairwise_tomography_set(d: int, probabilities: Mapping[str, float] | None = None) -> MeasurementSet:
    """Tomographically complete family of ``1 + d(d-1)`` basis measurements.

    The computational basis plus, for every pair ``j < k``, the bases that
    replace ``e_j, e_k`` by ``(e_j +- e_k)/sqrt 2`` and by
    ``(e_j +- i e_k)/sqrt 2``.  For ``d = 2`` these are the Pauli Z, X and Y
    measurements.
    """
    if not 2 <= d <= MAX_DIM:
        raise ArgumentError(f"dimension must lie in [2, {MAX_DIM}]")
    ms = [computational_basis(d, "z")]
    s = 1 / np.sqrt(2)
    for j in range(d):
        for k in range(j + 1, d):
            for tag, phase in (("x", 1.0), ("y", 1j)):
                vecs = np.eye(d, dtype=complex)
                vecs[:, j] = 0
                vecs[:, k] = 0
                vecs[j, j], vecs[k, j] = s, s * phase
                vecs[j, k], vecs[k, k] = s, -s * phase
                ms.append(Measurement.from_basis(f"{tag}{j}{k}", vecs))
    return MeasurementSet(tuple(ms), probabilities)


def _check_dims(s: PureState, m: Measurement):
    if s.dim != m.dim:
        raise ShapeError(f"state {s.label!r} has dimension {s.dim}, measurement {m.label!r} acts on {m.dim}")


def born_rule(s: PureState, m: Measurement) -> dict:
    """Outcome distribution ``{x: <psi|Pi_x|psi>}``."""
    _check_dims(s, m)
    psi = s.amplitudes
    return {x: float(np.real(psi.conj() @ p @ psi)) for x, p in m.projectors.items()}


def statistics_table(states: Sequence[PureState], ms: MeasurementSet) -> dict:
    """Born-rule distributions keyed by ``(state label, setting label)``."""
    return {(s.label, m.label): born_rule(s, m) for s in states for m in ms.measurements}


def _hermitian_basis(d: int) -> list:
    """Orthogonal real basis of the d*d-dimensional space of Hermitian matrices."""
    basis = []
    for j in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[j, j] = 1
        basis.append(e)
    for j in range(d):
        for k in range(j + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = e[k, j] = 1
            basis.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[j, k], e[k, j] = -1j, 1j
            basis.append(e)
    return basis


def _design_matrix(ms: Sequence[Measurement], d: int) -> tuple:
    """Rows ``tr(B_k Pi^a_x)``; also returns the row keys ``(a, x)``."""
    basis = _hermitian_basis(d)
    rows, keys = [], []
    for m in ms:
        for x, p in m.projectors.items():
            rows.append([np.real(np.trace(b @ p)) for b in basis])
            keys.append((m.label, x))
    return np.array(rows), keys, basis


def span_rank(ms: MeasurementSet) -> int:
    """Real dimension of the span of all supported projectors."""
    supported = ms.supported()
    if not supported:
        return 0
    design, _, _ = _design_matrix(supported, ms.dim)
    sv = np.linalg.svd(design, compute_uv=False)
    return int((sv > RANK_RTOL * sv[0]).sum())


def is_tomographically_complete(ms: MeasurementSet) -> bool:
    return span_rank(ms) == ms.dim ** 2


def states_equal_up_to_phase(s0: PureState, s1: PureState, tol: float = 1e-9) -> bool:
    if s0.dim != s1.dim:
        raise ShapeError("states have different dimensions")
    return abs(np.vdot(s0.amplitudes, s1.amplitudes)) >= 1 - tol


def _tv(p: Mapping, q: Mapping) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def statistics_distinguish(s0: PureState, s1: PureState, ms: MeasurementSet,
                           tol: float = DISTINGUISH_TOL) -> bool:
    """True iff some supported measurement separates the two states."""
    supported = ms.supported()
    if not supported:
        raise ArgumentError("no measurement with positive setting probability")
    return any(_tv(born_rule(s0, m), born_rule(s1, m)) > tol for m in supported)


def fit_density(stats: Mapping[str, Mapping[str, float]], ms: MeasurementSet) -> np.ndarray:
    """Least-squares Hermitian, unit-trace fit to outcome frequencies.

    Minimizes ``sum_{a,x} (tr(rho Pi^a_x) - p(x|a))^2`` over Hermitian
    ``rho`` with ``tr rho = 1``; solved through the KKT system.
    """
    if not is_tomographically_complete(ms):
        raise CompletenessError("measurement set is not tomographically complete")
    supported = ms.supported()
    missing = [m.label for m in supported if m.label not in stats]
    if missing:
        raise ArgumentError(f"statistics missing for settings {missing}")
    d = ms.dim
    design, keys, basis = _design_matrix(supported, d)
    target = np.array([stats[a].get(x, 0.0) for a, x in keys])
    trace_row = np.array([np.real(np.trace(b)) for b in basis])
    n = len(basis)
    kkt = np.zeros((n + 1, n + 1))
    kkt[:n, :n] = design.T @ design
    kkt[:n, n] = trace_row
    kkt[n, :n] = trace_row
    rhs = np.concatenate([design.T @ target, [1.0]])
    coef = np.linalg.solve(kkt, rhs)[:n]
    rho = sum(c * b for c, b in zip(coef, basis))
    return 0.5 * (rho + rho.conj().T)


def reconstruct_state(stats: Mapping[str, Mapping[str, float]], ms: MeasurementSet,
                      label: str = "reconstructed", min_purity: float = 0.99) -> PureState:
    """Recover a pure state from per-setting outcome distributions.

    Raises
    ------
    CompletenessError
        If ``ms`` is not tomographically complete.
    NotPureError
        If the top eigenvalue of the fitted density operator is below
        ``min_purity``, i.e. the statistics are not those of one pure state.
    """
    rho = fit_density(stats, ms)
    evals, evecs = np.linalg.eigh(rho)
    if evals[-1] < min_purity:
        raise NotPureError(f"top eigenvalue {evals[-1]:.6f} < {min_purity}")
    v = evecs[:, -1]
    # fix the phase so the largest component is real positive
    k = int(np.argmax(np.abs(v)))
    v = v * np.exp(-1j * np.angle(v[k]))
    return PureState.normalized(v, label)
