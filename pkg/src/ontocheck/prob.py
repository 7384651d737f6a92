"""Exact finite probability tables over named variables.

Every statistical condition in the package (Markov chains, independence,
free choice) is evaluated on a :class:`JointDistribution`.  Axes are always
addressed by variable name; the order in which a caller lists names only
affects the layout of returned arrays, never the result of a predicate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ArgumentError, ShapeError, SupportError, UnknownVariableError, ValidationError

EPS_NORM = 1e-9
EPS_SUPPORT = 1e-12
DEFAULT_TOL = 1e-7


@dataclass(frozen=True)
class VariableSpace:
    """A named finite random variable with ordered value labels."""

    name: str
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("variable name must be a nonempty string")
        if len(values) < 1:
            raise ValidationError(f"variable {self.name!r} needs at least one value")
        if len(set(values)) != len(values):
            raise ValidationError(f"variable {self.name!r} has duplicate value labels")

    def __len__(self):
        return len(self.values)

    def index(self, value) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise ArgumentError(f"{value!r} is not a value of {self.name!r}") from None


class JointDistribution:
    """Nonnegative weights over the product of several variable spaces.

    Parameters
    ----------
    spaces : sequence of VariableSpace
        One axis per space, in order.
    table : array_like
        Weights with shape ``tuple(len(s) for s in spaces)``.  Must be
        nonnegative and sum to one within ``EPS_NORM``.
    """

    __slots__ = ("_spaces", "_table", "_index")

    def __init__(self, spaces: Sequence[VariableSpace], table):
        spaces = tuple(spaces)
        names = [s.name for s in spaces]
        if len(set(names)) != len(names):
            raise ValidationError("variable names must be unique within a distribution")
        table = np.array(table, dtype=float)
        shape = tuple(len(s) for s in spaces)
        if table.shape != shape:
            raise ShapeError(f"table shape {table.shape} does not match spaces {shape}")
        problems = []
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            problems.append("weights must be finite and nonnegative")
        total = table.sum()
        if abs(total - 1.0) > EPS_NORM:
            problems.append(f"weights sum to {total!r}, not 1")
        if problems:
            raise ValidationError(problems)
        table.setflags(write=False)
        self._spaces = spaces
        self._table = table
        self._index = {s.name: i for i, s in enumerate(spaces)}

    @classmethod
    def from_dict(cls, spaces: Sequence[VariableSpace], weights: Mapping[tuple, float]):
        """Build from a sparse ``{value-tuple: weight}`` mapping."""
        spaces = tuple(spaces)
        table = np.zeros(tuple(len(s) for s in spaces))
        for key, w in weights.items():
            if not isinstance(key, tuple):
                key = (key,)
            if len(key) != len(spaces):
                raise ShapeError(f"assignment {key!r} has wrong arity")
            idx = tuple(s.index(v) for s, v in zip(spaces, key))
            table[idx] += w
        return cls(spaces, table)

    @classmethod
    def product(cls, *dists: "JointDistribution") -> "JointDistribution":
        """Independent product of distributions over disjoint variables."""
        spaces = tuple(itertools.chain.from_iterable(d.spaces for d in dists))
        table = np.ones(())
        for d in dists:
            table = np.multiply.outer(table, d.table)
        return cls(spaces, table)

    @property
    def spaces(self) -> tuple:
        return self._spaces

    @property
    def names(self) -> tuple:
        return tuple(s.name for s in self._spaces)

    @property
    def table(self) -> np.ndarray:
        return self._table

    def space(self, name: str) -> VariableSpace:
        try:
            return self._spaces[self._index[name]]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def axis(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def array(self, names: Sequence[str]) -> np.ndarray:
        """Marginal table over ``names`` with axes in exactly that order."""
        names = list(names)
        axes = [self.axis(n) for n in names]
        drop = tuple(i for i in range(len(self._spaces)) if i not in axes)
        t = self._table.sum(axis=drop) if drop else self._table
        kept = [i for i in range(len(self._spaces)) if i in axes]
        return np.transpose(t, [kept.index(a) for a in axes])

    def prob(self, assignment: Mapping[str, object]) -> float:
        """Probability of a (partial) assignment of values to variables."""
        names = list(assignment)
        t = self.array(names)
        idx = tuple(self.space(n).index(assignment[n]) for n in names)
        return float(t[idx])

    def to_dict(self, *, support_only: bool = True) -> dict:
        out = {}
        for idx in np.ndindex(self._table.shape):
            w = float(self._table[idx])
            if support_only and w <= 0.0:
                continue
            key = tuple(s.values[i] for s, i in zip(self._spaces, idx))
            out[key if len(key) > 1 else key[0]] = w
        return out

    def __repr__(self):
        return f"JointDistribution({', '.join(self.names)})"


def _names(vs) -> list:
    if isinstance(vs, str):
        return [vs]
    return list(vs)


def marginal(d: JointDistribution, keep: Iterable[str]) -> JointDistribution:
    """Sum out every variable not in ``keep``; axis order follows ``d``."""
    keep = set(_names(keep))
    if not keep:
        raise ArgumentError("marginal needs at least one variable to keep")
    for n in keep:
        d.axis(n)
    ordered = [n for n in d.names if n in keep]
    return JointDistribution([d.space(n) for n in ordered], d.array(ordered))


def condition(d: JointDistribution, given: Mapping[str, object]) -> JointDistribution:
    """Conditional distribution of the remaining variables given an assignment."""
    if not given:
        return d
    for n in given:
        d.axis(n)
    rest = [n for n in d.names if n not in given]
    if not rest:
        raise ArgumentError("cannot condition on every variable")
    given_names = list(given)
    t = d.array(given_names + rest)
    idx = tuple(d.space(n).index(given[n]) for n in given_names)
    sub = t[idx]
    mass = sub.sum()
    if mass <= EPS_SUPPORT:
        raise SupportError(f"conditioning event {dict(given)!r} has probability {mass!r}")
    return JointDistribution([d.space(n) for n in rest], sub / mass)


def tv_distance(p: JointDistribution, q: JointDistribution) -> float:
    """Total variation distance ``0.5 * sum |p - q|``."""
    if p.spaces != q.spaces:
        if set(p.spaces) != set(q.spaces):
            raise ShapeError("distributions are over different variable spaces")
        return 0.5 * float(np.abs(p.table - q.array(p.names)).sum())
    return 0.5 * float(np.abs(p.table - q.table).sum())


def _grouped(d: JointDistribution, groups: Sequence[list]) -> np.ndarray:
    """Marginal over the union of ``groups`` reshaped to one axis per group."""
    flat = [n for g in groups for n in g]
    t = d.array(flat)
    sizes = [int(np.prod([len(d.space(n)) for n in g])) if g else 1 for g in groups]
    return t.reshape(sizes)


def _check_disjoint(*sets, allow_empty_last=False) -> list:
    lists = [_names(s) for s in sets]
    for i, s in enumerate(lists):
        if not s and not (allow_empty_last and i == len(lists) - 1):
            raise ArgumentError("variable sets must be nonempty")
    seen = set()
    for s in lists:
        if seen & set(s) or len(set(s)) != len(s):
            raise ArgumentError("variable sets must be disjoint")
        seen |= set(s)
    return lists


def markov_deviation(d: JointDistribution, u, v, w) -> float:
    """Worst-case violation of the Markov chain ``U <-> V <-> W``.

    Returns the maximum, over value pairs ``(v, w)`` with probability above
    ``EPS_SUPPORT``, of ``tv_distance(P_{U|v,w}, P_{U|v})``.  Zero (up to
    rounding) exactly when the chain holds.  Variables of ``d`` outside
    ``u | v | w`` are summed out first.
    """
    u, v, w = _check_disjoint(u, v, w)
    for n in u + v + w:
        d.axis(n)
    t = _grouped(d, [u, v, w])
    p_vw = t.sum(axis=0)
    p_uv = t.sum(axis=2)
    p_v = p_uv.sum(axis=0)
    support = p_vw > EPS_SUPPORT
    if not support.any():
        return 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        cond_vw = t / p_vw[None, :, :]
        cond_v = p_uv / p_v[None, :]
    dev = 0.5 * np.abs(cond_vw - cond_v[:, :, None]).sum(axis=0)
    return float(dev[support].max())


def is_markov_chain(d: JointDistribution, u, v, w, tol: float = DEFAULT_TOL) -> bool:
    return markov_deviation(d, u, v, w) <= tol


def independence_deviation(d: JointDistribution, u, v) -> float:
    """``tv_distance(P_{UV}, P_U x P_V)``."""
    u, v = _check_disjoint(u, v)
    t = _grouped(d, [u, v])
    prod = np.outer(t.sum(axis=1), t.sum(axis=0))
    return 0.5 * float(np.abs(t - prod).sum())


def conditional_shift(d: JointDistribution, target, given) -> float:
    """Largest ``tv_distance(P_{T|g}, P_T)`` over supported values ``g``.

    Used for conditions of the form ``P_{A|BYG} = P_A``.  Returns 0 when
    ``given`` is empty.
    """
    target, given = _check_disjoint(target, given, allow_empty_last=True)
    if not given:
        return 0.0
    t = _grouped(d, [target, given])
    p_t = t.sum(axis=1)
    p_g = t.sum(axis=0)
    support = p_g > EPS_SUPPORT
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = t / p_g[None, :]
    dev = 0.5 * np.abs(cond - p_t[:, None]).sum(axis=0)
    return float(dev[support].max())
