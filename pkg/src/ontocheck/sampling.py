"""Finite-sample records drawn from a model and bootstrap Markov estimates.

Records are drawn by inverse-CDF lookup of uniform variates from numpy's
PCG64 generator against the row-major flattened joint table, so a seed
fixes the records bit for bit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ArgumentError, InsufficientDataError
from .ontology.model import OntologicalModel, full_joint
from .prob import JointDistribution, _check_disjoint

GENERATOR = "numpy.random.PCG64"
MIN_CELL = 20
DEFAULT_REPS = 1000


@dataclass(frozen=True, eq=False)
class Samples:
    """``codes[i, k]`` is the value index of variable ``k`` in record ``i``."""

    spaces: tuple
    codes: np.ndarray
    seed: int | None = None
    generator: str = GENERATOR

    @property
    def names(self) -> tuple:
        return tuple(s.name for s in self.spaces)

    def __len__(self):
        return self.codes.shape[0]

    def __iter__(self) -> Iterator[dict]:
        for row in self.codes:
            yield {s.name: s.values[i] for s, i in zip(self.spaces, row)}

    def __getitem__(self, i) -> dict:
        return {s.name: s.values[j] for s, j in zip(self.spaces, self.codes[i])}

    def to_csv(self, fh) -> None:
        fh.write(f"# seed={self.seed} generator={self.generator} n={len(self)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.names)
        labels = [np.array([str(v) for v in s.values], dtype=object) for s in self.spaces]
        cols = [lab[self.codes[:, k]] for k, lab in enumerate(labels)]
        w.writerows(zip(*cols))

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def sample_joint(d: JointDistribution, n: int, seed: int) -> Samples:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ArgumentError("n must be a positive integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    cdf = np.cumsum(d.table.ravel())
    cdf /= cdf[-1]
    flat = np.searchsorted(cdf, rng.random(n), side="right")
    flat = np.minimum(flat, cdf.size - 1)
    codes = np.stack(np.unravel_index(flat, d.table.shape), axis=1)
    return Samples(d.spaces, codes, seed)


def sample(m: OntologicalModel, n: int, seed: int) -> Samples:
    """i.i.d. records of ``(Lambda, Psi, *extras, A, X)``."""
    return sample_joint(full_joint(m), n, seed)


def _counts(samples: Samples) -> np.ndarray:
    shape = tuple(len(s) for s in samples.spaces)
    flat = np.ravel_multi_index(tuple(samples.codes.T), shape)
    return np.bincount(flat, minlength=int(np.prod(shape))).reshape(shape).astype(float)


def empirical_joint(samples: Samples) -> JointDistribution:
    if len(samples) == 0:
        raise ArgumentError("no records")
    c = _counts(samples)
    return JointDistribution(samples.spaces, c / c.sum())


@dataclass(frozen=True)
class MarkovEstimate:
    estimate: float
    interval: tuple
    cells_used: int
    cells_excluded: int
    reps: int

    def excludes(self, value: float) -> bool:
        lo, hi = self.interval
        return not lo <= value <= hi


def _deviation_from_counts(c: np.ndarray, min_cell: int) -> tuple:
    """Markov deviation of a (U, V, W) count table over well-sampled cells."""
    n_vw = c.sum(axis=0)
    n_uv = c.sum(axis=2)
    n_v = n_uv.sum(axis=0)
    used = n_vw >= min_cell
    if not used.any():
        return np.nan, 0
    with np.errstate(invalid="ignore", divide="ignore"):
        dev = 0.5 * np.abs(c / n_vw[None] - (n_uv / n_v[None])[:, :, None]).sum(axis=0)
    return float(dev[used].max()), int(used.sum())


def empirical_markov_deviation(samples: Samples, u, v, w, bootstrap_reps: int = DEFAULT_REPS,
                               seed: int = 0, min_cell: int = MIN_CELL) -> MarkovEstimate:
    """Point estimate and 95% percentile-bootstrap interval of the Markov deviation.

    Conditioning cells ``(v, w)`` with fewer than ``min_cell`` records are
    left out, both for the point estimate and inside every replicate.
    Replicates resample the records (multinomially on cell counts) with
    streams spawned from ``seed`` in replicate order.
    """
    if len(samples) == 0:
        raise ArgumentError("no records")
    if bootstrap_reps < 100:
        raise ArgumentError("bootstrap_reps must be at least 100")
    u, v, w = _check_disjoint(u, v, w)
    joint = empirical_joint(samples)
    groups = [u, v, w]
    t = joint.array(u + v + w)
    sizes = [int(np.prod([len(joint.space(nm)) for nm in g])) for g in groups]
    counts = np.rint(t.reshape(sizes) * len(samples))
    point, used = _deviation_from_counts(counts, min_cell)
    if used == 0:
        raise InsufficientDataError(f"every conditioning cell has fewer than {min_cell} records")
    cells_total = int((counts.sum(axis=0) > 0).sum())
    n = int(counts.sum())
    p = (counts / n).ravel()
    reps = []
    for child in np.random.SeedSequence(seed).spawn(bootstrap_reps):
        rng = np.random.Generator(np.random.PCG64(child))
        boot = rng.multinomial(n, p).reshape(counts.shape).astype(float)
        dev, _ = _deviation_from_counts(boot, min_cell)
        reps.append(dev)
    reps = np.array(reps)
    reps = reps[~np.isnan(reps)]
    lo, hi = np.percentile(reps, [2.5, 97.5])
    return MarkovEstimate(point, (float(lo), float(hi)), used, cells_total - used, bootstrap_reps)
