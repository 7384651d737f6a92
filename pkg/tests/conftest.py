from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from ontocheck.prob import JointDistribution, VariableSpace
from ontocheck.quantum import Measurement

FIXTURES = Path(str(resources.files("ontocheck") / "data" / "fixtures"))


@pytest.fixture
def fixture_path():
    def get(name):
        return FIXTURES / name
    return get


def bits(*names):
    return [VariableSpace(n, (0, 1)) for n in names]


def table2(weights):
    """Two-bit distribution from ``{(a, b): w}``."""
    return JointDistribution.from_dict(bits("A", "B"), weights)


def random_joint(rng, n_vars, max_card=4, zero_frac=0.0):
    spaces = [VariableSpace(f"V{i}", tuple(range(rng.integers(1, max_card + 1)))) for i in range(n_vars)]
    t = rng.random(tuple(len(s) for s in spaces))
    if zero_frac:
        t[rng.random(t.shape) < zero_frac] = 0.0
        if t.sum() == 0:
            t.flat[0] = 1.0
    return JointDistribution(spaces, t / t.sum())


def random_measurement(d, rng, label="m"):
    """Random projective measurement by grouping columns of a random unitary."""
    q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    cuts = sorted(rng.choice(np.arange(1, d), size=rng.integers(0, d), replace=False)) if d > 1 else []
    groups = np.split(np.arange(d), cuts)
    return Measurement(label, {str(i): q[:, g] @ q[:, g].conj().T for i, g in enumerate(groups)})


def bell_table(outcome_rule):
    """Uniform independent settings A, B with outcomes from ``outcome_rule(a, b) -> {(x, y): p}``."""
    spaces = bits("A", "B", "X", "Y")
    w = {}
    for a in (0, 1):
        for b in (0, 1):
            for (x, y), p in outcome_rule(a, b).items():
                w[(a, b, x, y)] = 0.25 * p
    return JointDistribution.from_dict(spaces, w)


def pr_box(a, b):
    return {(x, x ^ (a & b)): 0.5 for x in (0, 1)}


def shared_coin(a, b):
    # perfectly correlated outcomes that ignore both settings
    return {(0, 0): 0.5, (1, 1): 0.5}


def a_copies_y():
    """A is set equal to the far-side outcome Y; Y is a fair coin."""
    spaces = bits("A", "B", "X", "Y")
    w = {(y, b, x, y): 0.125 for y in (0, 1) for b in (0, 1) for x in (0, 1)}
    return JointDistribution.from_dict(spaces, w)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""
    def record(number, title, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
