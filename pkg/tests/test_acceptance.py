"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import hashlib
import itertools
import json
import time

import jsonschema
import numpy as np
import pytest

from conftest import FIXTURES, a_copies_y, bell_table, pr_box, random_measurement, shared_coin
from test_cli import CSV_SHA256, GOLDEN, VALID
from ontocheck.cli import modelfile
from ontocheck.cli.main import main
from ontocheck.dilation import build_isometry, isometry_deviation, joint_statistics, verify_restriction
from ontocheck.ontology import (
    LAMBDA,
    OUTCOME,
    PSI,
    SETTING,
    build_hidden_outcome_model,
    build_no_free_choice_counterexample,
    build_weather_model,
    check_completeness_eq1,
    check_free_choice,
    gen_compliant_model,
    perturb_model,
    psi_determination,
    run_theorem_check,
)
from ontocheck.quantum import (
    MeasurementSet,
    born_rule,
    computational_basis,
    haar_state,
    pairwise_tomography_set,
    pauli_set,
    reconstruct_state,
    span_rank,
    statistics_table,
)
from ontocheck.sampling import empirical_markov_deviation, sample
from ontocheck.spacetime import SpacetimeVariable, bipartite_free_choice_check, boost, in_future_lightcone

CORPUS_SIZE = 1002  # 334 per dimension


def corpus():
    for i in range(CORPUS_SIZE):
        d = 2 + i % 3
        n = 2 + (i // 3) % 3
        yield gen_compliant_model(d, n, seed=i)


@pytest.fixture(scope="module")
def reports():
    start = time.perf_counter()
    out = [(m, run_theorem_check(m)) for m in corpus()]
    return out, time.perf_counter() - start


def test_criterion_1_theorem_suite(reports, criterion):
    items, elapsed = reports
    applicable = sum(r.applicable for _, r in items)
    undetermined = sum(r.applicable and not r.determination.determined for _, r in items)
    ok = len(items) >= 1000 and applicable == len(items) and undetermined == 0 and elapsed <= 60
    assert criterion(1, "theorem suite", ok,
                     f"{len(items)} models, {applicable} pass all hypotheses, {undetermined} violations, {elapsed:.1f}s")


def test_criterion_2_derivation_suite(reports, criterion):
    items, _ = reports
    models = [m for m, _ in items]
    # full noise at 1e-3 and 1e-6; response-only noise at 1e-9 keeps the premise satisfiable
    scales = [(1e-3, True)] * 100 + [(1e-6, True)] * 50 + [(1e-9, False)] * 50
    perturbed = [perturb_model(models[k], s, seed=k, prior=p) for k, (s, p) in enumerate(scales)]
    all_reports = [r for _, r in items] + [run_theorem_check(m) for m in perturbed]
    exceptions, premise, violations = 0, 0, 0
    worst_ratio = 0.0
    for r in all_reports:
        inputs = [r.check(k) for k in ("completeness", "non-extendibility", "free choice")]
        bound = 2 * max(c.deviation for c in inputs)
        eq3 = r.consistency.deviation
        # the bound is checked on every model, not only those meeting the premise
        if eq3 > bound + 1e-12:
            exceptions += 1
        premise += all(c.passed for c in inputs)
        if bound > 0:
            worst_ratio = max(worst_ratio, eq3 / bound)
        violations += r.violation
    ok = exceptions == 0 and violations == 0 and len(perturbed) == 200
    assert criterion(2, "derivation suite", ok,
                     f"{len(all_reports)} models, {premise} meet the premise, {exceptions} exceptions, "
                     f"max eq3/bound {worst_ratio:.3f}")


def test_criterion_3_counterexample(criterion):
    m = build_no_free_choice_counterexample()
    eq1 = check_completeness_eq1(m).deviation
    fc = check_free_choice(m).deviation
    widest = max(len(v) for v in psi_determination(m).support.values())
    ok = eq1 <= 1e-12 and fc >= 0.1 and widest >= 2
    assert criterion(3, "no-free-choice counterexample", ok,
                     f"Eq.1 {eq1:.1e}, free choice {fc:.4f}, {widest} psi values on one lambda")


def test_criterion_4_weather(capsys, criterion):
    w = build_weather_model()
    ontic = w.ontic_chain_deviation()
    forecast = w.forecast_chain_deviation()
    has_forecast = any(abs(d["sunny"] - 0.33) < 1e-12 and abs(d["cloudy"] - 0.67) < 1e-12
                       for d in w.forecasts.values())
    main(["demo", "weather"])
    cites = "Fig. 1" in capsys.readouterr().out
    ok = ontic <= 1e-12 and forecast >= 0.2 and has_forecast and cites
    assert criterion(4, "weather demo", ok,
                     f"ontic chain {ontic:.1e}, forecast chain {forecast:.3f}, 0.33/0.67 forecast {has_forecast}, "
                     f"cites figure {cites}")


def test_criterion_5_quantum(criterion):
    rng = np.random.default_rng(5)
    worst_norm = 0.0
    for i in range(1000):
        d = 2 + i % 3
        p = np.array(list(born_rule(haar_state(d, rng), random_measurement(d, rng)).values()))
        worst_norm = max(worst_norm, abs(p.sum() - 1.0), float(max(0.0, -p.min())))
    worst_overlap = 1.0
    for d in (2, 3, 4):
        ms = pairwise_tomography_set(d)
        for _ in range(200):
            s = haar_state(d, rng)
            stats = {a: dist for (_, a), dist in statistics_table([s], ms).items()}
            r = reconstruct_state(stats, ms)
            worst_overlap = min(worst_overlap, abs(np.vdot(r.amplitudes, s.amplitudes)))
    pauli_rank = span_rank(pauli_set())
    single_rank = span_rank(MeasurementSet((computational_basis(2),)))
    ok = worst_norm <= 1e-9 and worst_overlap >= 1 - 1e-6 and pauli_rank == 4 and single_rank == 2
    assert criterion(5, "quantum layer", ok,
                     f"normalization error {worst_norm:.1e}, min overlap 1-{1 - worst_overlap:.1e}, "
                     f"ranks {pauli_rank}/{single_rank}")


def test_criterion_6_dilation(criterion):
    rng = np.random.default_rng(6)
    worst_iso = worst_res = worst_mismatch = 0.0
    count = 0
    for name in VALID:
        m = modelfile.load(FIXTURES / name).model
        states = list(m.states) + [haar_state(m.dim, rng) for _ in range(5)]
        for meas in m.measurement_set.measurements:
            iso = build_isometry(meas)
            env = computational_basis(iso.env_dimension, "env")
            worst_iso = max(worst_iso, isometry_deviation(iso.matrix))
            for s in states:
                worst_res = max(worst_res, verify_restriction(iso, meas, s))
                js = joint_statistics(iso, s, meas, env)
                mismatch = sum(p for (x, y), p in js.items() if x != meas.outcomes[int(y)])
                worst_mismatch = max(worst_mismatch, mismatch)
            count += 1
    ok = worst_iso <= 1e-9 and worst_res <= 1e-9 and worst_mismatch <= 1e-9
    assert criterion(6, "dilation", ok,
                     f"{count} measurements, isometry {worst_iso:.1e}, restriction {worst_res:.1e}, "
                     f"P(x!=y) {worst_mismatch:.1e}")


def test_criterion_7_sampling(criterion):
    eq2 = ([OUTCOME], [PSI, SETTING], [LAMBDA])
    start = time.perf_counter()
    good = empirical_markov_deviation(sample(modelfile.load(FIXTURES / "compliant_qubit.json").model,
                                             100_000, seed=1), *eq2, seed=1)
    bad = empirical_markov_deviation(sample(build_hidden_outcome_model(), 100_000, seed=1), *eq2, seed=1)
    elapsed = time.perf_counter() - start
    ok = good.estimate <= 0.05 and good.excludes(0.2) and bad.excludes(0.1) and elapsed <= 30
    assert criterion(7, "sampling", ok,
                     f"compliant {good.estimate:.4f} in [{good.interval[0]:.4f}, {good.interval[1]:.4f}], "
                     f"violating interval [{bad.interval[0]:.4f}, {bad.interval[1]:.4f}], {elapsed:.1f}s")


def _sv(c):
    return SpacetimeVariable("e", tuple(c))


def _triple(rng):
    """Random triple; half of them are built as forward chains so transitivity is exercised."""
    a = rng.uniform(-5, 5, 4)
    if rng.random() < 0.5:
        return a, rng.uniform(-5, 5, 4), rng.uniform(-5, 5, 4)
    pts = [a]
    for _ in range(2):
        dr = rng.normal(size=3)
        dr *= rng.uniform(0, 3) / np.linalg.norm(dr)
        dt = np.linalg.norm(dr) / rng.uniform(0.05, 1.0)
        pts.append(pts[-1] + np.concatenate([[dt], dr]))
    return tuple(pts)


def test_criterion_8_spacetime(criterion):
    rng = np.random.default_rng(8)
    anti = trans = boost_fail = chains = 0
    for _ in range(10_000):
        a, b, c = (_sv(p) for p in _triple(rng))
        for x, y in itertools.permutations((a, b, c), 2):
            if in_future_lightcone(x, y) and in_future_lightcone(y, x):
                anti += 1
        if in_future_lightcone(b, a) and in_future_lightcone(c, b):
            chains += 1
            trans += not in_future_lightcone(c, a)
        for x, y in ((a, b), (b, c), (a, c)):
            dt = y.t - x.t
            dist = np.linalg.norm(y.r - x.r)
            if dt - dist <= 1e-9:
                continue  # only strictly timelike pairs
            v, axis = rng.uniform(-0.99, 0.99), int(rng.integers(1, 4))
            bx, by = boost(x.coordinates, v, axis), boost(y.coordinates, v, axis)
            ds2 = dt ** 2 - dist ** 2
            bd = np.subtract(by, bx)
            bds2 = bd[0] ** 2 - bd[1:] @ bd[1:]
            if not (bd[0] > 0 and in_future_lightcone(_sv(by), _sv(bx))
                    and abs(bds2 - ds2) <= 1e-9 * max(1.0, abs(ds2))):
                boost_fail += 1
    roles = {"A": "A", "B": "B", "X": "X", "Y": "Y"}
    ns = bipartite_free_choice_check(bell_table(shared_coin), roles).passed
    pr = bipartite_free_choice_check(bell_table(pr_box), roles).passed
    copy = bipartite_free_choice_check(a_copies_y(), roles).passed
    ok = anti == 0 and trans == 0 and boost_fail == 0 and chains > 0 and ns and pr and not copy
    assert criterion(8, "spacetime", ok,
                     f"10000 triples, {anti} antisymmetry and {trans}/{chains} transitivity failures, "
                     f"{boost_fail} boost failures; no-signalling {ns}, PR box {pr}, A-copies-Y passes {copy}")


def test_criterion_9_cli(capsys, tmp_path, criterion):
    bad_codes = []
    for argv, code in GOLDEN:
        got = main([str(a) for a in argv])
        if got != code:
            bad_codes.append((argv, got))
    seen_codes = sorted({c for _, c in GOLDEN})
    digests = set()
    for k in range(2):
        out = tmp_path / f"s{k}.csv"
        main(["sample", str(FIXTURES / "compliant_qubit.json"), "--n", "1000", "--seed", "7",
              "--out", str(out), "--bootstrap", "100"])
        digests.add(hashlib.sha256(out.read_bytes()).hexdigest())
    capsys.readouterr()
    schema = jsonschema.Draft202012Validator(modelfile.load_schema("report.schema.json"))
    schema_errors = 0
    for name in VALID:
        main(["check", str(FIXTURES / name), "--json"])
        schema_errors += len(list(schema.iter_errors(json.loads(capsys.readouterr().out))))
    ok = not bad_codes and seen_codes == [0, 1, 2, 3, 4] and digests == {CSV_SHA256} and schema_errors == 0
    assert criterion(9, "CLI", ok,
                     f"{len(GOLDEN)} golden runs covering exit codes {seen_codes}, {len(bad_codes)} mismatches, "
                     f"CSV stable {digests == {CSV_SHA256}}, {schema_errors} schema errors")
