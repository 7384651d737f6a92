"""``ontocheck`` command line.

Exit codes: 0 ok, 1 invariant violation, 2 parse or usage error,
3 theorem violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import __version__
from ..dilation import build_isometry, isometry_deviation, joint_statistics, verify_restriction
from ..errors import InsufficientDataError, ValidationError
from ..ontology import (
    LAMBDA,
    OUTCOME,
    PSI,
    SETTING,
    build_no_free_choice_counterexample,
    build_weather_model,
    full_joint,
    psi_determination,
    run_theorem_check,
)
from ..ontology.weather import FORECAST, WeatherModel
from ..prob import DEFAULT_TOL, condition, marginal
from ..quantum import PureState, computational_basis, pauli_measurement
from ..sampling import GENERATOR, empirical_markov_deviation, sample
from ..spacetime import is_free_sv
from . import modelfile
from .report import check_table, fmt_dev, fmt_float, render_json, render_text, verdict

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_VIOLATION, EXIT_IO = 0, 1, 2, 3, 4


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


def _load(path: str) -> modelfile.ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot read {path}: {exc.strerror}")
    try:
        return modelfile.parse_text(text, path)
    except modelfile.ModelFileError as exc:
        raise _Exit(EXIT_PARSE, f"parse error at {exc}")
    except ValidationError as exc:
        msg = "\n".join(f"invalid: {p}" for p in exc.problems)
        raise _Exit(EXIT_INVALID, msg)


def cmd_validate(args) -> int:
    mf = _load(args.model)
    m = mf.model
    print(f"{args.model}: valid ({len(m.lambda_space)} lambda values, {len(m.states)} states, "
          f"{len(m.measurement_set.measurements)} measurements, dimension {m.dim})")
    return EXIT_OK


def _spacetime_checks(mf: modelfile.ModelFile, tol: float) -> list:
    st = mf.spacetime
    if SETTING not in st:
        return []
    joint = full_joint(mf.model)
    others = [sv for n, sv in st.items() if n != SETTING]
    return [is_free_sv(st[SETTING], others, joint, tol)]


def cmd_check(args) -> int:
    mf = _load(args.model)
    report = run_theorem_check(mf.model, args.tolerance)
    extra = _spacetime_checks(mf, args.tolerance)
    if args.json:
        json.dump(render_json(report, args.tolerance, args.model, extra), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(render_text(report, extra))
    return EXIT_VIOLATION if report.violation else EXIT_OK


def _estimate_line(label, samples, u, v, w, reps, seed) -> str:
    try:
        est = empirical_markov_deviation(samples, u, v, w, bootstrap_reps=reps, seed=seed)
    except InsufficientDataError as exc:
        return f"{label}: insufficient data ({exc})"
    lo, hi = est.interval
    return (f"{label}: deviation {fmt_dev(est.estimate)}  95% bootstrap interval "
            f"[{fmt_dev(lo)}, {fmt_dev(hi)}]  cells used {est.cells_used}, excluded {est.cells_excluded}")


def cmd_sample(args) -> int:
    mf = _load(args.model)
    m = mf.model
    if args.n < 1:
        raise _Exit(EXIT_PARSE, "--n must be positive")
    samples = sample(m, args.n, args.seed)
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            samples.to_csv(fh)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot write {args.out}: {exc.strerror}")
    extras = m.extra_names
    print(f"wrote {args.n} records to {args.out} (seed={args.seed}, generator={GENERATOR})")
    print(_estimate_line("Eq. 1 completeness", samples, [OUTCOME], [LAMBDA, SETTING], [PSI] + extras,
                         args.bootstrap, args.seed))
    print(_estimate_line("Eq. 2 non-extendibility", samples, [OUTCOME], [PSI, SETTING], [LAMBDA] + extras,
                         args.bootstrap, args.seed))
    return EXIT_OK


def _dilation_lines(ms, states) -> list:
    lines = []
    for meas in ms:
        iso = build_isometry(meas)
        lines.append(f"measurement {meas.label}: isometry {iso.matrix.shape[0]}x{iso.matrix.shape[1]}, "
                     f"|V^dag V - 1| = {fmt_dev(isometry_deviation(iso.matrix))}")
        env = computational_basis(iso.env_dimension, "env")
        for s in states:
            dev = verify_restriction(iso, meas, s)
            lines.append(f"  state {s.label}: restriction deviation {fmt_dev(dev)} ({verdict(dev <= 1e-9)})")
            stats = joint_statistics(iso, s, meas, env)
            shown = ", ".join(f"({x},{meas.outcomes[int(y)]}): {fmt_float(p)}"
                              for (x, y), p in stats.items() if p > 1e-15)
            lines.append(f"    joint statistics with environment record: {{{shown}}}")
    return lines


def cmd_dilate(args) -> int:
    mf = _load(args.model)
    m = mf.model
    ms = [m.measurement_set[args.measurement]] if args.measurement else list(m.measurement_set.measurements)
    states = [m.state(args.state)] if args.state else list(m.states)
    print("\n".join(_dilation_lines(ms, states)))
    return EXIT_OK


def _demo_weather() -> str:
    w: WeatherModel = build_weather_model()
    out = ["Weather example (Fig. 1): two forecasters, deterministic weather.", ""]
    cloudy = [f for f, d in w.forecasts.items() if abs(d["sunny"] - 0.33) < 1e-12][0]
    x_given = marginal(condition(w.joint, {FORECAST: cloudy}), ["X"]).to_dict()
    out.append(f"left forecast after a cloudy day: sunny {fmt_float(x_given['sunny'])}, "
               f"cloudy {fmt_float(x_given['cloudy'])}")
    for name, dev, ok in w.chains():
        out.append(f"  {name:<22} deviation {fmt_dev(dev)}  {verdict(ok)}")
    out += ["",
            "Lambda contains tomorrow's weather, so it is complete for any Gamma.",
            "The probabilistic forecasts F and F' are not complete and need not be",
            "elements of reality (Fig. 1)."]
    return "\n".join(out)


def _demo_no_free_choice() -> str:
    m = build_no_free_choice_counterexample()
    report = run_theorem_check(m)
    det = psi_determination(m)
    out = ["No-free-choice counterexample (Discussion): the setting is fixed by a",
           "pre-existing record R and Lambda holds only the future outcome X.", ""]
    out.append(check_table(list(report.checks)))
    out.append("")
    out.append(f"Eq. 1 completeness: {verdict(report.check('completeness').passed)}")
    out.append(f"free choice: {verdict(report.check('free choice').passed)}")
    out.append(f"psi-determination: {'determined' if det.determined else 'not determined'}")
    for lam, psis in det.ambiguous().items():
        out.append(f"  Lambda={lam} is compatible with Psi in {{{', '.join(psis)}}}")
    out += ["", f"verdict: {report.verdict}",
            "Without free choice the outcome alone is a complete list, so Psi need",
            "not be determined by Lambda (Discussion)."]
    return "\n".join(out)


def _demo_dilate() -> str:
    z = pauli_measurement("z")
    plus = PureState.normalized([1, 1], "plus")
    out = ["Dilation of a Pauli-Z measurement (QMb) applied to |+>:"]
    out += _dilation_lines([z], [plus])
    return "\n".join(out)


DEMOS = {"weather": _demo_weather, "no-free-choice": _demo_no_free_choice, "dilate": _demo_dilate}


def cmd_demo(args) -> int:
    print(DEMOS[args.name]())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontocheck", description="Check finite ontological models of quantum measurements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="run every hypothesis check and psi-determination")
    p.add_argument("model")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sample", help="draw records to CSV and estimate the Markov deviations")
    p.add_argument("model")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--bootstrap", type=int, default=1000, help="bootstrap replicates")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("dilate", help="verify the measurement dilations of a model")
    p.add_argument("model")
    p.add_argument("--measurement")
    p.add_argument("--state")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("demo", help="built-in demonstrations")
    p.add_argument("name", choices=sorted(DEMOS))
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tolerance", 1.0) <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return EXIT_PARSE
    if getattr(args, "bootstrap", 100) < 100:
        print("error: --bootstrap must be at least 100", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except KeyError as exc:
        print(f"error: unknown label {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
