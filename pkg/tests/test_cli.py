import hashlib
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from conftest import FIXTURES
from ontocheck.cli import modelfile
from ontocheck.cli.main import main
from ontocheck.errors import ValidationError

VALID = ["compliant_qubit.json", "compliant_qutrit.json", "no_free_choice.json", "single_measurement.json",
         "hidden_outcome.json", "near_degenerate.json", "dense_preset.json"]

# sha256 of `sample compliant_qubit.json --n 1000 --seed 7`
CSV_SHA256 = "23802afa595b43950977fbe451c003aede26e44ea17538fd92245ffbf01a8f80"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


GOLDEN = [
    (("validate", FIXTURES / "compliant_qubit.json"), 0),
    (("validate", FIXTURES / "dense_preset.json"), 0),
    (("validate", FIXTURES / "bad_projectors.json"), 1),
    (("validate", FIXTURES / "truncated.json"), 2),
    (("validate", FIXTURES / "does_not_exist.json"), 4),
    (("check", FIXTURES / "compliant_qubit.json"), 0),
    (("check", FIXTURES / "no_free_choice.json"), 0),
    (("check", FIXTURES / "single_measurement.json"), 0),
    (("check", FIXTURES / "near_degenerate.json"), 0),
    (("check", FIXTURES / "near_degenerate.json", "--tolerance", "1e-3"), 3),
    (("check", FIXTURES / "bad_projectors.json"), 1),
    (("check", FIXTURES / "compliant_qubit.json", "--tolerance", "-1"), 2),
    (("demo", "nonsense"), 2),
    (("frobnicate",), 2),
    (("sample", FIXTURES / "compliant_qubit.json", "--out", "/nonexistent_dir/x.csv"), 4),
]


@pytest.mark.parametrize("argv,code", GOLDEN, ids=[" ".join(str(a).split("/")[-1] for a in g[0]) for g in GOLDEN])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_validate_names_measurement(capsys):
    code, _, err = run(capsys, "validate", FIXTURES / "bad_projectors.json")
    assert code == 1 and "measurement 'x01'" in err


def test_truncated_reports_location(capsys):
    _, _, err = run(capsys, "validate", FIXTURES / "truncated.json")
    assert "truncated.json:" in err and "parse error" in err


def test_check_outputs(capsys):
    _, out, _ = run(capsys, "check", FIXTURES / "compliant_qubit.json")
    assert "verdict: determined" in out and "Eq. 1" in out
    _, out, _ = run(capsys, "check", FIXTURES / "no_free_choice.json")
    assert "free choice: FAIL" in out and "not determined" in out
    _, out, _ = run(capsys, "check", FIXTURES / "single_measurement.json")
    assert "tomographic completeness: FAIL" in out
    _, out, _ = run(capsys, "check", FIXTURES / "near_degenerate.json", "--tolerance", "1e-3")
    assert "THEOREM VIOLATION" in out


def test_spacetime_free_choice_reported(capsys):
    _, out, _ = run(capsys, "check", FIXTURES / "compliant_qubit.json")
    assert "free choice (spacetime)" in out


@pytest.mark.parametrize("name", ["compliant_qubit.json", "no_free_choice.json", "near_degenerate.json"])
def test_json_report_validates(capsys, name):
    code, out, _ = run(capsys, "check", FIXTURES / name, "--json", "--tolerance", "1e-3")
    doc = json.loads(out)
    jsonschema.Draft202012Validator(modelfile.load_schema("report.schema.json")).validate(doc)
    assert doc["theorem_violation"] == (code == 3)


def test_csv_byte_stable(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(capsys, "sample", FIXTURES / "compliant_qubit.json", "--n", 1000, "--seed", 7,
                   "--out", p, "--bootstrap", 100)[0] == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    assert hashlib.sha256(a).hexdigest() == CSV_SHA256


def test_sample_prints_estimates(capsys, tmp_path):
    _, out, _ = run(capsys, "sample", FIXTURES / "hidden_outcome.json", "--n", 5000, "--seed", 1,
                    "--out", tmp_path / "h.csv", "--bootstrap", 200)
    line = next(l for l in out.splitlines() if l.startswith("Eq. 2"))
    lo = float(line.split("[")[1].split(",")[0])
    assert lo > 0


@pytest.mark.parametrize("name", VALID)
def test_round_trip(name):
    a = modelfile.load(FIXTURES / name)
    b = modelfile.parse_text(modelfile.dumps(a.model, a.spacetime))
    ma, mb = a.model, b.model
    assert ma.name == mb.name and ma.prior.spaces == mb.prior.spaces
    np.testing.assert_array_equal(ma.prior.table, mb.prior.table)
    support = ma.prior.table > 0
    np.testing.assert_array_equal(ma.response[support], mb.response[support])
    assert [s.label for s in ma.states] == [s.label for s in mb.states]
    for sa, sb in zip(ma.states, mb.states):
        np.testing.assert_array_equal(sa.amplitudes, sb.amplitudes)
    assert ma.measurement_set.setting_distribution == mb.measurement_set.setting_distribution
    for x, y in zip(ma.measurement_set.measurements, mb.measurement_set.measurements):
        assert x.outcomes == y.outcomes
        for o in x.outcomes:
            np.testing.assert_array_equal(x.projectors[o], y.projectors[o])
    assert (ma.setting is None) == (mb.setting is None)
    if ma.setting is not None:
        np.testing.assert_array_equal(ma.setting, mb.setting)
    assert a.spacetime == b.spacetime


class TestModelFileErrors:
    def doc(self):
        return json.loads((FIXTURES / "dense_preset.json").read_text())

    def test_omitted_prior_needs_sparse(self):
        doc = self.doc()
        doc["prior"] = [e for e in doc["prior"] if e["weight"] > 0]
        with pytest.raises(ValidationError) as info:
            modelfile.parse_document(doc)
        assert any("sparse" in p for p in info.value.problems)
        doc["sparse"] = True
        modelfile.parse_document(doc)

    def test_missing_key(self):
        doc = self.doc()
        del doc["states"]
        with pytest.raises(modelfile.ModelFileError):
            modelfile.parse_document(doc)

    def test_unknown_label(self):
        doc = self.doc()
        doc["prior"][0]["assignment"]["Psi"] = "nope"
        with pytest.raises(ValidationError):
            modelfile.parse_document(doc)

    def test_preset_needs_qubit(self):
        doc = self.doc()
        doc["dimension"] = 3
        with pytest.raises(ValidationError):
            modelfile.parse_document(doc)

    def test_spacetime_unknown_variable(self):
        doc = self.doc()
        doc["spacetime"] = {"Q": [0, 0, 0, 0]}
        with pytest.raises(ValidationError):
            modelfile.parse_document(doc)


class TestDemos:
    def test_weather(self, capsys):
        code, out, _ = run(capsys, "demo", "weather")
        assert code == 0 and "Fig. 1" in out
        lines = {l.split()[0] + l.split()[2]: l for l in out.splitlines() if "<->" in l}
        assert lines["GLambda"].rstrip().endswith("PASS")
        assert lines["LambdaF"].rstrip().endswith("FAIL")
        assert "sunny 0.33, cloudy 0.67" in out

    def test_no_free_choice(self, capsys):
        code, out, _ = run(capsys, "demo", "no-free-choice")
        assert code == 0 and "Discussion" in out
        assert "Eq. 1 completeness: PASS" in out and "free choice: FAIL" in out
        assert "psi-determination: not determined" in out

    def test_dilate(self, capsys):
        code, out, _ = run(capsys, "demo", "dilate")
        assert code == 0 and "QMb" in out
        assert "(PASS)" in out and "{(0,0): 0.5, (1,1): 0.5}" in out


def test_dilate_command(capsys):
    code, out, _ = run(capsys, "dilate", FIXTURES / "compliant_qubit.json", "--measurement", "z")
    assert code == 0 and "FAIL" not in out and out.count("restriction deviation") == 2
    assert run(capsys, "dilate", FIXTURES / "compliant_qubit.json", "--measurement", "nope")[0] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "ontocheck", "check", str(FIXTURES / "compliant_qubit.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "determined" in r.stdout
