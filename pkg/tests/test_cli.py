import io
import json
import subprocess
import sys

import pytest

from chevcarpet.carpets import AdmissiblePair
from chevcarpet.cli import run
from chevcarpet.kmodules import one_module, span
from chevcarpet.scalars import RationalField


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def pair_file(tmp_path):
    F = RationalField(2, 2)
    pair = AdmissiblePair(span(F, ["1", "x1", "x2"]), span(F, ["1", "x1", "x2", "x1*x2"]), "C", 3)
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(pair.to_json()))
    return str(path)


def test_counterexamples():
    code, text = call("counterexamples", "--n", "4")
    assert code == 0 and "x1*x2" in text and "x1^3" in text and text.rstrip().endswith("PASS")


def test_counterexamples_json_schema():
    code, text = call("counterexamples", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["schema"] == 1 and doc["ok"] and doc["command"] == "counterexamples"


def test_bruhat_sl2_example():
    code, text = call("bruhat", "--rank", "2", "--field", "F2(x1)", "--word", "x[-2e1](x1)", "--json")
    doc = json.loads(text)
    form = doc["report"]["form"]
    assert code == 0
    assert form["u"] == [["2e1", "(1)/(x1)"]] and form["v"] == [["2e1", "(1)/(x1)"]]
    assert form["torus"] == ["(1)/(x1)", "1"]


def test_word_from_file(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("x[e1-e2](x1); x[-2e2](x1+1)\n")
    code, _ = call("bruhat", "--word", f"@{path}")
    assert code == 0


def test_pair_and_carpet_check(pair_file):
    assert call("pair", "check", "--pair", pair_file)[0] == 0
    assert call("carpet", "check", "--pair", pair_file)[0] == 0


def test_p_mismatch(pair_file):
    assert call("pair", "check", "--pair", pair_file, "--p", "3")[0] == 2


def test_membership_verdicts(pair_file):
    code, text = call("membership", "--pair", pair_file, "--word", "x[2e1](x1*x2)", "--json")
    doc = json.loads(text)
    assert code == 1 and doc["report"]["verdict"] == "NotMember"
    assert doc["report"]["witness"]["value"] == "x1*x2"
    code, text = call("membership", "--pair", pair_file, "--word", "x[2e1](x1); x[e1-e2](x1*x2)")
    assert code == 0 and "Member" in text


def test_input_errors():
    assert call("bruhat", "--word", "x[3e1](x1)")[0] == 2
    assert call("bruhat", "--field", "GF(8)", "--word", "x[2e1](1)")[0] == 2
    assert call("membership", "--pair", "/nonexistent.json", "--word", "x[2e1](1)")[0] == 2
    assert call("nosuchcommand")[0] == 2


def test_seed_is_printed():
    code, text = call("symbols", "--trials", "5", "--seed", "7")
    assert code == 0 and text.startswith("seed: 7")


def test_json_deterministic():
    a = call("relations", "verify", "--type", "C", "--rank", "2", "--trials", "2", "--json", "--seed", "4")
    b = call("relations", "verify", "--type", "C", "--rank", "2", "--trials", "2", "--json", "--seed", "4")
    assert a == b and a[0] == 0 and json.loads(a[1])["seed"] == 4


def test_sl2_and_perfectness():
    assert call("sl2", "enumerate", "--case", "a5-F9")[0] == 0
    code, text = call("perfectness", "--json", "--trials", "3")
    doc = json.loads(text)
    assert code == 0 and [r["applicable"] for r in doc["report"]["results"]] == [True, False]


def test_morphism_roundtrip():
    assert call("morphism", "roundtrip", "--rank", "2", "--trials", "5")[0] == 0


def test_bn_sampled():
    code, text = call("bn", "verify", "--instance", "mixed-rational-sampled", "--trials", "10", "--json")
    assert code == 0 and json.loads(text)["seed"] == 0


def test_console_entry():
    proc = subprocess.run([sys.executable, "-m", "chevcarpet.cli", "sl2", "enumerate", "--case", "dihedral-F4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "order 10" in proc.stdout
