import json
import subprocess
import sys
from fractions import Fraction

import pytest

from goldman_tensor.cli import main
from goldman_tensor.expansion import Expansion, eval_theta, surface_relator
from goldman_tensor.necklace import Necklace
from goldman_tensor.tensor import SurfaceSignature, Tensor, log_t


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_expand_builds_symplectic_expansion(capsys):
    code, doc = run(capsys, "expand", "--genus", "1", "--degree", "6")
    assert code == 0
    theta = Expansion.from_json(doc)
    sig = theta.sig
    assert log_t(eval_theta(theta, surface_relator(sig))) == Tensor.omega(sig)


def test_expand_low_degree_carries_forced_terms(capsys):
    # degree-2 corrections are forced by extendability; see notes
    code, doc = run(capsys, "expand", "--degree", "2")
    theta = Expansion.from_json(doc)
    s = theta.sig
    w = (Tensor.word(s, "A1B1") - Tensor.word(s, "B1A1")).scale(Fraction(1, 2))
    assert theta.log_values == (Tensor.symbol(s, 0) + w, Tensor.symbol(s, 1) - w)


def test_expand_with_boundary_has_path_logs(capsys):
    code, doc = run(capsys, "expand", "--genus", "1", "--boundaries", "1", "--degree", "4")
    assert code == 0
    assert set(doc["path_logs"]) == {"p1"}
    assert Expansion.from_json(doc).sig == SurfaceSignature(1, 1, 4)


def test_verify_reports_and_is_deterministic(capsys):
    code, doc = run(capsys, "verify", "chord", "--genus", "1", "--degree", "4")
    assert code == 0 and doc["pass"]
    assert "omega2_central" in [c["check"] for c in doc["checks"]]
    main(["verify", "chord", "--genus", "1", "--degree", "4"])
    again = capsys.readouterr().out
    assert json.loads(again) == doc


@pytest.mark.slow
def test_verify_all_default_is_byte_stable():
    cmd = [sys.executable, "-m", "goldman_tensor.cli", "verify", "all"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=False)
    b = subprocess.run(cmd, capture_output=True, text=True, check=False)
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_twist_generator_and_power(capsys):
    code, doc = run(capsys, "twist", "a1", "--genus", "1", "--degree", "5", "--k", "2")
    assert code == 0
    assert {c["check"]: c["pass"] for c in doc["checks"]} == {"tau1_equals_minus_L3": True, "tau2_closed_form": True}
    code, doc = run(capsys, "twist", "a1^2", "--genus", "1", "--degree", "5", "--k", "1")
    assert code == 0
    power = [c for c in doc["checks"] if c["check"] == "power_relation"]
    assert power == [{"check": "power_relation", "root": "a1", "exponent": 4, "pass": True}]


def test_twist_separating_word_has_no_tau_one(capsys):
    code, doc = run(capsys, "twist", "[a1,b1]", "--genus", "2", "--degree", "5", "--k", "2")
    assert code == 0
    assert doc["tau"]["tau1"] == []
    assert doc["tau"]["tau2"]


def test_bracket_and_cobracket(capsys):
    code, doc = run(capsys, "bracket", "A1A1", "B1", "--degree", "4")
    assert code == 0
    assert Necklace.from_json(doc["bracket"]) == Necklace.of_word(SurfaceSignature(1, 0, 4), "A1", -2)
    nk = Necklace.of_word(SurfaceSignature(2, 0, 6), "A1A2B1B2")
    code, doc = run(capsys, "cobracket", json.dumps(nk.to_json()), "--genus", "2")
    assert code == 0
    assert len(doc["cobracket"]["terms"]) == 4


def test_trace_reports_failure_with_exit_one(capsys):
    code, doc = run(capsys, "trace", "--genus", "2", "--degree", "5", "--k", "3")
    assert (doc["dim_h"], doc["morita_rank"]) == (36, 20)
    assert code == (0 if doc["trace_cobracket"]["pass"] else 1)


def test_trace_even_degree_passes(capsys):
    code, doc = run(capsys, "trace", "--genus", "1", "--degree", "6", "--k", "4")
    assert code == 0
    assert doc["dim_h"] == 3 and doc["morita_rank"] == 0


def test_chord_commands(capsys):
    code, doc = run(capsys, "chord", "--genus", "2", "--degree", "4", "--m", "2")
    assert code == 0
    assert (doc["count"], doc["double_factorial"], doc["a_map_rank"]) == (3, 3, 3)
    code, doc = run(capsys, "chord", "--bracket", "1-2", "1-2,3-4")
    assert code == 0
    assert isinstance(doc["bracket"], list)


def test_homgoldman_commands(capsys):
    code, doc = run(capsys, "homgoldman", "bracket", "1,0", "0,1")
    assert code == 0
    assert doc["result"] == {"terms": [{"vec": [1, 1], "coeff": "1"}]}
    code, doc = run(capsys, "homgoldman", "commutator", "2,4", "--coeff", "2")
    assert doc["member"] is True
    code, doc = run(capsys, "homgoldman", "center", "0,0")
    assert doc["member"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nope"],
        ["expand", "--genus", "0"],
        ["twist", "a7", "--genus", "1"],
        ["twist", "a1", "--k", "9"],
        ["homgoldman", "commutator", "1,0", "--matrix", '{"rank": 2, "matrix": [[0, 2], [-2, 0]]}'],
        ["homgoldman", "bracket", "1,0"],
        ["chord", "--bracket", "2-1", "1-2"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_two_with_json(capsys, argv):
    code = main(argv)
    assert code == 2
    assert "error" in json.loads(capsys.readouterr().out)


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "theta.json"
    assert main(["expand", "--degree", "3", "--out", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    assert Expansion.from_json(json.loads(dest.read_text())).sig == SurfaceSignature(1, 0, 3)
