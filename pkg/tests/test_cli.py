import json
import subprocess
import sys
from importlib.resources import files

import jsonschema
import pytest

from gmak.cli import main

SCHEMA = json.loads(files("gmak").joinpath("report_schema.json").read_text("utf-8"))
TWO_CYCLE = "species X\nvertex a: 0\nvertex b: X\nedge a -> b [k1]\nedge b -> a [k2]\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize(
    "argv,code",
    [
        (["check", "existence", "fixtures/sir.gmak"], 1),
        (["check", "prop-pmatrix", "fixtures/sir.gmak", "--param", "beta=1/2"], 0),
        (["check", "prop-pmatrix", "fixtures/sir.gmak", "--param", "beta=1"], 1),
        (["check", "prop-pmatrix", "fixtures/lotka.gmak"], 0),
        (["check", "prop-pmatrix", "fixtures/lotka.gmak", "--param", "alpha=1,beta=1"], 1),
        (["check", "prop-pmatrix", "fixtures/signaling.gmak"], 2),
        (["check", "prop-s", "fixtures/signaling.gmak"], 0),
        (["check", "prop-s", "fixtures/futile.gmak"], 1),
        (["check", "carlson", "fixtures/signaling.gmak"], 0),
        (["check", "carlson", "fixtures/futile.gmak"], 0),
        (["check", "carlson", "fixtures/futile.gmak", "--lambda", "1/2,1/8,1/8"], 1),
        (["check", "p0plus", "fixtures/futile-reversed.gmak"], 1),
        (["check", "p0plus", "fixtures/futile.gmak"], 0),
        (["check", "cycle-stability", "fixtures/futile.gmak"], 2),
        (["check", "uniqueness", "fixtures/lotka.gmak"], 0),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_lotka_carlson_exit_code_is_deterministic(capsys):
    codes = {run(capsys, "check", "carlson", "fixtures/lotka.gmak")[0] for _ in range(3)}
    assert len(codes) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "nonsense", "fixtures/lotka.gmak"],
        ["check", "existence", "does/not/exist.gmak"],
        ["check", "existence", "fixtures/lotka.gmak", "--param", "gamma=1"],
        ["cbe", "fixtures/lotka.gmak"],
        ["frobnicate"],
        [],
    ],
)
def test_errors_exit_3(capsys, argv):
    assert main(argv) == 3


def test_parse_error_exits_3(tmp_path, capsys):
    bad = tmp_path / "bad.gmak"
    bad.write_text("species X\nvertex a: Z\n")
    assert main(["analyze", str(bad)]) == 3
    assert "line" in capsys.readouterr().err


@pytest.mark.parametrize("name", ["lotka", "sir", "signaling", "futile", "futile-reversed"])
def test_analyze_json_validates_and_is_reproducible(capsys, name):
    code, out = run(capsys, "analyze", f"fixtures/{name}.gmak", "--json", "--samples", "5")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["schema"] == "gmak-report/1"
    assert run(capsys, "analyze", f"fixtures/{name}.gmak", "--json", "--samples", "5")[1] == out


def test_analyze_lotka_text(capsys):
    code, out = run(capsys, "analyze", "fixtures/lotka.gmak")
    assert code == 0
    assert "diagonally stable for all rate constants" in out


def test_analyze_json_checks_in_declaration_order(capsys):
    doc = json.loads(run(capsys, "analyze", "fixtures/futile.gmak", "--json")[1])
    names = [c["name"] for c in doc["checks"]]
    assert names.index("existence") < names.index("uniqueness") < names.index("carlson")
    by = {c["name"]: c for c in doc["checks"]}
    assert by["carlson"]["status"] == "holds"
    assert by["carlson"]["evidence"]["witness"] == [0, 3, 5]
    assert by["prop-S"]["status"] == "fails"
    assert all(c["ms"] is None for c in doc["checks"])


def test_timing_flag_records_ms(capsys):
    doc = json.loads(run(capsys, "check", "existence", "fixtures/lotka.gmak", "--json", "--timing")[1])
    assert doc["name"] == "existence" and isinstance(doc["ms"], (int, float))


def test_cbe_two_cycle(tmp_path, capsys):
    f = tmp_path / "two.gmak"
    f.write_text(TWO_CYCLE)
    code, out = run(capsys, "cbe", str(f), "--rate", "k1=1,k2=1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["x_star"] == pytest.approx([1.0])
    assert doc["spectrum_on_S"] == [[pytest.approx(-1.0), pytest.approx(0.0)]]


def test_cbe_lotka_residual(capsys):
    code, out = run(capsys, "cbe", "fixtures/lotka.gmak", "--rate", "k12=1,k23=1,k31=1", "--json")
    assert code == 0 and json.loads(out)["residual_norm"] <= 1e-12


def test_cbe_without_equilibrium(capsys):
    code, _ = run(capsys, "cbe", "fixtures/sir.gmak", "--rate", "d=1,b=2,star=3,c=5,rd=7")
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gmak", "check", "existence", "fixtures/sir.gmak"], capture_output=True, text=True
    )
    assert proc.returncode == 1
