import json
import os

import pytest

from seifert_wrt._config import PRECISION_ENV
from seifert_wrt.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verlinde(capsys):
    assert call(capsys, "verlinde", "2", "4", "1") == (0, "10\n", "")
    code, out, _ = call(capsys, "verlinde", "2", "4", "1", "--format", "json")
    assert json.loads(out)["count"] == "10"


def test_pm_monomials(capsys):
    code, out, _ = call(capsys, "pm", "1")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    assert doc["monomials"] == [{"q": 1, "p": 0, "num": "1", "den": "1"}, {"q": 1, "p": 1, "num": "-1", "den": "1"}]


def test_pgm(capsys):
    code, out, _ = call(capsys, "pgm", "2")
    fam = json.loads(out)["family"]
    assert [e["degree"] for e in fam] == [3, 1]
    assert all(e["two_pi_power"] == 4 for e in fam)


def test_xi_csv(capsys):
    code, out, _ = call(capsys, "xi", "2", "5")
    lines = out.splitlines()
    assert lines[0] == "j,x,re,im,polynomial"
    assert len(lines) == 11
    for line in lines[1:]:
        _, _, re, im, poly = line.split(",")
        assert float(re) == pytest.approx(float(poly), abs=1e-9)


def test_zk_range(capsys):
    code, out, _ = call(capsys, "zk", "2", "1", "1", "--k-range", "3:11:2")
    rows = out.splitlines()
    assert rows[0] == "k,re,im" and [r.split(",")[0] for r in rows[1:]] == ["3", "5", "7", "9", "11"]


def test_components(capsys):
    code, out, _ = call(capsys, "components", "2", "3", "2")
    labels = sorted(c["class"] for c in json.loads(out)["components"])
    assert labels == ["X2", "X2", "X3", "X3"]


def test_sphase(capsys):
    code, out, _ = call(capsys, "sphase", "--alpha", "1", "--parity", "even", "--n", "0", "--levels", "6")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["case"]


def test_verify_reports_failure(capsys):
    # b-ladder modulus is off by a factor 2, so verification fails with exit 1
    code, out, _ = call(capsys, "verify", "2", "1", "1", "--k-max", "128")
    doc = json.loads(out)
    assert code == 1 and not doc["checks"]["b0_moduli"]
    assert doc["checks"]["dominant_exponent"]


@pytest.mark.parametrize("argv", [
    ["verlinde", "2", "4", "9"],
    ["verlinde", "2", "x", "1"],
    ["zk", "2", "1", "1", "--k-range", "9:3"],
    ["zk", "2", "2", "4", "--k-range", "3:9"],
    ["components", "2", "0", "1"],
    ["nonsense"],
    [],
])
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize("argv", [["pm", "4"], ["components", "2", "5", "3"], ["zk", "2", "3", "2", "--k-range", "3:12"],
                                  ["pgm", "3"]])
def test_deterministic_and_round_trip(capsys, argv):
    first = call(capsys, *argv)[1]
    second = call(capsys, *argv)[1]
    assert first == second
    if first.startswith("{"):
        doc = json.loads(first)
        text = json.dumps(doc, indent=2) + "\n"
        assert text == first
        assert json.loads(text) == doc


def test_output_file_and_precision(tmp_path, capsys):
    target = tmp_path / "v.json"
    before = os.environ.get(PRECISION_ENV)
    code, out, _ = call(capsys, "verlinde", "3", "7", "1", "--format", "json", "--precision", "128", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["schema_version"] == 1
    assert os.environ.get(PRECISION_ENV) == before


def test_sphase_short_ladder_is_usage_error(capsys):
    code, _, err = call(capsys, "sphase", "--alpha", "1", "--parity", "even", "--n", "0", "--levels", "5")
    assert code == 2 and "6" in err
