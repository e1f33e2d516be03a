import json
import shutil
from pathlib import Path

import pytest

from exanlab import catalog, cli
from exanlab import serialize as ser
from exanlab.exactla import GF, QQ

FIXTURES = Path(__file__).resolve().parent / "fixtures"
INPUTS = FIXTURES / "inputs"
CASES = json.loads((FIXTURES / "cases.json").read_text())


def run(argv, cwd, monkeypatch, capsys):
    monkeypatch.chdir(cwd)
    code = cli.main(argv)
    return capsys.readouterr().out, code


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case, monkeypatch, capsys):
    out, code = run(case["argv"], INPUTS, monkeypatch, capsys)
    assert code == case["exit"]
    assert out == (FIXTURES / "golden" / f"{case['name']}.json").read_text()


def test_hh2_of_dual_numbers(monkeypatch, capsys):
    out, code = run(["hh", "--degree", "2", "dual_q.json", "regular_bimodule_q.json"], INPUTS, monkeypatch, capsys)
    assert code == 0 and json.loads(out)["dim_HH"] == 1


def test_bad_algebra_reports_violations(monkeypatch, capsys):
    out, code = run(["validate", "bad_unit_q.json"], INPUTS, monkeypatch, capsys)
    report = json.loads(out)
    assert code == 1 and not report["verdict"] and report["violations"]


def test_trivial_extension_round_trip(tmp_path, monkeypatch, capsys):
    for name in ("dual_q.json", "regular_bimodule_q.json", "zero_cocycle_dual_q.json"):
        shutil.copy(INPUTS / name, tmp_path / name)
    _, code = run(
        ["extend", "dual_q.json", "regular_bimodule_q.json", "zero_cocycle_dual_q.json", "-o", "out.json"],
        tmp_path, monkeypatch, capsys,
    )
    assert code == 0 and (tmp_path / "out.json").exists()
    _, code = run(["validate", "out.json"], tmp_path, monkeypatch, capsys)
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate", "dual_q.json"],
        ["hh", "dual_q.json"],                       # missing --degree
        ["hh", "--degree", "5", "dual_q.json"],
        ["validate", "does_not_exist.json"],
        ["caction", "--element", "1", "dual_q.json", "regular_bimodule_q.json", "dual_hh2_cocycle_q.json"],
        ["kahler", "regular_bimodule_q.json"],       # no algebra section
    ],
)
def test_input_errors_exit_2(argv, monkeypatch, capsys):
    out, code = run(argv, INPUTS, monkeypatch, capsys)
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "input"


def test_help_exits_cleanly(monkeypatch, capsys):
    _, code = run(["--help"], INPUTS, monkeypatch, capsys)
    assert code == 0


# ---------------------------------------------------------------------------
# serialization


@pytest.mark.parametrize("F", [QQ, GF(5)])
@pytest.mark.parametrize("name", ["dual", "M2", "k[x,y]/(x^2,y^2)"])
def test_algebra_document_round_trip(F, name):
    a = catalog.catalog(F)[name]
    doc = json.loads(ser.dumps(ser.dump_algebra(a)))
    b = ser.load_algebra(F, doc)
    assert (b.mul == a.mul).all() and (b.unit == a.unit).all()


def test_scalars_must_be_strings():
    with pytest.raises(ser.SchemaError):
        ser.load_algebra(QQ, {"dim": 1, "unit": [1], "mul": [[["1"]]]})


def test_shape_mismatch_is_reported():
    with pytest.raises(ser.SchemaError, match="expected shape"):
        ser.load_algebra(QQ, {"dim": 2, "unit": ["1", "0"], "mul": [[["1"]]]})


def test_field_mismatch_between_documents():
    with pytest.raises(ser.SchemaError, match="field mismatch"):
        ser.merge_documents([{"field": "Q", "algebra": {}}, {"field": {"Fp": 3}, "module": "regular"}])


def test_dumps_is_deterministic():
    assert ser.dumps({"b": 1, "a": [2]}) == '{\n  "a": [\n    2\n  ],\n  "b": 1\n}\n'
