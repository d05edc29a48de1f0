import json
import re
import subprocess
import sys

import pytest

from skewtor.cli import main, run

FLOAT = re.compile(r"\d\.\d|\de[+-]?\d|nan|inf\b")
ZERO5 = ["l1=0", "l2=0", "l3=0", "l4=0"]


def items(doc):
    return {it["name"]: it for sec in doc["sections"] for it in sec["items"]}


def walk(x):
    if isinstance(x, dict):
        for v in x.values():
            yield from walk(v)
    elif isinstance(x, list):
        for v in x:
            yield from walk(v)
    else:
        yield x


def machine(argv, capsys):
    code = main(list(argv) + ["--format", "machine"])
    return json.loads(capsys.readouterr().out), code


def test_connection_phikt_table(capsys):
    doc, code = machine(["connection", "examples/contact5d.spec", "--type", "phikt"], capsys)
    assert code == 0
    it = items(doc)
    assert it["T345"]["value"] == "2*m1"
    assert it["T235"]["value"] == "2*m2"
    assert it["T125"]["value"] == "-2*m1"
    assert it["Dphi = 0"]["status"] == "pass"


def test_verify_equivalences_at_point_reports_failure(capsys):
    doc, code = machine(["verify", "examples/norden4d.spec", "--id", "S2-equivalences",
                         "--param", "λ₁=1", "λ₂=0", "λ₃=1", "λ₄=0"], capsys)
    res = items(doc)["S2-equivalences"]
    assert code == 1 and res["status"] == "failed"
    assert res["witness"]["conditions"] == {"isotropic Kaehler": True, "scalar flat": True,
                                            "R' Kaehler": False, "quadric": True}


def test_verify_equivalences_at_zero_holds(capsys):
    doc, code = machine(["verify", "norden4d", "--id", "S2-equivalences", "--param", *ZERO5], capsys)
    assert code == 0
    assert items(doc)["S2-equivalences"]["status"] != "failed"


def test_classify_flat(capsys):
    doc, code = machine(["classify", "examples/flat8d.spec"], capsys)
    assert code == 0
    flags = [it for it in items(doc).values() if it["status"] in ("true", "false")]
    assert flags and all(it["status"] == "true" for it in flags)


@pytest.mark.parametrize("argv", [
    ["check", "norden4d"],
    ["classify", "contact5d"],
    ["connection", "norden4d", "--type", "kt"],
    ["curvature", "contact5d", "--type", "phikt"],
    ["verify", "flat8d", "--id", "S4-flat"],
    ["eval", "contact5d", "--command", "connection", "--type", "phikt", "--param", "m1=1/2", "m2=0", *ZERO5],
])
def test_exit_code_matches_failed_items(argv, capsys):
    doc, code = machine(argv, capsys)
    failed = sum(it["status"] == "failed" for it in items(doc).values())
    assert doc["failed"] == failed
    assert code == (1 if failed else 0)


@pytest.mark.parametrize("argv", [
    ["verify", "norden4d", "--id", "S9-nothing"],
    ["connection", "norden4d", "--type", "phikt"],
    ["eval", "norden4d", "--param", "q=1"],
    ["classify", "missing/none.spec"],
    ["eval", "norden4d", "--param", "l1=half"],
    ["eval", "norden4d", "--param", "l1"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_decimal_parameter_is_read_exactly(capsys):
    doc, _ = machine(["eval", "norden4d", "--param", "l1=0.5"], capsys)
    assert doc["spec"]["bindings"]["l1"] == "1/2"


def test_machine_error_document(capsys):
    assert main(["classify", "missing/none.spec", "--format", "machine"]) == 2
    assert "error" in json.loads(capsys.readouterr().out)


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "norden4d"])
    assert exc.value.code == 2


def test_no_floats_anywhere(capsys):
    doc, _ = machine(["curvature", "norden4d", "--type", "kt"], capsys)
    doc.pop("engine")
    for v in walk(doc):
        assert not isinstance(v, float)
        if isinstance(v, str):
            assert not FLOAT.search(v), v
    main(["verify", "contact5d", "--all"])
    body = capsys.readouterr().out.split("\n", 1)[1]
    assert not FLOAT.search(body)


def test_deterministic(capsys):
    a, _ = machine(["verify", "norden4d", "--id", "S2-scalar-props"], capsys)
    b, _ = machine(["verify", "norden4d", "--id", "S2-scalar-props"], capsys)
    assert a == b


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("SKEWTOR_SEED", "7")
    doc, _ = run(["verify", "norden4d", "--id", "S2-scalar-props"])
    assert doc["seed"] == 7
    doc, _ = run(["verify", "norden4d", "--id", "S2-scalar-props", "--seed", "3"])
    assert doc["seed"] == 3
    monkeypatch.setenv("SKEWTOR_SEED", "seven")
    assert main(["verify", "norden4d", "--id", "S2-scalar-props"]) == 2


def test_eval_substitutes_point(capsys):
    doc, code = machine(["eval", "contact5d", "--command", "connection", "--type", "phikt",
                         "--param", "m1=1", "m2=0", *ZERO5], capsys)
    assert code == 0
    assert items(doc)["T125"]["value"] == "-2"
    assert doc["spec"]["bindings"]["m1"] == "1"


def test_check_reports_invalid_spec_as_items(tmp_path, capsys):
    p = tmp_path / "bad.spec"
    p.write_text("name = bad\ndim = 2\n\n[algebra]\nbracket 1 2 = X1\n\n[metric]\ndiag 1 1\n\n"
                 "[structure]\nkind = norden\nJ 1 = X2\nJ 2 = -X1\n")
    doc, code = machine(["check", str(p)], capsys)
    assert code == 1
    assert any(it["status"] == "failed" for it in items(doc).values())
    assert main(["classify", str(p)]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "skewtor", "classify", "flat8d"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "0 failed" in out.stdout
