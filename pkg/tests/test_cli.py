from __future__ import annotations

import json

import jsonschema
import pytest

from stringyk.cli import load_schema, main, schema_name


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    doc = json.loads(out) if out.strip() else None
    return code, doc, err


def validate(doc):
    jsonschema.validate(doc, load_schema(schema_name(doc)))


COMMANDS = [
    ("group", "--group", "S3"),
    ("group", "--group", "Z2xZ2"),
    ("chartable", "--group", "Q8"),
    ("ptg", "--group", "S3", "--product", "convolution"),
    ("ptg", "--group", "Z3", "--product", "tensor"),
    ("gg", "--group", "Z2"),
    ("gg", "--group", "S3", "--product", "pontryagin"),
    ("gg", "--group", "Z3", "--compare-products"),
    ("linear", "--group", "Z3", "--rep", "weights:1,2"),
    ("linear", "--group", "S3", "--report", "obstruction"),
    ("orbisphere", "3", "5"),
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a))
def test_outputs_follow_schema(capsys, argv):
    code, doc, _ = run(capsys, *argv)
    assert code == 0
    assert doc["command"] == argv[0]
    validate(doc)


def test_chartable_degrees(capsys):
    code, doc, _ = run(capsys, "chartable", "--group", "S3")
    assert code == 0
    assert json.dumps(doc).count('"degrees"') == 1
    assert doc["degrees"] == [1, 1, 2]


def test_compare_products(capsys):
    code, doc, _ = run(capsys, "gg", "--group", "Z2", "--compare-products")
    assert code == 0
    assert doc["pairwise_distinct"] is True
    assert doc["products"] == ["tensor", "pontryagin", "stringy"]
    assert [doc["equal"][i][i] for i in range(3)] == [True, True, True]


def test_orbisphere_verify_reports_mismatch(capsys):
    code, doc, _ = run(capsys, "orbisphere", "2", "3", "--verify")
    assert code == 2
    validate(doc)
    assert doc["checks"]["alpha_power_is_1-u"] is True
    assert doc["checks"]["beta_power_is_1-u"] is False


def test_orbisphere_unit_pairing_verifies(capsys):
    code, doc, _ = run(capsys, "orbisphere", "2", "3", "--verify", "--pairing", "unit", "--tau", "1")
    assert code == 0
    assert doc["convention"] == {"tau": "1/1", "twisted_pairing": "unit"}
    # the unit pairing alone does not fix the closing constant
    code, doc, _ = run(capsys, "orbisphere", "2", "3", "--verify", "--pairing", "unit")
    assert code == 2
    assert doc["residual"]["single_tau_suffices"] is True


def test_bad_input_exit_one(capsys, tmp_path):
    assert main(["orbisphere", "2", "4"]) == 1
    assert main(["orbisphere", "2", "3", "--tau", "0"]) == 1
    assert main(["orbisphere", "2", "3", "--tau", "half"]) == 1
    assert main(["group", "--bogus"]) == 1
    assert main(["nosuchcommand"]) == 1
    assert main(["group", "--group", "Y7"]) == 1
    assert main(["linear", "--group", "S3", "--rep", "weights:1"]) == 1
    assert main(["selftest", "--groups", "all"]) == 1
    assert main(["selftest", "--only", "11"]) == 1
    assert main(["group", "--group", f"file:{tmp_path / 'missing.json'}"]) == 1
    capsys.readouterr()


def test_group_from_file(capsys, tmp_path):
    path = tmp_path / "z3.json"
    path.write_text(json.dumps({"kind": "table", "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}))
    code, doc, _ = run(capsys, "group", "--group", f"file:{path}")
    assert code == 0 and doc["order"] == 3 and doc["abelian"] is True
    path.write_text(json.dumps({"kind": "perm", "generators": [[1, 0, 2], [1, 2, 0]]}))
    code, doc, _ = run(capsys, "chartable", "--group", f"file:{path}")
    assert code == 0 and doc["degrees"] == [1, 1, 2]
    # not associative
    path.write_text(json.dumps({"kind": "table", "table": [[0, 1], [0, 0]]}))
    assert main(["group", "--group", f"file:{path}"]) == 1
    assert main(["group", "--group", f"file:{path}", "--order-cap", "1"]) == 1


def test_out_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    assert main(["ptg", "--group", "S3", "--out", str(path)]) == 0
    out, _ = capsys.readouterr()
    assert out == ""
    doc = json.loads(path.read_text())
    validate(doc)
    assert main(["ptg", "--group", "S3", "--out", str(tmp_path / "no" / "dir.json")]) == 1


def test_byte_identical_reruns(capsys):
    for argv in (["gg", "--group", "S3", "--compare-products"], ["linear", "--group", "D4", "--report", "obstruction"]):
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


def test_selftest_single_criterion(capsys):
    argv = ["selftest", "--only", "10", "--seed", "7", "--groups", "upto:6"]
    code, doc, err = run(capsys, *argv)
    assert code == 0
    validate(doc)
    assert doc["all_passed"] is True and doc["seed"] == 7
    assert "criterion 10 [PASS]" in err
    _, again, _ = run(capsys, *argv)
    assert again == doc


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("stringyk ")
