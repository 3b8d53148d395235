import json
import shutil
from importlib import resources

import pytest

from graverlift import formats
from graverlift.cli import main
from graverlift.exact import IntMatrix
from graverlift.nfold import assemble_mfold


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


@pytest.fixture
def base_doc(write):
    return write("base.json", formats.golden_text("base_a34"))


def test_graver_row(write, capsys):
    assert main(["graver", write("m.txt", "1 3\n1 1 1\n")]) == 0
    out = capsys.readouterr().out
    assert "6 elements" in out


def test_graver_identity(write, capsys):
    assert main(["graver", write("i.txt", "2 2\n1 0\n0 1\n")]) == 0
    assert "0 elements" in capsys.readouterr().out


def test_graver_a3x3_max_type(write, capsys):
    m = assemble_mfold(IntMatrix.from_rows([[1, 1, 1]]), 3)
    assert main(["graver", write("a33.txt", formats.format_matrix(m)), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    types = [sum(1 for b in range(3) if any(v[3 * b:3 * b + 3])) for v in doc["elements"]]
    assert max(types) == 3
    assert doc["count"] == 30


def test_graver_parse_error(write, capsys):
    assert main(["graver", write("bad.txt", "1 3\n1 one 1\n")]) == 2


def test_missing_file():
    assert main(["graver", "/nonexistent/matrix.txt"]) == 2


def test_budget_exit(write):
    m = assemble_mfold(IntMatrix.from_rows([[1, 1, 1]]), 4)
    assert main(["graver", write("a.txt", formats.format_matrix(m)), "--budget-completion", "10"]) == 3


@pytest.mark.parametrize("text, expected", [
    ("2 4\n1 1 1 1\n0 1 2 3\n", "6"),
    ("2 2\n1 0\n0 1\n", "0"),
])
def test_complexity(write, capsys, text, expected):
    assert main(["complexity", write("a.txt", text)]) == 0
    assert capsys.readouterr().out.strip() == expected


def test_complexity_with_B(write, capsys):
    a = write("a.txt", "1 3\n1 1 1\n")
    b = write("b.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n")
    assert main(["complexity", a, b, "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"graver_complexity": 3}


def test_complexity_mismatch(write):
    assert main(["complexity", write("a.txt", "1 3\n1 1 1\n"), write("b.txt", "1 2\n1 1\n")]) == 2


def test_verify_base(base_doc, capsys):
    assert main(["relation", "verify", base_doc]) == 0
    out = capsys.readouterr().out
    assert "VALID" in out and "27" in out


def test_verify_membership_limit(base_doc, capsys):
    assert main(["relation", "verify", base_doc, "--membership-max-copies", "3"]) == 0
    assert "unverified" in capsys.readouterr().out


def test_verify_failure(write, capsys):
    doc = json.loads(formats.golden_text("base_a34"))
    doc["coefficients"] = [2, 6, 10, 4, 6, 12, 14]
    assert main(["relation", "verify", write("bad.json", json.dumps(doc)), "--skip-membership"]) == 1


def test_verify_json(base_doc, capsys):
    assert main(["relation", "verify", base_doc, "--format", "json", "--skip-membership"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["valid"] and doc["sum"] == 27 and doc["membership"] is None


def test_chain_363(base_doc, tmp_path, capsys):
    out = tmp_path / "m7.json"
    assert main(["relation", "chain", base_doc, "--l", "2", "--target", "7", "-o", str(out)]) == 0
    assert "sum = 363" in capsys.readouterr().out
    assert out.read_text() == formats.golden_text("a3m_m7")


def test_chain_switch_367(base_doc, capsys):
    args = ["relation", "chain", base_doc, "--l", "2", "--switch-at", "6", "--switch-l", "0", "--target", "7"]
    assert main(args + ["--format", "json"]) == 0
    assert capsys.readouterr().out == formats.golden_text("a3m_m7_switched")


def test_lift_once(base_doc, capsys):
    assert main(["relation", "lift", base_doc, "--l", "2"]) == 0
    assert "sum = 75" in capsys.readouterr().out


def test_lift_conditions_failed(base_doc, capsys):
    assert main(["relation", "lift", base_doc, "--l", "1"]) == 1
    assert "gcd" in capsys.readouterr().err


def test_lift_with_x0_index(write, capsys):
    doc = json.loads(formats.golden_text("base_a34"))
    # move x0 to the end and rotate the bricks
    doc["elements"] = [t[1:] + t[:1] for t in doc["elements"][1:] + doc["elements"][:1]]
    doc["coefficients"] = doc["coefficients"][1:] + doc["coefficients"][:1]
    path = write("moved.json", json.dumps(doc))
    assert main(["relation", "chain", path, "--l", "2", "--target", "5", "--x0-index", "6"]) == 0
    assert "sum = 75" in capsys.readouterr().out


def test_chain_missing_flags(base_doc):
    assert main(["relation", "chain", base_doc]) == 2
    assert main(["relation", "chain", base_doc, "--l", "2"]) == 2
    assert main(["relation", "chain", base_doc, "--l", "2", "--target", "7", "--switch-at", "6"]) == 2


def test_base_a34_output(tmp_path):
    out = tmp_path / "b.json"
    assert main(["base", "a34", "-o", str(out), "--format", "json"]) == 0
    assert out.read_text() == formats.golden_text("base_a34")


def test_base_cor2(write, capsys):
    assert main(["base", "cor2", write("m.txt", "1 3\n1 1 1\n"), "--format", "json"]) == 0
    rel = formats.load_relation(capsys.readouterr().out)
    assert rel.coefficients == (1, 1, 1)


def test_bound_table(capsys):
    assert main(["bound", "cor3", "--m-from", "4", "--m-to", "8", "--compare", "berstein_onn"]) == 0
    rows = [line.split() for line in capsys.readouterr().out.strip().splitlines()[1:]]
    assert [int(r[1]) for r in rows] == [27, 75, 171, 363, 747]
    assert [int(r[2]) for r in rows] == [27, 61, 129, 265, 537]


@pytest.mark.parametrize("args, value", [
    (["cor2", "--g", "3", "--M", "4"], "7"),
    (["mixed", "--m0", "6", "--M", "7"], "367"),
    (["cor1", "--sum-h", "27", "--g", "3", "--s", "7", "--m0", "4", "--M", "5"], "75"),
])
def test_bound_json(capsys, args, value):
    assert main(["bound", *args, "--format", "json"]) == 0
    (doc,) = json.loads(capsys.readouterr().out)
    assert doc["value"] == value


@pytest.mark.parametrize("args", [
    ["mixed", "--m0", "5", "--M", "7"],
    ["cor3", "--M", "3"],
    ["cor2", "--M", "4"],
    ["cor3", "--m-from", "6", "--m-to", "4"],
])
def test_bound_out_of_range(args):
    assert main(["bound", *args]) == 2


def test_reproduce(capsys):
    assert main(["reproduce"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "all checks passed" in out


def test_reproduce_skip_membership(capsys):
    assert main(["reproduce", "--skip-membership"]) == 0
    assert "SKIP  membership" in capsys.readouterr().out


def test_reproduce_detects_tampering(tmp_path, capsys):
    data = resources.files("graverlift.data")
    for name in formats.GOLDEN:
        shutil.copy(str(data.joinpath(f"{name}.json")), tmp_path / f"{name}.json")
    target = tmp_path / "a3m_m6.json"
    target.write_text(target.read_text().replace("[25, 12, 20", "[25, 12, 21", 1))
    assert main(["reproduce", "--golden-dir", str(tmp_path), "--skip-membership"]) == 1
    out = capsys.readouterr().out
    assert "FAIL  a3m_m6" in out
    assert "-  \"coefficients\": [25, 12, 21" in out


def test_unknown_command():
    assert main(["frobnicate"]) == 2
