import io
import json
import pathlib
import random
import subprocess
import sys

import jsonschema
import pytest

from helpers import sample_case_iv
from tropbasis.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_REJECTED, run
from tropbasis.core import format_matrix, pattern
from tropbasis.lift import find_case_iii_layout, find_case_iv_layout
from tropbasis.rank import tropical_rank

ROOT = pathlib.Path(__file__).resolve().parent.parent
A6 = str(ROOT / "data" / "A6.mat")
C7 = str(ROOT / "data" / "C7.mat")
SCHEMA = json.loads((ROOT / "schema" / "report.schema.json").read_text())


def call(*argv):
    out = io.StringIO()
    code, _ = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--format", "json")
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return code, report


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


@pytest.fixture(scope="module")
def case_iv_file(tmp_path_factory):
    rng = random.Random(3)
    while True:
        W = sample_case_iv(rng)
        if tropical_rank(W) == 3 and find_case_iv_layout(pattern(W)) and not find_case_iii_layout(pattern(W)):
            break
    path = tmp_path_factory.mktemp("iv") / "iv.mat"
    path.write_text(format_matrix(W))
    return str(path)


class TestRank:
    def test_a6_json(self):
        code, report = call_json("rank", A6)
        assert code == EXIT_OK
        assert report["result"]["tropical_rank"] == 4
        assert report["status"] == "ok"

    def test_c7_text(self):
        code, text = call("rank", C7)
        assert code == EXIT_OK
        assert text.startswith("tropical rank: 3")

    def test_bad_token(self, write):
        path = write("bad.mat", "2 2\n0 1\n2 zz\n")
        code, report = call_json("rank", path)
        assert code == EXIT_INPUT
        assert "line 3, column 3" in report["message"]

    def test_infinite_entry(self, write):
        path = write("inf.mat", "2 2\n0 inf\n2 0\n")
        code, report = call_json("rank", path)
        assert code == EXIT_INPUT
        assert "finite" in report["message"]

    def test_budget(self):
        code, report = call_json("rank", A6, "--budget", "5")
        assert code == EXIT_BUDGET
        assert report["status"] == "error"

    def test_missing_file(self):
        code, _ = call("rank", "/nonexistent/file.mat")
        assert code == EXIT_INPUT


class TestOtherCommands:
    def test_permanent_with_inf(self, write):
        path = write("p.mat", "2 2\n0 inf\n1 3/2\n")
        code, report = call_json("permanent", path)
        assert code == EXIT_OK
        assert report["result"] == {"value": "3/2", "witness": [0, 1], "unique": True}

    def test_singular(self, write):
        path = write("s.mat", "2 2\n0 0\n0 0\n")
        code, report = call_json("singular", path)
        assert code == EXIT_OK and report["result"]["singular"] is True

    def test_pattern(self):
        code, report = call_json("pattern", A6)
        assert code == EXIT_OK
        assert report["result"]["pattern"][0][:2] == ["0", "0"]

    def test_dependence(self):
        code, report = call_json("dependence", A6)
        assert code == EXIT_OK
        assert report["result"]["dependent"] is True
        assert len(report["certificates"]["dependence"]) == 6

    def test_classify_basis(self):
        code, text = call("classify-basis", "7", "7", "4")
        assert code == EXIT_OK and "NOT a tropical basis" in text
        code, report = call_json("classify-basis", "6", "9", "4")
        assert report["result"]["tropical_basis"] is True

    def test_classify_basis_range(self):
        code, _ = call("classify-basis", "3", "3", "4")
        assert code == EXIT_INPUT

    def test_witness(self):
        code, report = call_json("witness", "7", "7", "4")
        assert code == EXIT_OK
        assert report["result"]["claimed_trop_rank"] == 3
        assert report["result"]["trop_rank_verified"] is True
        assert report["result"]["kapranov_verified"] is False

    def test_witness_basis_holds(self):
        code, report = call_json("witness", "5", "5", "4")
        assert report["result"] == {"basis_holds": True}

    def test_unknown_command(self):
        code, _ = call("frobnicate")
        assert code == EXIT_INPUT

    def test_thread_variable_validated(self, monkeypatch):
        monkeypatch.setenv("TROPBASIS_THREADS", "zero")
        code, _ = call("rank", A6)
        assert code == EXIT_INPUT


class TestLift:
    def test_construct_then_verify(self, case_iv_file, write):
        code, report = call_json("lift", "case-iv", case_iv_file)
        assert code == EXIT_OK
        assert report["result"]["rank_over_K"] == 3
        lift = write("F.txt", "\n".join(report["certificates"]["lift"]) + "\n")
        code, report = call_json("lift", "verify", case_iv_file, lift)
        assert code == EXIT_OK and report["result"]["verified"] is True

    def test_wrong_case_rejected(self, case_iv_file):
        code, report = call_json("lift", "case-iii", case_iv_file)
        assert code == EXIT_REJECTED
        assert "case-iii" in report["message"]

    def test_verify_rejects_bad_degree(self, write):
        A = write("a.mat", "1 2\n0 1\n")
        F = write("f.txt", "1; t^{2}\n")
        code, report = call_json("lift", "verify", A, F)
        assert code == EXIT_REJECTED
        assert "(0, 1)" in report["message"]

    def test_verify_bad_syntax(self, write):
        A = write("a.mat", "1 2\n0 1\n")
        F = write("f.txt", "1; t^{\n")
        code, _ = call("lift", "verify", A, F)
        assert code == EXIT_INPUT

    def test_classify(self, case_iv_file):
        code, report = call_json("lift", "classify", case_iv_file)
        assert code == EXIT_OK
        assert report["result"]["case"] == "iv"

    def test_classify_needs_rank_three(self, write):
        path = write("z.mat", "6 2\n" + "0 0\n" * 6)
        code, _ = call("lift", "classify", path)
        assert code == EXIT_INPUT


def test_output_is_deterministic(case_iv_file):
    for argv in (("rank", A6), ("dependence", C7), ("lift", "case-iv", case_iv_file), ("witness", "8", "8", "6")):
        first = call(*argv, "--format", "json")
        assert call(*argv, "--format", "json") == first


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tropbasis", "rank", A6, "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["tropical_rank"] == 4
