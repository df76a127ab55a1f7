import json

import pytest
from click.testing import CliRunner

from metaauto import __version__
from metaauto.automata import builtin_dfao, isomorphic
from metaauto.cli import main
from metaauto.serialize import loads
from metaauto.seqcore import builtin


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args))

    return invoke


def test_version(run):
    r = run("--version")
    assert r.exit_code == 0 and __version__ in r.output


def test_seq_formats(run):
    q = [int(x) for x in builtin("Q").prefix(16)]
    assert run("seq", "Q", "--count", "16").output.split() == [str(x) for x in q]
    assert json.loads(run("seq", "Q", "--count", "16", "--format", "json").output) == q
    assert run("seq", "M2", "--count", "3", "--format", "csv").output == "n,value\n0,0\n1,1\n2,1\n"


def test_seq_template(run):
    r = run("seq", "template:IdN,Even", "--count", "64", "--format", "json")
    assert r.exit_code == 0
    assert json.loads(r.output) == [int(x) for x in builtin("Q").prefix(64)]


def test_seq_unknown_is_usage_error(run):
    r = run("seq", "nope")
    assert r.exit_code == 2 and "error" in r.output


def test_dfao_eval_and_export(run, tmp_path):
    assert run("dfao", "eval", "M2", "2").output.strip() == str(int(builtin("M2").prefix(3)[2]))
    text = run("dfao", "export", "M1", "--format", "walnut").output
    assert text.startswith("msd_4\n")
    path = tmp_path / "m1.txt"
    path.write_text(text)
    assert isomorphic(loads(text), builtin_dfao("M1"))
    r = run("dfao", "verify", str(path), "--seq", "M1", "--horizon", "4096")
    assert r.exit_code == 0 and r.output.startswith("pass")


def test_dfao_verify_failure(run, tmp_path):
    path = tmp_path / "q.json"
    path.write_text(run("dfao", "export", "Q").output)
    r = run("dfao", "verify", str(path), "--seq", "M2", "--horizon", "256")
    assert r.exit_code == 1 and r.output.startswith("fail")


def test_dfao_bad_file_is_usage_error(run, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("msd_4\ngarbage\n")
    assert run("dfao", "eval", str(path), "3").exit_code == 2


def test_dfao_infer_and_minimize(run):
    r = run("dfao", "infer", "M2", "--prefix-len", "4096", "--format", "json")
    assert r.exit_code == 0 and isomorphic(loads(r.output), builtin_dfao("M2"))
    r = run("dfao", "minimize", "Q", "--format", "walnut")
    assert r.exit_code == 0 and loads(r.output).n_states == 3


def test_complexity_json(run):
    r = run("complexity", "Q", "--max-len", "20", "--format", "json")
    assert r.exit_code == 0
    rows = json.loads(r.output)
    assert [row["p"] for row in rows[:4]] == [2, 4, 6, 10]
    assert rows[14]["n"] == 15 and rows[14]["Q-complete"] is None and rows[14]["p"] == 48
    assert all(row["Q-complete"] == row["p"] for row in rows[15:])


def test_complexity_below_floor_rejected(run):
    r = run("complexity", "M2", "--max-len", "64", "--prefix-len", "100")
    assert r.exit_code != 0


def test_classify_check(run):
    r = run("classify", "--check", "--format", "csv")
    assert r.exit_code == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "F(n),G(n),DFAO,Sel.,Notes" and len(lines) == 26
    assert "25 rows match" in r.stderr


def test_oeis_offline_miss(run, tmp_path):
    r = run("oeis", "A391614", "--cache-dir", str(tmp_path), "--offline")
    assert r.exit_code == 3


def test_oeis_cached(run, tmp_path):
    m2 = [int(x) for x in builtin("M2").prefix(30)]
    (tmp_path / "b391614.txt").write_text("".join(f"{i} {v}\n" for i, v in enumerate(m2)))
    r = run("oeis", "A391614", "--cache-dir", str(tmp_path), "--offline", "--count", "30")
    assert r.exit_code == 0 and "30 terms compared, 0 mismatches" in r.output
    (tmp_path / "b391614.txt").write_text("0 0\n2 1\n")
    assert run("oeis", "A391614", "--cache-dir", str(tmp_path), "--offline").exit_code == 3


def test_verify_subset(run):
    r = run("verify", "--only", "primitivity", "--only", "6")
    assert r.exit_code == 0
    assert r.output.splitlines()[-1] == "2/2 checks passed"


def test_verify_fault_injection(run):
    r = run("verify", "--only", "agreement", "--corrupt", "M2")
    assert r.exit_code == 1 and "[FAIL]" in r.output


def test_verify_unknown_check(run):
    assert run("verify", "--only", "bogus").exit_code == 2
