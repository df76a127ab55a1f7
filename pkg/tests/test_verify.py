import pytest

from metaauto import verify as vf
from metaauto.automata import Dfao, builtin_dfao


def test_checks_numbered_once():
    assert [c.number for c in vf.CHECKS] == list(range(1, 14))
    assert len({c.key for c in vf.CHECKS}) == 13


def test_select_by_key_group_number():
    assert [c.number for c in vf.select(["primitivity"])] == [12]
    assert {c.number for c in vf.select(["complexity"])} == {6, 7, 8, 9}
    assert [c.number for c in vf.select(["3"])] == [3]
    assert len(vf.select()) == 13
    with pytest.raises(ValueError):
        vf.select(["nope"])


def test_result_line_format():
    r = vf.CheckResult(4, "balance", "claim", False, "detail", 0.5)
    assert r.line() == "[FAIL]  4 balance: claim (0.50 s) -- detail"


@pytest.mark.parametrize("name", ["Q", "M1", "M2"])
def test_corrupted_machine_detected(name):
    m = builtin_dfao(name)
    bad = Dfao(m.base, m.delta, m.initial, tuple(1 - o for o in m.output))
    (res,) = vf.run_checks(["agreement"], {name: bad})
    assert not res.passed and name in res.detail


def test_exception_in_check_is_recorded(monkeypatch):
    def boom(ctx):
        raise RuntimeError("kaboom")

    check = vf.select(["primitivity"])[0]
    monkeypatch.setattr(vf, "CHECKS", (vf.Check(12, check.key, check.group, check.claim, boom),))
    (res,) = vf.run_checks(["primitivity"])
    assert not res.passed and "kaboom" in res.detail


def test_oeis_check_fails_without_cache(tmp_path):
    (res,) = vf.run_checks(["oeis"], oeis_dir=tmp_path)
    assert not res.passed and "not cached" in res.detail
