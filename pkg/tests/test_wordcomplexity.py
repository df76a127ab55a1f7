import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from metaauto import wordcomplexity as wc
from metaauto.errors import OutOfDomain, Unstable
from metaauto.seqcore import builtin

words = st.lists(st.integers(0, 1), min_size=1, max_size=200)


@settings(max_examples=100, deadline=None)
@given(words)
def test_factor_counts_match_naive(w):
    a = np.array(w, dtype=np.uint8)
    p, rs = wc.factor_counts(a, 20)
    for n in range(1, 21):
        assert p[n] == oracles.complexity(w, n)
        assert rs[n] == len(oracles.right_special(w, n))


@settings(max_examples=60, deadline=None)
@given(words, st.integers(1, 12))
def test_factor_set_matches_naive(w, n):
    got = {wc.unpack_word(k, n) for k in wc.factor_set(np.array(w, dtype=np.uint8), n)}
    assert got == oracles.factors(w, n)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=100))
def test_suffix_array_sorted(w):
    s = np.array(w, dtype=np.uint8)
    sa = wc.suffix_array(s)
    assert sorted(range(len(w)), key=lambda i: w[i:]) == sa.tolist()


def test_profile_examples():
    assert wc.complexity_profile("Q", 15, 30000).values() == [2, 4, 6, 10, 12, 16, 20, 23, 26, 30, 34, 38, 42, 45, 48]
    assert wc.complexity_profile("M2", 15, 30000).values() == [2, 4, 6, 10, 12, 14, 16, 18, 20, 24, 28, 32, 36, 40, 44]
    assert wc.complexity_profile("t", 4, 4096).values() == [2, 4, 6, 10]


def test_profile_against_naive_on_prefix():
    a = builtin("M1").prefix(3000).tolist()
    prof = wc.complexity_profile("M1", 40, 3000, strict=False)
    assert prof.values() == [oracles.complexity(a, n) for n in range(1, 41)]


def test_profile_rs_diff():
    prof = wc.complexity_profile("Q", 200)
    assert prof.rs_diff_mismatches() == []
    assert prof.rs_values()[0] == prof[2] - prof[1]


def test_profile_unstable():
    word = np.concatenate([np.zeros(200), builtin("t").prefix(200)]).astype(np.uint8)
    with pytest.raises(Unstable) as exc:
        wc.complexity_profile(word, 5, 200)
    assert exc.value.lengths[0] == 1
    prof = wc.complexity_profile(word, 5, 200, strict=False)
    assert not prof.stable


def test_profile_below_floor():
    with pytest.raises(ValueError):
        wc.complexity_profile("Q", 100, 1000)


def test_profile_bounds():
    prof = wc.complexity_profile("t", 4)
    with pytest.raises(KeyError):
        prof[5]


def test_stabilization_floor():
    assert wc.stabilization_floor(15) == 480
    assert wc.stabilization_floor(1000) == 32000
    assert wc.stabilization_floor(500) == 16000


def test_right_special():
    q = wc.right_special_factors("Q", 40)
    assert 2 <= len(q) <= 4
    assert wc.right_special_factors("zero", 5) == set()
    m2 = {len(wc.right_special_factors("M2", n)) for n in range(1, 60)}
    assert m2 <= {2, 4}


def test_rs_counts_oracle_on_q():
    a = builtin("Q").prefix(30000).tolist()
    for n in (3, 17, 50):
        assert len(oracles.right_special(a, n)) == len(wc.right_special_factors("Q", n, 30000))


def test_tm_complement():
    assert wc.tm_complement_check(10, 2**14)
    assert wc.tm_complement_check(1, 16)
    assert wc.tm_complement_check(6, 2**12)


def test_junction():
    assert wc.junction_analysis(16).count == 4
    assert wc.junction_analysis(32).count == 8
    assert wc.junction_analysis(1).count == 0
    rep = wc.junction_analysis(64)
    assert rep.count == rep.p_q - rep.p_t == 16
    t_facs = oracles.factors(builtin("t").prefix(2**13).tolist(), 64)
    assert all(s not in t_facs for s in rep.samples)


def test_laws():
    assert wc.evaluate_law(wc.Q_SHARP, 16) == 50
    assert wc.evaluate_law(wc.M2_SHARP, 8) == 18
    assert wc.evaluate_law(wc.M2_SHARP, 16) == 46
    assert wc.evaluate_law(wc.M2_SHARP, 64) == 158
    assert wc.evaluate_law(wc.TM_DYADIC, 16) == 46
    assert wc.evaluate_law(wc.Q_COMPLETE, 64) == 206
    with pytest.raises(OutOfDomain):
        wc.evaluate_law(wc.Q_SHARP, 8)
    with pytest.raises(OutOfDomain):
        wc.evaluate_law(wc.Q_SHARP, 24)
    with pytest.raises(OutOfDomain):
        wc.evaluate_law(wc.M2_COMPLETE, 1)


@pytest.mark.parametrize("law", [wc.Q_COMPLETE, wc.M2_COMPLETE])
@pytest.mark.parametrize("k", range(4, 14))
def test_breakpoints_agree(law, k):
    assert wc.breakpoint_mismatches(law, k) == []


@pytest.mark.parametrize("k", range(4, 14))
def test_q_complete_continuous_across_blocks(k):
    last = wc.Q_COMPLETE.pieces_at(k)[-1]
    assert last.value(2 ** (k + 1), k) == wc.evaluate_law(wc.Q_COMPLETE, 2 ** (k + 1))


def test_q_complete_slope_structure():
    prof = wc.complexity_profile("Q", 1024, 2**15)
    for k in range(5, 10):
        base = 2**k
        for n in range(base + 1, 2 * base):
            want = 4 if n <= 3 * base // 2 else (3 if n <= 7 * base // 4 else 2)
            assert prof[n + 1] - prof[n] == want, n


def test_law_mismatches_on_measured():
    prof = wc.complexity_profile("M2", 1024)
    assert wc.law_mismatches(wc.M2_COMPLETE, prof, 2, 1024) == []


def test_verify_recurrences():
    rep = wc.verify_recurrences(2**15)
    assert rep.passed
    assert rep.q_checked == [4, 5, 6, 7, 8]
    assert rep.m2_checked == [3, 4, 5, 6, 7]
    prof = wc.complexity_profile("Q", 64)
    assert prof[64] == 4 * prof[16] + 6 == 206
    assert wc.complexity_profile("M2", 64)[64] == 8 * 18 + 14
    assert wc.complexity_profile("t", 16)[16] == 46
