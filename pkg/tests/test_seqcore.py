import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from metaauto import seqcore
from metaauto.errors import CircularDefinition, ContradictionDetected, UndefinedTerm, UnknownSequence
from metaauto.seqcore import SelectorKind as S, TemplateSpec

NAMES = ["IdN", "Even", "Odd", "PlusSel", "MinusSel"]


def bits(seq, n):
    return seq.prefix(n).tolist()


def test_named_prefixes():
    assert bits(seqcore.builtin("Q"), 16) == [0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1]
    assert bits(seqcore.builtin("M1"), 16) == [0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1]
    assert bits(seqcore.builtin("M2"), 16) == [0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1]
    assert seqcore.builtin("M2")[4] == 0
    assert bits(seqcore.builtin("t"), 4) == [0, 1, 1, 0]


def test_t_variant_brute_force():
    # brute force gives T(7) = 1 - T(3) = 1
    assert bits(seqcore.builtin("T"), 8) == [0, 1, 1, 0, 1, 0, 1, 1]
    assert bits(seqcore.builtin("T"), 4096) == oracles.t_variant(4096)


def test_t_variant_even_terms_are_one():
    a = seqcore.builtin("T").prefix(2**17)
    assert np.all(a[2 : 2**17 : 2] == 1)


def test_template_quarto_prefix():
    assert bits(seqcore.template_sequence(seqcore.QUARTO), 4) == [0, 1, 0, 1]


@pytest.mark.parametrize("f", NAMES)
@pytest.mark.parametrize("g", NAMES)
def test_templates_match_oracle(f, g):
    spec = TemplateSpec(S[f], S[g])
    assert bits(seqcore.template_sequence(spec), 2048) == oracles.template(f, g, 2048)
    a0 = seqcore.unrolled_seeds(spec)[0]
    assert bits(seqcore.template_sequence(spec, seeds="unrolled"), 2048) == oracles.template(f, g, 2048, a0)


def test_unrolled_seeds():
    assert seqcore.unrolled_seeds(TemplateSpec(S.Odd, S.Even)) == {0: 1, 1: 0}
    assert seqcore.unrolled_seeds(TemplateSpec(S.MinusSel, S.IdN)) == {0: 1, 1: 0}
    assert seqcore.unrolled_seeds(TemplateSpec(S.PlusSel, S.IdN)) == {0: 0, 1: 1}
    with pytest.raises(ValueError):
        seqcore.template_sequence(seqcore.QUARTO, seeds="other")


def test_builtin_templates_are_the_named_sequences():
    for spec, name in ((seqcore.META1, "M1"), (seqcore.META2, "M2"), (seqcore.QUARTO, "Q")):
        assert np.array_equal(seqcore.template_sequence(spec).prefix(4096), seqcore.builtin(name).prefix(4096))


def test_selector_parsing():
    assert S.parse("a(2n+1-a(n))") is S.MinusSel
    assert S.parse("a(2n + a(n))") is S.PlusSel
    assert S.parse("even") is S.Even
    with pytest.raises(UnknownSequence):
        S.parse("a(3n)")
    spec = TemplateSpec.parse("template:IdN,Even")
    assert spec == seqcore.QUARTO and spec.selector_count == 0
    assert TemplateSpec.parse("PlusSel,MinusSel").selector_count == 2


def test_resolve_and_unknown():
    assert bits(seqcore.resolve("template:IdN,Even"), 4) == [0, 1, 0, 1]
    with pytest.raises(UnknownSequence):
        seqcore.builtin("nope")


def test_circular_definition_without_seeds():
    seq = seqcore.BitSequence("loop", seqcore.TemplateRule(TemplateSpec(S.Even, S.Even)))
    with pytest.raises(CircularDefinition) as exc:
        seq.eval(0)
    assert exc.value.cycle[0] == 0


def test_prefix_is_read_only_and_deterministic():
    a = seqcore.builtin("M2").prefix(1000)
    with pytest.raises(ValueError):
        a[0] = 1
    assert np.array_equal(a, seqcore.builtin("M2").prefix(1000))


def test_materialized_sequence_survives_pickling():
    s = seqcore.builtin("M1")
    s.prefix(5000)
    t = pickle.loads(pickle.dumps(s))
    assert np.array_equal(t.prefix(5000), s.prefix(5000))


def test_scalar_and_prefix_agree_after_partial_fill():
    s = seqcore.builtin("M2")
    vals = [s[n] for n in (100, 7, 5000, 4097)]
    assert vals == [int(seqcore.builtin("M2").prefix(5001)[n]) for n in (100, 7, 5000, 4097)]


def test_check_balanced():
    assert seqcore.check_balanced(seqcore.builtin("t"), 1000)
    assert seqcore.check_balanced(seqcore.builtin("M2"), 10**5)
    assert not seqcore.check_balanced(seqcore.builtin("zero"), 1)
    with pytest.raises(ValueError):
        seqcore.check_balanced(seqcore.builtin("t"), 0)


@pytest.mark.parametrize("name", ["t", "Q", "M1", "M2"])
def test_balance_large(name):
    assert seqcore.check_balanced(seqcore.builtin(name), 2**19)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=16, max_size=400))
def test_xor_form_holds_for_any_balanced_word(halves):
    # any balanced word: a(2n) free, a(2n+1) = 1 - a(2n)
    a = np.array([b for x in halves for b in (x, 1 - x)], dtype=np.uint8)
    count = len(halves) // 2
    assert seqcore.selector_xor_mismatch(a, S.PlusSel, count) is None
    assert seqcore.selector_xor_mismatch(a, S.MinusSel, count) is None


def test_xor_form_detects_unbalanced():
    a = np.zeros(16, dtype=np.uint8)
    a[1] = 1
    a[3] = 0  # a(2)+a(3) = 0
    a[2] = 0
    # n=1: a(2+a(1)) = a(3) = 0 vs a(2) ^ a(1) = 1
    assert seqcore.selector_xor_mismatch(a, S.PlusSel, 4) == 1


def test_linearized_recurrences():
    n = np.arange(2**18)
    m1 = seqcore.builtin("M1").prefix(2**20)
    m2 = seqcore.builtin("M2").prefix(2**20)
    assert np.array_equal(m1[4 * n + 2], m1[2 * n + 1] ^ m1[n])
    assert np.array_equal(m2[4 * n], m2[2 * n] ^ m2[n])
    assert np.array_equal(m2[4 * n + 2], m2[2 * n + 1] ^ m2[n])


def test_ultimate_period():
    ee = seqcore.template_sequence(TemplateSpec(S.Even, S.Even))
    assert seqcore.ultimate_period(ee) == (0, 2)
    assert seqcore.ultimate_period(seqcore.builtin("M2")) is None
    assert seqcore.ultimate_period(seqcore.rigidity_sequence("plus"), 4, 2, 64) == (4, 2)
    with pytest.raises(ValueError):
        seqcore.ultimate_period(ee, 1024, 64, 100)


def test_rigidity():
    plus = seqcore.rigidity_check("plus", 1000)
    minus = seqcore.rigidity_check("minus", 1000)
    assert plus.passed and plus.a0 == 0
    assert minus.passed and minus.a0 == 1
    assert seqcore.rigidity_check("plus", 8).passed
    assert plus.free_indices == (2,)
    assert len(plus.first_terms) == 16
    with pytest.raises(ValueError):
        seqcore.rigidity_check("plus", 7)


def test_rigidity_contradiction_is_reported(monkeypatch):
    # a scheme with no forced seed: replace the branch builder by one that always satisfies n=0,1
    monkeypatch.setattr(
        seqcore, "_rigidity_branch", lambda v, a0, a2: seqcore.BitSequence("x", seqcore.DoublingRule(), {0: 0})
    )
    with pytest.raises(ContradictionDetected):
        seqcore.rigidity_check("plus", 8)


def test_hofstadter():
    assert [seqcore.hofstadter_q(n) for n in (1, 2, 3, 6)] == [1, 1, 2, 4]
    assert seqcore.HofstadterQ().terms(2000) == oracles.hofstadter_q(2000)
    with pytest.raises(UndefinedTerm):
        seqcore.hofstadter_q(0)
