import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from metaauto import digits

big = st.integers(min_value=0, max_value=2**62)


def test_digit_expansion_split():
    e = digits.DigitExpansion.of(27)  # 27 = 1·16 + 2·4 + 3 -> base-4 digits 3, 2, 1 (LSB first)
    assert e.base4 == (3, 2, 1)
    assert e.base2 == (1, 1, 0, 1, 1)
    assert e.split == ((1, 1), (0, 1), (1, 0))
    assert digits.DigitExpansion.of(0).base4 == ()
    with pytest.raises(ValueError):
        digits.DigitExpansion.of(-1)


def test_thue_morse_matches_oracle():
    assert [digits.thue_morse(n) for n in range(4096)] == oracles.thue_morse(4096)


def test_dyadic_scale():
    assert [digits.dyadic_scale(n) for n in range(9)] == [0, 0, 1, 1, 0, 0, 0, 0, 1]


def test_q_mask_examples():
    # bits at positions 2 and 5 are dropped
    assert digits.q_mask(0b111111) == 0b011011
    assert digits.q_mask(1 << 8) == 0  # 8 mod 6 = 2
    assert digits.q_mask(1 << 6) == 1 << 6


@given(big)
def test_q_mask_two_routes_agree(n):
    assert digits.q_mask(n) == digits.q_mask_base4(n)


@given(big)
def test_m2_closed_form_equals_digit_formula(n):
    assert digits.m2_closed_form(n) == digits.m2_digit_formula(n)


@given(big)
def test_base4_digit_parity(n):
    assert digits.base4_digit_parity(n) == sum(digits.base4_digits(n)) % 2


@given(st.lists(big, min_size=1, max_size=50))
def test_vectorized_match_scalar(ns):
    arr = np.array(ns, dtype=np.int64)
    assert digits.thue_morse_array(arr).tolist() == [digits.thue_morse(n) for n in ns]
    assert digits.bit_length_array(arr).tolist() == [n.bit_length() for n in ns]
    assert digits.q_closed_form_array(arr).tolist() == [digits.q_closed_form(n) for n in ns]
    assert digits.q_mask_array(arr).tolist() == [digits.q_mask(n) for n in ns]
    assert digits.q_mask_base4_array(arr).tolist() == [digits.q_mask_base4(n) for n in ns]
    assert digits.m2_closed_form_array(arr).tolist() == [digits.m2_closed_form(n) for n in ns]
    assert digits.m2_digit_formula_array(arr).tolist() == [digits.m2_digit_formula(n) for n in ns]
    assert digits.base4_digit_parity_array(arr).tolist() == [digits.base4_digit_parity(n) for n in ns]


def test_closed_forms_against_recurrence_oracles():
    q = oracles.template("IdN", "Even", 4096)
    m2 = oracles.template("PlusSel", "MinusSel", 4096)
    assert [digits.q_closed_form(n) for n in range(4096)] == q
    assert [digits.m2_closed_form(n) for n in range(4096)] == m2


def test_negative_indices_rejected():
    with pytest.raises(ValueError):
        digits.thue_morse_array([1, -2])
    with pytest.raises(ValueError):
        digits.q_mask(-1)
