"""Bit- and digit-level closed forms.

Scalar functions take Python ints of any size.  The ``*_array`` variants take
nonnegative integer numpy arrays (int64) and are used for the large-range
checks.  Bit positions are LSB-indexed from 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# bit positions m with m mod 6 in {0, 1, 3, 4} survive the mask
_KEEP_RESIDUES = (0, 1, 3, 4)
_MASK64 = sum(1 << m for m in range(64) if m % 6 in _KEEP_RESIDUES)


@dataclass(frozen=True)
class DigitExpansion:
    """Binary and base-4 digits of ``n`` (both LSB-first).

    ``split[k] == (i_k, j_k)`` with ``base4[k] == 2 * j_k + i_k``.
    """

    n: int
    base2: tuple[int, ...]
    base4: tuple[int, ...]
    split: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, n: int) -> "DigitExpansion":
        if n < 0:
            raise ValueError("n must be nonnegative")
        base2 = tuple((n >> m) & 1 for m in range(n.bit_length()))
        base4 = tuple(base4_digits(n))
        split = tuple((d & 1, d >> 1) for d in base4)
        return cls(n, base2, base4, split)


def base4_digits(n: int) -> list[int]:
    """Base-4 digits of ``n``, least significant first (empty for 0)."""
    out = []
    while n:
        n, d = divmod(n, 4)
        out.append(d)
    return out


def thue_morse(n: int) -> int:
    """Parity of the binary digit sum of ``n``."""
    return n.bit_count() & 1


def dyadic_scale(n: int) -> int:
    """``floor(log2 n) mod 2``, with ``dyadic_scale(0) == 0``."""
    if n <= 0:
        return 0
    return (n.bit_length() - 1) & 1


def q_closed_form(n: int) -> int:
    """Closed form of the Quarto sequence: ``t(n) xor d(n)``."""
    return thue_morse(n) ^ dyadic_scale(n)


def q_mask(n: int) -> int:
    """Zero the bits of ``n`` in positions congruent to 2 or 5 mod 6."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    mask = 0
    for m in range(n.bit_length()):
        if m % 6 in _KEEP_RESIDUES:
            mask |= 1 << m
    return n & mask


def q_mask_base4(n: int) -> int:
    """Same map as :func:`q_mask`, computed digit-by-digit in base 4.

    Digit ``d_k = 2 j_k + i_k`` becomes ``d_k`` (k = 0 mod 3), ``2 j_k``
    (k = 1 mod 3) or ``i_k`` (k = 2 mod 3).
    """
    out = 0
    for k, d in enumerate(base4_digits(n)):
        r = k % 3
        if r == 0:
            kept = d
        elif r == 1:
            kept = d & 2
        else:
            kept = d & 1
        out += kept * 4**k
    return out


def m2_closed_form(n: int) -> int:
    return thue_morse(q_mask(n))


def m2_digit_formula(n: int) -> int:
    """XOR over base-4 digits, the contribution depending on position mod 3."""
    acc = 0
    for k, d in enumerate(base4_digits(n)):
        i, j = d & 1, d >> 1
        r = k % 3
        if r == 0:
            acc ^= i ^ j
        elif r == 1:
            acc ^= j
        else:
            acc ^= i
    return acc


def base4_digit_parity(n: int) -> int:
    """Parity of the base-4 digit sum (number of odd base-4 digits mod 2)."""
    even_bits = int("01" * (n.bit_length() // 2 + 1), 2)
    return thue_morse(n & even_bits)


# --- vectorized forms -------------------------------------------------------


def _as_index_array(n) -> np.ndarray:
    arr = np.asarray(n, dtype=np.int64)
    if arr.size and arr.min() < 0:
        raise ValueError("indices must be nonnegative")
    return arr


def thue_morse_array(n) -> np.ndarray:
    arr = _as_index_array(n)
    return (np.bitwise_count(arr) & 1).astype(np.uint8)


def bit_length_array(n) -> np.ndarray:
    """Integer bit length, computed without floating point."""
    x = _as_index_array(n).copy()
    out = np.zeros(x.shape, dtype=np.int64)
    for s in (32, 16, 8, 4, 2, 1):
        big = x >= (1 << s)
        out += s * big
        x = np.where(big, x >> s, x)
    out += x > 0
    return out


def dyadic_scale_array(n) -> np.ndarray:
    bl = bit_length_array(n)
    return np.where(bl > 0, (bl - 1) & 1, 0).astype(np.uint8)


def q_closed_form_array(n) -> np.ndarray:
    return thue_morse_array(n) ^ dyadic_scale_array(n)


def q_mask_array(n) -> np.ndarray:
    return _as_index_array(n) & np.int64(_MASK64 & 0x7FFFFFFFFFFFFFFF)


def q_mask_base4_array(n) -> np.ndarray:
    x = _as_index_array(n).copy()
    out = np.zeros(x.shape, dtype=np.int64)
    k = 0
    while x.any():
        d = x & 3
        r = k % 3
        kept = d if r == 0 else (d & 2 if r == 1 else d & 1)
        out += kept << (2 * k)
        x >>= 2
        k += 1
    return out


def m2_closed_form_array(n) -> np.ndarray:
    return thue_morse_array(q_mask_array(n))


def m2_digit_formula_array(n) -> np.ndarray:
    x = _as_index_array(n).copy()
    acc = np.zeros(x.shape, dtype=np.int64)
    k = 0
    while x.any():
        i, j = x & 1, (x >> 1) & 1
        r = k % 3
        acc ^= (i ^ j) if r == 0 else (j if r == 1 else i)
        x >>= 2
        k += 1
    return acc.astype(np.uint8)


def base4_digit_parity_array(n) -> np.ndarray:
    return thue_morse_array(_as_index_array(n) & np.int64(0x5555555555555555))
