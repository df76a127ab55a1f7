"""Factor complexity of binary words, right-special factors and dyadic laws.

All counts are exact.  ``p(n)`` for every ``n`` at once comes from a suffix
array with its LCP array; explicit factor sets (for set differences and
complement closure) use the windows themselves, bit-packed, as keys.

Counts taken on a finite prefix are only trusted after the doubling check:
the same quantity is recomputed on twice the prefix and must not change.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import OutOfDomain, Unstable, VerificationFailed
from .seqcore import BitSequence, builtin

SeqLike = Union[str, BitSequence, np.ndarray]


def _bits(seq: SeqLike, count: int) -> np.ndarray:
    if isinstance(seq, str):
        seq = builtin(seq)
    if isinstance(seq, BitSequence):
        return np.ascontiguousarray(seq.prefix(count), dtype=np.uint8)
    arr = np.asarray(seq, dtype=np.uint8)
    if arr.size < count:
        raise ValueError(f"need {count} terms, got {arr.size}")
    return arr[:count]


def _name(seq: SeqLike) -> str:
    if isinstance(seq, str):
        return seq
    return getattr(seq, "name", "array")


def stabilization_floor(max_len: int) -> int:
    floor = 32 * max_len
    if max_len >= 1000:
        floor = max(floor, 30000)
    return floor


# --- suffix structures --------------------------------------------------------


def suffix_array(s: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling on integer ranks."""
    n = s.size
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = s.astype(np.int64)
    k = 1
    while True:
        second = np.zeros(n, dtype=np.int64)
        second[: n - k] = rank[k:] + 1
        key = rank * (n + 2) + second
        sa = np.argsort(key, kind="stable")
        sorted_key = key[sa]
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = np.concatenate(([0], np.cumsum(sorted_key[1:] != sorted_key[:-1])))
        if rank[sa[-1]] == n - 1 or k >= n:
            return sa
        k *= 2


def lcp_array(s: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """Kasai's algorithm; ``lcp[r]`` is shared with the suffix ranked ``r - 1``."""
    n = s.size
    sal = sa.tolist()
    rank = [0] * n
    for r, p in enumerate(sal):
        rank[p] = r
    b = s.tobytes()
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sal[r - 1]
        while i + h < n and j + h < n and b[i + h] == b[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


def factor_counts(a: np.ndarray, max_len: int) -> tuple[np.ndarray, np.ndarray]:
    """``(p, rs)`` indexed by length ``0..max_len`` for the finite word ``a``.

    A suffix at rank ``r`` contributes a new factor for each length in
    ``(lcp[r], len(suffix)]``.  A length-``n`` factor is right-special iff
    its block of suffixes contains a boundary with ``lcp == n`` between two
    suffixes longer than ``n``.
    """
    a = np.ascontiguousarray(a, dtype=np.uint8)
    n = a.size
    sa = suffix_array(a)
    lcp = lcp_array(a, sa)
    length = n - sa
    diff = np.zeros(n + 2, dtype=np.int64)
    np.add.at(diff, lcp + 1, 1)
    np.add.at(diff, length + 1, -1)
    p = np.cumsum(diff)
    p[0] = 1
    prev_len = np.concatenate(([0], length[:-1]))
    extended = lcp[prev_len > lcp]
    rs = np.bincount(extended[extended > 0], minlength=n + 1)
    rs[0] = int(len(np.unique(a)) > 1)
    out_p = np.zeros(max_len + 1, dtype=np.int64)
    out_rs = np.zeros(max_len + 1, dtype=np.int64)
    m = min(max_len, n)
    out_p[: m + 1] = p[: m + 1]
    out_rs[: m + 1] = rs[: m + 1]
    return out_p, out_rs


# --- explicit factor sets -----------------------------------------------------


def factor_set(a: np.ndarray, n: int) -> set[bytes]:
    """Distinct length-``n`` windows of ``a``, each bit-packed into bytes."""
    if n < 1 or n > a.size:
        return set()
    win = sliding_window_view(np.asarray(a, dtype=np.uint8), n)
    packed = np.ascontiguousarray(np.packbits(win, axis=1))
    rows = np.unique(packed.view(np.dtype((np.void, packed.shape[1]))).ravel())
    return {r.tobytes() for r in rows}


def unpack_word(key: bytes, n: int) -> str:
    bits = np.unpackbits(np.frombuffer(key, dtype=np.uint8))[:n]
    return "".join("1" if b else "0" for b in bits)


def _complement_keys(keys: set[bytes], n: int) -> set[bytes]:
    out = set()
    for k in keys:
        bits = 1 - np.unpackbits(np.frombuffer(k, dtype=np.uint8))[:n]
        out.add(np.packbits(bits).tobytes())
    return out


def _right_special_words(a: np.ndarray, n: int) -> set[str]:
    ext = [unpack_word(k, n + 1) for k in factor_set(a, n + 1)]
    seen: dict[str, set[str]] = {}
    for w in ext:
        seen.setdefault(w[:-1], set()).add(w[-1])
    return {u for u, tails in seen.items() if len(tails) == 2}


def right_special_factors(seq: SeqLike, n: int, prefix_len: Optional[int] = None) -> set[str]:
    """Length-``n`` factors ``u`` such that both ``u0`` and ``u1`` occur."""
    if prefix_len is None:
        prefix_len = stabilization_floor(n + 1)
    words = _right_special_words(_bits(seq, prefix_len), n)
    again = _right_special_words(_bits(seq, 2 * prefix_len), n)
    if words != again:
        raise Unstable(f"right-special factors of length {n} changed when doubling", (n,))
    return words


# --- profiles -----------------------------------------------------------------


@dataclass
class ComplexityProfile:
    name: str
    prefix_len: int
    max_len: int
    p: np.ndarray
    rs: np.ndarray
    stable: bool = True
    unstable_lengths: tuple[int, ...] = ()

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.max_len:
            raise KeyError(f"p({n}) is outside the measured range 1..{self.max_len}")
        return int(self.p[n])

    def values(self) -> list[int]:
        return [int(x) for x in self.p[1 : self.max_len + 1]]

    def rs_values(self) -> list[int]:
        """Measured right-special counts for ``1 <= n < max_len``."""
        return [int(x) for x in self.rs[1 : self.max_len]]

    def rs_diff_mismatches(self) -> list[int]:
        """Lengths where ``p(n+1) - p(n)`` differs from the right-special count."""
        d = np.diff(self.p[1 : self.max_len + 1])
        return [int(n) + 1 for n in np.flatnonzero(d != self.rs[1 : self.max_len])]

    def rows(self) -> list[dict]:
        out = []
        for n in range(1, self.max_len + 1):
            row = {"n": n, "p": int(self.p[n])}
            if n < self.max_len:
                row["rs"] = int(self.rs[n])
            out.append(row)
        return out


def complexity_profile(
    seq: SeqLike, max_len: int, prefix_len: Optional[int] = None, strict: bool = True
) -> ComplexityProfile:
    """``p(n)`` for ``1 <= n <= max_len`` with the doubling check.

    With ``strict`` an unstable profile raises :class:`Unstable`; otherwise it
    is returned with ``stable=False``.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    floor = stabilization_floor(max_len)
    if prefix_len is None:
        prefix_len = floor
    if prefix_len < floor:
        raise ValueError(f"prefix_len {prefix_len} is below the stabilization floor {floor}")
    p, rs = factor_counts(_bits(seq, prefix_len), max_len)
    p2, _ = factor_counts(_bits(seq, 2 * prefix_len), max_len)
    changed = tuple(int(n) for n in np.flatnonzero(p[1:] != p2[1:]) + 1)
    if changed and strict:
        raise Unstable(f"p changed at {len(changed)} lengths when the prefix was doubled", changed)
    return ComplexityProfile(_name(seq), prefix_len, max_len, p, rs, not changed, changed)


# --- Thue-Morse complement closure and junction factors -------------------------


def tm_complement_check(max_len: int, prefix_len: Optional[int] = None) -> bool:
    """Every t factor of length ``<= max_len`` has its complement among t factors."""
    if prefix_len is None:
        prefix_len = stabilization_floor(max_len)
    t = builtin("t")
    a, a2 = _bits(t, prefix_len), _bits(t, 2 * prefix_len)
    for n in range(1, max_len + 1):
        facs = factor_set(a, n)
        if len(facs) != len(factor_set(a2, n)):
            raise Unstable(f"t factors of length {n} changed when doubling", (n,))
        if not _complement_keys(facs, n) <= facs:
            return False
    return True


@dataclass
class JunctionReport:
    n: int
    count: int
    p_q: int
    p_t: int
    samples: list[str] = field(default_factory=list)


def junction_analysis(n: int, prefix_len: Optional[int] = None, sample_size: int = 8) -> JunctionReport:
    """Length-``n`` factors of Q that are not factors of t."""
    if prefix_len is None:
        prefix_len = stabilization_floor(n)
    sets = {}
    for name in ("Q", "t"):
        cur = factor_set(_bits(name, prefix_len), n)
        if len(cur) != len(factor_set(_bits(name, 2 * prefix_len), n)):
            raise Unstable(f"{name} factors of length {n} changed when doubling", (n,))
        sets[name] = cur
    junction = sets["Q"] - sets["t"]
    if len(junction) != len(sets["Q"]) - len(sets["t"]):
        raise VerificationFailed(f"some t factors of length {n} are missing from Q")
    samples = sorted(unpack_word(k, n) for k in junction)[:sample_size]
    return JunctionReport(n, len(junction), len(sets["Q"]), len(sets["t"]), samples)


# --- piecewise laws -------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """``p(n) = slope * n + intercept(k)`` on ``lo(k) <= n <= hi(k)``."""

    lo: Callable[[int], int]
    hi: Callable[[int], int]
    slope: int
    intercept: Callable[[int], int]

    def value(self, n: int, k: int) -> int:
        return self.slope * n + self.intercept(k)


@dataclass(frozen=True)
class PiecewiseLaw:
    """Predicted ``p(n)``; ``k = floor(log2 n)`` selects the pieces.

    Dyadic laws are only defined at ``n = 2**k``.
    """

    name: str
    min_n: int
    pieces: Callable[[int], tuple[Piece, ...]]
    dyadic: bool = False

    def pieces_at(self, k: int) -> tuple[Piece, ...]:
        return self.pieces(k)


def _const(c: Callable[[int], int]) -> tuple[Piece, ...]:
    return (Piece(lambda k: 2**k, lambda k: 2**k, 0, c),)


def _q_complete(k: int) -> tuple[Piece, ...]:
    # the i = 0 point is written as the line that continues the previous block
    return (
        Piece(lambda k: 2**k, lambda k: 2**k, 2, lambda k: 5 * 2 ** (k - 2) - 2),
        Piece(lambda k: 2**k + 1, lambda k: 2**k + 2 ** (k - 1), 4, lambda k: -3 * 2 ** (k - 2) - 4),
        Piece(lambda k: 2**k + 2 ** (k - 1) + 1, lambda k: 2**k + 3 * 2 ** (k - 2), 3, lambda k: 3 * 2 ** (k - 2) - 3),
        Piece(lambda k: 2**k + 3 * 2 ** (k - 2) + 1, lambda k: 2 ** (k + 1) - 1, 2, lambda k: 5 * 2 ** (k - 1) - 2),
    )


def _m2_complete(k: int) -> tuple[Piece, ...]:
    r = k % 3
    if r == 2:
        return (Piece(lambda k: 2**k, lambda k: 2 ** (k + 1), 2, lambda k: 2**k - 2),)
    if r == 0:
        return (
            Piece(lambda k: 2**k, lambda k: 2**k + 1, 2, lambda k: 2 ** (k - 1) - 2),
            Piece(lambda k: 2**k + 1, lambda k: 7 * 2 ** (k - 2) + 1, 4, lambda k: -(3 * 2 ** (k - 1) + 4)),
            Piece(lambda k: 7 * 2 ** (k - 2) + 1, lambda k: 2 ** (k + 1), 2, lambda k: 2 ** (k + 1) - 2),
        )
    return (
        Piece(lambda k: 2**k, lambda k: 2**k + 1, 2, lambda k: 2**k - 2),
        Piece(lambda k: 2**k + 1, lambda k: 3 * 2 ** (k - 1) + 1, 4, lambda k: -(2**k + 4)),
        Piece(lambda k: 3 * 2 ** (k - 1) + 1, lambda k: 2 ** (k + 1), 2, lambda k: 2 ** (k + 1) - 2),
    )


Q_SHARP = PiecewiseLaw("Q-sharp", 16, lambda k: _const(lambda k: 13 * 2 ** (k - 2) - 2), dyadic=True)
M2_SHARP = PiecewiseLaw(
    "M2-sharp",
    8,
    lambda k: _const((lambda k: 5 * 2 ** (k - 1) - 2) if k % 3 == 0 else (lambda k: 3 * 2**k - 2)),
    dyadic=True,
)
TM_DYADIC = PiecewiseLaw("TM-dyadic", 2, lambda k: _const(lambda k: 3 * 2**k - 2), dyadic=True)
Q_COMPLETE = PiecewiseLaw("Q-complete", 16, _q_complete)
# at n = 1 the r = 0 piece has a half-integer intercept, so the law starts at 2
M2_COMPLETE = PiecewiseLaw("M2-complete", 2, _m2_complete)

LAWS = {law.name: law for law in (Q_SHARP, M2_SHARP, TM_DYADIC, Q_COMPLETE, M2_COMPLETE)}


def evaluate_law(law: PiecewiseLaw, n: int) -> int:
    if n < law.min_n:
        raise OutOfDomain(f"{law.name} is stated for n >= {law.min_n}, got {n}")
    k = n.bit_length() - 1
    if law.dyadic and n != 2**k:
        raise OutOfDomain(f"{law.name} is only stated at powers of two, got {n}")
    for piece in law.pieces_at(k):
        if piece.lo(k) <= n <= piece.hi(k):
            return piece.value(n, k)
    raise OutOfDomain(f"{law.name} has no piece covering n={n}")


def breakpoint_mismatches(law: PiecewiseLaw, k: int) -> list[int]:
    """Points ``n`` where adjacent pieces of block ``k`` disagree at the later piece's start."""
    pieces = law.pieces_at(k)
    out = []
    for left, right in zip(pieces, pieces[1:]):
        n = right.lo(k)
        if left.value(n, k) != right.value(n, k):
            out.append(n)
    return out


def law_mismatches(law: PiecewiseLaw, profile: ComplexityProfile, lo: int, hi: int) -> list[tuple[int, int, int]]:
    """``(n, measured, predicted)`` for every disagreement on ``lo <= n <= hi``."""
    out = []
    for n in range(lo, hi + 1):
        if law.dyadic and n & (n - 1):
            continue
        predicted = evaluate_law(law, n)
        if profile[n] != predicted:
            out.append((n, profile[n], predicted))
    return out


@dataclass
class RecurrenceReport:
    prefix_len: int
    q_checked: list[int]
    q_failures: list[int]
    m2_checked: list[int]
    m2_failures: list[int]
    lower_bound_failures: list[int]

    @property
    def passed(self) -> bool:
        return not (self.q_failures or self.m2_failures or self.lower_bound_failures)


def verify_recurrences(prefix_len: int = 2**17) -> RecurrenceReport:
    """Dyadic recurrences for Q (k >= 4) and M2 (k >= 3) wherever both sides are measured."""
    max_len = prefix_len // 32
    pq = complexity_profile("Q", max_len, prefix_len)
    pm = complexity_profile("M2", max_len, prefix_len)
    q_checked, q_fail, m_checked, m_fail = [], [], [], []
    k = 4
    while 2 ** (k + 2) <= max_len:
        q_checked.append(k)
        if pq[2 ** (k + 2)] != 4 * pq[2**k] + 6:
            q_fail.append(k)
        k += 1
    k = 3
    while 2 ** (k + 3) <= max_len:
        m_checked.append(k)
        if pm[2 ** (k + 3)] != 8 * pm[2**k] + 14:
            m_fail.append(k)
        k += 1
    low = [n for n in range(1, max_len + 1) if pq[n] < n + 1]
    return RecurrenceReport(prefix_len, q_checked, q_fail, m_checked, m_fail, low)
