"""Binary sequences defined by digit-based (possibly selector-bearing) recurrences.

A :class:`BitSequence` couples a set of seeds with a :class:`Rule`.  Values are
materialized bottom-up into a dense ``uint8`` cache in doubling blocks; every
rule reads only strictly smaller indices, so a block ``[lo, hi)`` can be
filled in one vectorized pass whenever its dependencies fall below ``lo``.
When they do not (tiny indices, seeded gaps) the block is filled index by
index instead.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import digits
from .errors import CircularDefinition, ContradictionDetected, UndefinedTerm, UnknownSequence

log = logging.getLogger(__name__)


class _NotReady(Exception):
    pass


def _read(a: np.ndarray, dep: np.ndarray, m: np.ndarray, ready: int) -> np.ndarray:
    """Read ``a[dep]`` for positions ``m``; every ``dep`` must be already filled."""
    if dep.size:
        loops = dep >= m
        if loops.any():
            k = int(np.argmax(loops))
            raise CircularDefinition((int(m[k]), int(dep[k])))
        if dep.max() >= ready:
            raise _NotReady
    return a[dep]


class Rule:
    """Evaluation rule: computes values at index array ``m`` from the cache.

    ``ready`` is the number of leading cache entries already valid.
    """

    def values(self, a: np.ndarray, m: np.ndarray, ready: int) -> np.ndarray:
        raise NotImplementedError


class SelectorKind(enum.Enum):
    IdN = "a(n)"
    Even = "a(2n)"
    Odd = "a(2n+1)"
    PlusSel = "a(2n+a(n))"
    MinusSel = "a(2n+1-a(n))"

    @property
    def is_selector(self) -> bool:
        return self in (SelectorKind.PlusSel, SelectorKind.MinusSel)

    def argument(self, a: np.ndarray, n: np.ndarray, m: np.ndarray, ready: int) -> np.ndarray:
        if self is SelectorKind.IdN:
            return n
        if self is SelectorKind.Even:
            return 2 * n
        if self is SelectorKind.Odd:
            return 2 * n + 1
        an = _read(a, n, m, ready).astype(np.int64)
        if self is SelectorKind.PlusSel:
            return 2 * n + an
        return 2 * n + 1 - an

    def scalar_argument(self, a, n: int) -> int:
        """Selector argument for a single ``n`` given an indexable ``a``."""
        if self is SelectorKind.IdN:
            return n
        if self is SelectorKind.Even:
            return 2 * n
        if self is SelectorKind.Odd:
            return 2 * n + 1
        if self is SelectorKind.PlusSel:
            return 2 * n + a[n]
        return 2 * n + 1 - a[n]

    @classmethod
    def parse(cls, text: str) -> "SelectorKind":
        key = text.strip()
        aliases = {
            "idn": cls.IdN, "n": cls.IdN, "even": cls.Even, "odd": cls.Odd,
            "plussel": cls.PlusSel, "plus": cls.PlusSel,
            "minussel": cls.MinusSel, "minus": cls.MinusSel,
        }
        for kind in cls:
            if key.replace(" ", "") == kind.value:
                return kind
        try:
            return aliases[key.lower()]
        except KeyError:
            raise UnknownSequence(f"unknown selector {text!r}") from None


SELECTOR_ORDER = (
    SelectorKind.IdN,
    SelectorKind.Even,
    SelectorKind.Odd,
    SelectorKind.PlusSel,
    SelectorKind.MinusSel,
)


@dataclass(frozen=True)
class TemplateSpec:
    """Branch rules ``(F, G)`` of the base-4 skeleton

    ``a(4n) = F(n)``, ``a(4n+1) = 1 - F(n)``, ``a(4n+2) = G(n)``, ``a(4n+3) = 1 - G(n)``.
    """

    f: SelectorKind
    g: SelectorKind

    @property
    def selector_count(self) -> int:
        return int(self.f.is_selector) + int(self.g.is_selector)

    @property
    def label(self) -> str:
        return f"template:{self.f.name},{self.g.name}"

    @classmethod
    def parse(cls, text: str) -> "TemplateSpec":
        body = text.split(":", 1)[1] if ":" in text else text
        parts = body.split(",")
        if len(parts) != 2:
            raise UnknownSequence(f"template needs two branch rules: {text!r}")
        return cls(SelectorKind.parse(parts[0]), SelectorKind.parse(parts[1]))


class TemplateRule(Rule):
    def __init__(self, spec: TemplateSpec):
        self.spec = spec

    def values(self, a, m, ready):
        n = m >> 2
        r = m & 3
        out = np.empty(m.shape, dtype=np.uint8)
        low = r < 2
        for mask, kind in ((low, self.spec.f), (~low, self.spec.g)):
            if not mask.any():
                continue
            mm, nn = m[mask], n[mask]
            arg = kind.argument(a, nn, mm, ready)
            out[mask] = _read(a, arg, mm, ready) ^ (r[mask] & 1).astype(np.uint8)
        return out


class DoublingRule(Rule):
    """``t(2n) = t(n)``, ``t(2n+1) = 1 - t(n)``."""

    def values(self, a, m, ready):
        return _read(a, m >> 1, m, ready) ^ (m & 1).astype(np.uint8)


class NestedEvenRule(Rule):
    """``T(2n) = T(n - T(n-1))`` for ``n >= 1`` and ``T(2n+1) = 1 - T(n)``."""

    def values(self, a, m, ready):
        n = m >> 1
        odd = (m & 1).astype(bool)
        out = np.empty(m.shape, dtype=np.uint8)
        if odd.any():
            out[odd] = 1 - _read(a, n[odd], m[odd], ready)
        even = ~odd
        if even.any():
            ne, me = n[even], m[even]
            if (ne < 1).any():
                raise UndefinedTerm("T(0) must be seeded")
            arg = ne - _read(a, ne - 1, me, ready).astype(np.int64)
            out[even] = _read(a, arg, me, ready)
        return out


class DyadicSelectorRule(Rule):
    """Base-2 balanced selector scheme ``a(2n) = a(n + a(n))`` (plus) or
    ``a(2n) = a(n + 1 - a(n))`` (minus), with ``a(2n+1) = 1 - a(2n)``."""

    def __init__(self, variant: str):
        if variant not in ("plus", "minus"):
            raise ValueError("variant must be 'plus' or 'minus'")
        self.variant = variant

    def argument(self, a, n, m, ready):
        an = _read(a, n, m, ready).astype(np.int64)
        return n + an if self.variant == "plus" else n + 1 - an

    def values(self, a, m, ready):
        n = m >> 1
        even_val = _read(a, self.argument(a, n, m, ready), m, ready)
        return even_val ^ (m & 1).astype(np.uint8)


class ClosedFormRule(Rule):
    """Values given directly by a vectorized function of the index."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray]):
        self.fn = fn

    def values(self, a, m, ready):
        return np.asarray(self.fn(m), dtype=np.uint8)


def _zeros(m):
    return np.zeros(m.shape, dtype=np.uint8)


class BitSequence:
    """Lazily evaluated, memoized infinite 0/1 sequence.

    Seeds always take precedence over the rule.  Once a prefix is
    materialized the object may be pickled and handed to other workers.
    """

    def __init__(self, name: str, rule: Rule, seeds: Optional[dict[int, int]] = None):
        self.name = name
        self.rule = rule
        self.seeds = {int(k): int(v) for k, v in (seeds or {}).items()}
        for v in self.seeds.values():
            if v not in (0, 1):
                raise ValueError("seeds must be bits")
        self._cache = np.zeros(0, dtype=np.uint8)
        self._filled = 0

    def __repr__(self):
        return f"BitSequence({self.name!r}, filled={self._filled})"

    def __getitem__(self, n: int) -> int:
        return self.eval(n)

    def eval(self, n: int) -> int:
        if n < 0:
            raise IndexError("index must be nonnegative")
        self._ensure(n + 1)
        return int(self._cache[n])

    def prefix(self, count: int) -> np.ndarray:
        """First ``count`` terms as a read-only ``uint8`` array."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        self._ensure(count)
        out = self._cache[:count]
        out.flags.writeable = False
        return out

    @property
    def filled(self) -> int:
        return self._filled

    def _ensure(self, count: int) -> None:
        if count <= self._filled:
            return
        if count > self._cache.size:
            cap = max(count, 2 * self._cache.size, 16)
            grown = np.zeros(cap, dtype=np.uint8)
            grown[: self._filled] = self._cache[: self._filled]
            self._cache = grown
        while self._filled < count:
            lo = self._filled
            hi = min(count, max(2 * lo, lo + 1))
            self._fill_block(lo, hi)

    def _fill_block(self, lo: int, hi: int) -> None:
        # a block that reads past its start is retried at half the size
        while True:
            try:
                self._assign(self._cache, np.arange(lo, hi, dtype=np.int64), ready=lo)
                break
            except _NotReady:
                if hi - lo == 1:
                    raise CircularDefinition((lo, "unfilled dependency")) from None
                hi = lo + (hi - lo) // 2
        self._filled = hi

    def _assign(self, a, m, ready):
        lo, hi = int(m[0]), int(m[-1]) + 1
        keys = [k for k in self.seeds if lo <= k < hi]
        if keys:
            for k in keys:
                a[k] = self.seeds[k]
            m = m[~np.isin(m, keys)]
            if not m.size:
                return
        a[m] = self.rule.values(a, m, ready)


# --- constructors -------------------------------------------------------------

SEED_POLICIES = ("fixed", "unrolled")


def unrolled_seeds(spec: TemplateSpec) -> dict[int, int]:
    """Seeds obtained by evaluating the ``n = 0`` instance of ``a(4n) = F(n)`` once
    against the provisional seeds ``a(0) = 0``, ``a(1) = 1`` and overwriting them."""
    provisional = [0, 1]
    a0 = provisional[spec.f.scalar_argument(provisional, 0)]
    return {0: a0, 1: 1 - a0}


def template_sequence(spec: TemplateSpec, seeds: str = "fixed") -> BitSequence:
    """Instantiate the base-4 skeleton for ``spec``.

    ``seeds="fixed"`` keeps ``a(0) = 0``, ``a(1) = 1``; ``seeds="unrolled"`` uses
    :func:`unrolled_seeds`.  The two agree unless ``F`` is ``a(2n+1)`` or
    ``a(2n+1-a(n))``, in which case the unrolled sequence is the complement
    of the fixed one at indices 0 and 1 and may differ thereafter.
    """
    if seeds == "fixed":
        init = {0: 0, 1: 1}
    elif seeds == "unrolled":
        init = unrolled_seeds(spec)
    else:
        raise ValueError(f"seed policy must be one of {SEED_POLICIES}")
    name = spec.label if seeds == "fixed" else f"{spec.label}@unrolled"
    return BitSequence(name, TemplateRule(spec), init)


QUARTO = TemplateSpec(SelectorKind.IdN, SelectorKind.Even)
META1 = TemplateSpec(SelectorKind.IdN, SelectorKind.MinusSel)
META2 = TemplateSpec(SelectorKind.PlusSel, SelectorKind.MinusSel)


def thue_morse() -> BitSequence:
    return BitSequence("t", DoublingRule(), {0: 0})


def t_variant() -> BitSequence:
    return BitSequence("T", NestedEvenRule(), {0: 0})


def closed_form(name: str, fn: Callable[[np.ndarray], np.ndarray]) -> BitSequence:
    return BitSequence(name, ClosedFormRule(fn))


def constant_zero() -> BitSequence:
    return closed_form("zero", _zeros)


def complement(seq: BitSequence) -> BitSequence:
    return closed_form(f"~{seq.name}", _Complement(seq))


class _Complement:
    def __init__(self, seq):
        self.seq = seq

    def __call__(self, m):
        hi = int(m.max()) + 1 if m.size else 0
        return 1 - self.seq.prefix(hi)[m]


def _builtin_table() -> dict[str, Callable[[], BitSequence]]:
    return {
        "t": thue_morse,
        "t4": lambda: closed_form("t4", digits.base4_digit_parity_array),
        "Q": lambda: BitSequence("Q", TemplateRule(QUARTO), {0: 0, 1: 1}),
        "M1": lambda: BitSequence("M1", TemplateRule(META1), {0: 0, 1: 1}),
        "M2": lambda: BitSequence("M2", TemplateRule(META2), {0: 0, 1: 1}),
        "T": t_variant,
        "zero": constant_zero,
    }


BUILTIN_NAMES = tuple(_builtin_table())


def builtin(name: str) -> BitSequence:
    """Fresh instance (empty cache) of a named builtin sequence."""
    try:
        return _builtin_table()[name]()
    except KeyError:
        raise UnknownSequence(f"unknown sequence {name!r}; builtins are {', '.join(BUILTIN_NAMES)}") from None


def resolve(name: str, seeds: str = "fixed") -> BitSequence:
    """Builtin name or ``template:F,G`` string."""
    if name.startswith("template:"):
        return template_sequence(TemplateSpec.parse(name), seeds=seeds)
    return builtin(name)


# --- checks -------------------------------------------------------------------


def check_balanced(seq: BitSequence, pairs: int) -> bool:
    """True iff ``seq(2n) + seq(2n+1) == 1`` for all ``n < pairs``."""
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    a = seq.prefix(2 * pairs)
    return bool(np.all(a[0::2] + a[1::2] == 1))


def selector_xor_mismatch(a: np.ndarray, kind: SelectorKind, count: int) -> Optional[int]:
    """First ``n < count`` where the selector value differs from its XOR form.

    ``a(2n + a(n)) == a(2n) ^ a(n)`` and ``a(2n+1-a(n)) == a(2n+1) ^ a(n)``;
    ``a`` must hold at least ``2 * count`` terms.
    """
    if not kind.is_selector:
        raise ValueError("only selectors have an XOR form")
    n = np.arange(count, dtype=np.int64)
    an = a[n].astype(np.int64)
    if kind is SelectorKind.PlusSel:
        lhs, rhs = a[2 * n + an], a[2 * n] ^ a[n]
    else:
        lhs, rhs = a[2 * n + 1 - an], a[2 * n + 1] ^ a[n]
    bad = np.flatnonzero(lhs != rhs)
    return int(bad[0]) if bad.size else None


def ultimate_period(
    seq: BitSequence, preperiod_max: int = 1024, period_max: int = 64, window: int = 4096
) -> Optional[tuple[int, int]]:
    """Least ``(preperiod, period)`` consistent with the first ``window`` terms.

    ``None`` only says nothing periodic was seen inside the window.
    """
    if window < preperiod_max + 2 * period_max:
        raise ValueError("window must be >= preperiod_max + 2 * period_max")
    a = seq.prefix(window)
    best = None
    for q in range(1, period_max + 1):
        bad = np.flatnonzero(a[: window - q] != a[q:window])
        p = int(bad[-1]) + 1 if bad.size else 0
        if p <= preperiod_max and (best is None or p < best[0]):
            best = (p, q)
    return best


@dataclass
class RigidityReport:
    variant: str
    horizon: int
    passed: bool
    a0: int
    solutions: list = field(default_factory=list)  # first 16 terms of each consistent branch
    free_indices: tuple = ()
    first_failure: Optional[int] = None

    @property
    def first_terms(self) -> tuple:
        return self.solutions[0] if self.solutions else ()


def _rigidity_branch(variant: str, a0: int, a2: int) -> BitSequence:
    return BitSequence(
        f"rigidity-{variant}", DyadicSelectorRule(variant), {0: a0, 1: 1 - a0, 2: a2, 3: 1 - a2}
    )


def rigidity_sequence(variant: str) -> BitSequence:
    """Representative balanced solution of the base-2 selector scheme.

    Index 2 is self-referential in both schemes and left free by the
    equations; the representative picks the value that differs from the
    eventual even-index value, so the transient is visible.
    """
    return _rigidity_branch(variant, *((0, 1) if variant == "plus" else (1, 0)))


def rigidity_check(variant: str, horizon: int = 10_000) -> RigidityReport:
    """Rebuild every balanced solution of the base-2 selector scheme and check
    that each is ``0101...`` (plus) or ``1010...`` (minus) from index 4 on."""
    if horizon < 8:
        raise ValueError("horizon must be >= 8")
    solutions = []
    for a0 in (0, 1):
        for a2 in (0, 1):
            a = _rigidity_branch(variant, a0, a2).prefix(2 * horizon + 2)
            # only the n = 0, 1 equations involve seeded indices
            ok = all(
                a[2 * n] == a[n + a[n]] if variant == "plus" else a[2 * n] == a[n + 1 - a[n]]
                for n in (0, 1)
            )
            if ok:
                solutions.append((a0, a2, a))
    a0s = {s[0] for s in solutions}
    if len(a0s) != 1:
        raise ContradictionDetected(f"seed analysis for {variant!r} left a(0) in {sorted(a0s)}")
    even_target = 0 if variant == "plus" else 1
    first_failure = None
    for _, _, a in solutions:
        ev, od = a[4 : 2 * horizon + 2 : 2], a[5 : 2 * horizon + 2 : 2]
        bad = np.flatnonzero((ev != even_target) | (od != 1 - even_target))
        if bad.size:
            n_bad = int(bad[0]) + 2
            first_failure = n_bad if first_failure is None else min(first_failure, n_bad)
    free = (2,) if len({s[1] for s in solutions}) == 2 else ()
    return RigidityReport(
        variant=variant,
        horizon=horizon,
        passed=first_failure is None,
        a0=a0s.pop(),
        solutions=[tuple(int(x) for x in a[:16]) for _, _, a in solutions],
        free_indices=free,
        first_failure=first_failure,
    )


class HofstadterQ:
    """Integer-valued ``Q(n) = Q(n - Q(n-1)) + Q(n - Q(n-2))`` with ``Q(1) = Q(2) = 1``."""

    def __init__(self):
        self._q = [0, 1, 1]  # index 0 unused

    def __call__(self, n: int) -> int:
        if n < 1:
            raise UndefinedTerm("Q(n) is defined for n >= 1 only")
        q = self._q
        while len(q) <= n:
            k = len(q)
            i, j = k - q[k - 1], k - q[k - 2]
            if i < 1 or j < 1:
                raise UndefinedTerm(f"Q({k}) refers to index {min(i, j)} < 1")
            q.append(q[i] + q[j])
        return q[n]

    def terms(self, count: int) -> list[int]:
        """``Q(1), ..., Q(count)``."""
        if count:
            self(count)
        return self._q[1 : count + 1]


def hofstadter_q(n: int) -> int:
    return HofstadterQ()(n)
