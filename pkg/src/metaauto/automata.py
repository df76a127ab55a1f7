"""Base-k DFAOs (Moore machines) read most-significant digit first.

``n = 0`` is the empty digit string, so ``dfao_eval(m, 0)`` is the output of
the initial state.  Machine equality is always isomorphism after
minimization and canonical BFS relabeling (:func:`canonical`).

Inference
---------
:func:`infer_dfao` guesses the minimal MSB-first machine of a sequence from a
finite prefix.  A kernel entry ``(i, j)`` stands for the digit path of length
``i`` and value ``j`` (leading zeros allowed); its child under digit ``r`` is
``(i + 1, base * j + r)``.  Two entries are merged when their future
windows agree, where the future window of value ``j`` is the concatenation
of the blocks ``a[j * base**l : (j + 1) * base**l]`` for ``l = 0, 1, ...``,
i.e. every continuation of the path by ``l`` further digits.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence, Union

import numpy as np

from .errors import KernelNotClosed, UnknownSequence, VerificationFailed, WindowTooSmall
from .seqcore import BitSequence, SelectorKind, builtin

Matrix2 = tuple[tuple[int, int], tuple[int, int]]
Pair = tuple[int, int]


@dataclass(frozen=True)
class Dfao:
    base: int
    delta: tuple[tuple[int, ...], ...]
    initial: int
    output: tuple
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        object.__setattr__(self, "delta", tuple(tuple(int(t) for t in row) for row in self.delta))
        object.__setattr__(self, "output", tuple(self.output))
        size = len(self.delta)
        if size == 0:
            raise ValueError("a DFAO needs at least one state")
        if len(self.output) != size:
            raise ValueError("output map must cover every state")
        if not 0 <= self.initial < size:
            raise ValueError("initial state out of range")
        for q, row in enumerate(self.delta):
            if len(row) != self.base:
                raise ValueError(f"state {q} is missing transitions (delta must be total)")
            for t in row:
                if not 0 <= t < size:
                    raise ValueError(f"state {q} has transition to unknown state {t}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != size:
                raise ValueError("labels must cover every state")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def label(self, q: int) -> str:
        return self.labels[q] if self.labels else str(q)

    def state_of(self, n: int) -> int:
        q = self.initial
        for d in msd_digits(n, self.base):
            q = self.delta[q][d]
        return q

    def eval(self, n: int):
        if n < 0:
            raise ValueError("n must be nonnegative")
        return self.output[self.state_of(n)]

    def states_prefix(self, count: int) -> np.ndarray:
        """State reached on each ``n < count``.

        Uses ``state(n) = delta(state(n // base), n % base)`` for ``n >= 1``,
        which holds because the canonical representation of ``n`` is that of
        ``n // base`` followed by one digit.
        """
        table = np.asarray(self.delta, dtype=np.int64)
        out = np.empty(max(count, 0), dtype=np.int64)
        if count <= 0:
            return out
        out[0] = self.initial
        lo = 1
        while lo < count:
            hi = min(count, lo * self.base)
            n = np.arange(lo, hi, dtype=np.int64)
            out[lo:hi] = table[out[n // self.base], n % self.base]
            lo = hi
        return out

    def eval_prefix(self, count: int) -> np.ndarray:
        outs = np.asarray(self.output)
        return outs[self.states_prefix(count)]

    @property
    def leading_zero_invariant(self) -> bool:
        return self.delta[self.initial][0] == self.initial


def msd_digits(n: int, base: int) -> list[int]:
    """Base-``base`` digits of ``n``, most significant first; empty for 0."""
    out = []
    while n:
        n, d = divmod(n, base)
        out.append(d)
    return out[::-1]


def dfao_eval(m: Dfao, n: int):
    return m.eval(n)


# --- builtin machines ---------------------------------------------------------

_BUILTIN = {
    "Q": Dfao(
        4,
        ((0, 2, 1, 2), (1, 2, 2, 1), (2, 1, 1, 2)),
        0,
        (0, 0, 1),
        labels=("A", "B", "C"),
    ),
    "M1": Dfao(4, ((0, 1, 1, 2), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 2, 3)), 0, (0, 1, 0, 1)),
    "M2": Dfao(4, ((0, 1, 3, 2), (2, 3, 1, 0), (3, 2, 0, 1), (1, 0, 2, 3)), 0, (0, 1, 0, 1)),
}


def builtin_dfao(name: str) -> Dfao:
    try:
        return _BUILTIN[name]
    except KeyError:
        raise UnknownSequence(f"no builtin DFAO named {name!r}; have {', '.join(_BUILTIN)}") from None


BUILTIN_DFAO_NAMES = tuple(_BUILTIN)


def thue_morse_dfao(base: int = 2) -> Dfao:
    """Two-state machine for t; in base 4 it tracks the parity of digits 1 and 2."""
    if base == 2:
        return Dfao(2, ((0, 1), (1, 0)), 0, (0, 1))
    if base == 4:
        return Dfao(4, ((0, 1, 1, 0), (1, 0, 0, 1)), 0, (0, 1))
    raise ValueError("only bases 2 and 4 are provided")


# --- affine rules over GF(2)^2 --------------------------------------------------


def mat_mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return tuple(
        tuple((a[i][0] * b[0][j] + a[i][1] * b[1][j]) & 1 for j in range(2)) for i in range(2)
    )


def mat_vec(a: Matrix2, v: Pair) -> Pair:
    return ((a[0][0] * v[0] + a[0][1] * v[1]) & 1, (a[1][0] * v[0] + a[1][1] * v[1]) & 1)


IDENTITY: Matrix2 = ((1, 0), (0, 1))


def mat_pow(a: Matrix2, k: int) -> Matrix2:
    out = IDENTITY
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def mat_order(a: Matrix2) -> int:
    """Multiplicative order of an invertible 2x2 matrix over GF(2)."""
    p = a
    for k in range(1, 7):
        if p == IDENTITY:
            return k
        p = mat_mul(p, a)
    raise ValueError("matrix is not invertible over GF(2)")


def _vadd(u: Pair, v: Pair) -> Pair:
    return (u[0] ^ v[0], u[1] ^ v[1])


@dataclass(frozen=True)
class AffineRule:
    """Digit-indexed affine maps ``s -> matrices[d] s + translations[d]`` on GF(2)^2."""

    matrices: tuple[Matrix2, ...]
    translations: tuple[Pair, ...]

    @classmethod
    def uniform(cls, matrix: Matrix2, translations: Sequence[Pair]) -> "AffineRule":
        return cls(tuple(matrix for _ in translations), tuple(translations))

    @property
    def base(self) -> int:
        return len(self.translations)

    @property
    def matrix(self) -> Matrix2:
        """The shared linear part; only defined for uniform rules."""
        if len(set(self.matrices)) != 1:
            raise ValueError("rule has digit-dependent linear parts")
        return self.matrices[0]

    def apply(self, s: Pair, d: int) -> Pair:
        return _vadd(mat_vec(self.matrices[d], s), self.translations[d])

    def iterate(self, initial: Pair, count: int) -> tuple[np.ndarray, np.ndarray]:
        """Lifted states for ``n < count`` by MSB-first iteration from ``initial``."""
        codes = np.empty(max(count, 0), dtype=np.int64)
        table = np.array(
            [[_encode(self.apply(_decode(c), d)) for d in range(self.base)] for c in range(4)],
            dtype=np.int64,
        )
        if count > 0:
            codes[0] = _encode(initial)
            lo = 1
            while lo < count:
                hi = min(count, lo * self.base)
                n = np.arange(lo, hi, dtype=np.int64)
                codes[lo:hi] = table[codes[n // self.base], n % self.base]
                lo = hi
        return codes >> 1 & 1, codes & 1


def _encode(s: Pair) -> int:
    return 2 * s[0] + s[1]


def _decode(c: int) -> Pair:
    return (c >> 1 & 1, c & 1)


FIBONACCI_MATRIX: Matrix2 = ((0, 1), (1, 1))

M2_AFFINE = AffineRule.uniform(FIBONACCI_MATRIX, ((0, 0), (1, 0), (1, 1), (0, 1)))
M2_ENCODING: dict[Pair, int] = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}

# (x,y) -0-> (x, y); -1-> (1+x, x+y); -2-> (y, 1+x); -3-> (1+y, x+y+1)
M1_AFFINE = AffineRule(
    (IDENTITY, ((1, 0), (1, 1)), ((0, 1), (1, 0)), ((0, 1), (1, 1))),
    ((0, 0), (1, 0), (0, 1), (1, 1)),
)
M1_ENCODING: dict[Pair, int] = {(0, 1): 0, (1, 1): 1, (0, 0): 2, (1, 0): 3}
M1_INITIAL: Pair = (0, 1)


def dfao_from_affine(
    rule: AffineRule,
    encoding: dict[Pair, int],
    outputs: Optional[dict[int, Hashable]] = None,
    initial: Pair = (0, 0),
) -> Dfao:
    """Machine on the four lifted states; by default outputs read the first coordinate."""
    if sorted(encoding.values()) != [0, 1, 2, 3] or len(encoding) != 4:
        raise ValueError("encoding must be a bijection from GF(2)^2 onto 0..3")
    decode = {v: k for k, v in encoding.items()}
    delta = tuple(
        tuple(encoding[rule.apply(decode[q], d)] for d in range(rule.base)) for q in range(4)
    )
    if outputs is None:
        outputs = {q: decode[q][0] for q in range(4)}
    return Dfao(rule.base, delta, encoding[initial], tuple(outputs[q] for q in range(4)))


def affine_state_sum(rule: AffineRule, n: int) -> Pair:
    """``s(n) = sum_j A^{(L-1-j) mod ord(A)} v(d_j)`` from ``s(0) = (0, 0)``, digits MSB-first."""
    a = rule.matrix
    order = mat_order(a)
    powers = [mat_pow(a, k) for k in range(order)]
    ds = msd_digits(n, rule.base)
    length = len(ds)
    s = (0, 0)
    for j, d in enumerate(ds):
        s = _vadd(s, mat_vec(powers[(length - 1 - j) % order], rule.translations[d]))
    return s


def lifted_states(a: np.ndarray, selector: SelectorKind, count: int) -> tuple[np.ndarray, np.ndarray]:
    """``(a(n), a(selector argument))`` computed straight from the prefix ``a``."""
    n = np.arange(count, dtype=np.int64)
    x = a[n].astype(np.int64)
    if selector is SelectorKind.PlusSel:
        y = a[2 * n + x]
    elif selector is SelectorKind.MinusSel:
        y = a[2 * n + 1 - x]
    else:
        raise ValueError("lifted states use a selector")
    return x, y.astype(np.int64)


# --- trimming, minimization, canonical form ---------------------------------------


def _relabel_bfs(m: Dfao) -> Dfao:
    order = [m.initial]
    index = {m.initial: 0}
    queue = deque([m.initial])
    while queue:
        q = queue.popleft()
        for d in range(m.base):
            t = m.delta[q][d]
            if t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
    delta = tuple(tuple(index[m.delta[q][d]] for d in range(m.base)) for q in order)
    labels = tuple(m.label(q) for q in order) if m.labels else None
    return Dfao(m.base, delta, 0, tuple(m.output[q] for q in order), labels)


def trim(m: Dfao) -> Dfao:
    """Drop unreachable states; survivors are numbered in BFS order by digit."""
    return _relabel_bfs(m)


def minimize(m: Dfao) -> Dfao:
    """Minimal machine for the same function, by Moore partition refinement.

    The initial partition groups states by output; blocks are split by the
    blocks of their successors until nothing changes.
    """
    m = trim(m)
    ids: dict = {}
    block = [ids.setdefault(o, len(ids)) for o in m.output]
    while True:
        sigs: dict = {}
        new = [
            sigs.setdefault((block[q], tuple(block[t] for t in m.delta[q])), len(sigs))
            for q in range(m.n_states)
        ]
        if len(sigs) == len(set(block)):
            break
        block = new
    reps: dict[int, int] = {}
    for q, b in enumerate(block):
        reps.setdefault(b, q)
    delta = tuple(
        tuple(block[m.delta[reps[b]][d]] for d in range(m.base)) for b in range(len(reps))
    )
    labels = tuple(m.label(reps[b]) for b in range(len(reps))) if m.labels else None
    quotient = Dfao(m.base, delta, block[m.initial], tuple(m.output[reps[b]] for b in range(len(reps))), labels)
    return _relabel_bfs(quotient)


def canonical(m: Dfao) -> Dfao:
    """Minimal machine, BFS-numbered, without state labels."""
    mm = minimize(m)
    return Dfao(mm.base, mm.delta, mm.initial, mm.output)


def isomorphic(m1: Dfao, m2: Dfao) -> bool:
    return canonical(m1) == canonical(m2)


# --- inference ----------------------------------------------------------------


@dataclass
class KernelTable:
    base: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    classes: list[tuple[int, int]] = field(default_factory=list)
    windows: list[np.ndarray] = field(default_factory=list)
    transitions: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __len__(self):
        return len(self.classes)


def _future_window(a: np.ndarray, j: int, base: int) -> np.ndarray:
    blocks = []
    width = 1
    while (j + 1) * width <= a.size:
        blocks.append(a[j * width : (j + 1) * width])
        width *= base
    return np.concatenate(blocks) if blocks else a[:0]


def _as_prefix(seq: Union[BitSequence, np.ndarray, Sequence[int]], prefix_len: Optional[int]) -> np.ndarray:
    if isinstance(seq, BitSequence):
        return seq.prefix(prefix_len)
    arr = np.asarray(seq)
    return arr if prefix_len is None else arr[:prefix_len]


def build_kernel_table(
    seq, prefix_len: int = 4**8, min_window: int = 256, max_depth: int = 6, base: int = 4
) -> KernelTable:
    a = _as_prefix(seq, prefix_len)
    table = KernelTable(base)

    def classify(i: int, j: int) -> Optional[int]:
        w = _future_window(a, j, base)
        for cid, ref in enumerate(table.windows):
            common = min(w.size, ref.size)
            if not np.array_equal(w[:common], ref[:common]):
                continue
            if common < min_window:
                raise WindowTooSmall(
                    f"entry {(i, j)} matches class {cid} on only {common} < {min_window} terms"
                )
            return cid
        return None

    def add(i: int, j: int) -> int:
        table.classes.append((i, j))
        table.windows.append(_future_window(a, j, base))
        return len(table.classes) - 1

    if a.size == 0:
        raise WindowTooSmall("empty prefix")
    root = add(0, 0)
    table.entries[(0, 0)] = root
    queue = deque([root])
    while queue:
        c = queue.popleft()
        i, j = table.classes[c]
        row = []
        for r in range(base):
            ci, cj = i + 1, base * j + r
            cid = classify(ci, cj)
            if cid is None:
                if ci > max_depth:
                    raise KernelNotClosed(f"new kernel class at depth {ci} > max_depth={max_depth}")
                if _future_window(a, cj, base).size < min_window:
                    raise WindowTooSmall(f"entry {(ci, cj)} has fewer than {min_window} known terms")
                cid = add(ci, cj)
                queue.append(cid)
            table.entries[(ci, cj)] = cid
            row.append(cid)
        table.transitions[c] = tuple(row)
    return table


def kernel_size(seq, prefix_len: int = 4**8, min_window: int = 256, max_depth: int = 6, base: int = 4) -> int:
    return len(build_kernel_table(seq, prefix_len, min_window, max_depth, base))


def infer_dfao(
    seq, prefix_len: int = 4**8, min_window: int = 256, max_depth: int = 6, base: int = 4
) -> Dfao:
    """Guess the minimal MSB-first machine from a prefix and check it on the whole prefix.

    This certifies agreement on the prefix only.
    """
    a = _as_prefix(seq, prefix_len)
    table = build_kernel_table(a, None, min_window, max_depth, base)
    delta = tuple(table.transitions[c] for c in range(len(table)))
    output = tuple(int(w[0]) for w in table.windows)
    m = minimize(Dfao(base, delta, 0, output))
    got = m.eval_prefix(a.size)
    bad = np.flatnonzero(got != a)
    if bad.size:
        idx = int(bad[0])
        raise VerificationFailed(f"guessed machine disagrees with the sequence at n={idx}", index=idx)
    return m


def verify_dfao(seq, m: Dfao, horizon: int) -> bool:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    a = _as_prefix(seq, horizon)
    return bool(np.array_equal(m.eval_prefix(horizon), a))


# --- denestability ------------------------------------------------------------


@dataclass
class DenestabilityReport:
    sequence: str
    c_max: int
    d_range: int
    horizon: int
    witnesses: dict[tuple[int, int], Optional[int]]

    @property
    def all_refuted(self) -> bool:
        return all(w is not None for w in self.witnesses.values())

    @property
    def unrefuted(self) -> list[tuple[int, int]]:
        return [cd for cd, w in self.witnesses.items() if w is None]


def denestability_probe(
    seq: Union[str, BitSequence] = "M1",
    c_max: int = 8,
    d_range: int = 8,
    horizon: int = 1000,
    selector: SelectorKind = SelectorKind.MinusSel,
) -> DenestabilityReport:
    """Search for ``(c, d)`` with ``aux(n) == a(c n + d)`` on ``n <= horizon``.

    ``aux(n)`` is the selector value (default ``a(2n + 1 - a(n))``).  Each pair
    gets its least witness ``n`` of disagreement, skipping ``n`` with
    ``c n + d < 0``; ``None`` means no witness was found.
    """
    if horizon <= 4 * c_max + d_range:
        raise ValueError("horizon must exceed 4 * c_max + d_range")
    s = builtin(seq) if isinstance(seq, str) else seq
    a = s.prefix(c_max * horizon + d_range + 2 * horizon + 2)
    n = np.arange(horizon + 1, dtype=np.int64)
    _, aux = lifted_states(a, selector, horizon + 1)
    witnesses: dict[tuple[int, int], Optional[int]] = {}
    for c in range(1, c_max + 1):
        for d in range(-d_range, d_range + 1):
            idx = c * n + d
            ok = idx >= 0
            diff = np.flatnonzero(ok & (aux != a[np.where(ok, idx, 0)]))
            witnesses[(c, d)] = int(diff[0]) if diff.size else None
    return DenestabilityReport(s.name, c_max, d_range, horizon, witnesses)
