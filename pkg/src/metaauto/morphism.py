"""Uniform morphisms with a coding, their fixed points and incidence matrices.

Incidence orientation: ``incidence(m)[a, b]`` counts the letter ``a`` in the
image of ``b``, so every column sums to the uniformity ``k``.  Primitivity
does not depend on the orientation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from .automata import Dfao
from .errors import NotProlongable, UnknownSequence


@dataclass(frozen=True)
class UniformMorphism:
    alphabet: tuple[Hashable, ...]
    images: tuple[tuple[int, ...], ...]
    coding: tuple
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "images", tuple(tuple(int(x) for x in w) for w in self.images))
        object.__setattr__(self, "coding", tuple(self.coding))
        size = len(self.alphabet)
        if len(self.images) != size or len(self.coding) != size:
            raise ValueError("images and coding must cover the alphabet")
        if len(set(self.alphabet)) != size:
            raise ValueError("alphabet letters must be distinct")
        lengths = {len(w) for w in self.images}
        if len(lengths) != 1 or 0 in lengths:
            raise ValueError("all images must have the same positive length")
        if any(not 0 <= x < size for w in self.images for x in w):
            raise ValueError("image uses a letter outside the alphabet")
        if not 0 <= self.seed < size:
            raise ValueError("seed letter out of range")

    @classmethod
    def from_words(
        cls, images: Mapping[Hashable, Sequence[Hashable]], coding: Mapping[Hashable, object], seed: Hashable
    ) -> "UniformMorphism":
        """Build from letter-keyed images, e.g. ``{"A": "ACBC", ...}``."""
        alphabet = tuple(images)
        index = {c: i for i, c in enumerate(alphabet)}
        return cls(
            alphabet,
            tuple(tuple(index[c] for c in images[a]) for a in alphabet),
            tuple(coding[a] for a in alphabet),
            index[seed],
        )

    @property
    def k(self) -> int:
        return len(self.images[0])

    @property
    def prolongable(self) -> bool:
        return self.images[self.seed][0] == self.seed

    def image_word(self, letter: Hashable) -> tuple:
        i = self.alphabet.index(letter)
        return tuple(self.alphabet[x] for x in self.images[i])


def fixed_point_prefix(m: UniformMorphism, count: int) -> np.ndarray:
    """First ``count`` letters (as alphabet indices) of the fixed point from the seed.

    The word is grown by expanding only the letters needed for the
    requested length, so no full power image is built past ``count``.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if not m.prolongable:
        raise NotProlongable(f"image of seed {m.alphabet[m.seed]!r} does not start with it")
    table = np.asarray(m.images, dtype=np.int64)
    w = np.array([m.seed], dtype=np.int64)
    while w.size < count:
        need = -(-count // m.k)
        grown = table[w[:need]].ravel()
        if grown.size == w.size:
            break  # one-letter alphabet with k == 1 never grows
        w = grown
    return w[:count]


def coded_prefix(m: UniformMorphism, count: int) -> np.ndarray:
    return np.asarray(m.coding)[fixed_point_prefix(m, count)]


def morphism_from_dfao(dfao: Dfao) -> UniformMorphism:
    """Letters are states; state ``q`` maps to ``delta(q, 0) ... delta(q, k-1)``."""
    if not dfao.leading_zero_invariant:
        raise NotProlongable("delta(initial, 0) must equal the initial state")
    alphabet = tuple(dfao.labels) if dfao.labels else tuple(range(dfao.n_states))
    return UniformMorphism(alphabet, dfao.delta, dfao.output, dfao.initial)


def incidence(m: UniformMorphism) -> np.ndarray:
    size = len(m.alphabet)
    out = np.zeros((size, size), dtype=np.int64)
    for b, w in enumerate(m.images):
        for a in w:
            out[a, b] += 1
    return out


def primitivity_power(mat: np.ndarray, power_limit: int) -> Optional[int]:
    """Least ``p <= power_limit`` with ``mat**p`` entrywise positive, else ``None``."""
    if power_limit < 1:
        raise ValueError("power_limit must be >= 1")
    pattern = (np.asarray(mat) > 0).astype(np.int64)
    p = pattern.copy()
    for e in range(1, power_limit + 1):
        if p.all():
            return e
        p = ((p @ pattern) > 0).astype(np.int64)
    return None


def is_primitive(mat: np.ndarray, power_limit: int) -> bool:
    return primitivity_power(mat, power_limit) is not None


def _numeric(words: Sequence[str]) -> UniformMorphism:
    """Morphism on letters 0..3 given as digit strings, coded by parity."""
    return UniformMorphism(
        tuple(range(len(words))), tuple(tuple(int(c) for c in w) for w in words), (0, 1, 0, 1)
    )


M1_MORPHISM = _numeric(("0112", "1230", "2301", "3023"))
M2_MORPHISM = _numeric(("0132", "2310", "3201", "1023"))
Q_MORPHISM = UniformMorphism.from_words(
    {"A": "ACBC", "B": "BCCB", "C": "CBBC"}, {"A": 0, "B": 0, "C": 1}, "A"
)

_BUILTIN = {"Q": Q_MORPHISM, "M1": M1_MORPHISM, "M2": M2_MORPHISM}


def builtin_morphism(name: str) -> UniformMorphism:
    try:
        return _BUILTIN[name]
    except KeyError:
        raise UnknownSequence(f"no builtin morphism named {name!r}") from None
