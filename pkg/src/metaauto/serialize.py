"""DFAO files: a JSON document and a Walnut-style text listing.

Walnut-style text::

    msd_4
    0 0
    0 -> 0
    1 -> 1
    ...

    1 1
    0 -> 2
    ...

States appear in increasing order, digits in increasing order, blocks are
separated by one blank line and every line ends with ``\\n``.  State 0 is
the initial state; a machine whose initial state is not 0 is renumbered by
swapping the two.  The format is informational and not guaranteed to load
in any particular version of an external prover.
"""
from __future__ import annotations

import json
import re

from .automata import Dfao
from .errors import ParseError


def _swap_initial_first(m: Dfao) -> Dfao:
    if m.initial == 0:
        return m
    perm = list(range(m.n_states))
    perm[0], perm[m.initial] = m.initial, 0  # new index -> old index
    old_to_new = {old: new for new, old in enumerate(perm)}
    delta = tuple(tuple(old_to_new[t] for t in m.delta[old]) for old in perm)
    labels = tuple(m.labels[old] for old in perm) if m.labels else None
    return Dfao(m.base, delta, 0, tuple(m.output[old] for old in perm), labels)


def to_json(m: Dfao) -> str:
    doc = {
        "base": m.base,
        "states": m.n_states,
        "initial": m.initial,
        "delta": [list(row) for row in m.delta],
        "outputs": list(m.output),
    }
    if m.labels:
        doc["labels"] = list(m.labels)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def from_json(text: str) -> Dfao:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("DFAO document must be a JSON object")
    missing = [k for k in ("base", "initial", "delta", "outputs") if k not in doc]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")
    if "states" in doc and doc["states"] != len(doc["delta"]):
        raise ParseError("'states' disagrees with the number of delta rows")
    try:
        return Dfao(int(doc["base"]), doc["delta"], int(doc["initial"]), doc["outputs"], doc.get("labels"))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid DFAO: {exc}") from exc


def to_walnut(m: Dfao) -> str:
    m = _swap_initial_first(m)
    blocks = []
    for q in range(m.n_states):
        lines = [f"{q} {m.output[q]}"]
        lines += [f"{d} -> {m.delta[q][d]}" for d in range(m.base)]
        blocks.append("\n".join(lines))
    return f"msd_{m.base}\n" + "\n\n".join(blocks) + "\n"


_HEAD = re.compile(r"msd_(\d+)")
_STATE = re.compile(r"(\d+) (-?\d+)")
_EDGE = re.compile(r"(\d+) -> (\d+)")


def from_walnut(text: str) -> Dfao:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty machine file")
    head = _HEAD.fullmatch(lines[0][1])
    if not head:
        raise ParseError(f"line {lines[0][0]}: expected 'msd_<base>'")
    base = int(head.group(1))
    outputs: dict[int, int] = {}
    edges: dict[int, dict[int, int]] = {}
    current = None
    for lineno, ln in lines[1:]:
        if m := _EDGE.fullmatch(ln):
            if current is None:
                raise ParseError(f"line {lineno}: transition before any state header")
            d, t = int(m.group(1)), int(m.group(2))
            if d >= base:
                raise ParseError(f"line {lineno}: digit {d} out of range for base {base}")
            if d in edges[current]:
                raise ParseError(f"line {lineno}: duplicate transition on digit {d}")
            edges[current][d] = t
        elif m := _STATE.fullmatch(ln):
            current = int(m.group(1))
            if current in outputs:
                raise ParseError(f"line {lineno}: state {current} declared twice")
            outputs[current] = int(m.group(2))
            edges[current] = {}
        else:
            raise ParseError(f"line {lineno}: cannot parse {ln!r}")
    size = len(outputs)
    if sorted(outputs) != list(range(size)):
        raise ParseError("states must be numbered 0..S-1")
    delta = []
    for q in range(size):
        if sorted(edges[q]) != list(range(base)):
            raise ParseError(f"state {q} does not have a transition for every digit")
        row = tuple(edges[q][d] for d in range(base))
        if any(t >= size for t in row):
            raise ParseError(f"state {q} moves to an undeclared state")
        delta.append(row)
    return Dfao(base, tuple(delta), 0, tuple(outputs[q] for q in range(size)))


def dumps(m: Dfao, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(m)
    if fmt == "walnut":
        return to_walnut(m)
    raise ValueError(f"unknown machine format {fmt!r}")


def loads(text: str, fmt: str | None = None) -> Dfao:
    """Parse either format; without ``fmt`` the format is sniffed from the first character."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "walnut"
    if fmt == "json":
        return from_json(text)
    if fmt == "walnut":
        return from_walnut(text)
    raise ValueError(f"unknown machine format {fmt!r}")
