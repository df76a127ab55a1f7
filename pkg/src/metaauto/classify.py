"""Minimal DFAO sizes for all 25 base-4 templates ``(F, G)``.

Each template is built with the "unrolled" seed policy (see
:func:`metaauto.seqcore.unrolled_seeds`), tested for ultimate periodicity,
and otherwise passed to :func:`metaauto.automata.infer_dfao`.  Notes name a
known sequence when the first ``compare_len`` terms coincide with it or
with its complement.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from .automata import infer_dfao
from .errors import MetaAutoError
from .seqcore import SELECTOR_ORDER, SelectorKind, TemplateSpec, builtin, template_sequence, ultimate_period

PERIODIC = "ultimately periodic"

_S = SelectorKind
# (F, G, size or None for the periodic row, selector count, note)
APPENDIX_TABLE: tuple[tuple[SelectorKind, SelectorKind, Optional[int], int, str], ...] = (
    (_S.IdN, _S.IdN, 2, 0, "Thue-Morse"),
    (_S.IdN, _S.Even, 3, 0, "Quarto"),
    (_S.IdN, _S.Odd, 2, 0, "Thue-Morse"),
    (_S.IdN, _S.PlusSel, 4, 1, ""),
    (_S.IdN, _S.MinusSel, 4, 1, "Meta(1)"),
    (_S.Even, _S.IdN, 4, 0, ""),
    (_S.Even, _S.Even, None, 0, PERIODIC),
    (_S.Even, _S.Odd, 2, 0, "Thue-Morse"),
    (_S.Even, _S.PlusSel, 3, 1, ""),
    (_S.Even, _S.MinusSel, 3, 1, ""),
    (_S.Odd, _S.IdN, 5, 0, ""),
    (_S.Odd, _S.Even, 3, 0, "complement of Quarto"),
    (_S.Odd, _S.Odd, 5, 0, ""),
    (_S.Odd, _S.PlusSel, 5, 1, ""),
    (_S.Odd, _S.MinusSel, 5, 1, ""),
    (_S.PlusSel, _S.IdN, 4, 1, ""),
    (_S.PlusSel, _S.Even, 4, 1, ""),
    (_S.PlusSel, _S.Odd, 4, 1, ""),
    (_S.PlusSel, _S.PlusSel, 4, 2, ""),
    (_S.PlusSel, _S.MinusSel, 4, 2, "Meta(2)"),
    (_S.MinusSel, _S.IdN, 4, 1, ""),
    (_S.MinusSel, _S.Even, 4, 1, ""),
    (_S.MinusSel, _S.Odd, 4, 1, ""),
    (_S.MinusSel, _S.PlusSel, 4, 2, "complement of Meta(2)"),
    (_S.MinusSel, _S.MinusSel, 4, 2, ""),
)

# builtin name -> display name; t4 (base-4 digit-sum parity) is reported as Thue-Morse too
_KNOWN = (("t", "Thue-Morse"), ("t4", "Thue-Morse"), ("Q", "Quarto"), ("M1", "Meta(1)"), ("M2", "Meta(2)"))


@dataclass
class ClassificationRow:
    f: SelectorKind
    g: SelectorKind
    dfao_size: Optional[int]
    selector_count: int
    note: str = ""
    identified_as: str = ""
    period: Optional[tuple[int, int]] = None
    periodic_machine_size: Optional[int] = None
    fixed_seed_size: Optional[int] = None
    diagnostic: str = ""

    @property
    def size_text(self) -> str:
        if self.diagnostic:
            return "?"
        return "---" if self.dfao_size is None else str(self.dfao_size)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["f"], d["g"] = self.f.value, self.g.value
        d["period"] = list(self.period) if self.period else None
        return d


def _identify(a: np.ndarray, refs: dict[str, np.ndarray]) -> tuple[str, str]:
    for name, label in _KNOWN:
        ref = refs[name]
        if np.array_equal(a, ref):
            return label, name
        if np.array_equal(a, 1 - ref):
            return f"complement of {label}", f"~{name}"
    return "", ""


def classify_row(
    spec: TemplateSpec,
    refs: dict[str, np.ndarray],
    prefix_len: int = 4**8,
    seeds: str = "unrolled",
    compare_len: int = 2**16,
) -> ClassificationRow:
    row = ClassificationRow(spec.f, spec.g, None, spec.selector_count)
    seq = template_sequence(spec, seeds=seeds)
    try:
        row.period = ultimate_period(seq)
        machine = infer_dfao(seq, prefix_len=prefix_len)
        if row.period is None:
            row.dfao_size = machine.n_states
            row.note, row.identified_as = _identify(seq.prefix(compare_len), refs)
        else:
            row.note = PERIODIC
            row.periodic_machine_size = machine.n_states
        if seeds != "fixed":
            fixed = template_sequence(spec, seeds="fixed")
            if not np.array_equal(fixed.prefix(64), seq.prefix(64)):
                row.fixed_seed_size = infer_dfao(fixed, prefix_len=prefix_len).n_states
    except MetaAutoError as exc:
        row.diagnostic = f"{type(exc).__name__}: {exc}"
    return row


def classify_all(prefix_len: int = 4**8, seeds: str = "unrolled", compare_len: int = 2**16) -> list[ClassificationRow]:
    """All 25 rows in table order; a failing row carries a diagnostic instead of a size."""
    if prefix_len < 4**8:
        raise ValueError("prefix_len must be >= 4**8")
    refs = {name: builtin(name).prefix(compare_len) for name, _ in _KNOWN}
    return [
        classify_row(TemplateSpec(f, g), refs, prefix_len, seeds, compare_len)
        for f in SELECTOR_ORDER
        for g in SELECTOR_ORDER
    ]


def check_rows(rows: list[ClassificationRow]) -> list[str]:
    """Disagreements with :data:`APPENDIX_TABLE`, one message per field."""
    problems = []
    if len(rows) != len(APPENDIX_TABLE):
        problems.append(f"expected {len(APPENDIX_TABLE)} rows, got {len(rows)}")
    for row, (f, g, size, sel, note) in zip(rows, APPENDIX_TABLE):
        tag = f"({f.value}, {g.value})"
        if (row.f, row.g) != (f, g):
            problems.append(f"{tag}: row order differs ({row.f.value}, {row.g.value})")
            continue
        if row.diagnostic:
            problems.append(f"{tag}: {row.diagnostic}")
            continue
        if row.dfao_size != size:
            problems.append(f"{tag}: size {row.size_text}, expected {size if size is not None else '---'}")
        if row.selector_count != sel:
            problems.append(f"{tag}: selector count {row.selector_count}, expected {sel}")
        if row.note != note:
            problems.append(f"{tag}: note {row.note!r}, expected {note!r}")
    return problems


_HEADER = ("F(n)", "G(n)", "DFAO", "Sel.", "Notes")


def _cells(row: ClassificationRow) -> tuple[str, ...]:
    return (row.f.value, row.g.value, row.size_text, str(row.selector_count), row.note or row.diagnostic)


def emit_table(rows: Iterable[ClassificationRow], fmt: str = "text") -> str:
    rows = list(rows)
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_HEADER)
        writer.writerows(_cells(r) for r in rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    table = [_HEADER] + [_cells(r) for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(_HEADER))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in table]
    return "\n".join(lines) + "\n"
