"""OEIS b-file cache and comparison against the local sequences.

Cache lookup order for the directory: explicit argument, then the
``METAAUTO_OEIS_CACHE`` environment variable, then
``~/.cache/metaauto/oeis``.  A cached b-file is stored byte-for-byte as
``bNNNNNN.txt`` next to a ``bNNNNNN.json`` sidecar holding the source URL,
fetch time and SHA-256.  A cache hit never touches the network.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .errors import FetchFailed, OffsetMismatch, UnknownSequence
from .seqcore import HofstadterQ, builtin

CACHE_ENV = "METAAUTO_OEIS_CACHE"
BFILE_URL = "https://oeis.org/{id}/b{digits}.txt"
_ID = re.compile(r"A(\d{6})")


@dataclass
class OeisRef:
    id: str
    offset: int
    terms: list[tuple[int, int]]
    source: str

    def values(self) -> list[int]:
        return [v for _, v in self.terms]

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)


def _check_id(a_number: str) -> str:
    m = _ID.fullmatch(a_number.strip().upper())
    if not m:
        raise UnknownSequence(f"not an OEIS A-number: {a_number!r}")
    return f"A{m.group(1)}"


def parse_bfile(text: str, a_number: str, source: str = "cache") -> OeisRef:
    """Read ``index value`` lines; comments (``#``) and blank lines are skipped.

    Indices must increase by exactly one from the first line on.
    """
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) < 2:
            raise OffsetMismatch(f"{a_number} line {lineno}: expected 'index value'")
        try:
            i, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise OffsetMismatch(f"{a_number} line {lineno}: non-integer entry {ln!r}") from None
        if terms and i != terms[-1][0] + 1:
            raise OffsetMismatch(f"{a_number} line {lineno}: index {i} follows {terms[-1][0]}")
        terms.append((i, v))
    if not terms:
        raise OffsetMismatch(f"{a_number}: b-file has no terms")
    return OeisRef(a_number, terms[0][0], terms, source)


def cache_dir(override: Optional[os.PathLike] = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "metaauto" / "oeis"


def _paths(a_number: str, directory: Path) -> tuple[Path, Path]:
    stem = "b" + a_number[1:]
    return directory / f"{stem}.txt", directory / f"{stem}.json"


def fetch_bfile(a_number: str, timeout: float = 20.0) -> bytes:
    url = BFILE_URL.format(id=a_number, digits=a_number[1:])
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()
    except (urllib.error.URLError, OSError) as exc:
        raise FetchFailed(f"could not fetch {url}: {exc}") from exc


def load_bfile(
    a_number: str,
    directory: Optional[os.PathLike] = None,
    allow_network: bool = True,
    fetcher: Callable[[str], bytes] = fetch_bfile,
) -> OeisRef:
    a_number = _check_id(a_number)
    root = cache_dir(directory)
    data_path, meta_path = _paths(a_number, root)
    if data_path.exists():
        return parse_bfile(data_path.read_bytes().decode("utf-8"), a_number, "cache")
    if not allow_network:
        raise FetchFailed(f"{a_number} is not cached in {root} and network access is disabled")
    raw = fetcher(a_number)
    ref = parse_bfile(raw.decode("utf-8"), a_number, "network")
    root.mkdir(parents=True, exist_ok=True)
    data_path.write_bytes(raw)
    meta = {
        "id": a_number,
        "url": BFILE_URL.format(id=a_number, digits=a_number[1:]),
        "fetched": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "sha256": hashlib.sha256(raw).hexdigest(),
    }
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return ref


# --- local counterparts ---------------------------------------------------------


@dataclass(frozen=True)
class Counterpart:
    """Local sequence compared against an A-number.

    ``start`` is the first index compared; ``expected`` lists indices where a
    known convention difference makes a mismatch the correct outcome.
    """

    name: str
    terms: Callable[[int, int], dict[int, int]]
    start: int = 0
    expected: tuple[int, ...] = ()
    remark: str = ""


def _bits(name: str) -> Callable[[int, int], dict[int, int]]:
    def terms(lo: int, hi: int) -> dict[int, int]:
        a = builtin(name).prefix(hi)
        return {n: int(a[n]) for n in range(lo, hi)}

    return terms


def _hofstadter(lo: int, hi: int) -> dict[int, int]:
    q = HofstadterQ()
    lo = max(lo, 1)
    return {n: q(n) for n in range(lo, hi)}


COUNTERPARTS: dict[str, Counterpart] = {
    "A392736": Counterpart("M1", _bits("M1")),
    "A391614": Counterpart("M2", _bits("M2")),
    "A039982": Counterpart("T", _bits("T"), start=1, remark="compared from n = 1"),
    "A298952": Counterpart(
        "Q", _bits("Q"), expected=(0,), remark="local Q(0) = 0, the OEIS entry has a(0) = 1"
    ),
    "A005185": Counterpart("hofstadter-q", _hofstadter, start=1),
}


@dataclass
class DiffReport:
    id: str
    local: str
    compared: int
    first_index: Optional[int]
    mismatches: list[tuple[int, int, int]] = field(default_factory=list)
    expected: tuple[int, ...] = ()
    remark: str = ""

    @property
    def unexpected(self) -> list[tuple[int, int, int]]:
        return [m for m in self.mismatches if m[0] not in self.expected]

    @property
    def ok(self) -> bool:
        """No unexpected mismatch, and every documented discrepancy that was in range did occur."""
        seen = {m[0] for m in self.mismatches}
        first = self.first_index if self.first_index is not None else 0
        in_range = {i for i in self.expected if first <= i < first + self.compared}
        return not self.unexpected and in_range <= seen

    def lines(self) -> list[str]:
        out = [f"{self.id} vs {self.local}: {self.compared} terms compared, {len(self.mismatches)} mismatches"]
        if self.remark:
            out.append(f"note: {self.remark}")
        for n, theirs, ours in self.mismatches[:20]:
            tag = "expected" if n in self.expected else "MISMATCH"
            out.append(f"  n={n}: oeis={theirs} local={ours} ({tag})")
        return out


def compare(ref: OeisRef, count: int = 1000) -> DiffReport:
    """Compare the first ``count`` b-file terms (from the comparison start) with the local sequence."""
    try:
        cp = COUNTERPARTS[ref.id]
    except KeyError:
        raise UnknownSequence(f"no local counterpart for {ref.id}") from None
    theirs = {i: v for i, v in ref.terms if i >= cp.start or i in cp.expected}
    indices = sorted(theirs)[:count]
    if not indices:
        return DiffReport(ref.id, cp.name, 0, None, [], cp.expected, cp.remark)
    ours = cp.terms(indices[0], indices[-1] + 1)
    mism = [(i, theirs[i], ours[i]) for i in indices if i in ours and theirs[i] != ours[i]]
    return DiffReport(ref.id, cp.name, len(indices), indices[0], mism, cp.expected, cp.remark)


def cross_check(
    a_number: str, count: int = 1000, directory: Optional[os.PathLike] = None, allow_network: bool = True
) -> DiffReport:
    return compare(load_bfile(a_number, directory, allow_network), count)


def known_ids() -> tuple[str, ...]:
    return tuple(COUNTERPARTS)

