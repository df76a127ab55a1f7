"""The thirteen end-to-end checks, runnable as a group or selectively.

Each check returns a :class:`CheckResult`; :func:`run_checks` never raises
for a failing check, it records the failure (including unexpected
exceptions) and moves on.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from . import digits
from .automata import (
    FIBONACCI_MATRIX,
    IDENTITY,
    M1_AFFINE,
    M2_AFFINE,
    Dfao,
    affine_state_sum,
    builtin_dfao,
    denestability_probe,
    lifted_states,
    mat_pow,
)
from .classify import check_rows, classify_all
from .errors import MetaAutoError
from .morphism import builtin_morphism, coded_prefix, incidence, primitivity_power
from .oeis import load_bfile, compare
from .seqcore import SelectorKind, builtin, check_balanced, rigidity_check, selector_xor_mismatch
from .wordcomplexity import (
    M2_COMPLETE,
    M2_SHARP,
    Q_COMPLETE,
    Q_SHARP,
    TM_DYADIC,
    ComplexityProfile,
    complexity_profile,
    junction_analysis,
    law_mismatches,
    tm_complement_check,
)

P_Q_15 = (2, 4, 6, 10, 12, 16, 20, 23, 26, 30, 34, 38, 42, 45, 48)
P_M2_15 = (2, 4, 6, 10, 12, 14, 16, 18, 20, 24, 28, 32, 36, 40, 44)


@dataclass
class CheckResult:
    number: int
    key: str
    claim: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f"[{mark}] {self.number:>2} {self.key}: {self.claim} ({self.seconds:.2f} s)"
        return text + (f" -- {self.detail}" if self.detail else "")


@dataclass
class Context:
    """Inputs shared across checks; overridable for fault injection."""

    machines: dict[str, Dfao]
    oeis_dir: Optional[Path] = None
    profiles: Optional[dict[str, ComplexityProfile]] = None

    def machine(self, name: str) -> Dfao:
        return self.machines.get(name) or builtin_dfao(name)

    def profile(self, name: str) -> ComplexityProfile:
        if self.profiles is None:
            self.profiles = {}
        if name not in self.profiles:
            self.profiles[name] = complexity_profile(name, 4096, 2**17)
        return self.profiles[name]


def _first_diff(x: np.ndarray, y: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(np.asarray(x) != np.asarray(y))
    return int(bad[0]) if bad.size else None


def check_agreement(ctx: Context) -> tuple[bool, str]:
    count = 2**20
    problems = []
    for name in ("Q", "M1", "M2"):
        rec = builtin(name).prefix(count)
        auto = ctx.machine(name).eval_prefix(count)
        morph = coded_prefix(builtin_morphism(name), count)
        for label, other in (("DFAO", auto), ("morphism", morph)):
            i = _first_diff(rec, other)
            if i is not None:
                problems.append(f"{name} recurrence vs {label} differ at n={i}")
    return not problems, "; ".join(problems)


def check_closed_forms(ctx: Context) -> tuple[bool, str]:
    n = np.arange(2**20, dtype=np.int64)
    problems = []
    if (i := _first_diff(builtin("Q").prefix(n.size), digits.q_closed_form_array(n))) is not None:
        problems.append(f"Q vs t xor d at n={i}")
    m2 = builtin("M2").prefix(n.size)
    if (i := _first_diff(m2, digits.m2_closed_form_array(n))) is not None:
        problems.append(f"M2 vs t(q(n)) at n={i}")
    if (i := _first_diff(m2, digits.m2_digit_formula_array(n))) is not None:
        problems.append(f"M2 vs digit formula at n={i}")
    return not problems, "; ".join(problems)


def check_affine(ctx: Context) -> tuple[bool, str]:
    count = 2**16
    problems = []
    cases = (("M1", M1_AFFINE, SelectorKind.MinusSel), ("M2", M2_AFFINE, SelectorKind.PlusSel))
    for name, rule, sel in cases:
        a = builtin(name).prefix(2 * 4 * count + 8)
        x, y = lifted_states(a, sel, 4 * count)
        for r in range(4):
            idx = 4 * np.arange(count) + r
            (a00, a01), (a10, a11) = rule.matrices[r]
            v0, v1 = rule.translations[r]
            px = (a00 * x[:count] ^ a01 * y[:count]) & 1 ^ v0
            py = (a10 * x[:count] ^ a11 * y[:count]) & 1 ^ v1
            i = _first_diff(np.stack([x[idx], y[idx]]), np.stack([px, py]))
            if i is not None:
                problems.append(f"{name} digit {r} rule fails")
    if mat_pow(FIBONACCI_MATRIX, 3) != IDENTITY:
        problems.append("A^3 != I")
    a = builtin("M2").prefix(2 * count + 2)
    x, y = lifted_states(a, SelectorKind.PlusSel, count)
    sums = [affine_state_sum(M2_AFFINE, n) for n in range(count)]
    if (i := _first_diff(np.array(sums), np.stack([x, y], axis=1))) is not None:
        problems.append(f"state sum differs at n={i}")
    if (i := _first_diff(a[0 : 2 * count : 2], x ^ y)) is not None:
        problems.append(f"M2(2n) != x xor y at n={i}")
    return not problems, "; ".join(problems)


def check_balance(ctx: Context) -> tuple[bool, str]:
    pairs = 2**18
    problems = []
    for name in ("t", "Q", "M1", "M2"):
        seq = builtin(name)
        if not check_balanced(seq, pairs):
            problems.append(f"{name} not balanced")
        a = seq.prefix(2 * pairs + 2)
        for kind in (SelectorKind.PlusSel, SelectorKind.MinusSel):
            if (i := selector_xor_mismatch(a, kind, pairs)) is not None:
                problems.append(f"{name} {kind.value} xor form fails at n={i}")
    return not problems, "; ".join(problems)


def check_rigidity(ctx: Context) -> tuple[bool, str]:
    reports = [rigidity_check(v, 10_000) for v in ("plus", "minus")]
    bad = [f"{r.variant}: {r.first_failure}" for r in reports if not r.passed]
    return not bad, "; ".join(bad)


def check_initial_values(ctx: Context) -> tuple[bool, str]:
    problems = []
    for name, want in (("Q", P_Q_15), ("M2", P_M2_15)):
        got = tuple(complexity_profile(name, 15, 30000).values())
        if got != want:
            problems.append(f"p_{name}(1..15) = {got}")
    return not problems, "; ".join(problems)


def check_dyadic(ctx: Context) -> tuple[bool, str]:
    pq, pm, pt = ctx.profile("Q"), ctx.profile("M2"), ctx.profile("t")
    problems = []
    for law, prof, ks in ((Q_SHARP, pq, range(4, 10)), (M2_SHARP, pm, range(3, 10)), (TM_DYADIC, pt, range(2, 10))):
        for k in ks:
            bad = law_mismatches(law, prof, 2**k, 2**k)
            problems += [f"{law.name} at n={n}: {got} vs {want}" for n, got, want in bad]
    if pq[16] != 50 or pm[8] != 18:
        problems.append("anchor values p_Q(16)=50 / p_M2(8)=18 fail")
    problems += [f"Q recurrence at k={k}" for k in range(4, 11) if pq[2 ** (k + 2)] != 4 * pq[2**k] + 6]
    problems += [f"M2 recurrence at k={k}" for k in range(3, 10) if pm[2 ** (k + 3)] != 8 * pm[2**k] + 14]
    return not problems, "; ".join(problems)


def check_piecewise(ctx: Context) -> tuple[bool, str]:
    pq, pm = ctx.profile("Q"), ctx.profile("M2")
    problems = []
    bad = law_mismatches(Q_COMPLETE, pq, 16, 4096)
    if bad:
        problems.append(f"Q-complete: {len(bad)} mismatches, first {bad[0]}")
    bad = law_mismatches(M2_COMPLETE, pm, 8, 4096)
    if bad:
        problems.append(f"M2-complete: {len(bad)} mismatches, first {bad[0]}")
    rs_q = set(pq.rs[2:3001].tolist())
    rs_m = set(pm.rs[1:4096].tolist())
    if rs_q != {2, 3, 4}:
        problems.append(f"RS_Q support {sorted(rs_q)}")
    if rs_m != {2, 4}:
        problems.append(f"RS_M2 support {sorted(rs_m)}")
    for prof in (pq, pm):
        if prof.rs_diff_mismatches():
            problems.append(f"{prof.name}: p(n+1)-p(n) differs from right-special count")
    return not problems, "; ".join(problems)


def check_junction(ctx: Context) -> tuple[bool, str]:
    problems = []
    for k in range(4, 9):
        rep = junction_analysis(2**k)
        if rep.count != 2 ** (k - 2):
            problems.append(f"|J_{2**k}| = {rep.count}")
    if not tm_complement_check(64):
        problems.append("t factors not closed under complement")
    return not problems, "; ".join(problems)


def check_classification(ctx: Context) -> tuple[bool, str]:
    problems = check_rows(classify_all())
    return not problems, "; ".join(problems)


def check_denestability(ctx: Context) -> tuple[bool, str]:
    rep = denestability_probe("M1", 8, 8, 1000)
    if rep.all_refuted:
        return True, ""
    return False, f"{len(rep.unrefuted)} of {len(rep.witnesses)} pairs have no witness: {rep.unrefuted}"


def check_primitivity(ctx: Context) -> tuple[bool, str]:
    p1 = primitivity_power(incidence(builtin_morphism("M1")), 4)
    p2 = primitivity_power(incidence(builtin_morphism("M2")), 4)
    ok = p1 == 2 and p2 == 1
    return ok, "" if ok else f"M1 positive at power {p1}, M2 at power {p2}"


def check_oeis(ctx: Context) -> tuple[bool, str]:
    problems = []
    for a_number in ("A392736", "A391614", "A039982", "A298952"):
        try:
            rep = compare(load_bfile(a_number, ctx.oeis_dir, allow_network=False), 1000)
        except MetaAutoError as exc:
            problems.append(f"{a_number}: {exc}")
            continue
        if not rep.ok or rep.compared < 1000:
            problems.append(" / ".join(rep.lines()[:3]))
    return not problems, "; ".join(problems)


@dataclass(frozen=True)
class Check:
    number: int
    key: str
    group: str
    claim: str
    run: Callable[[Context], tuple[bool, str]]


CHECKS: tuple[Check, ...] = (
    Check(1, "agreement", "automata", "recurrence = DFAO = morphism for Q, M1, M2 on n < 2^20", check_agreement),
    Check(2, "closed-forms", "sequences", "Q = t xor d and M2 = t(q(n)) = digit formula on n < 2^20", check_closed_forms),
    Check(3, "affine", "automata", "lifted-state digit rules, state sum with A^3 = I, n < 2^16", check_affine),
    Check(4, "balance", "sequences", "balance and selector xor forms for t, Q, M1, M2 on n < 2^18", check_balance),
    Check(5, "rigidity", "sequences", "balanced base-2 selector schemes are eventually 2-periodic", check_rigidity),
    Check(6, "initial-values", "complexity", "p_Q(1..15) and p_M2(1..15)", check_initial_values),
    Check(7, "dyadic", "complexity", "p at powers of two for Q, M2, t and their recurrences", check_dyadic),
    Check(8, "piecewise", "complexity", "full piecewise laws for Q (16..4096) and M2 (8..4096), RS supports", check_piecewise),
    Check(9, "junction", "complexity", "|J_{2^k}| = 2^{k-2} for 4 <= k <= 8; t factors closed under complement", check_junction),
    Check(10, "classification", "classify", "all 25 template rows match the table", check_classification),
    Check(11, "denestability", "automata", "no (c, d) with b(n) = M1(cn + d), c <= 8, |d| <= 8", check_denestability),
    Check(12, "primitivity", "morphism", "M1 incidence squared > 0, M2 incidence > 0", check_primitivity),
    Check(13, "oeis", "oeis", "offline b-file cross-check for M1, M2, T, Q", check_oeis),
)

GROUPS = tuple(sorted({c.group for c in CHECKS}))


def select(only: Optional[Iterable[str]] = None) -> list[Check]:
    """Checks whose key, group or number is listed in ``only`` (all when empty)."""
    if not only:
        return list(CHECKS)
    wanted = {str(w) for w in only}
    chosen = [c for c in CHECKS if {c.key, c.group, str(c.number)} & wanted]
    unknown = wanted - {x for c in CHECKS for x in (c.key, c.group, str(c.number))}
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(sorted(unknown))}")
    return chosen


def run_checks(
    only: Optional[Iterable[str]] = None,
    machines: Optional[dict[str, Dfao]] = None,
    oeis_dir: Optional[Path] = None,
) -> list[CheckResult]:
    ctx = Context(dict(machines or {}), oeis_dir)
    results = []
    for check in select(only):
        start = time.perf_counter()
        try:
            passed, detail = check.run(ctx)
        except Exception as exc:  # a crashing check is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(check.number, check.key, check.claim, passed, detail, time.perf_counter() - start))
    return results
