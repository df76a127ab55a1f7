"""``metaauto`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 network or
file-system error.
"""
from __future__ import annotations

import csv
import functools
import io
import json
import sys
from pathlib import Path

import click

from . import __version__, serialize
from .automata import Dfao, builtin_dfao, canonical, infer_dfao, minimize, verify_dfao
from .classify import check_rows, classify_all, emit_table
from .errors import (
    FetchFailed,
    MetaAutoError,
    OffsetMismatch,
    OutOfDomain,
    ParseError,
    Unstable,
    UnknownSequence,
    VerificationFailed,
)
from .oeis import cross_check
from .seqcore import SEED_POLICIES, resolve
from .verify import run_checks
from .wordcomplexity import LAWS, complexity_profile, evaluate_law

EXIT_VERIFY, EXIT_USAGE, EXIT_ENV = 1, 2, 3

_LAWS_FOR = {"Q": ("Q-complete",), "M2": ("M2-complete",), "t": ("TM-dyadic",)}


def _guarded(fn):
    """Map package errors onto exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (UnknownSequence, ParseError, OutOfDomain) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except (FetchFailed, OffsetMismatch, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ENV)
        except (VerificationFailed, Unstable, MetaAutoError) as exc:
            click.echo(f"verification failed: {exc}", err=True)
            sys.exit(EXIT_VERIFY)

    return wrapper


def _emit_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if not rows:
        return ""
    keys = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, keys, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    lines = [" ".join(keys)]
    lines += [" ".join("-" if r[k] is None else str(r[k]) for k in keys) for r in rows]
    return "\n".join(lines) + "\n"


def _machine(ref: str) -> Dfao:
    """Builtin machine name or path to a JSON / Walnut-style file."""
    path = Path(ref)
    if path.is_file():
        return serialize.loads(path.read_text())
    return builtin_dfao(ref)


@click.group()
@click.version_option(version=__version__)
def main():
    """Meta-automatic sequences: evaluation, automata, complexity, classification."""


@main.command("seq")
@click.argument("name")
@click.option("--count", type=click.IntRange(min=1), default=32, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")
@click.option("--seeds", type=click.Choice(SEED_POLICIES), default="fixed", show_default=True)
@_guarded
def seq_cmd(name, count, fmt, seeds):
    """Print terms 0..COUNT-1 of a builtin or a template:F,G sequence."""
    terms = [int(x) for x in resolve(name, seeds).prefix(count)]
    if fmt == "text":
        click.echo("".join(f"{x}\n" for x in terms), nl=False)
    elif fmt == "csv":
        click.echo("n,value\n" + "".join(f"{n},{x}\n" for n, x in enumerate(terms)), nl=False)
    else:
        click.echo(json.dumps(terms))


@main.group("dfao")
def dfao_group():
    """Build, export and check base-k DFAOs."""


@dfao_group.command("eval")
@click.argument("machine")
@click.argument("n", type=click.IntRange(min=0))
@_guarded
def dfao_eval_cmd(machine, n):
    click.echo(_machine(machine).eval(n))


@dfao_group.command("export")
@click.argument("machine")
@click.option("--format", "fmt", type=click.Choice(["json", "walnut"]), default="json")
@_guarded
def dfao_export_cmd(machine, fmt):
    click.echo(serialize.dumps(_machine(machine), fmt), nl=False)


@dfao_group.command("minimize")
@click.argument("machine")
@click.option("--format", "fmt", type=click.Choice(["json", "walnut"]), default="json")
@_guarded
def dfao_minimize_cmd(machine, fmt):
    click.echo(serialize.dumps(minimize(_machine(machine)), fmt), nl=False)


@dfao_group.command("infer")
@click.argument("name")
@click.option("--prefix-len", type=click.IntRange(min=1), default=4**8, show_default=True)
@click.option("--min-window", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--max-depth", type=click.IntRange(min=1), default=6, show_default=True)
@click.option("--seeds", type=click.Choice(SEED_POLICIES), default="fixed", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "walnut"]), default="json")
@_guarded
def dfao_infer_cmd(name, prefix_len, min_window, max_depth, seeds, fmt):
    """Guess the minimal machine of a sequence from its prefix."""
    m = infer_dfao(resolve(name, seeds), prefix_len, min_window, max_depth)
    click.echo(serialize.dumps(canonical(m), fmt), nl=False)


@dfao_group.command("verify")
@click.argument("machine")
@click.option("--seq", "seq_name", default=None, help="sequence to compare with (default: MACHINE)")
@click.option("--horizon", type=click.IntRange(min=1), default=2**20, show_default=True)
@_guarded
def dfao_verify_cmd(machine, seq_name, horizon):
    m = _machine(machine)
    ok = verify_dfao(resolve(seq_name or machine), m, horizon)
    click.echo(f"{'pass' if ok else 'fail'}: {machine} on n < {horizon}")
    if not ok:
        sys.exit(EXIT_VERIFY)


@main.command("complexity")
@click.argument("name")
@click.option("--max-len", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--prefix-len", type=click.IntRange(min=1), default=None, help="default: stabilization floor")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")
@_guarded
def complexity_cmd(name, max_len, prefix_len, fmt):
    """Factor complexity p(n) and right-special counts RS(n)."""
    prof = complexity_profile(resolve(name), max_len, prefix_len)
    laws = [LAWS[k] for k in _LAWS_FOR.get(name, ())]
    rows = []
    for row in prof.rows():
        row.setdefault("rs", None)
        for law in laws:
            try:
                row[law.name] = evaluate_law(law, row["n"])
            except OutOfDomain:
                row[law.name] = None
        row["stable"] = prof.stable
        rows.append(row)
    click.echo(_emit_rows(rows, fmt), nl=False)


@main.command("classify")
@click.option("--check", is_flag=True, help="exit 1 unless every row matches the expected table")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")
@_guarded
def classify_cmd(check, fmt):
    """Minimal DFAO sizes of the 25 base-4 templates."""
    rows = classify_all()
    click.echo(emit_table(rows, fmt), nl=False)
    if check:
        problems = check_rows(rows)
        for p in problems:
            click.echo(f"mismatch: {p}", err=True)
        if problems:
            sys.exit(EXIT_VERIFY)
        click.echo(f"{len(rows)} rows match", err=True)


@main.command("oeis")
@click.argument("a_number")
@click.option("--count", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="default: $METAAUTO_OEIS_CACHE")
@click.option("--offline", is_flag=True, help="fail instead of fetching on a cache miss")
@_guarded
def oeis_cmd(a_number, count, cache_dir, offline):
    """Compare a cached or fetched b-file with the local sequence."""
    rep = cross_check(a_number, count, cache_dir, allow_network=not offline)
    for line in rep.lines():
        click.echo(line)
    if not rep.ok:
        sys.exit(EXIT_VERIFY)


@main.command("verify")
@click.option("--only", multiple=True, help="check key, group or number; repeatable")
@click.option("--oeis-dir", type=click.Path(file_okay=False), default=None)
@click.option("--corrupt", "corrupt", multiple=True, hidden=True, help="test mode: flip outputs of a builtin machine")
@_guarded
def verify_cmd(only, oeis_dir, corrupt):
    """Run the end-to-end checks and print one line per check."""
    machines = {}
    for name in corrupt:
        m = builtin_dfao(name)
        machines[name] = Dfao(m.base, m.delta, m.initial, tuple(1 - o for o in m.output), m.labels)
    try:
        results = run_checks(only or None, machines, Path(oeis_dir) if oeis_dir else None)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    for r in results:
        click.echo(r.line())
    failed = [r for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
