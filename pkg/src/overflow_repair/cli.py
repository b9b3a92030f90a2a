"""Command line entry point.

Exit codes: 0 when every query is resolved (safe or repaired), 1 when some
query is not, 2 on usage or input errors.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import click

from .core import MachineType
from .corpus import run_bench
from .errors import ParseError
from .fuzz import path_disagreement, random_relational_sum, random_sum, sum_disagreement
from .harness import DOMAINS, check_problem, repair_problem, verify_problem
from .problem import load_problem
from .report import parse_tsv

EXIT_OK, EXIT_UNRESOLVED, EXIT_INPUT = 0, 1, 2


def _machine(ctx, param, value):
    if value is None:
        return None
    try:
        return MachineType.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


machine_option = click.option(
    "--machine", callback=_machine, default=None, metavar="intN|uintN", help="Override the file's machine type."
)
out_option = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write the structured report here.")


def _load(path: Path):
    try:
        return load_problem(path)
    except ParseError as exc:
        click.echo(f"{path}:{exc}", err=True)
        sys.exit(EXIT_INPUT)


def _write(path: Path | None, text: str) -> None:
    if path is not None:
        path.write_text(text, encoding="utf-8", newline="\n")


@click.group()
def main():
    """Prove, repair or refute integer overflow in linear expressions."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@machine_option
@out_option
def check(file, machine, out):
    """Classify each query as safe or possibly overflowing."""
    records = check_problem(_load(file), machine)
    text = "".join(r.line() + "\n" for r in records)
    click.echo(text, nl=False)
    _write(out, text)
    sys.exit(EXIT_OK if all(r.safe for r in records) else EXIT_UNRESOLVED)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--domain", type=click.Choice(DOMAINS), default="box", show_default=True)
@machine_option
@out_option
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--tsv", is_flag=True, help="Print the tab-separated records instead of text.")
def repair(file, domain, machine, out, jobs, tsv):
    """Repair every query of FILE."""
    report = repair_problem(_load(file), domain, machine, jobs)
    click.echo(report.tsv() if tsv else report.human(), nl=False)
    _write(out, report.tsv())
    sys.exit(EXIT_OK if report.all_resolved else EXIT_UNRESOLVED)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--report",
    "report_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Verify the rewrites of a tab-separated report instead of the file's repair lines.",
)
@machine_option
@click.option("--state-cap", type=int, default=10**6, show_default=True, help="Largest box enumerated concretely.")
def verify(file, report_path, machine, state_cap):
    """Check previously produced repairs against the oracle."""
    problem = _load(file)
    records = None
    if report_path is not None:
        try:
            records = parse_tsv(report_path.read_text(encoding="utf-8"))
        except ValueError as exc:
            click.echo(f"{report_path}: {exc}", err=True)
            sys.exit(EXIT_INPUT)
    results = verify_problem(problem, records, machine, state_cap)
    for r in results:
        click.echo(r.line())
    sys.exit(EXIT_OK if all(r.ok for r in results) else EXIT_UNRESOLVED)


@main.command()
@click.argument("corpus", type=click.Choice(("sums", "relations", "oct")))
@click.option("--strict-census", is_flag=True, help="Fail unless the counts match the published ones.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@out_option
def bench(corpus, strict_census, jobs, out):
    """Regenerate a benchmark corpus and print its outcome counts."""
    result = run_bench(corpus, jobs)
    lines = result.lines()
    mismatches = result.census_mismatches()
    for msg in mismatches:
        lines.append(f"  {'MISMATCH' if strict_census else 'warning'}: {msg}")
    text = "\n".join(lines) + "\n"
    click.echo(text, nl=False)
    _write(out, text)
    sys.exit(EXIT_UNRESOLVED if strict_census and mismatches else EXIT_OK)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--suite", type=click.Choice(("sums", "paths")), default="sums", show_default=True)
def fuzz(seed, count, suite):
    """Compare a repair procedure with brute-force enumeration on random instances."""
    rng = random.Random(seed)
    t0 = time.perf_counter()
    bad = []
    for _ in range(count):
        if suite == "sums":
            msg = sum_disagreement(random_sum(rng))
        else:
            msg = path_disagreement(random_relational_sum(rng))
        if msg is not None:
            bad.append(msg)
    for msg in bad:
        click.echo(f"disagreement: {msg}")
    click.echo(f"{suite}: {count} instances, {len(bad)} disagreements, {time.perf_counter() - t0:.2f} s (seed {seed})")
    sys.exit(EXIT_OK if not bad else EXIT_UNRESOLVED)


if __name__ == "__main__":
    main()
