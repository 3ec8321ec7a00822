#!/usr/bin/env python3
"""
ncclab

Counts how many conjugacy classes make up each normal subgroup of a finite
permutation group, and searches a catalog of small groups for those whose
class counts form a given set.
"""
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import click

from perm_group import DEFAULT_CAP, GroupSizeError

__version__ = "1.0.0"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAILED = 2
EXIT_INPUT_ERROR = 3
EXIT_CAP_EXCEEDED = 4


def _parse_ints(text: Optional[str], what: str) -> Tuple[int, ...]:
    if text is None:
        return ()
    parts = [part.strip() for part in text.strip().strip('{}').split(',') if part.strip()]
    try:
        return tuple(int(part) for part in parts)
    except ValueError:
        raise ValueError(f"{what} must be a comma-separated list of integers, got {text!r}")


@dataclass
class CliConfig:
    """Validated command options."""
    command: str
    expr: Optional[str] = None
    catalog: Optional[Path] = None
    orders: Tuple[int, ...] = ()
    x: Tuple[int, ...] = (1, 2, 3)
    output_format: str = "text"
    workers: Optional[int] = None
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if any(v < 1 for v in self.x):
            raise ValueError(f"X values must be positive, got {self.x}")
        if len(set(self.x)) != len(self.x):
            raise ValueError(f"X values must be distinct, got {self.x}")
        if any(o < 1 for o in self.orders):
            raise ValueError(f"Orders must be positive, got {self.orders}")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"Unknown output format {self.output_format!r}")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"Worker count must be positive, got {self.workers}")
        if self.cap < 1:
            raise ValueError(f"Element cap must be positive, got {self.cap}")


def _fail(error: Exception) -> None:
    """Report an error and exit with the matching status."""
    if isinstance(error, GroupSizeError):
        click.echo(f"Error: {error}", err=True)
        sys.exit(EXIT_CAP_EXCEEDED)
    if isinstance(error, (ValueError, FileNotFoundError)):
        click.echo(f"Error: {error}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    click.echo(f"Unexpected error: {error}", err=True)
    sys.exit(EXIT_ERROR)


cap_option = click.option('--cap', default=DEFAULT_CAP, type=int, envvar='NCCLAB_CAP', show_default=True,
                          help='Maximum number of group elements (env: NCCLAB_CAP)')


@click.group()
@click.version_option(__version__, prog_name="ncclab")
@click.help_option("-h", "--help")
def cli():
    """
    Conjugacy-class decomposition of normal subgroups.

    Groups are written as construction expressions: C n, D n (order 2n),
    Q n (order 4n), S n, A n, E p k, X(e1, e2) and SD(N, H; a0->w, ... | ...).

    Examples:

        # Normal subgroups of the quaternion group and its K-set
        python ncclab.py ncc "Q 2"

        # Groups of order 20 and 24 whose K-set is {1,2,3}
        python ncclab.py search --orders 20,24 --x 1,2,3

        # Reproduce the full classification check
        python ncclab.py verify
    """


@cli.command()
@click.argument('expr')
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default='text',
              help='Output as text lines or JSON lines')
@cap_option
def ncc(expr: str, output_format: str, cap: int):
    """List every proper normal subgroup of EXPR with its class count, then K."""
    try:
        from construction_parser import build_group
        from decomposition import decompose

        config = CliConfig("ncc", expr=expr, output_format=output_format, cap=cap)
        decompose(build_group(config.expr, config.cap)).print_report(config.output_format)
    except Exception as e:
        _fail(e)


@cli.command()
@click.argument('expr')
@cap_option
def kset(expr: str, cap: int):
    """Print the K-set of EXPR."""
    try:
        from construction_parser import build_group
        from decomposition import kset as compute_kset

        config = CliConfig("kset", expr=expr, cap=cap)
        click.echo(str(compute_kset(build_group(config.expr, config.cap))))
    except Exception as e:
        _fail(e)


@cli.command()
@click.option('--catalog', type=click.Path(dir_okay=False), help='Catalog file (default: shipped catalog)')
@click.option('--orders', help='Comma-separated group orders to scan (default: all)')
@click.option('--x', 'x_text', default='1,2,3', show_default=True, help='Target K-set')
@click.option('--nonperfect-only', is_flag=True, help='Skip perfect groups')
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default='text',
              help='Output as text lines or JSON lines')
@click.option('--workers', '-w', type=int, help='Worker processes (default: all CPUs; 1 = serial)')
@click.option('--quiet', '-q', is_flag=True, help='Suppress progress bars')
@cap_option
def search(catalog: Optional[str], orders: Optional[str], x_text: str, nonperfect_only: bool,
           output_format: str, workers: Optional[int], quiet: bool, cap: int):
    """Print the catalog groups whose K-set equals X."""
    try:
        from decomposition import KSet
        from group_catalog import CatalogSweeper, load_catalog

        config = CliConfig("search", catalog=Path(catalog) if catalog else None,
                           orders=_parse_ints(orders, "--orders"), x=_parse_ints(x_text, "--x"),
                           output_format=output_format, workers=workers, cap=cap)
        entries = load_catalog(config.catalog)
        results = CatalogSweeper(config.cap, config.workers).analyze(entries, config.orders or None,
                                                                     show_progress=not quiet)
        x = KSet.of(config.x)
        matches = [r for r in results if r.matches(x, nonperfect_only)]
        failed = [r for r in results if r.error]
    except Exception as e:
        _fail(e)

    for match in matches:
        if config.output_format == "json":
            click.echo(json.dumps({"label": match.label, "order": match.order,
                                   "kset": list(match.kset.values), "perfect": match.perfect,
                                   "gap_id": list(match.gap_id) if match.gap_id else None}))
        else:
            gap = f" gap=({match.gap_id[0]},{match.gap_id[1]})" if match.gap_id else ""
            click.echo(f"{match.label} order={match.order} K={match.kset}{gap}")
    if config.output_format == "text" and not quiet:
        click.echo(f"{len(matches)} matching groups")

    for result in failed:
        click.echo(f"Error: {result.label}: {result.error}", err=True)
    if any(result.error_type == GroupSizeError.__name__ for result in failed):
        sys.exit(EXIT_CAP_EXCEEDED)
    if failed:
        sys.exit(EXIT_INPUT_ERROR)


@cli.command()
@click.option('--catalog', type=click.Path(dir_okay=False), help='Catalog file (default: shipped catalog)')
@click.option('--x', 'x_text', default='1,2,3', show_default=True, help='Target K-set for the sweep')
@click.option('--workers', '-w', type=int, help='Worker processes (default: all CPUs; 1 = serial)')
@click.option('--report', '-r', type=click.Path(dir_okay=False), help='Save a JSON report to this file')
@click.option('--quiet', '-q', is_flag=True, help='Print failures and the summary only')
@cap_option
def verify(catalog: Optional[str], x_text: str, workers: Optional[int], report: Optional[str],
           quiet: bool, cap: int):
    """Check the catalog, sweep it for X and run every oracle and property check."""
    try:
        from decomposition import KSet
        from group_catalog import load_catalog
        from verification import print_report, run_verification, save_report

        config = CliConfig("verify", catalog=Path(catalog) if catalog else None,
                           x=_parse_ints(x_text, "--x"), workers=workers, cap=cap)
        entries = load_catalog(config.catalog)
        result = run_verification(entries, KSet.of(config.x), config.workers, config.cap,
                                  show_progress=not quiet)
    except Exception as e:
        _fail(e)

    print_report(result, quiet=quiet)
    if report:
        try:
            saved = save_report(result, Path(report))
            if not quiet:
                click.echo(f"Report saved to: {saved}")
        except OSError as e:
            click.echo(f"Warning: Could not save report: {e}", err=True)
    sys.exit(EXIT_OK if result.passed else EXIT_VERIFY_FAILED)


@cli.command()
@click.argument('first')
@click.argument('second')
@cap_option
def iso(first: str, second: str, cap: int):
    """Decide whether FIRST and SECOND are isomorphic."""
    try:
        from construction_parser import build_group
        from isomorphism import find_isomorphism, greedy_generating_set

        config = CliConfig("iso", expr=first, cap=cap)
        a = build_group(config.expr, config.cap)
        b = build_group(second, config.cap)
        phi = find_isomorphism(a, b)
    except Exception as e:
        _fail(e)

    if phi is None:
        click.echo("not isomorphic")
        return
    click.echo("isomorphic")
    for g in greedy_generating_set(a):
        click.echo(f"  {a.elements[g]} -> {b.elements[int(phi[g])]}")


def main():
    try:
        cli()
    except KeyboardInterrupt:
        click.echo("\nOperation cancelled by user", err=True)
        sys.exit(EXIT_ERROR)


if __name__ == '__main__':
    main()
