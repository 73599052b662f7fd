#!/usr/bin/env python3
"""
Command-line interface for chromatic-threshold-lab.

Classifies graph6 streams by chromatic threshold, prints exact chromatic
numbers, verifies constructed graphs and builds the extremal constructions.
Exit codes: 0 pass, 1 a requested check failed, 2 operational error.
"""

import json
import logging
from fractions import Fraction
from typing import List

import click
from pydantic import ValidationError

from ctl.api.schemas import CheckOut, ThresholdReportOut, VerifyOut
from ctl.cli.common import EXIT_ERROR, EXIT_FAILED, EXIT_OK, RunConfig, fail, get_config, resolve_graph
from ctl.cli.construct import construct
from ctl.core.budget import TimeBudget
from ctl.core.config import settings
from ctl.core.errors import CtlError
from ctl.core.graph import Graph, min_degree_fraction
from ctl.core.graph6 import emit_graph6, read_graphs
from ctl.jobs.batch import BatchOptions, classify_batch
from ctl.models import WitnessCheck
from ctl.models.recipe import parse_fraction
from ctl.services.chromatic import chromatic_number, is_k_colorable
from ctl.services.verify import check_threshold_witness, contains_subgraph

logger = logging.getLogger(__name__)


@click.group()
@click.option('--time-budget', type=int, default=None, help='Seconds per exact search (env CTL_TIME_BUDGET)')
@click.option('--seed', type=int, default=None, help='Default RNG seed for randomized generators (env CTL_SEED)')
@click.option(
    '--format',
    'output_format',
    type=click.Choice(['json', 'graph6', 'human']),
    default=None,
    help='Output format (env CTL_OUTPUT_FORMAT)',
)
@click.option('--parallelism', type=int, default=None, help='Worker processes for batch runs (env CTL_PARALLELISM)')
@click.option('--verbose', '-v', is_flag=True, help='Log progress to stderr')
@click.pass_context
def cli(ctx, time_budget, seed, output_format, parallelism, verbose):
    """Chromatic threshold classification, constructions and verification."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    overrides = {
        key: value
        for key, value in {
            "time_budget_secs": time_budget,
            "seed": seed,
            "output_format": output_format,
            "parallelism": parallelism,
        }.items()
        if value is not None
    }
    try:
        ctx.obj = RunConfig(**overrides)
    except ValidationError as exc:
        fail(f"invalid run configuration: {exc.errors()[0]['msg']}")


# =============================================================================
# CLASSIFICATION
# =============================================================================


def _human_line(record: dict) -> str:
    if "error" in record:
        return f"{record['index']}: {record['graph6']} {record['error']['kind']} ({record['error']['message']})"
    threshold = record["threshold"]
    return f"{record['index']}: {record['graph6']} chi={record['chi']} {record['class']} {threshold['num']}/{threshold['den']}"


@cli.command()
@click.argument('source', type=click.File('rb'), default='-')
@click.option('--certificate', is_flag=True, help='Include full witnesses in each report')
@click.option('--check', is_flag=True, help='Re-verify every report; failing reports are replaced by errors')
@click.pass_context
def classify(ctx, source, certificate: bool, check: bool):
    """Classify every graph6/sparse6 line of SOURCE (default stdin)."""
    config = get_config(ctx)
    options = BatchOptions(time_budget_secs=config.time_budget_secs, certificate=certificate, check=check)
    code = EXIT_OK
    try:
        for record in classify_batch(read_graphs(source), options, config.parallelism):
            if config.output_format == "human":
                click.echo(_human_line(record))
            elif config.output_format == "graph6" and "error" not in record:
                click.echo(f"{record['graph6']}\t{record['threshold']['num']}/{record['threshold']['den']}")
            else:
                click.echo(json.dumps(record, sort_keys=True))
            if "error" in record:
                kind = record["error"]["kind"]
                code = max(code, EXIT_FAILED if kind == "check_failed" else EXIT_ERROR)
    except CtlError as exc:
        fail(str(exc))
    ctx.exit(code)


@cli.command()
@click.argument('source', type=click.File('rb'), default='-')
@click.pass_context
def chi(ctx, source):
    """Print the exact chromatic number of every graph in SOURCE."""
    config = get_config(ctx)
    try:
        for index, g in read_graphs(source):
            value = chromatic_number(g, TimeBudget(config.time_budget_secs))
            if config.output_format == "json":
                record = {"schema": settings.SCHEMA_VERSION, "index": index, "n": g.n, "chi": value}
                click.echo(json.dumps(record, sort_keys=True))
            else:
                click.echo(f"{index}: chi={value}")
    except CtlError as exc:
        fail(str(exc))


# =============================================================================
# VERIFICATION
# =============================================================================


def _check_h_free(target: Graph, pattern: Graph, budget: TimeBudget) -> CheckOut:
    embedding = contains_subgraph(target, pattern, budget)
    detail = [] if embedding is None else [f"embedding {list(embedding.mapping)}"]
    return CheckOut(name="h_free", passed=embedding is None, detail=detail)


def _check_min_degree(target: Graph, fraction: Fraction) -> CheckOut:
    achieved = min_degree_fraction(target) if target.n else Fraction(0)
    return CheckOut(
        name="min_degree",
        passed=target.n > 0 and achieved >= fraction,
        detail=[f"achieved {achieved.numerator}/{achieved.denominator}"],
    )


def _check_chromatic_ge(target: Graph, c: int, budget: TimeBudget) -> CheckOut:
    coloring = is_k_colorable(target, c - 1, budget) if c >= 1 else None
    passed = c <= 0 or coloring is None
    detail = [] if passed else [f"proper colouring with {coloring.k} colours exists"]
    return CheckOut(name="chromatic_ge", passed=passed, detail=detail)


def _load_report(path: str) -> ThresholdReportOut:
    with open(path, encoding="utf-8") as handle:
        first = next((line for line in handle if line.strip()), None)
    if first is None:
        raise click.BadParameter(f"{path} contains no report")
    return ThresholdReportOut.model_validate(json.loads(first))


@cli.command()
@click.argument('target')
@click.option('--h-free', 'h_free', help='Pattern graph (file, name or graph6) that TARGET must not contain')
@click.option('--min-degree', 'min_degree', help='Exact fraction num/den that delta(TARGET)/v(TARGET) must reach')
@click.option('--chromatic-ge', 'chromatic_ge', type=int, help='Lower bound TARGET\'s chromatic number must meet')
@click.option('--witness', 'witness', type=click.Path(exists=True), help='Classification report to re-check')
@click.option('--deep', is_flag=True, help='Also brute-force the negative claims of small reports')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON diagnostics')
@click.pass_context
def verify(ctx, target, h_free, min_degree, chromatic_ge, witness, deep: bool, as_json: bool):
    """Check properties of TARGET (file, name or graph6); exit 0 iff all pass."""
    config = get_config(ctx)
    if not any(v is not None for v in (h_free, min_degree, chromatic_ge, witness)):
        fail("nothing to verify: pass --h-free, --min-degree, --chromatic-ge or --witness")
    checks: List[CheckOut] = []
    try:
        g = resolve_graph(target)
        budget = TimeBudget(config.time_budget_secs)
        if h_free is not None:
            checks.append(_check_h_free(g, resolve_graph(h_free), budget))
        if min_degree is not None:
            checks.append(_check_min_degree(g, parse_fraction(min_degree)))
        if chromatic_ge is not None:
            checks.append(_check_chromatic_ge(g, chromatic_ge, budget))
        if witness is not None:
            report = _load_report(witness).to_report()
            result: WitnessCheck = check_threshold_witness(g, report, deep=deep, budget=budget)
            checks.append(CheckOut.from_witness_check("witness", result))
    except (CtlError, ValueError, ValidationError, click.BadParameter) as exc:
        fail(str(exc))

    passed = all(check.passed for check in checks)
    if as_json:
        out = VerifyOut(graph6=emit_graph6(g).decode("ascii"), n=g.n, passed=passed, checks=checks)
        click.echo(json.dumps(out.dump(), sort_keys=True))
    else:
        for check in checks:
            mark = "✅" if check.passed else "❌"
            suffix = f" ({'; '.join(check.detail)})" if check.detail else ""
            click.echo(f"{mark} {check.name}{suffix}")
    ctx.exit(EXIT_OK if passed else EXIT_FAILED)


cli.add_command(construct)


if __name__ == '__main__':
    cli()
