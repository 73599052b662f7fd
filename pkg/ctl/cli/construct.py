"""CLI commands for the graph generators.

Every subcommand assembles a :class:`ConstructionRecipe`, builds it and writes
graph6 (stdout or ``--out``), plus an optional JSON sidecar with the recipe and
property report and an optional CSV of sphere coordinates.
"""

import csv
import json
import logging
from typing import Any, Dict, Optional

import click
from pydantic import ValidationError

from ctl.api.schemas import ConstructionOut
from ctl.cli.common import fail, get_config, resolve_graph
from ctl.core.budget import TimeBudget
from ctl.core.errors import CtlError
from ctl.core.graph import Graph
from ctl.core.graph6 import emit_graph6
from ctl.models.recipe import RANDOMIZED, ConstructionRecipe, Family
from ctl.services.constructions import build

logger = logging.getLogger(__name__)

_K2 = "A_"  # graph6 of a single edge


def _output_options(fn):
    fn = click.option('--points-csv', type=click.Path(dir_okay=False), help='Write sphere coordinates as CSV')(fn)
    fn = click.option('--sidecar', type=click.Path(dir_okay=False), help='Write the recipe and property report as JSON')(fn)
    fn = click.option('--out', '-o', type=click.Path(dir_okay=False), help='Write graph6 here instead of stdout')(fn)
    return fn


def _seed_option(fn):
    return click.option('--seed', type=int, default=None, help='RNG seed (falls back to --seed on ctl / CTL_SEED)')(fn)


def _g6(spec: str) -> str:
    return emit_graph6(resolve_graph(spec)).decode("ascii")


def _run(
    ctx: click.Context,
    family: Family,
    params: Dict[str, Any],
    seed: Optional[int],
    out: Optional[str],
    sidecar: Optional[str],
    points_csv: Optional[str],
) -> None:
    config = get_config(ctx)
    if family in RANDOMIZED and seed is None:
        seed = config.seed
    try:
        recipe = ConstructionRecipe(family=family, params=params, seed=seed if family in RANDOMIZED else None)
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors())
        fail(f"invalid {family.value} recipe: {problems}")
    _emit(recipe, TimeBudget(config.time_budget_secs), out, sidecar, points_csv)


def _emit(
    recipe: ConstructionRecipe, budget: TimeBudget, out: Optional[str], sidecar: Optional[str], points_csv: Optional[str]
) -> None:
    try:
        result = build(recipe, budget)
    except (CtlError, ValueError) as exc:
        fail(str(exc))
    logger.info(f"Built {recipe.family.value}: {result.graph!r}")

    encoded = emit_graph6(result.graph).decode("ascii")
    if out:
        with open(out, "w", encoding="ascii") as handle:
            handle.write(encoded + "\n")
    else:
        click.echo(encoded)
    if sidecar:
        with open(sidecar, "w", encoding="utf-8") as handle:
            json.dump(ConstructionOut.from_result(recipe, result).dump(), handle, indent=2, sort_keys=True)
            handle.write("\n")
    if points_csv:
        if not result.points:
            fail(f"{recipe.family.value} has no sphere coordinates to export")
        _write_points(points_csv, result.graph, result.points)


def _write_points(path: str, graph: Graph, points) -> None:
    dimension = points[0][1].dimension
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["vertex", "label"] + [f"x{i}" for i in range(dimension + 1)])
        for vertex, p in points:
            label = graph.labels[vertex] if graph.labels is not None else ""
            writer.writerow([vertex, label] + [str(c) for c in p.coords])


@click.group()
def construct():
    """Build extremal graph constructions."""
    pass


@construct.command()
@click.option('--edges', type=int, default=None, help='Use this many single-edge trees')
@click.option('--tree', 'trees', multiple=True, help='A tree (file, name or graph6); repeatable')
@click.option('-r', 'r', type=int, required=True, help='Chromatic number r >= 3')
@click.option('-t', 't', type=int, default=1, help='Blow-up size of the apex vertices')
@_output_options
@click.pass_context
def zykov(ctx, edges, trees, r, t, out, sidecar, points_csv):
    """Zykov graph on the given trees (or on --edges single edges)."""
    if edges is None and not trees:
        fail("pass --edges N or at least one --tree")
    try:
        encoded = [_K2] * (edges or 0) + [_g6(spec) for spec in trees]
    except CtlError as exc:
        fail(str(exc))
    _run(ctx, Family.ZYKOV, {"trees": encoded, "r": r, "t": t}, None, out, sidecar, points_csv)


@construct.command()
@click.argument('n', type=int)
@click.argument('k', type=int)
@_output_options
@click.pass_context
def kneser(ctx, n, k, out, sidecar, points_csv):
    """Kneser graph Kn(N, K)."""
    _run(ctx, Family.KNESER, {"n": n, "k": k}, None, out, sidecar, points_csv)


@construct.command()
@click.argument('k', type=int)
@click.argument('l', type=int)
@click.argument('m', type=int)
@_output_options
@click.pass_context
def hajnal(ctx, k, l, m, out, sidecar, points_csv):  # noqa: E741
    """Hajnal graph H(K, L, M); 2M + K must divide L."""
    _run(ctx, Family.HAJNAL, {"k": k, "l": l, "m": m}, None, out, sidecar, points_csv)


@construct.command()
@click.option('--k', 'k', type=int, default=2, help='Sphere dimension')
@click.option('--eps', required=True, help='Angle in units of pi, e.g. 1/10')
@click.option('--points', 'n_points', type=int, required=True, help='Number of sampled points')
@_seed_option
@_output_options
@click.pass_context
def borsuk(ctx, k, eps, n_points, seed, out, sidecar, points_csv):
    """Borsuk graph on sampled sphere points."""
    _run(ctx, Family.BORSUK, {"k": k, "eps": eps, "n_points": n_points}, seed, out, sidecar, points_csv)


@construct.command('borsuk-hajnal')
@click.option('--k', 'k', type=int, default=2, help='Sphere dimension')
@click.option('--eps', required=True, help='Borsuk angle in units of pi')
@click.option('--delta', required=True, help='Cap angle in units of pi')
@click.option('--w-size', type=int, required=True, help='Size of W (even)')
@click.option('--u-points', type=int, required=True, help='Number of Borsuk sample points')
@click.option('-r', 'r', type=int, default=3, help='Add r - 3 joined independent sets')
@_seed_option
@_output_options
@click.pass_context
def borsuk_hajnal(ctx, k, eps, delta, w_size, u_points, r, seed, out, sidecar, points_csv):
    """Borsuk-Hajnal graph BH (or BH_r with -r)."""
    params = {"k": k, "eps": eps, "delta": delta, "w_size": w_size, "u_points": u_points}
    family = Family.BORSUK_HAJNAL
    if r != 3:
        params["r"] = r
        family = Family.BORSUK_HAJNAL_R
    _run(ctx, family, params, seed, out, sidecar, points_csv)


@construct.command()
@click.argument('k', type=int)
@click.argument('l', type=int)
@click.option('--attempts', type=int, default=50, help='Random graphs to try when the catalog has no entry')
@click.option('--n-vertices', type=int, default=None, help='Vertices of each random graph')
@_seed_option
@_output_options
@click.pass_context
def erdos(ctx, k, l, attempts, n_vertices, seed, out, sidecar, points_csv):  # noqa: E741
    """Graph with chromatic number >= K and girth >= L."""
    params = {"k": k, "l": l, "attempts": attempts, "n_vertices": n_vertices}
    _run(ctx, Family.ERDOS, params, seed, out, sidecar, points_csv)


def _witness_command(name: str, family: Family, doc: str, with_t: bool = False):
    @click.argument('h')
    @click.option('--c', 'c', type=int, required=True, help='Chromatic lower bound of the Erdős part')
    @click.option('--attempts', type=int, default=50, help='Erdős search attempts')
    @_seed_option
    @_output_options
    @click.pass_context
    def command(ctx, h, c, attempts, seed, out, sidecar, points_csv, t=None):
        try:
            params: Dict[str, Any] = {"h": _g6(h), "c": c, "attempts": attempts}
        except CtlError as exc:
            fail(str(exc))
        if with_t:
            params["t"] = t
        _run(ctx, family, params, seed, out, sidecar, points_csv)

    command.__doc__ = doc
    if with_t:
        command = click.option('--t', 't', type=int, required=True, help='Blow-up size')(command)
    construct.command(name)(command)


_witness_command('pi-witness', Family.PI_WITNESS, "Dense H-free graph of large chromatic number at the pi threshold.")
_witness_command('theta-witness', Family.THETA_WITNESS, "H-free graph of large chromatic number at the theta threshold.")
_witness_command(
    'blowup-witness', Family.BLOWUP_WITNESS, "Blown-up Erdős graph: H-free, linear-size classes.", with_t=True
)


@construct.command('lambda-witness')
@click.argument('h')
@click.option('--k', 'k', type=int, default=2, help='Sphere dimension')
@click.option('--nu', default='1/5', help='Slack below the lambda threshold')
@click.option('--u-points', type=int, default=12, help='Borsuk sample size')
@click.option('--max-attempts', type=int, default=200, help='Re-samples of W')
@_seed_option
@_output_options
@click.pass_context
def lambda_witness(ctx, h, k, nu, u_points, max_attempts, seed, out, sidecar, points_csv):
    """Borsuk-Hajnal witness for an H that is not r-near-acyclic."""
    try:
        params = {"h": _g6(h), "k": k, "nu": nu, "u_points": u_points, "max_attempts": max_attempts}
    except CtlError as exc:
        fail(str(exc))
    _run(ctx, Family.LAMBDA_WITNESS, params, seed, out, sidecar, points_csv)


@construct.command('random')
@click.argument('r', type=int)
@click.argument('n', type=int)
@click.argument('p', type=float)
@click.argument('f')
@_seed_option
@_output_options
@click.pass_context
def random_construction(ctx, r, n, p, f, seed, out, sidecar, points_csv):
    """G(N, P) cut into R - 1 parts with F planted in the first."""
    try:
        params = {"r": r, "n": n, "p": p, "f": _g6(f)}
    except CtlError as exc:
        fail(str(exc))
    _run(ctx, Family.RANDOM_CONSTRUCTION, params, seed, out, sidecar, points_csv)


@construct.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@_output_options
@click.pass_context
def recipe(ctx, path, out, sidecar, points_csv):
    """Rebuild from a JSON recipe (or a sidecar carrying one)."""
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    data = data.get("recipe", data)
    try:
        parsed = ConstructionRecipe.model_validate(data)
    except ValidationError as exc:
        fail(f"invalid recipe: {exc.errors()[0]['msg']}")
    _emit(parsed, TimeBudget(get_config(ctx).time_budget_secs), out, sidecar, points_csv)
