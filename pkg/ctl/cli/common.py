"""Shared CLI plumbing: run configuration, graph arguments and exit handling."""

import logging
from pathlib import Path
from typing import Literal, NoReturn, Optional

import click
from pydantic import BaseModel, Field

from ctl.core.config import settings
from ctl.core.graph import Graph
from ctl.core.graph6 import parse_graph, read_graphs
from ctl.services.catalog import named_graph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


class RunConfig(BaseModel):
    """Settings for one CLI invocation: environment defaults overridden by flags."""

    time_budget_secs: int = Field(settings.TIME_BUDGET_SECS, ge=1)
    seed: Optional[int] = Field(settings.DEFAULT_SEED, ge=0, lt=1 << 64)
    output_format: Literal["json", "graph6", "human"] = settings.OUTPUT_FORMAT  # type: ignore[assignment]
    parallelism: int = Field(settings.PARALLELISM, ge=1)


def get_config(ctx: click.Context) -> RunConfig:
    root = ctx.find_root()
    if not isinstance(root.obj, RunConfig):
        root.obj = RunConfig()
    return root.obj


def fail(message: str, code: int = EXIT_ERROR) -> NoReturn:
    """Print ``message`` to stderr and leave with ``code``."""
    logger.error(message)
    click.echo(f"❌ Error: {message}", err=True)
    raise SystemExit(code)


def resolve_graph(spec: str) -> Graph:
    """A graph argument: a file (first graph in it), a catalog name, or an inline graph6 string."""
    path = Path(spec)
    if path.is_file():
        with path.open("rb") as handle:
            for _, graph in read_graphs(handle):
                return graph
        raise click.BadParameter(f"{spec} contains no graph")
    try:
        return named_graph(spec)
    except KeyError:
        return parse_graph(spec)
