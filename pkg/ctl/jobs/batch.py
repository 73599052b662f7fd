"""Batch classification of graph6 streams across worker processes.

Each input graph is an independent task. ``ProcessPoolExecutor.map`` hands
results back in input order, so the output stream is identical for every
worker count. Timeouts and per-graph errors are recorded in the stream and
never abort the batch.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Any, Dict, Iterable, Iterator, Tuple

from ctl.api.schemas import ErrorOut, ThresholdReportOut
from ctl.core.budget import TimeBudget
from ctl.core.errors import BudgetExceededError, CtlError
from ctl.core.graph import Graph
from ctl.core.graph6 import emit_graph6, parse_graph6
from ctl.services.classify import chromatic_threshold
from ctl.services.verify import check_threshold_witness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatchOptions:
    time_budget_secs: float
    certificate: bool = False
    check: bool = False


def classify_one(task: Tuple[int, str], options: BatchOptions) -> Dict[str, Any]:
    """Classify one ``(line, graph6)`` task and return its JSON record."""
    index, graph6 = task
    g = parse_graph6(graph6)
    try:
        report = chromatic_threshold(g, TimeBudget(options.time_budget_secs))
        checked = None
        if options.check:
            result = check_threshold_witness(g, report, budget=TimeBudget(options.time_budget_secs))
            if not result.passed:
                logger.error(f"Graph {index}: witness check failed: {list(result.violations)}")
                return ThresholdReportOut(
                    index=index,
                    graph6=graph6,
                    n=g.n,
                    error=ErrorOut(kind="check_failed", message="; ".join(result.violations)),
                ).dump()
            checked = True
        return ThresholdReportOut.from_report(index, graph6, g.n, report, options.certificate, checked).dump()
    except BudgetExceededError as exc:
        logger.warning(f"Graph {index}: {exc}")
        error = ErrorOut(kind="timeout", message=str(exc), stage=exc.stage)
    except (CtlError, ValueError) as exc:
        logger.warning(f"Graph {index}: {exc}")
        error = ErrorOut(kind="error", message=str(exc))
    return ThresholdReportOut(index=index, graph6=graph6, n=g.n, error=error).dump()


def classify_batch(
    graphs: Iterable[Tuple[int, Graph]], options: BatchOptions, parallelism: int = 1
) -> Iterator[Dict[str, Any]]:
    """Yield one record per ``(line, graph)`` in input order."""
    tasks = ((index, emit_graph6(g).decode("ascii")) for index, g in graphs)
    worker = partial(classify_one, options=options)
    if parallelism <= 1:
        yield from map(worker, tasks)
        return
    logger.info(f"Classifying with {parallelism} worker processes")
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        yield from pool.map(worker, tasks, chunksize=1)
