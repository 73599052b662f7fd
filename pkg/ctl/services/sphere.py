"""Sphere sampling and the exact angle tests behind Borsuk graphs.

Points are quantized to ``DIGITS`` decimal digits and stored as integers, so
every dot product is exact. Angles are rationals in units of pi and their
cosines are evaluated at 40 significant digits with mpmath before being
rounded to the same integer scale as the dot products.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence

import mpmath
import numpy as np

from ctl.core.graph import Graph, check_size
from ctl.core.rng import make_rng
from ctl.models import SpherePoint

logger = logging.getLogger(__name__)

DIGITS = 12
SCALE = 10**DIGITS
_PRECISION = 40


@lru_cache(maxsize=256)
def cos_units(angle: Fraction) -> int:
    """``cos(angle * pi)`` scaled by ``SCALE**2`` and rounded to an integer."""
    with mpmath.workdps(_PRECISION):
        value = mpmath.cospi(mpmath.mpf(angle.numerator) / angle.denominator) * SCALE * SCALE
        return int(mpmath.nint(value))


def sin_units(angle: Fraction) -> int:
    return cos_units(Fraction(1, 2) - angle)


def check_angle(angle: Fraction, name: str) -> Fraction:
    angle = Fraction(angle)
    if not 0 < angle < Fraction(1, 2):
        raise ValueError(f"{name} must lie strictly between 0 and 1/2 (units of pi), got {angle}")
    return angle


def point(coords: Sequence[float]) -> SpherePoint:
    """Normalize ``coords`` onto the unit sphere and quantize."""
    norm = math.sqrt(math.fsum(c * c for c in coords))
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return SpherePoint(tuple(round(c / norm * SCALE) for c in coords), DIGITS)


def antipode(p: SpherePoint) -> SpherePoint:
    return SpherePoint(tuple(-u for u in p.units), p.digits)


def sample_points(k: int, count: int, rng: np.random.Generator) -> List[SpherePoint]:
    """``count`` uniform points on ``S^k`` (normalized Gaussian vectors)."""
    if k < 1:
        raise ValueError(f"sphere dimension must be at least 1, got {k}")
    draws = rng.standard_normal((count, k + 1))
    points = []
    for row in draws:
        while not row.any():  # pragma: no cover - probability zero
            row = rng.standard_normal(k + 1)
        points.append(point([float(c) for c in row]))
    return points


def borsuk_graph(points: Sequence[SpherePoint], eps: Fraction) -> Graph:
    """Borsuk graph on explicit points: ``xy`` is an edge iff ``angle(x, y) >= pi - eps``."""
    eps = check_angle(eps, "eps")
    check_size(len(points), "Borsuk graph")
    bound = -cos_units(eps)
    edges = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i].dot_units(points[j]) <= bound:
                edges.append((i, j))
    return Graph.from_edges(len(points), edges, [f"U{i}" for i in range(len(points))])


def borsuk_sample(k: int, eps: Fraction, n_points: int, seed: int):
    """Sample ``n_points`` on ``S^k`` and build their Borsuk graph.

    Returns:
        ``(graph, points)``.
    """
    if n_points < 2:
        raise ValueError(f"a Borsuk sample needs at least 2 points, got {n_points}")
    eps = check_angle(eps, "eps")
    check_size(n_points, "Borsuk sample")
    points = sample_points(k, n_points, make_rng(seed, 0))
    graph = borsuk_graph(points, eps)
    logger.info(f"Borsuk sample k={k} eps={eps} pi: {graph!r}")
    return graph, points


def cap_fraction(k: int, polar_angle: float) -> float:
    """Fraction of ``S^k`` within ``polar_angle`` radians of a pole."""
    grid = np.linspace(0.0, math.pi, 20001)
    density = np.sin(grid) ** (k - 1)
    inside = grid <= polar_angle
    total = np.trapezoid(density, grid)
    return float(np.trapezoid(density[inside], grid[inside]) / total) if inside.sum() > 1 else 0.0


def delta_for_cap(k: int, fraction: float, denominator: int = 10**6) -> Fraction:
    """Largest ``delta`` (units of pi, on a ``1/denominator`` grid) whose cap covers ``fraction``.

    The cap has polar angle ``pi/2 - delta``; ``delta`` is found by bisection and
    rounded down, which only enlarges the cap.
    """
    if not 0 < fraction < 0.5:
        raise ValueError(f"cap fraction must lie in (0, 1/2), got {fraction}")
    lo, hi = 0.0, 0.5  # delta in units of pi; cap shrinks as delta grows
    for _ in range(60):
        mid = (lo + hi) / 2
        if cap_fraction(k, (0.5 - mid) * math.pi) >= fraction:
            lo = mid
        else:
            hi = mid
    delta = Fraction(math.floor(lo * denominator), denominator)
    if delta <= 0:
        raise ValueError(f"no positive delta covers a {fraction} cap on S^{k}")
    return delta
