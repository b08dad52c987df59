"""Local discrepancy and exact L2-discrepancy of planar point sets."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .pointset import Point2, PointSet

__all__ = [
    "DiscrepancyValue",
    "discrepancy_at",
    "l2_squared",
    "l2_oracle",
    "normalized_ratio",
]

_BLOCK = 1 << 22  # matrix entries per block in the float pair sum


class DiscrepancyValue(NamedTuple):
    value: float | Fraction
    at: Point2


def discrepancy_at(points: PointSet, x) -> DiscrepancyValue:
    """Number of points in [0,x1) x [0,x2) minus N*x1*x2."""
    x1, x2 = x
    if not (0 <= x1 <= 1 and 0 <= x2 <= 1):
        raise DomainError(f"corner {tuple(x)} is outside [0,1]^2")
    count = sum(1 for p in points if p.x < x1 and p.y < x2)
    return DiscrepancyValue(count - points.N * x1 * x2, Point2(x1, x2))


def _l2_exact(points: PointSet) -> Fraction:
    xs = [Fraction(p.x) for p in points]
    ys = [Fraction(p.y) for p in points]
    den = math.lcm(*(c.denominator for c in xs + ys))
    X = [int(c * den) for c in xs]
    Y = [int(c * den) for c in ys]
    n = len(X)
    pair = 0
    for i in range(n):
        xi, yi = X[i], Y[i]
        row = 0
        for k in range(n):
            row += (den - max(xi, X[k])) * (den - max(yi, Y[k]))
        pair += row
    d2 = den * den
    single = sum((d2 - a * a) * (d2 - b * b) for a, b in zip(X, Y))
    return Fraction(pair, d2) - Fraction(2 * n * single, 4 * d2 * d2) + Fraction(n * n, 9)


def _l2_float(points: PointSet) -> float:
    P = points.array
    n = len(P)
    ux = 1.0 - P[:, 0]
    uy = 1.0 - P[:, 1]
    rows = max(1, _BLOCK // n)
    partial = []
    for start in range(0, n, rows):
        stop = min(n, start + rows)
        # 1 - max(a, b) == min(1 - a, 1 - b)
        block = np.minimum(ux[start:stop, None], ux[None, :]) * np.minimum(
            uy[start:stop, None], uy[None, :]
        )
        partial.extend(block.sum(axis=1).tolist())
    pair = math.fsum(partial)
    single = math.fsum(((1.0 - P[:, 0] ** 2) * (1.0 - P[:, 1] ** 2)).tolist())
    return pair - n * single / 2.0 + n * n / 9.0


def l2_squared(points: PointSet, exact: bool = False):
    """Squared L2-discrepancy via the closed-form pair sum.

    With ``exact=True`` the result is a Fraction (float coordinates are
    converted exactly); otherwise a float accumulated with ``math.fsum``.
    """
    if len(points) == 0:
        raise DomainError("empty point set")
    if exact:
        return _l2_exact(points)
    return _l2_float(points)


def l2_oracle(points: PointSet, samples: int, seed: int = 0):
    """Monte-Carlo estimate of the squared L2-discrepancy.

    Returns ``(estimate, standard_error)`` from ``samples`` uniform corners.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    P = points.array
    n = len(P)
    rng = np.random.default_rng(seed)
    chunk = max(1, _BLOCK // n)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        corners = rng.random((m, 2))
        inside = (P[None, :, 0] < corners[:, None, 0]) & (P[None, :, 1] < corners[:, None, 1])
        d = inside.sum(axis=1) - n * corners[:, 0] * corners[:, 1]
        d2 = d * d
        total += d2.sum()
        total_sq += (d2 * d2).sum()
        done += m
    mean = total / samples
    if samples < 2:
        return mean, math.inf
    var = max(0.0, (total_sq - samples * mean * mean) / (samples - 1))
    return mean, math.sqrt(var / samples)


def normalized_ratio(points: PointSet) -> float:
    """L2-discrepancy divided by sqrt(log N), natural logarithm."""
    if points.N < 2:
        raise DomainError("normalized_ratio needs N >= 2")
    return math.sqrt(float(l2_squared(points))) / math.sqrt(math.log(points.N))
