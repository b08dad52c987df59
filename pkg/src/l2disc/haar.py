"""Dyadic boxes, Haar functions and Haar coefficients of the discrepancy function.

A shape ``j = (j1, j2)`` has components in {-1, 0, 1, ...}; a component of
-1 stands for the constant function 1 on [0,1) in that coordinate.  For
``j >= 0`` the one-dimensional Haar factor is +1 on the left half and -1 on
the right half of ``[m/2^j, (m+1)/2^j)``, so the planar function is +1 on
the lower-left and upper-right quarters.

Quarter labels use the sign pair ``(x-sign, y-sign)``: ``"++"`` is
lower-left, ``"+-"`` upper-left, ``"-+"`` lower-right, ``"--"`` upper-right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .errors import DomainError, SizeLimitError
from .pointset import PointSet

__all__ = [
    "DyadicShape",
    "DyadicBox",
    "HaarCoefficient",
    "shapes_at_level",
    "quarter_of",
    "lemma1_integral",
    "mu_point",
    "mu",
    "mu_general_shape",
    "shape_energy",
    "parseval_levels",
    "parseval_partial",
    "coefficients",
]

MAX_LEVEL = 24
MAX_DUMP_LEVEL = 16


class DyadicShape(NamedTuple):
    j1: int
    j2: int

    @property
    def level(self) -> int:
        return max(0, self.j1) + max(0, self.j2)


def shapes_at_level(level: int, negative: bool = True) -> list[DyadicShape]:
    """All shapes with ``|j| == level``; ``negative`` adds those with a -1 component."""
    shapes = [DyadicShape(j1, level - j1) for j1 in range(level + 1)]
    if negative:
        if level == 0:
            shapes += [DyadicShape(-1, -1), DyadicShape(-1, 0), DyadicShape(0, -1)]
        else:
            shapes += [DyadicShape(-1, level), DyadicShape(level, -1)]
    return shapes


def _scale(z, j):
    """z * 2**j without rounding (exact for floats and Fractions)."""
    if isinstance(z, Fraction):
        return z * (1 << j)
    return math.ldexp(float(z), j)


@dataclass(frozen=True)
class DyadicBox:
    """The half-open box I_{j,m} for a shape with non-negative components."""

    shape: DyadicShape
    m1: int
    m2: int

    def __post_init__(self):
        j1, j2 = self.shape
        if j1 < 0 or j2 < 0:
            raise DomainError(f"box shape {tuple(self.shape)} must be non-negative")
        object.__setattr__(self, "shape", DyadicShape(j1, j2))
        if not (0 <= self.m1 < 1 << j1 and 0 <= self.m2 < 1 << j2):
            raise DomainError(f"position {(self.m1, self.m2)} invalid for shape {(j1, j2)}")

    @classmethod
    def of(cls, j1, j2, m1, m2) -> "DyadicBox":
        return cls(DyadicShape(j1, j2), m1, m2)

    @classmethod
    def containing(cls, z, j1, j2) -> "DyadicBox":
        return cls.of(j1, j2, math.floor(_scale(z[0], j1)), math.floor(_scale(z[1], j2)))

    @property
    def level(self) -> int:
        return self.shape.j1 + self.shape.j2

    @property
    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """(x0, x1, y0, y1) as exact rationals."""
        w1 = Fraction(1, 1 << self.shape.j1)
        w2 = Fraction(1, 1 << self.shape.j2)
        return self.m1 * w1, (self.m1 + 1) * w1, self.m2 * w2, (self.m2 + 1) * w2

    @property
    def area(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    def contains(self, z) -> bool:
        return (
            math.floor(_scale(z[0], self.shape.j1)) == self.m1
            and math.floor(_scale(z[1], self.shape.j2)) == self.m2
        )

    def children(self) -> tuple["DyadicBox", "DyadicBox", "DyadicBox", "DyadicBox"]:
        """Halves in x (left, right) then halves in y (lower, upper)."""
        j1, j2 = self.shape
        return (
            DyadicBox.of(j1 + 1, j2, 2 * self.m1, self.m2),
            DyadicBox.of(j1 + 1, j2, 2 * self.m1 + 1, self.m2),
            DyadicBox.of(j1, j2 + 1, self.m1, 2 * self.m2),
            DyadicBox.of(j1, j2 + 1, self.m1, 2 * self.m2 + 1),
        )

    def parents(self) -> list["DyadicBox"]:
        """Boxes one level up that contain this one (one or two of them)."""
        j1, j2 = self.shape
        out = []
        if j1 > 0:
            out.append(DyadicBox.of(j1 - 1, j2, self.m1 >> 1, self.m2))
        if j2 > 0:
            out.append(DyadicBox.of(j1, j2 - 1, self.m1, self.m2 >> 1))
        return out


class HaarCoefficient(NamedTuple):
    box: DyadicBox
    value: float | Fraction
    derivation: str  # "empty-closed-form" | "one-point-closed-form" | "general-sum"


def _half(z, j, m):
    """0 for the left half of [m/2^j, (m+1)/2^j), 1 for the right half, None outside."""
    s = _scale(z, j + 1)
    c = math.floor(s)
    if c >> 1 != m:
        return None
    return c & 1


def quarter_of(box: DyadicBox, z) -> str:
    hx = _half(z[0], box.shape.j1, box.m1)
    hy = _half(z[1], box.shape.j2, box.m2)
    if hx is None or hy is None:
        return "outside"
    return "+-"[hx] + "+-"[hy]


def lemma1_integral(shape) -> Fraction:
    """Integral of x1*x2 against h_{j,m}: 2^(-2|j|-4) for every m."""
    j1, j2 = shape
    if j1 < 0 or j2 < 0:
        raise DomainError("the product integral is defined for non-negative shapes")
    return Fraction(1, 1 << (2 * (j1 + j2) + 4))


def _linear_factor(j):
    # integral of x * (Haar factor) over [0,1)
    if j < 0:
        return Fraction(1, 2)
    return -Fraction(1, 1 << (2 * j + 2))


def _point_factor(z, j, m):
    """Integral of the 1-D Haar factor over [z, 1)."""
    if j < 0:
        return 1 - z
    s = _scale(z, j)
    c = math.floor(s)
    if c != m:
        return 0
    frac = s - c
    if isinstance(z, Fraction):
        w = Fraction(1, 1 << j)
    else:
        w = math.ldexp(1.0, -j)
    # left half: -(z - m/2^j); right half: -((m+1)/2^j - z)
    return -frac * w if 2 * frac < 1 else -(1 - frac) * w


def mu_point(box: DyadicBox, z):
    """Haar coefficient of the indicator of [z1,1) x [z2,1) for z inside the box."""
    if not box.contains(z):
        raise DomainError(f"point {tuple(z)} is not in box {box}")
    return _point_factor(z[0], box.shape.j1, box.m1) * _point_factor(z[1], box.shape.j2, box.m2)


def mu(points: PointSet, box: DyadicBox) -> HaarCoefficient:
    """Haar coefficient mu_{j,m} of the discrepancy function of ``points``."""
    linear = points.N * lemma1_integral(box.shape)
    if not points.exact:
        linear = float(linear)
    inside = [p for p in points if box.contains(p)]
    if not inside:
        return HaarCoefficient(box, -linear, "empty-closed-form")
    total = sum(mu_point(box, p) for p in inside)
    kind = "one-point-closed-form" if len(inside) == 1 else "general-sum"
    return HaarCoefficient(box, total - linear, kind)


def mu_general_shape(points: PointSet, shape, m):
    """Haar coefficient for a shape that may have -1 components (constant factor)."""
    j1, j2 = shape
    m1, m2 = m
    for j, mm in ((j1, m1), (j2, m2)):
        if j < -1:
            raise DomainError(f"shape component {j} < -1")
        if j == -1 and mm != 0:
            raise DomainError("position must be 0 in a -1 coordinate")
        if j >= 0 and not 0 <= mm < 1 << j:
            raise DomainError(f"position {mm} out of range for {j}")
    linear = points.N * _linear_factor(j1) * _linear_factor(j2)
    if not points.exact:
        linear = float(linear)
    total = sum(_point_factor(p.x, j1, m1) * _point_factor(p.y, j2, m2) for p in points)
    return total - linear


def _factors_float(coords: np.ndarray, j: int):
    """Per-point cell index and [z,1)-integral of the 1-D factor, vectorized."""
    if j < 0:
        return np.zeros(len(coords), dtype=np.int64), 1.0 - coords
    s = np.ldexp(coords, j)
    c = np.floor(s)
    frac = s - c
    w = math.ldexp(1.0, -j)
    f = np.where(2 * frac < 1, -frac * w, -(1 - frac) * w)
    return c.astype(np.int64), f


def shape_energy(points: PointSet, shape, exact: bool = False):
    """Sum over positions m of mu_{j,m}^2 for one shape (unweighted)."""
    j1, j2 = shape
    n_boxes = (1 << max(j1, 0)) * (1 << max(j2, 0))
    lin = points.N * _linear_factor(j1) * _linear_factor(j2)
    if exact:
        sums: dict = {}
        for p in points:
            key = (math.floor(_scale(p.x, j1)) if j1 >= 0 else 0,
                   math.floor(_scale(p.y, j2)) if j2 >= 0 else 0)
            fx = _point_factor(Fraction(p.x), j1, key[0])
            fy = _point_factor(Fraction(p.y), j2, key[1])
            sums[key] = sums.get(key, 0) + fx * fy
        occupied = sum((s - lin) ** 2 for s in sums.values())
        return occupied + (n_boxes - len(sums)) * lin * lin
    lin = float(lin)
    P = points.array
    c1, f1 = _factors_float(P[:, 0], j1)
    c2, f2 = _factors_float(P[:, 1], j2)
    keys = (c1 << max(j2, 0)) | c2
    uniq, inv = np.unique(keys, return_inverse=True)
    s = np.bincount(inv, weights=f1 * f2, minlength=len(uniq))
    occupied = math.fsum(((s - lin) ** 2).tolist())
    return occupied + (n_boxes - len(uniq)) * lin * lin


def parseval_levels(points: PointSet, max_level: int, exact: bool = False) -> list:
    """Cumulative truncated Parseval sums for levels 0..max_level."""
    if not 0 <= max_level <= MAX_LEVEL:
        raise SizeLimitError(f"max_level must be in [0, {MAX_LEVEL}], got {max_level}")
    out = []
    acc = Fraction(0) if exact else 0.0
    for level in range(max_level + 1):
        terms = [shape_energy(points, j, exact) for j in shapes_at_level(level)]
        acc = acc + (1 << level) * (sum(terms) if exact else math.fsum(terms))
        out.append(acc)
    return out


def parseval_partial(points: PointSet, max_level: int, exact: bool = False):
    """Sum of 2^|j| mu_{j,m}^2 over every shape (including -1 components) with |j| <= max_level."""
    return parseval_levels(points, max_level, exact)[-1]


def coefficients(points: PointSet, max_level: int) -> Iterator[HaarCoefficient]:
    """Every coefficient with non-negative shape and level <= max_level."""
    if not 0 <= max_level <= MAX_DUMP_LEVEL:
        raise SizeLimitError(f"dump level must be in [0, {MAX_DUMP_LEVEL}], got {max_level}")
    for level in range(max_level + 1):
        for j1, j2 in shapes_at_level(level, negative=False):
            box_points: dict = {}
            for p in points:
                key = (math.floor(_scale(p.x, j1)), math.floor(_scale(p.y, j2)))
                box_points.setdefault(key, []).append(p)
            linear = points.N * lemma1_integral((j1, j2))
            if not points.exact:
                linear = float(linear)
            for m1 in range(1 << j1):
                for m2 in range(1 << j2):
                    box = DyadicBox.of(j1, j2, m1, m2)
                    inside = box_points.get((m1, m2), ())
                    if not inside:
                        yield HaarCoefficient(box, -linear, "empty-closed-form")
                        continue
                    total = sum(mu_point(box, p) for p in inside)
                    kind = "one-point-closed-form" if len(inside) == 1 else "general-sum"
                    yield HaarCoefficient(box, total - linear, kind)
