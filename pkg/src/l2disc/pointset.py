"""Finite point sets in the half-open unit square.

Coordinates keep a dual representation: generators and ``p/q`` input give
exact :class:`fractions.Fraction` values, decimal input and the random
generator give binary floats.  Dyadic box membership is decided exactly in
both cases (a dyadic rational ``m / 2**j`` is representable as a float).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Real
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DomainError, PointParseError, SizeLimitError

__all__ = [
    "Point2",
    "PointSet",
    "hammersley",
    "fibonacci",
    "fibonacci_lattice",
    "random_uniform",
    "load",
    "save",
]


class Point2(NamedTuple):
    x: Real
    y: Real


def _check_unit(value, what="coordinate"):
    if not 0 <= value < 1:
        raise DomainError(f"{what} {value} is outside [0,1)")
    return value


@dataclass(frozen=True)
class PointSet:
    """Ordered multiset of points in [0,1)^2."""

    points: tuple

    def __init__(self, points: Iterable):
        pts = []
        for p in points:
            x, y = p
            if isinstance(x, (int, np.integer)):
                x = Fraction(int(x))
            if isinstance(y, (int, np.integer)):
                y = Fraction(int(y))
            if isinstance(x, np.floating):
                x = float(x)
            if isinstance(y, np.floating):
                y = float(y)
            pts.append(Point2(_check_unit(x), _check_unit(y)))
        if not pts:
            raise DomainError("a point set needs at least one point")
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def N(self) -> int:
        return len(self.points)

    @cached_property
    def exact(self) -> bool:
        """True when every coordinate is a Fraction."""
        return all(isinstance(c, Fraction) for p in self.points for c in p)

    @cached_property
    def array(self) -> np.ndarray:
        """Float64 view of shape (N, 2)."""
        return np.array([[float(p.x), float(p.y)] for p in self.points], dtype=float)

    def __add__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.points + tuple(other.points))

    def to_float(self) -> "PointSet":
        return PointSet((float(p.x), float(p.y)) for p in self.points)


def _radical_inverse2(i: int, bits: int) -> Fraction:
    if bits == 0:
        return Fraction(0)
    return Fraction(int(format(i, f"0{bits}b")[::-1], 2), 1 << bits)


def hammersley(n: int) -> PointSet:
    """The 2**n point Hammersley set {(i/2^n, vdc(i))} in base 2."""
    if not 0 <= n <= 30:
        raise SizeLimitError(f"hammersley needs 0 <= n <= 30, got {n}")
    size = 1 << n
    return PointSet((Fraction(i, size), _radical_inverse2(i, n)) for i in range(size))


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def fibonacci_lattice(k: int, symmetrize: bool = False) -> PointSet:
    """Fibonacci lattice with F_k points, optionally unioned with its reflection y -> 1-y.

    Reflected coordinates equal to 1 are folded back to 0, so the symmetrized
    set has 2*F_k points counted with multiplicity.
    """
    if not 2 <= k <= 35:
        raise SizeLimitError(f"fibonacci_lattice needs 2 <= k <= 35, got {k}")
    n, g = fibonacci(k), fibonacci(k - 1)
    pts = [(Fraction(i, n), Fraction(i * g % n, n)) for i in range(n)]
    if symmetrize:
        pts += [(x, (1 - y) % 1) for x, y in pts]
    return PointSet(pts)


def random_uniform(n: int, seed: int = 0) -> PointSet:
    if n < 1:
        raise DomainError("random_uniform needs n >= 1")
    rng = np.random.default_rng(seed)
    return PointSet(rng.random((n, 2)).tolist())


_RATIONAL = re.compile(r"^(\d+)/(\d+)$")


def _parse_coordinate(token: str, lineno: int):
    m = _RATIONAL.match(token)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0:
            raise PointParseError(lineno, f"zero denominator in {token!r}")
        value = Fraction(p, q)
    else:
        try:
            value = float(token)
        except ValueError:
            raise PointParseError(lineno, f"cannot parse coordinate {token!r}") from None
    if not 0 <= value < 1:
        raise DomainError(f"line {lineno}: coordinate {token} is outside [0,1)")
    return value


def load(path) -> PointSet:
    """Read one point per line; blank lines and ``#`` comments are skipped."""
    pts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2:
                raise PointParseError(lineno, f"expected 2 fields, got {len(fields)}")
            pts.append(tuple(_parse_coordinate(t, lineno) for t in fields))
    if not pts:
        raise PointParseError(0, f"{path}: no points")
    return PointSet(pts)


def _format_coordinate(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return repr(float(c))


def save(points: PointSet, path) -> None:
    lines = [f"{_format_coordinate(p.x)} {_format_coordinate(p.y)}\n" for p in points]
    Path(path).write_text("".join(lines))
