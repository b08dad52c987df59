"""Occupancy census of dyadic boxes, one-point bundles and the master inequality.

Box membership is decided by integer cell indices ``floor(z * 2**j)``,
computed without rounding for both float and rational coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import bounds
from .errors import DomainError, SizeLimitError
from .haar import DyadicBox, DyadicShape, mu, shapes_at_level
from .pointset import PointSet

__all__ = [
    "ShapeCensus",
    "LevelCensus",
    "RhoBundle",
    "IdentityCheck",
    "dyadic_split",
    "CellIndex",
    "shape_census",
    "level_census",
    "edge_count",
    "check_identities",
    "rho_bundle",
    "bundle_rhos",
    "MasterTerms",
    "master_terms",
    "master_rhs",
    "hm_rhs",
]

MAX_SHAPE_LEVEL = 24
MAX_CENSUS_LEVEL = 20


def dyadic_split(n: int) -> tuple[int, float]:
    """(M, kappa) with n = 2**(M + kappa), M integer and 0 <= kappa < 1."""
    if n < 1:
        raise DomainError("N must be positive")
    M = n.bit_length() - 1
    if n == 1 << M:
        return M, 0.0
    return M, math.log2(n / (1 << M))


class CellIndex:
    """Cached per-coordinate cell indices floor(z * 2**j) for one point set."""

    def __init__(self, points: PointSet):
        self.points = points
        self._cache: dict = {}
        self._ints = None
        if points.exact:
            nums = [[], []]
            dens = [[], []]
            for p in points:
                for a, c in enumerate(p):
                    nums[a].append(c.numerator)
                    dens[a].append(c.denominator)
            if max(max(dens[0]), max(dens[1])) < 1 << 38:
                self._ints = [(np.array(nums[a], dtype=np.int64), np.array(dens[a], dtype=np.int64)) for a in (0, 1)]
            else:
                self._ints = "python"

    def __call__(self, axis: int, j: int) -> np.ndarray:
        key = (axis, j)
        if key not in self._cache:
            self._cache[key] = self._compute(axis, j)
        return self._cache[key]

    def _compute(self, axis, j):
        if j < 0:
            return np.zeros(self.points.N, dtype=np.int64)
        if j > MAX_SHAPE_LEVEL + 2:
            raise SizeLimitError(f"shape component {j} too large")
        if self._ints is None:
            return np.floor(np.ldexp(self.points.array[:, axis], j)).astype(np.int64)
        if isinstance(self._ints, str):
            return np.array([(p[axis].numerator << j) // p[axis].denominator for p in self.points], dtype=np.int64)
        num, den = self._ints[axis]
        return (num << j) // den

    def keys(self, j1: int, j2: int) -> np.ndarray:
        return (self(0, j1) << max(j2, 0)) | self(1, j2)

    def occupancy(self, j1: int, j2: int):
        """(box keys, counts, per-point count of the point's own box)."""
        cache_key = ("occ", j1, j2)
        if cache_key not in self._cache:
            keys, inv, counts = np.unique(self.keys(j1, j2), return_inverse=True, return_counts=True)
            self._cache[cache_key] = (keys, counts, counts[inv])
        return self._cache[cache_key]


class ShapeCensus(NamedTuple):
    shape: DyadicShape
    counts: dict  # r -> a_r(j), r = 0 included


class LevelCensus(NamedTuple):
    level: int
    counts: dict  # r -> a_r(level)
    types: tuple | None  # (b0, b1, b2), None at level 0

    def a(self, r: int) -> int:
        return self.counts.get(r, 0)


def _histogram(counts: np.ndarray, n_boxes: int) -> dict:
    r, a = np.unique(counts, return_counts=True)
    hist = {int(k): int(v) for k, v in zip(r, a)}
    hist[0] = n_boxes - len(counts)
    return dict(sorted(hist.items()))


def shape_census(points: PointSet, shape, cells: CellIndex | None = None) -> ShapeCensus:
    j1, j2 = shape
    if j1 < 0 or j2 < 0:
        raise DomainError("census shapes must be non-negative")
    if j1 + j2 > MAX_SHAPE_LEVEL:
        raise SizeLimitError(f"shape level must be <= {MAX_SHAPE_LEVEL}")
    cells = cells or CellIndex(points)
    _, counts, _ = cells.occupancy(j1, j2)
    return ShapeCensus(DyadicShape(j1, j2), _histogram(counts, 1 << (j1 + j2)))


def _point_types(cells: CellIndex, j1: int, j2: int) -> np.ndarray:
    """For every point: number of its parent boxes (level - 1) holding exactly one point."""
    u = np.zeros(cells.points.N, dtype=np.int64)
    if j1 > 0:
        u += cells.occupancy(j1 - 1, j2)[2] == 1
    if j2 > 0:
        u += cells.occupancy(j1, j2 - 1)[2] == 1
    return u


def level_census(points: PointSet, level: int, cells: CellIndex | None = None) -> LevelCensus:
    """Occupancy counts over all shapes of one level, and type counts b_u for level >= 1.

    A one-point box of shape (level, 0) or (0, level) has a single parent
    one level up; its type counts only that parent.
    """
    if not 0 <= level <= MAX_CENSUS_LEVEL:
        raise SizeLimitError(f"level must be in [0, {MAX_CENSUS_LEVEL}]")
    cells = cells or CellIndex(points)
    total: dict = {}
    types = [0, 0, 0]
    for j1, j2 in shapes_at_level(level, negative=False):
        _, counts, own = cells.occupancy(j1, j2)
        for r, a in _histogram(counts, 1 << level).items():
            total[r] = total.get(r, 0) + a
        if level >= 1:
            single = own == 1
            u = _point_types(cells, j1, j2)[single]
            for k in range(3):
                types[k] += int(np.count_nonzero(u == k))
    return LevelCensus(level, dict(sorted(total.items())), tuple(types) if level >= 1 else None)


def edge_count(points: PointSet, level: int, cells: CellIndex | None = None) -> int:
    """Pairs (one-point box of ``level``, one-point box of ``level + 1`` inside it),
    enumerated from the parent side."""
    cells = cells or CellIndex(points)
    edges = 0
    for j1, j2 in shapes_at_level(level, negative=False):
        single = cells.occupancy(j1, j2)[2] == 1
        for c1, c2 in ((j1 + 1, j2), (j1, j2 + 1)):
            child_single = cells.occupancy(c1, c2)[2] == 1
            edges += int(np.count_nonzero(single & child_single))
    return edges


class IdentityCheck(NamedTuple):
    name: str
    level: int
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        if self.name.startswith("a0_lower"):
            return self.lhs >= self.rhs
        return self.lhs == self.rhs


def check_identities(points: PointSet, max_level: int) -> list[IdentityCheck]:
    """Integer identities between box counts, for every level up to ``max_level``."""
    n = points.N
    cells = CellIndex(points)
    out = []
    censuses = [level_census(points, lv, cells) for lv in range(max_level + 2)]
    for lv in range(max_level + 1):
        for j1, j2 in shapes_at_level(lv, negative=False):
            sc = shape_census(points, (j1, j2), cells)
            out.append(IdentityCheck(f"boxes_per_shape{(j1, j2)}", lv, sum(sc.counts.values()), 1 << lv))
            out.append(IdentityCheck(f"points_per_shape{(j1, j2)}", lv, sum(r * a for r, a in sc.counts.items()), n))
            out.append(IdentityCheck(f"a0_lower{(j1, j2)}", lv, sc.counts.get(0, 0), (1 << lv) - n))
        c = censuses[lv]
        out.append(IdentityCheck("boxes_per_level", lv, sum(c.counts.values()), (lv + 1) << lv))
        out.append(IdentityCheck("points_per_level", lv, sum(r * a for r, a in c.counts.items()), (lv + 1) * n))
        nxt = censuses[lv + 1]
        b0, b1, b2 = nxt.types
        out.append(IdentityCheck("a1_by_type", lv + 1, nxt.a(1), b0 + b1 + b2))
        out.append(IdentityCheck("edge_identity", lv, 2 * c.a(1), b1 + 2 * b2))
        out.append(IdentityCheck("type_difference", lv + 1, 2 * b0 + b1, 2 * nxt.a(1) - 2 * c.a(1)))
        out.append(IdentityCheck("edge_enumeration", lv, edge_count(points, lv, cells), b1 + 2 * b2))
    return out


class RhoBundle(NamedTuple):
    parent: DyadicBox
    children: tuple
    rho: float | Fraction


def rho_bundle(points: PointSet, parent: DyadicBox) -> RhoBundle:
    """Squared coefficients of a one-point box and its two same-point children."""
    inside = [p for p in points if parent.contains(p)]
    if len(inside) != 1:
        raise DomainError(f"parent box holds {len(inside)} points, expected 1")
    z = inside[0]
    left, right, lower, upper = parent.children()
    cx = left if left.contains(z) else right
    cy = lower if lower.contains(z) else upper
    rho = sum(mu(points, b).value ** 2 for b in (parent, cx, cy))
    return RhoBundle(parent, (cx, cy), rho)


def _factor(coords: np.ndarray, j: int) -> np.ndarray:
    s = np.ldexp(coords, j)
    frac = s - np.floor(s)
    w = math.ldexp(1.0, -j)
    return np.where(2 * frac < 1, frac, 1 - frac) * w


def bundle_rhos(points: PointSet, level: int, cells: CellIndex | None = None):
    """rho for every one-point box of ``level``.

    Returns a list of ``(shape, point_index, rho, u)`` arrays per shape; ``u``
    is the type of the box (parents one level up holding one point).
    """
    cells = cells or CellIndex(points)
    P = points.array
    n = points.N
    out = []
    lin = n * 2.0 ** (-2 * level - 4)
    lin_child = n * 2.0 ** (-2 * level - 6)
    for j1, j2 in shapes_at_level(level, negative=False):
        idx = np.flatnonzero(cells.occupancy(j1, j2)[2] == 1)
        x, y = P[idx, 0], P[idx, 1]
        fx, fy = _factor(x, j1), _factor(y, j2)
        parent = fx * fy - lin
        child_x = _factor(x, j1 + 1) * fy - lin_child
        child_y = fx * _factor(y, j2 + 1) - lin_child
        rho = parent ** 2 + child_x ** 2 + child_y ** 2
        u = _point_types(cells, j1, j2)[idx]
        out.append(((j1, j2), idx, rho, u))
    return out


def _hm_series(M: int, n: int, start: int) -> float:
    terms = []
    n2 = float(n) * float(n)
    level = start
    while True:
        t = (level + 1) * 2.0 ** level * (2.0 ** level - n) * n2 * 2.0 ** (-4 * level - 8)
        terms.append(t)
        if level > start + 8 and abs(t) < 1e-18 * abs(terms[0]):
            return math.fsum(terms)
        level += 1


def hm_rhs(points: PointSet) -> float:
    """Lower bound from empty boxes alone, counting (l+1)(2^l - N) of them at each level l > M."""
    n = points.N
    if n < 2:
        raise DomainError("N must be >= 2")
    M, _ = dyadic_split(n)
    return _hm_series(M, n, M + 1)


@dataclass
class MasterTerms:
    N: int
    M: int
    kappa: float
    empty: float  # empty boxes of levels 0..M+1, exact counts
    tail: float  # empty boxes of levels >= M+2, counted from below
    bundles_M: float
    bundles_M1: float
    theorem_floor: float  # (M + 1) * delta(kappa)

    @property
    def total(self) -> float:
        return math.fsum([self.empty, self.tail, self.bundles_M, self.bundles_M1])


def master_terms(points: PointSet) -> MasterTerms:
    n = points.N
    if n < 2:
        raise DomainError("N must be >= 2")
    M, kappa = dyadic_split(n)
    cells = CellIndex(points)
    n2 = float(n) * float(n)
    empty = []
    for lv in range(M + 2):
        a0 = level_census(points, lv, cells).a(0)
        empty.append(2.0 ** lv * a0 * n2 * 2.0 ** (-4 * lv - 8))
    tail = _hm_series(M, n, M + 2)
    w = 2.0 ** M
    bM = math.fsum(w * float(rho.sum()) for _, _, rho, _ in bundle_rhos(points, M, cells))
    bM1 = math.fsum(w * float(((2 - u) * rho).sum()) for _, _, rho, u in bundle_rhos(points, M + 1, cells))
    return MasterTerms(
        N=n,
        M=M,
        kappa=kappa,
        empty=math.fsum(empty),
        tail=tail,
        bundles_M=bM,
        bundles_M1=bM1,
        theorem_floor=(M + 1) * bounds.delta(kappa),
    )


def master_rhs(points: PointSet) -> float:
    """Right-hand side of the bundled lower bound for the squared L2-discrepancy."""
    return master_terms(points).total
