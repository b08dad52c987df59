"""Constants of the improved L2-discrepancy lower bound in the unit square.

Everything here is a function of the fractional exponent ``kappa`` in
``N = 2**(M + kappa)``.  The one-point bundle bound ``gamma`` comes from two
small minimization problems on boxes split into quarters:

* ``case2_f`` (point in a side strip), minimum ``9 * 2**(2*kappa) / 512``;
* ``case4_g`` (point in the far quarter), whose minimum ``h(kappa)`` lies on
  the diagonal ``alpha == beta`` and is found from the stationarity cubic.

``delta`` combines them into the per-level density whose extrema over
[0, 1] give the constants for the infimum and the limsup.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq, minimize, minimize_scalar

from .errors import ConsistencyError, DomainError

__all__ = [
    "case1_q",
    "case1_min",
    "case2_f",
    "case2_min",
    "case4_g",
    "case4_min",
    "h_of",
    "certify_diagonal",
    "gamma",
    "delta",
    "kappa_switch",
    "BoundReport",
    "theorem_constants",
    "hm_w",
    "hm_corrected",
    "sigma2_exact",
    "sigma2_bound",
    "lemma6_check",
    "phi_values",
    "sigma1_prime",
    "KappaFunctionTable",
    "kappa_table",
    "write_kappa_table",
]

LN2 = math.log(2.0)


def _pow2(e):
    """2**e, exact when e is an integer."""
    if float(e).is_integer():
        e = int(e)
        return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)
    return 2.0 ** e


def _check_kappa(kappa, lo=-1.0, hi=1.0):
    if not lo <= kappa <= hi:
        raise DomainError(f"kappa={kappa} outside [{lo}, {hi}]")


# -- Case 1: point in the lower-left quarter of both children --------------

def case1_q(z, kappa):
    c = 2.0 ** (kappa - 4)
    return (z - c) ** 2 + 2 * (z - c / 4) ** 2


def case1_min(kappa):
    """Minimizer and minimum of ``case1_q`` over z in [0, 2**-4)."""
    c = 2.0 ** (kappa - 4)
    z = (c + 2 * (c / 4)) / 3  # weighted mean of the two targets
    z = min(max(z, 0.0), 2.0 ** -4)
    return z, case1_q(z, kappa)


# -- Case 2: point in a side strip ----------------------------------------

def case2_f(alpha, beta, kappa):
    if not (0 <= alpha <= 0.5 and 0.5 <= beta <= 1):
        raise DomainError(f"case 2 needs 0 <= alpha < 1/2 <= beta < 1, got ({alpha}, {beta})")
    c = 2.0 ** (kappa - 4)
    ab = alpha * beta
    return (ab - 4 * c) ** 2 + (ab - c) ** 2 + (alpha * (1 - beta) - c) ** 2


def _case2_alpha(beta, kappa):
    # f is quadratic in alpha for fixed beta
    c = 2.0 ** (kappa - 4)
    a = c * (5 * beta + (1 - beta)) / (2 * beta * beta + (1 - beta) ** 2)
    return min(max(a, 0.0), 0.5)


def case2_min(kappa):
    """Constrained minimizer ``(alpha, beta, value)`` of ``case2_f``.

    Profiles out alpha analytically and runs a bounded Brent search on beta.
    """
    res = minimize_scalar(
        lambda b: case2_f(_case2_alpha(b, kappa), b, kappa),
        bounds=(0.5, 1.0),
        method="bounded",
        options={"xatol": 1e-13},
    )
    beta = float(res.x)
    alpha = _case2_alpha(beta, kappa)
    return alpha, beta, case2_f(alpha, beta, kappa)


# -- Case 4: point in the far quarter --------------------------------------

def case4_g(alpha, beta, kappa):
    if not (0.5 <= alpha <= 1 and 0.5 <= beta <= 1):
        raise DomainError(f"case 4 needs alpha, beta in [1/2, 1), got ({alpha}, {beta})")
    return _g(alpha, beta, kappa)


def _g(alpha, beta, kappa):
    c = 2.0 ** (kappa - 4)
    return (alpha * beta - 4 * c) ** 2 + (alpha * (1 - beta) - c) ** 2 + ((1 - alpha) * beta - c) ** 2


def _diagonal_poly(kappa):
    c = 2.0 ** (kappa - 4)
    p1 = np.array([-4 * c, 0.0, 1.0])  # t^2 - 4c
    p2 = np.array([-c, 1.0, -1.0])  # t - t^2 - c
    return npoly.polyadd(npoly.polymul(p1, p1), 2 * npoly.polymul(p2, p2))


def case4_min(kappa):
    """``(t, h)``: minimizer and minimum of g on the diagonal of [1/2, 1]^2."""
    poly = _diagonal_poly(kappa)
    dpoly = npoly.polyder(poly)
    ddpoly = npoly.polyder(dpoly)
    candidates = [0.5, 1.0]
    for r in npoly.polyroots(dpoly):
        if abs(r.imag) > 1e-9:
            continue
        t = r.real
        for _ in range(3):  # Newton polish
            d2 = npoly.polyval(t, ddpoly)
            if d2 == 0:
                break
            t -= npoly.polyval(t, dpoly) / d2
        if 0.5 <= t <= 1.0:
            candidates.append(t)
    values = [_g(t, t, kappa) for t in candidates]
    i = int(np.argmin(values))
    return float(candidates[i]), float(values[i])


def h_of(kappa):
    """Minimum of ``case4_g`` over [1/2, 1]^2 (attained on the diagonal)."""
    _check_kappa(kappa)
    return case4_min(kappa)[1]


@dataclass
class DiagonalCertificate:
    kappa: float
    h: float
    grid_min: float
    grid_argmin: tuple
    refined_min: float
    refined_argmin: tuple


def certify_diagonal(kappa, n=1500, tol=1e-7):
    """Check on an n x n grid (plus local refinement) that no point of the
    square beats the diagonal minimum.  Raises ConsistencyError otherwise."""
    _check_kappa(kappa)
    t, h = case4_min(kappa)
    grid = np.linspace(0.5, 1.0, n)
    A, B = np.meshgrid(grid, grid, indexing="ij")
    G = _g(A, B, kappa)
    k = np.unravel_index(np.argmin(G), G.shape)
    start = (float(A[k]), float(B[k]))
    res = minimize(
        lambda v: _g(v[0], v[1], kappa),
        x0=np.array(start),
        bounds=[(0.5, 1.0), (0.5, 1.0)],
        method="L-BFGS-B",
        options={"ftol": 1e-16, "gtol": 1e-14},
    )
    refined = min(float(res.fun), float(G[k]))
    if float(G[k]) < h - tol or refined < h - 1e-12:
        raise ConsistencyError(
            f"kappa={kappa}: off-diagonal value {min(float(G[k]), refined)} below diagonal minimum {h}"
        )
    if float(G[k]) - h > tol:
        raise ConsistencyError(f"kappa={kappa}: grid minimum {float(G[k])} far above diagonal minimum {h}")
    return DiagonalCertificate(kappa, h, float(G[k]), start, refined, tuple(float(v) for v in res.x))


# -- gamma and Delta ---------------------------------------------------------

def gamma(kappa, with_branch=False, exact=False):
    """min(9 * 2**(2 kappa - 13), h(kappa) / 16) for kappa in [-1, 1].

    The Case 1 value 3 * 2**(2 kappa - 11) always exceeds the first branch
    and is not part of the minimum.  With ``exact=True`` an integer kappa on
    the ``case2`` branch returns a Fraction.
    """
    _check_kappa(kappa)
    strip = 9 * _pow2(2 * kappa - 13)
    far = h_of(kappa) / 16
    if float(strip) <= far:
        value, branch = strip, "case2"
    else:
        value, branch = far, "case4"
    if not exact or not isinstance(value, Fraction):
        value = float(value)
    return (value, branch) if with_branch else value


def delta(kappa, exact=False):
    """Per-level density of the improved bound, kappa in [0, 1]."""
    _check_kappa(kappa, 0.0, 1.0)
    p = _pow2(kappa)
    out = _pow2(2 * kappa - 8) / 3 - _pow2(3 * kappa - 8) / 7
    if p != 2:
        out = out + (2 - p) * gamma(kappa, exact=exact)
    if p != 1:
        out = out + (p - 1) * gamma(kappa - 1, exact=exact)
    if exact and isinstance(out, Fraction):
        return out
    return float(out)


def kappa_switch(lo=0.0, hi=1.0):
    """Root of 9 * 2**(2k-13) == h(k)/16 in [lo, hi] (where gamma changes branch)."""
    f = lambda k: 9 * 2.0 ** (2 * k - 13) - h_of(k) / 16
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


# -- corrected earlier bound -------------------------------------------------

def hm_w(y):
    """y^2/192 - y^3/224, exact for Fraction input."""
    return y * y / 192 - y ** 3 / 224


def hm_corrected():
    """Earlier constants (cbar, bbar): w at y = 1 (minimum) and at y = 7/9 (maximum)."""
    w_min = hm_w(Fraction(1))
    w_max = hm_w(Fraction(7, 9))
    return math.sqrt(float(w_min) / LN2), math.sqrt(float(w_max) / LN2)


# -- tail sums ---------------------------------------------------------------

def _sigma2_terms(M, kappa):
    n = 2.0 ** (M + kappa)
    terms = []
    level = M + 1
    while True:
        t = 2.0 ** level * (level + 1) * (2.0 ** level - n) * 2.0 ** (2 * M + 2 * kappa - 4 * level - 8)
        terms.append(t)
        if level > M + 8 and abs(t) < 1e-18 * abs(terms[0]):
            return terms
        level += 1


def sigma2_exact(M, kappa):
    """Series over levels l >= M+1 of the empty-box contributions (lower bound form)."""
    if not 0 <= M <= 60:
        raise DomainError("M must be in [0, 60]")
    return math.fsum(_sigma2_terms(M, kappa))


def sigma2_bound(M, kappa):
    return (M + 2) * (2.0 ** (2 * kappa - 8) / 3 - 2.0 ** (3 * kappa - 8) / 7)


# -- averaging inequalities --------------------------------------------------

def lemma6_check(a: Mapping[int, float], alpha, beta, sigma, tol=1e-12):
    """Check alpha*a0 + beta*a1 against its lower bound for a distribution ``a``
    on occupation numbers with total mass 1 and mean ``sigma``."""
    if alpha < 0 or beta < 0 or alpha < 2 * beta:
        raise DomainError("need alpha, beta >= 0 and alpha >= 2 beta")
    if any(v < 0 for v in a.values()):
        raise DomainError("weights must be non-negative")
    if abs(sum(a.values()) - 1) > 1e-9 or abs(sum(r * v for r, v in a.items()) - sigma) > 1e-9:
        raise DomainError("weights must have total 1 and mean sigma")
    if not 0 <= sigma <= 2:
        raise DomainError("sigma must be in [0, 2]")
    lhs = alpha * a.get(0, 0) + beta * a.get(1, 0)
    ok = True
    if sigma <= 1:
        ok = ok and lhs >= alpha * (1 - sigma) + beta * sigma - tol
    if sigma >= 1:
        ok = ok and lhs >= beta * (2 - sigma) - tol
    return ok


def phi_values(kappa):
    _check_kappa(kappa, 0.0, 1.0)
    p = 2.0 ** kappa
    g0, g1 = gamma(kappa), gamma(kappa - 1)
    phi_m = (2 - p) * (g0 - g1 / 2)
    phi_m1 = (2 - p) * 2.0 ** (2 * kappa - 11) + p * g1 / 2
    return phi_m, phi_m1


def sigma1_prime(M, kappa):
    p = 2.0 ** kappa
    g0, g1 = gamma(kappa), gamma(kappa - 1)
    return (M + 1) * (2 - p) * (g0 - g1 / 2) + (M + 2) * p * g1 / 2


# -- extremal constants ------------------------------------------------------

@dataclass
class BoundReport:
    delta_min: Fraction
    c_bar_lower: float
    delta_max: float
    b_bar_lower: float
    kappa0: float
    hm_cbar: float
    hm_bbar: float
    kappa_switch: float
    sign_changes: int
    grid: int

    @property
    def delta_min_float(self) -> float:
        return float(self.delta_min)

    def lines(self):
        return [
            f"delta_min      {self.delta_min.numerator}/{self.delta_min.denominator}",
            f"delta_min      {float(self.delta_min):.12g}",
            f"c_bar_lower    {self.c_bar_lower:.12g}",
            f"kappa0         {self.kappa0:.12g}",
            f"delta_max      {self.delta_max:.12g}",
            f"b_bar_lower    {self.b_bar_lower:.12g}",
            f"kappa_switch   {self.kappa_switch:.12g}",
            f"hm_cbar        {self.hm_cbar:.12g}",
            f"hm_bbar        {self.hm_bbar:.12g}",
            f"sign_changes   {self.sign_changes}",
        ]


def theorem_constants(grid=4097):
    """Scan delta on [0, 1], refine the interior maximum, certify the shape.

    The minimum is taken at the endpoints as an exact rational; the scan
    must show a single rise-then-fall pattern or ConsistencyError is raised.
    """
    ks = np.linspace(0.0, 1.0, grid)
    vals = np.array([delta(float(k)) for k in ks])
    diffs = np.sign(np.diff(vals))
    diffs = diffs[diffs != 0]
    changes = int(np.count_nonzero(diffs[1:] != diffs[:-1]))
    if changes != 1 or diffs[0] < 0:
        raise ConsistencyError(f"delta is not increasing-then-decreasing ({changes} sign changes)")

    d0, d1 = delta(0, exact=True), delta(1, exact=True)
    dmin = min(d0, d1)
    if vals.min() < float(dmin) - 1e-15:
        raise ConsistencyError("delta dips below its endpoint values")

    i = int(np.argmax(vals))
    lo, hi = ks[max(i - 1, 0)], ks[min(i + 1, grid - 1)]
    res = minimize_scalar(lambda k: -delta(k), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    k0, dmax = float(res.x), float(-res.fun)
    switch = kappa_switch()
    # the maximum sits on the gamma branch switch, where delta has a kink
    candidates = [(dmax, k0), (float(vals[i]), float(ks[i]))]
    if lo <= switch <= hi:
        candidates.append((delta(switch), switch))
    dmax, k0 = max(candidates)

    cb, bb = hm_corrected()
    return BoundReport(
        delta_min=dmin,
        c_bar_lower=math.sqrt(float(dmin) / LN2),
        delta_max=dmax,
        b_bar_lower=math.sqrt(dmax / LN2),
        kappa0=k0,
        hm_cbar=cb,
        hm_bbar=bb,
        kappa_switch=switch,
        sign_changes=changes,
        grid=grid,
    )


# -- tables for plotting ------------------------------------------------------

@dataclass
class KappaFunctionTable:
    grid: list
    rows: list = field(default_factory=list)  # (kappa, h, gamma, branch, delta or None)

    @property
    def extrema(self):
        d = [(r[0], r[4]) for r in self.rows if r[4] is not None]
        kmin, dmin = min(d, key=lambda t: t[1])
        kmax, dmax = max(d, key=lambda t: t[1])
        return kmin, dmin, kmax, dmax


def kappa_table(grid=201):
    """h, gamma and delta on an even grid of kappa in [-1, 1]."""
    ks = np.linspace(-1.0, 1.0, grid)
    table = KappaFunctionTable(grid=ks.tolist())
    for k in ks:
        k = float(k)
        g, branch = gamma(k, with_branch=True)
        d = delta(k) if k >= 0 else None
        table.rows.append((k, h_of(k), g, branch, d))
    return table


def write_kappa_table(table: KappaFunctionTable, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["kappa", "h", "gamma", "gamma_branch", "delta"])
    for k, h, g, branch, d in table.rows:
        w.writerow([f"{k:.12g}", f"{h:.12g}", f"{g:.12g}", branch, "" if d is None else f"{d:.12g}"])
