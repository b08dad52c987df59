"""Named property checks run by ``l2disc verify``."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import bounds, census, discrepancy, haar, pointset

C_BAR = 0.0515599


def _sets():
    yield "hammersley(4)", pointset.hammersley(4)
    yield "fibonacci(10)", pointset.fibonacci_lattice(10)
    yield "fibonacci(9,sym)", pointset.fibonacci_lattice(9, symmetrize=True)
    for seed in range(5):
        yield f"random(37,{seed})", pointset.random_uniform(37, seed)


def check_pointsets():
    for n in range(8):
        P = pointset.hammersley(n).array
        if len({tuple(p) for p in P}) != len(P) or not ((P >= 0) & (P < 1)).all():
            return False, f"hammersley({n})"
    for k in range(2, 15):
        ps = pointset.fibonacci_lattice(k)
        f = pointset.fibonacci(k)
        if ps.N != f or any(f % c.denominator for p in ps for c in p):
            return False, f"fibonacci({k})"
    return True, "generators stay in [0,1)^2"


def check_l2_exact_vs_float():
    worst = 0.0
    for _, ps in _sets():
        if ps.N > 300:
            continue
        e = discrepancy.l2_squared(ps, exact=True)
        f = discrepancy.l2_squared(ps)
        worst = max(worst, abs(float(e) - f) / float(e))
    return worst < 1e-12, f"max relative gap {worst:.3g}"


def check_l2_oracle():
    ps = pointset.hammersley(3)
    est, se = discrepancy.l2_oracle(ps, 200_000, seed=1)
    exact = discrepancy.l2_squared(ps)
    return abs(est - exact) <= 4 * se, f"|{est:.6g} - {exact:.6g}| vs 4 se = {4 * se:.3g}"


def check_haar_closed_forms():
    ps = pointset.random_uniform(6, 3)
    worst = 0.0
    for level in range(4):
        for j in haar.shapes_at_level(level, negative=False):
            for m1 in range(1 << j[0]):
                for m2 in range(1 << j[1]):
                    box = haar.DyadicBox(j, m1, m2)
                    a = haar.mu(ps, box).value
                    b = haar.mu_general_shape(ps, j, (m1, m2))
                    worst = max(worst, abs(a - b))
    return worst < 1e-15, f"max gap {worst:.3g}"


def check_parseval():
    ps = pointset.hammersley(2)
    sums = haar.parseval_levels(ps, 16)
    target = discrepancy.l2_squared(ps)
    mono = all(b >= a for a, b in zip(sums, sums[1:]))
    rel = (target - sums[-1]) / target
    return mono and sums[-1] <= target * (1 + 1e-12) and rel < 0.02, f"level-16 relative tail {rel:.3g}"


def check_census():
    bad = []
    for name, ps in _sets():
        bad += [f"{name}:{c.name}@{c.level}" for c in census.check_identities(ps, 8) if not c.ok]
    return not bad, ", ".join(bad[:5]) or "all identities exact"


def check_master_chain():
    slack = math.inf
    for name, ps in _sets():
        t = census.master_terms(ps)
        l2 = discrepancy.l2_squared(ps)
        hm = census.hm_rhs(ps)
        if not (l2 >= t.total >= hm - 1e-12):
            return False, name
        slack = min(slack, l2 - t.total)
    return True, f"min slack {slack:.6g}"


def check_bundle_bound():
    rng = np.random.default_rng(11)
    worst = math.inf
    for _ in range(200):
        n = int(rng.integers(2, 200))
        M, kappa = census.dyadic_split(n)
        for level, t in ((M, kappa), (M + 1, kappa - 1)):
            j1 = int(rng.integers(0, level + 1))
            box = haar.DyadicBox.of(j1, level - j1, int(rng.integers(0, 1 << j1)), int(rng.integers(0, 1 << (level - j1))))
            x0, x1, y0, y1 = box.bounds
            z = (float(x0 + (x1 - x0) * Fraction(rng.random())), float(y0 + (y1 - y0) * Fraction(rng.random())))
            far = (float(x1) % 1.0, float(y1) % 1.0)
            pts = [z] + [far if not box.contains(far) else (0.999999, 0.999999)] * (n - 1)
            ps = pointset.PointSet(pts)
            if sum(box.contains(p) for p in ps) != 1:
                continue
            rho = census.rho_bundle(ps, box).rho
            worst = min(worst, 2.0 ** (2 * level) * rho - bounds.gamma(t))
    return worst >= 0, f"min margin {worst:.3g}"


def check_universal_bound():
    low = math.inf
    for _, ps in _sets():
        low = min(low, discrepancy.normalized_ratio(ps))
    return low >= C_BAR, f"min normalized ratio {low:.6g}"


def check_constants():
    r = bounds.theorem_constants(grid=1025)
    ok = (
        r.delta_min == Fraction(317, 172032)
        and abs(r.c_bar_lower - 0.0515599) < 1e-6
        and abs(r.b_bar_lower - 0.0610739) < 1e-6
        and abs(r.kappa0 - 0.5705243) < 1e-5
    )
    return ok, f"c={r.c_bar_lower:.7g} b={r.b_bar_lower:.7g} kappa0={r.kappa0:.7g}"


def check_diagonal():
    for k in (-1.0, -0.5, 0.0, 0.5, 0.99):
        bounds.certify_diagonal(k, n=600, tol=1e-6)
    return True, "no off-diagonal minimum found"


CHECKS = {
    "pointsets": check_pointsets,
    "l2_exact_vs_float": check_l2_exact_vs_float,
    "l2_oracle": check_l2_oracle,
    "haar_closed_forms": check_haar_closed_forms,
    "parseval": check_parseval,
    "census_identities": check_census,
    "master_chain": check_master_chain,
    "bundle_bound": check_bundle_bound,
    "universal_bound": check_universal_bound,
    "constants": check_constants,
    "diagonal_certificate": check_diagonal,
}


def run_all():
    """Yield ``(name, ok, detail)`` per check; exceptions count as failures."""
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, bool(ok), detail
