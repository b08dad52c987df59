import sys

import numpy as np
import pytest

from l2disc import PointSet, fibonacci_lattice, hammersley, random_uniform

C_BAR = 0.0515599


def corpus(max_n=4096):
    """Every structured and random set used in the sweeps, with 2 <= N <= max_n."""
    sets = []
    for n in range(1, 13):
        if 2 ** n <= max_n:
            sets.append((f"hammersley({n})", hammersley(n)))
    for k in range(3, 21):
        for sym in (False, True):
            ps = fibonacci_lattice(k, symmetrize=sym)
            if 2 <= ps.N <= max_n:
                sets.append((f"fibonacci({k},{sym})", ps))
    rng = np.random.default_rng(2024)
    sizes = sorted({2, 3, 5, 7, 17, 100, 255, 257, 1000, max_n} | set(rng.integers(2, max_n, 10).tolist()))
    for i, n in enumerate(s for s in sizes if s <= max_n):
        sets.append((f"random({n},{i})", random_uniform(int(n), seed=i)))
    sets.append(("duplicates", PointSet([(0, 0)] * 2)))
    sets.append(("cluster", PointSet((rng.random((64, 2)) * 0.01).tolist())))
    return sets


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(max_n=256)


def one_point_configuration(rng, max_n=512):
    """(points, box, M, kappa, level): a box of level M or M+1 holding exactly one point."""
    from l2disc.census import dyadic_split
    from l2disc.haar import DyadicBox

    n = int(rng.integers(2, max_n + 1))
    M, kappa = dyadic_split(n)
    level = M + int(rng.integers(0, 2))
    j1 = int(rng.integers(0, level + 1))
    box = DyadicBox.of(j1, level - j1, int(rng.integers(0, 2 ** j1)), int(rng.integers(0, 2 ** (level - j1))))
    x0, x1, y0, y1 = (float(b) for b in box.bounds)
    if rng.random() < 0.1:
        # land on quarter lines and corners as well
        z = (x0 + (x1 - x0) * rng.integers(0, 4) / 4, y0 + (y1 - y0) * rng.integers(0, 4) / 4)
    else:
        z = (x0 + (x1 - x0) * rng.random(), y0 + (y1 - y0) * rng.random())
    others = []
    while len(others) < n - 1:
        cand = rng.random((n, 2))
        others += [tuple(c) for c in cand if not box.contains(tuple(c))]
    return PointSet([z] + others[: n - 1]), box, M, kappa, level
