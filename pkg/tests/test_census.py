from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2disc import DomainError, PointSet, hammersley, random_uniform
from l2disc.bounds import gamma
from l2disc.census import (
    CellIndex,
    check_identities,
    dyadic_split,
    edge_count,
    hm_rhs,
    level_census,
    master_rhs,
    master_terms,
    rho_bundle,
    shape_census,
)
from l2disc.discrepancy import l2_squared
from l2disc.haar import DyadicBox, mu, parseval_partial

from conftest import one_point_configuration
from oracles import brute_level, brute_shape_counts, reversed_sum


def test_dyadic_split():
    assert dyadic_split(2) == (1, 0.0)
    assert dyadic_split(1024) == (10, 0.0)
    M, k = dyadic_split(3)
    assert M == 1 and k == pytest.approx(np.log2(1.5))
    M, k = dyadic_split(2 ** 40 - 1)
    assert M == 39 and 0 < k < 1


def test_shape_census_examples():
    assert shape_census(PointSet([(0, 0)]), (1, 0)).counts == {0: 1, 1: 1}
    assert shape_census(hammersley(2), (1, 1)).counts == {0: 0, 1: 4}
    assert shape_census(PointSet([(0, 0), (0, 0)]), (0, 0)).counts == {0: 0, 2: 1}


def test_shape_census_against_brute_force():
    for ps in (random_uniform(40, 2), hammersley(5), PointSet([(F(1, 2), F(1, 4))] * 3 + [(0.7, 0.2)])):
        for j in ((0, 0), (2, 1), (3, 3), (0, 5), (4, 0)):
            brute = brute_shape_counts(list(ps), *j)
            hist = {}
            for c in brute.values():
                hist[c] = hist.get(c, 0) + 1
            got = {r: a for r, a in shape_census(ps, j).counts.items() if a}
            assert got == hist


def test_level_census_examples():
    c = level_census(PointSet([(0, 0)]), 1)
    assert c.counts == {0: 2, 1: 2}
    assert c.types == (0, 2, 0)
    c = level_census(hammersley(3), 3)
    assert sum(c.counts.values()) == 32
    assert sum(r * a for r, a in c.counts.items()) == 32
    assert level_census(hammersley(3), 0).types is None


@pytest.mark.parametrize("seed", range(6))
def test_level_census_against_brute_force(seed):
    rng = np.random.default_rng(seed)
    ps = random_uniform(int(rng.integers(2, 30)), seed=seed)
    for level in range(6):
        hist, types = brute_level(list(ps), level)
        c = level_census(ps, level)
        assert {r: a for r, a in c.counts.items() if a} == hist
        if level:
            assert c.types == types


def test_boundary_shapes_have_single_parent():
    # one point; the level-1 boxes (1,0) and (0,1) each have only the level-0 parent
    c = level_census(PointSet([(0.3, 0.3)]), 1)
    assert c.types == (0, 2, 0)
    c = level_census(PointSet([(0.3, 0.3)]), 2)
    # (2,0),(0,2) have one one-point parent each; (1,1) has two
    assert c.types == (0, 2, 1)


def test_identities_random_sets():
    rng = np.random.default_rng(99)
    for seed in range(50):
        ps = random_uniform(int(rng.integers(1, 1025)), seed=seed)
        bad = [c for c in check_identities(ps, 8) if not c.ok]
        assert not bad, bad[:3]


def test_edge_count_independent_of_types():
    ps = random_uniform(300, seed=5)
    cells = CellIndex(ps)
    for level in range(9):
        b0, b1, b2 = level_census(ps, level + 1, cells).types
        assert edge_count(ps, level, cells) == b1 + 2 * b2 == 2 * level_census(ps, level, cells).a(1)


def test_exact_cells_on_rational_boundaries():
    # 1/3 and 2/3 never sit on a dyadic line; 1/2 does and belongs to the right/upper box
    ps = PointSet([(F(1, 2), F(1, 3)), (F(2, 3), F(1, 2))])
    assert shape_census(ps, (1, 1)).counts == {0: 2, 1: 2}
    assert DyadicBox.of(1, 1, 1, 0).contains(ps[0])
    assert DyadicBox.of(1, 1, 1, 1).contains(ps[1])


def test_rho_bundle_example():
    ps = PointSet([(F(1, 8), F(1, 8))])
    b = rho_bundle(ps, DyadicBox.of(0, 0, 0, 0))
    # parent: 1/64 - 1/16; children (1,0) and (0,1): (1/8)(1/8) - 1/64 = 0
    assert b.rho == (F(1, 64) - F(1, 16)) ** 2
    assert [c.shape for c in b.children] == [(1, 0), (0, 1)]
    assert all(c.box.contains(ps[0]) for c in [mu(ps, ch) for ch in b.children])


def test_rho_bundle_requires_one_point():
    with pytest.raises(DomainError):
        rho_bundle(PointSet([(0.1, 0.1), (0.2, 0.2)]), DyadicBox.of(0, 0, 0, 0))
    with pytest.raises(DomainError):
        rho_bundle(PointSet([(0.9, 0.9)]), DyadicBox.of(1, 1, 0, 0))


def test_one_point_bundle_bound():
    rng = np.random.default_rng(2718)
    for _ in range(400):
        ps, box, M, kappa, level = one_point_configuration(rng, max_n=300)
        scaled = 2.0 ** (2 * M) * rho_bundle(ps, box).rho
        bound = gamma(kappa) if level == M else gamma(kappa - 1) / 4
        assert scaled >= bound * (1 - 1e-12), (ps.N, box, scaled, bound)


def test_hm_rhs_power_of_two_closed_form():
    # N = 2^M: terms (l+1) 2^l (2^l - 2^M) 2^(2M-4l-8), summed with an independent reversed loop
    for M in (1, 3, 6, 10):
        ps = random_uniform(2 ** M, seed=M)
        terms = [(l + 1) * 2.0 ** l * (2.0 ** l - 2 ** M) * 2.0 ** (2 * M - 4 * l - 8) for l in range(M + 1, M + 200)]
        assert hm_rhs(ps) == pytest.approx(reversed_sum(terms), rel=1e-14)


def test_master_chain_small(small_corpus):
    for name, ps in small_corpus:
        if ps.N < 2:
            continue
        l2 = l2_squared(ps)
        t = master_terms(ps)
        hm = hm_rhs(ps)
        assert l2 >= t.total >= hm - 1e-12, name
        assert t.total >= t.theorem_floor * (1 - 1e-12), name
        assert master_rhs(ps) == t.total >= 0


def test_master_below_truncated_parseval():
    # nested truncations: full norm >= Parseval partial sums >= the part of them the master bound uses
    for ps in (random_uniform(20, 1), hammersley(4)):
        t = master_terms(ps)
        assert l2_squared(ps) >= parseval_partial(ps, 12) >= t.empty


def test_master_domain():
    with pytest.raises(DomainError):
        master_rhs(PointSet([(0.5, 0.5)]))
    with pytest.raises(DomainError):
        hm_rhs(PointSet([(0.5, 0.5)]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 31), st.integers(0, 31)), min_size=1, max_size=60))
def test_identities_on_dyadic_multisets(cells):
    ps = PointSet([(F(a, 32), F(b, 32)) for a, b in cells])
    assert all(c.ok for c in check_identities(ps, 7))
