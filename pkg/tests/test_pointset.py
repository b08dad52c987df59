from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2disc import DomainError, PointParseError, PointSet, SizeLimitError
from l2disc.pointset import fibonacci, fibonacci_lattice, hammersley, load, random_uniform, save


def test_hammersley_small():
    assert list(hammersley(0)) == [(0, 0)]
    assert list(hammersley(2)) == [(0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(1, 4)), (F(3, 4), F(3, 4))]


def test_hammersley_three_by_hand():
    # radical inverses of 0..7: 0, 4, 2, 6, 1, 5, 3, 7 (eighths)
    expected = [(F(i, 8), F(r, 8)) for i, r in enumerate([0, 4, 2, 6, 1, 5, 3, 7])]
    assert list(hammersley(3)) == expected


@pytest.mark.parametrize("n", range(13))
def test_hammersley_distinct_and_in_range(n):
    P = hammersley(n).array
    assert ((P >= 0) & (P < 1)).all()
    assert len(np.unique(P, axis=0)) == 2 ** n


def test_hammersley_guard():
    with pytest.raises(SizeLimitError):
        hammersley(31)
    with pytest.raises(SizeLimitError):
        hammersley(-1)


def test_fibonacci_numbers():
    assert [fibonacci(k) for k in range(1, 11)] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_fibonacci_lattice_examples():
    assert list(fibonacci_lattice(5)) == [(0, 0), (F(1, 5), F(3, 5)), (F(2, 5), F(1, 5)), (F(3, 5), F(4, 5)), (F(4, 5), F(2, 5))]
    assert list(fibonacci_lattice(2)) == [(0, 0)]


def test_fibonacci_symmetrized():
    ps = fibonacci_lattice(5, symmetrize=True)
    assert ps.N == 10
    assert (F(1, 5), F(2, 5)) in list(ps)
    # the origin reflects to (0, 1), folded back to (0, 0): a duplicate
    assert list(ps).count((0, 0)) == 2


@pytest.mark.parametrize("k", range(2, 22))
def test_fibonacci_lattice_denominators(k):
    ps = fibonacci_lattice(k)
    f = fibonacci(k)
    assert ps.N == f
    assert all(f % c.denominator == 0 for p in ps for c in p)
    assert all(0 <= c < 1 for p in ps for c in p)


def test_fibonacci_guard():
    with pytest.raises(SizeLimitError):
        fibonacci_lattice(36)
    with pytest.raises(SizeLimitError):
        fibonacci_lattice(1)


def test_random_uniform():
    a = random_uniform(5, seed=42)
    assert list(a) == list(random_uniform(5, seed=42))
    assert list(a) != list(random_uniform(5, seed=43))
    one = random_uniform(1, seed=9)
    assert 0 <= one[0].x < 1 and 0 <= one[0].y < 1
    big = random_uniform(1000, seed=7).array
    assert abs(big[:, 0].mean() - 0.5) < 0.05
    with pytest.raises(DomainError):
        random_uniform(0)


def test_pointset_rejects_out_of_range():
    with pytest.raises(DomainError):
        PointSet([(1, 0.5)])
    with pytest.raises(DomainError):
        PointSet([(0.5, -0.1)])
    with pytest.raises(DomainError):
        PointSet([])


def test_load_formats(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("# comment\n1/4 1/2\n0.25   0.5\n\n")
    ps = load(path)
    assert ps[0] == (F(1, 4), F(1, 2)) and isinstance(ps[0].x, F)
    assert ps[1] == (0.25, 0.5) and isinstance(ps[1].x, float)
    assert not ps.exact


def test_load_errors(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("1 0.5\n")
    with pytest.raises(DomainError):
        load(path)
    path.write_text("0.1 0.2\n0.1 zz\n")
    with pytest.raises(PointParseError) as info:
        load(path)
    assert info.value.lineno == 2
    path.write_text("0.1 0.2 0.3\n")
    with pytest.raises(PointParseError):
        load(path)
    path.write_text("3/2 0\n")
    with pytest.raises(DomainError):
        load(path)


def test_round_trip_exact(tmp_path):
    for ps in (hammersley(5), fibonacci_lattice(9, symmetrize=True)):
        save(ps, tmp_path / "x.txt")
        back = load(tmp_path / "x.txt")
        assert back.exact and list(back) == list(ps)


def test_round_trip_float(tmp_path):
    ps = random_uniform(50, seed=3)
    save(ps, tmp_path / "x.txt")
    assert list(load(tmp_path / "x.txt")) == list(ps)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.fractions(0, 1, max_denominator=1000), st.fractions(0, 1, max_denominator=1000))
                .filter(lambda p: p[0] < 1 and p[1] < 1), min_size=1, max_size=20))
def test_round_trip_property(tmp_path_factory, pts):
    ps = PointSet(pts)
    path = tmp_path_factory.mktemp("rt") / "p.txt"
    save(ps, path)
    assert list(load(path)) == list(ps)
