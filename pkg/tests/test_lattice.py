import random

import pytest

from src.algebra.exactnum import Coefficient
from src.ideals.lattice import Lattice
from tests.helpers import cases


def test_six_smooth_entries_are_units():
    lat = Lattice(1)
    lat.add({0: 12})
    assert lat.reduce({0: 1}).is_zero


def test_gcd_of_non_units():
    lat = Lattice(1)
    lat.add({0: 5})
    assert not lat.reduce({0: 1}).is_zero
    assert lat.reduce({0: 10}).is_zero
    lat.add({0: 7})
    assert lat.rank == 1
    assert lat.reduce({0: 1}).is_zero


def test_echelon_membership():
    lat = Lattice(3)
    assert lat.add({0: 5, 1: 1})
    assert lat.add({1: 7, 2: 2})
    assert not lat.add({0: 10, 1: 9, 2: 2})
    assert lat.reduce({0: 10, 1: 2}).is_zero
    assert not lat.reduce({0: 10, 1: 3}).is_zero
    assert lat.pivots() == [0, 1]


def test_provenance_reconstructs_the_vector():
    lat = Lattice(2, track=True)
    lat.add({0: 5, 1: 1}, key="a")
    lat.add({0: 7, 1: 2}, key="b")
    red = lat.reduce({0: 1, 1: 1})
    assert red.is_zero
    comb = lat.combination(red)
    rows = {"a": (5, 1), "b": (7, 2)}
    total = [0, 0]
    for key, c in comb.items():
        total = [t + (c * v).to_fraction() for t, v in zip(total, rows[key])]
    assert total == [1, 1]


def _random_rows(rng, count, ncols, spread=40):
    rows = []
    for _ in range(count):
        support = rng.sample(range(ncols), rng.randint(1, ncols))
        rows.append({k: rng.randint(-spread, spread) for k in support})
    return rows


def _assert_reduced(lat):
    pivots = lat.pivots()
    for c, row in lat.hermite_rows():
        p = row[c]
        assert p.numerator > 0
        assert p.numerator % 2 and p.numerator % 3 and p.exp2 == 0 and p.exp3 == 0
        for d in pivots:
            if d == c or d not in row:
                continue
            x = row[d].to_fraction()
            assert x.denominator == 1 and 0 <= x < lat.pivot(d)


@pytest.mark.parametrize("seed", range(cases(20)))
def test_basis_stays_in_reduced_hermite_form(seed):
    rng = random.Random(seed)
    lat = Lattice(6)
    for vec in _random_rows(rng, 8, 6):
        lat.add(vec)
        _assert_reduced(lat)


@pytest.mark.parametrize("seed", range(cases(20)))
def test_hermite_form_does_not_depend_on_insertion_order(seed):
    rng = random.Random(1000 + seed)
    rows = _random_rows(rng, 5, 6)
    first, second = Lattice(6), Lattice(6)
    for vec in rows:
        first.add(vec)
    shuffled = list(rows)
    rng.shuffle(shuffled)
    for vec in shuffled:
        second.add(vec)
    assert first.hermite_rows() == second.hermite_rows()


def test_hermite_rows_of_a_non_unit_pivot():
    lat = Lattice(2)
    lat.add({0: 5, 1: 40})
    lat.add({1: 35})
    assert lat.hermite_rows() == [(0, {0: Coefficient(5), 1: Coefficient(5)}), (1, {1: Coefficient(35)})]


def test_entries_stay_small_on_a_long_insertion():
    rng = random.Random(7)
    ncols = 30
    lat = Lattice(ncols)
    for vec in _random_rows(rng, 4 * ncols, ncols, spread=10 ** 6):
        lat.add(vec)
    # full rank, so the reduced form is the identity
    assert lat.rank == ncols
    assert all(row == {c: Coefficient(1)} for c, row in lat.hermite_rows())
