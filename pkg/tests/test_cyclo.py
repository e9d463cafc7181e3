from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatdens.cyclo import Cyclo, NotRationalError, character_sum


def test_uniform_counts_vanish():
    assert character_sum(3, 2, [1] * 9) == 0
    assert character_sum(5, 1, [2] * 5) == 0


def test_constant_and_ramanujan_sums():
    assert Cyclo.constant(3, 2, 7).rational_part() == 7
    # units of Z/9 sum to the Ramanujan sum c_9(1) = 0; the multiples of 3 give -1
    units = Cyclo.from_values(3, 2, [t for t in range(9) if t % 3])
    assert units.rational_part() == 0
    mult = Cyclo.from_values(3, 2, [3, 6])
    assert mult.rational_part() == -1
    assert mult.class_value() == -1


def test_irrational_raises():
    with pytest.raises(NotRationalError):
        Cyclo.from_values(3, 1, [1]).rational_part()
    assert not Cyclo.from_values(5, 1, [1]).is_galois_fixed()
    assert Cyclo.from_values(5, 1, [1, 2, 3, 4]).is_galois_fixed()


def test_reduce_length():
    z = Cyclo.from_values(3, 2, range(9))
    assert len(z.reduce()) == 6 and z.is_zero()


counts = st.lists(st.integers(-4, 4), min_size=9, max_size=9)


@settings(max_examples=100, deadline=None)
@given(counts, counts, st.sampled_from([1, 2, 4, 5, 7, 8]))
def test_ring_structure(a, b, u):
    x, y = Cyclo(3, 2, tuple(a)), Cyclo(3, 2, tuple(b))
    assert x * y == y * x
    assert (x + y).galois(u) == x.galois(u) + y.galois(u)
    assert (x * y).galois(u) == x.galois(u) * y.galois(u)
    assert x * Cyclo.constant(3, 2, 1) == x
