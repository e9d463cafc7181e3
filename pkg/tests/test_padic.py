from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatdens.padic import (
    PAdicConfig,
    PrecisionError,
    enumerate_residues,
    enumerate_units,
    is_prime,
    phi,
    phi_inverse,
    smallest_nonresidue,
    unit_count,
)


def test_config_rejects_bad_primes():
    for p in (2, 4, 9, 1):
        with pytest.raises(ValueError):
            PAdicConfig(p)
    with pytest.raises(ValueError):
        PAdicConfig(3, eps_sq=1)


def test_smallest_nonresidue():
    assert [smallest_nonresidue(p) for p in (3, 5, 7, 11, 13)] == [2, 2, 3, 2, 2]
    assert is_prime(101) and not is_prime(91)


def test_generator_relations(cfg3):
    p, e = cfg3.p, cfg3.eps_sq
    eps, Pi = cfg3.eps(), cfg3.Pi()
    assert eps * eps == cfg3.quat(e)
    assert Pi * Pi == cfg3.quat(p)
    assert eps * Pi == -(Pi * eps)
    assert cfg3.Pi_power(3) == Pi * Pi * Pi


def test_residue_and_unit_counts(cfg3, cfg5):
    assert sum(1 for _ in enumerate_residues(cfg3, 1)) == 81
    assert sum(1 for _ in enumerate_units(cfg3, 1)) == 72 == unit_count(3, 1)
    assert sum(1 for _ in enumerate_residues(cfg5, 1)) == 625
    assert sum(1 for _ in enumerate_units(cfg5, 1)) == 600 == unit_count(5, 1)


def test_unit_norms_equidistribute(cfg3):
    # Nrd maps units of O/P^2 onto (Z/3)^x, 36 units over each class
    counts = {}
    for u in enumerate_units(cfg3, 1):
        counts[u.nrd() % 3] = counts.get(u.nrd() % 3, 0) + 1
    assert counts == {1: 36, 2: 36}


def test_ring_laws_exhaustive_level_one(cfg3):
    res = list(enumerate_residues(cfg3, 1))
    for x, y in product(res, res):
        assert (x * y).star() == y.star() * x.star()
        assert phi(x * y) == phi(x) * phi(y)
        assert (x * y).nrd() % 3 == x.nrd() * y.nrd() % 3
        assert (x + y).trd() % 3 == (x.trd() + y.trd()) % 3


def test_nrd_trd_are_central(cfg3):
    rng = random.Random(7)
    for _ in range(200):
        x = cfg3.quat(*(rng.randrange(27) for _ in range(4)), level=3)
        n = x * x.star()
        t = x + x.star()
        assert n.is_central() and n.a == x.nrd()
        assert t.is_central() and t.a == x.trd()
        assert phi(x).det().x % 27 == x.nrd() and phi(x).trace().x % 27 == x.trd()


quat_coords = st.tuples(*(st.integers(0, 8) for _ in range(4)))


@settings(max_examples=200, deadline=None)
@given(quat_coords, quat_coords, quat_coords)
def test_ring_laws_random_level_two(a, b, c):
    cfg = PAdicConfig(3)
    x, y, z = (cfg.quat(*t, level=2) for t in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).star() == y.star() * x.star()
    assert x.star().star() == x
    assert phi(x * y) == phi(x) * phi(y)
    assert phi_inverse(phi(x)) == x


def test_pi_valuation(cfg3):
    assert cfg3.one(2).pi_valuation() == 0
    assert cfg3.Pi(2).pi_valuation() == 1
    assert cfg3.quat(3, level=2).pi_valuation() == 2
    assert cfg3.quat(0, 0, 3, 0, level=3).pi_valuation() == 3
    assert cfg3.eps(2).is_unit() and not cfg3.Pi(2).is_unit()


def test_levels_do_not_mix(cfg3):
    with pytest.raises(PrecisionError):
        cfg3.one(1) + cfg3.one(2)
    assert cfg3.quat(10, level=2).reduce(1) == cfg3.quat(1, level=1)
