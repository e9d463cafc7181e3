from __future__ import annotations

import random
from itertools import product
from math import comb

import pytest

from quatdens import selftest as ST
from quatdens.forms import (
    INF,
    BudgetError,
    H_partition,
    build_H,
    canonical_form,
    check_lambda,
    conjugate,
    diagonal,
    enumerate_Gamma,
    enumerate_Lambda,
    gl_order,
    is_lambda,
    orbit_enumerate,
    orbit_scalar,
    pair_histogram,
    pairing,
    pairing_phi,
    parse_partition,
    transform,
    unit_norm_image,
)
from quatdens.padic import enumerate_residues


def test_parse_partition_syntax():
    assert parse_partition("2,1,0") == (2, 1, 0)
    assert parse_partition("1^2,0") == (1, 1, 0)
    assert parse_partition("inf,0") == (INF, 0)
    assert parse_partition("-2,-4") == (-2, -4)
    assert parse_partition("") == ()
    with pytest.raises(ValueError):
        parse_partition("1,,2")
    with pytest.raises(ValueError):
        parse_partition("x")


def test_lambda_parity_rule():
    assert is_lambda((2, 1, 1, 0))
    assert not is_lambda((1, 0))
    assert not is_lambda((0, 2))
    assert is_lambda((INF, 3, 3))
    with pytest.raises(ValueError):
        check_lambda((1,))


def test_lambda_enumeration():
    assert enumerate_Lambda(1, 2) == [(2,), (0,)]
    assert enumerate_Lambda(2, 2) == [(2, 2), (2, 0), (1, 1), (0, 0)]
    assert len(enumerate_Lambda(2, 4)) == 8


def test_gamma_counts_and_conjugates():
    for k, ell in product(range(1, 5), range(0, 4)):
        assert len(enumerate_Gamma(k, ell)) == comb(k + ell, k)
    assert conjugate((3, 1, 1)) == (3, 1, 1)
    assert conjugate((2, 2, 0), 3) == (2, 2, 0)
    assert conjugate((4,)) == (1, 1, 1, 1)
    assert H_partition((2, 1, 0)) == (2, 2, 1, 1, 0, 0)


def test_H_matches_canonical_form_up_to_equivalence(cfg3):
    # h^(2e) is p^e times a hyperbolic plane; its strict orbit equals that of p^e 1_2
    for lam in ((0,), (2,), (1,)):
        H = build_H(cfg3, lam, 1)
        C = canonical_form(cfg3, H_partition(lam), 1)
        assert C in orbit_enumerate(H, 1)


def test_canonical_form_blocks(cfg3):
    C = canonical_form(cfg3, (3, 3, 2))
    assert C.is_hermitian()
    assert C[0, 1] == cfg3.Pi_power(3) and C[1, 0] == -cfg3.Pi_power(3)
    assert C.diag_value(2) == 3
    assert canonical_form(cfg3, (INF,)).diag_value(0) == 0
    with pytest.raises(ValueError):
        canonical_form(cfg3, (-2,))


def test_canonical_scaling(cfg3):
    for n in (1, 2, 3):
        for g in enumerate_Lambda(n, 4):
            assert canonical_form(cfg3, tuple(x + 2 for x in g)) == canonical_form(cfg3, g).scale(3)


def test_pairing_properties_exhaustive_n1(cfg3):
    res = list(enumerate_residues(cfg3, 1))
    for a, b in product(range(3), range(3)):
        A, B = diagonal(cfg3, [a], 1), diagonal(cfg3, [b], 1)
        assert pairing(A, B) == pairing(B, A) == pairing_phi(A, B)
        for u in res:
            assert pairing(transform(A, [[u]]), B) == pairing(A, transform(B, [[u.star()]]))


def test_pairing_properties_random_n2(cfg3):
    rng = random.Random(3)
    for _ in range(200):
        A = ST.random_herm(cfg3, rng, 2, 2)
        B = ST.random_herm(cfg3, rng, 2, 2)
        U = [[ST.random_quat(cfg3, rng, 2) for _ in range(2)] for _ in range(2)]
        Ustar = [[U[j][i].star() for j in range(2)] for i in range(2)]
        assert pairing(A, B) == pairing(B, A) == pairing_phi(A, B)
        assert pairing(transform(A, U), B) == pairing(A, transform(B, Ustar))
        assert transform(A, U).is_hermitian()


def test_orbit_scalar_matches_enumeration(cfg3):
    for level in (1, 2):
        for b in range(3**level):
            B = diagonal(cfg3, [b], level)
            full = {h.diag_value(0) for h in orbit_enumerate(B, level)}
            assert full == orbit_scalar(cfg3, b, level)


def test_unit_norms_are_surjective(cfg3):
    assert unit_norm_image(cfg3, 2) == frozenset(u for u in range(9) if u % 3)


def test_gl_order_matches_pair_histogram(cfg3):
    A = canonical_form(cfg3, (0, 0), 1)
    assert pair_histogram(A, 1, 2, True).sum() == gl_order(3, 2, 1) == 37791360
    assert gl_order(3, 1, 1) == 72


def test_orbit_budget(cfg3):
    with pytest.raises(BudgetError):
        orbit_enumerate(canonical_form(cfg3, (0, 0), 2), 2, budget=10**6)
