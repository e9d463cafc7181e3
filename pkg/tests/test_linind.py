from __future__ import annotations

from fractions import Fraction

import pytest

from quatdens import linind as L
from quatdens.density import count_N
from quatdens.forms import block_sum, build_H, diagonal, h_block


def test_expansion_exact_at_level_one(cfg3):
    r = L.verify_expansion(cfg3, 4, 1, 1)
    assert r.all_zero and len(r.taus) == 2
    assert all(len(v) == 3 for v in r.residuals.values())
    # mu(<1>, H^lam) = 1 - 3^-8 9^#(lam_i >= 1)
    assert r.taus == [(1,), (0,)]
    assert r.fits["0"] == [Fraction(-1, 6561), Fraction(1)]


def test_expansion_exact_at_level_two(cfg3):
    r = L.verify_expansion(cfg3, 4, 2, 1)
    assert r.all_zero
    assert all(len(v) == 12 for v in r.residuals.values())


def test_empty_T_set(cfg3):
    r = L.verify_expansion(cfg3, 4, 1, 1, T_set={})
    assert r.fits == {} and r.residuals == {} and r.all_zero


@pytest.mark.parametrize("ell", [1, 2])
def test_rank_matches_binomial(cfg3, ell):
    rk = L.rank_check(cfg3, 4, ell, 1)
    assert rk.rank == rk.basis_rank == rk.expected_rank == ell + 1
    assert rk.verdict == "pass"


def test_small_T_set_is_inconclusive(cfg3):
    rk = L.rank_check(cfg3, 4, 2, 1, T_set={"0": diagonal(cfg3, [1])})
    assert rk.verdict == "inconclusive" and rk.rank == 1


def test_duplicate_rows_do_not_raise_rank():
    rows = [[Fraction(1), Fraction(2)], [Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert L.exact_rank(rows) == 1
    assert L.exact_rank([]) == 0


def test_guard(cfg3):
    assert L.guard_holds(4, 1, 0) and not L.guard_holds(3, 1, 0) and L.guard_holds(3, 1, 1)
    with pytest.raises(L.GuardError):
        L.rank_check(cfg3, 3, 1, 1)
    forced = L.rank_check(cfg3, 3, 1, 1, force=True)
    assert forced.caveat is not None


def test_gauss_side_ranks():
    assert L.gauss_independence_check(2, 1, 1).rank == 2
    assert L.gauss_independence_check(2, 2, 1).rank == 3
    assert L.gauss_independence_check(2, 2, 1, sigma_set=[(0,)]).reduced_rank == 1
    g = L.gauss_independence_check(4, 2, 1, S=(0,))
    assert g.consistent and g.rank == g.reduced_rank == 3


def test_density_and_gauss_ranks_agree(cfg3):
    for ell in (1, 2):
        assert L.rank_check(cfg3, 4, ell, 1).rank == L.gauss_independence_check(4, ell, 1).rank


def test_padding_order_leaves_counts_unchanged(cfg3):
    B = diagonal(cfg3, [1])
    a = block_sum(cfg3, [h_block(cfg3, 1), h_block(cfg3, 0)])
    b = block_sum(cfg3, [h_block(cfg3, 0), h_block(cfg3, 1)])
    for ell in (1, 2):
        assert count_N(B, a, ell, "strict") == count_N(B, b, ell, "strict") == \
            count_N(B, build_H(cfg3, (1, 0)), ell, "strict")
