from __future__ import annotations

from fractions import Fraction

import pytest

from quatdens import density as D
from quatdens.forms import canonical_form, diagonal, enumerate_Lambda, gl_order


def test_normalization_string_mentions_both_counts():
    assert "N_strict" in D.NORMALIZATION and "N_V" in D.NORMALIZATION
    assert D.normalizer(1, 1, 1, 3, "strict") == 3**3
    assert D.normalizer(2, 2, 1, 3, "V") == 3 ** (1 * 2 * 5 + 2)


def test_closed_primitive_counts():
    assert D.closed_Npr((2,), 1, 3) == 72
    assert D.closed_Npr((0,), 1, 3) == 36
    assert D.closed_Npr((2, 0), 1, 3) == 1889568
    assert D.w_factor(2, Fraction(1, 9)) == Fraction(8, 9) * Fraction(80, 81)
    with pytest.raises(ValueError):
        D.closed_Npr((4,), 1, 3)


def test_brute_primitive_counts(cfg3):
    assert D.count_Npr(canonical_form(cfg3, (2,)), 1) == 72
    assert D.count_Npr(canonical_form(cfg3, (0,)), 1) == 36
    assert D.count_Npr(canonical_form(cfg3, (2, 0)), 1) == 1889568
    assert D.count_Npr(canonical_form(cfg3, (0, 0)), 1) == 629856


def test_closed_count_is_scaled_strict_stabilizer(cfg3):
    for g in enumerate_Lambda(1, 2) + enumerate_Lambda(2, 2):
        n = len(g)
        stab = D.stabilizer_strict(canonical_form(cfg3, g), 1)
        assert D.closed_Npr(g, 1, 3) == 3 ** (n * (n - 1)) * stab


def test_closed_count_exceeds_group_order_at_boundary():
    # the closed value cannot count matrices for these gamma
    for g in ((1, 1), (2, 2)):
        assert D.closed_Npr(g, 1, 3) > gl_order(3, 2, 1)


def test_split_identity():
    assert D.splits((2, 0)) == [((2,), (0,))]
    assert D.splits((1, 1)) == []
    f = D.split_factor((2,), (0,), 1, 3)
    assert f * D.closed_Npr((2,), 1, 3) * D.closed_Npr((0,), 1, 3) == D.closed_Npr((2, 0), 1, 3)


def test_shift_identity_n1(cfg3):
    for b in ((0,), (2,)):
        for a in ((0,), (2,), (0, 0), (1, 1)):
            lhs, rhs = D.shift_identity(canonical_form(cfg3, b), canonical_form(cfg3, a), 1, 1)
            assert lhs == rhs


def test_orbit_fourier_of_unit_form(cfg3):
    one = diagonal(cfg3, [1])
    ch = D.orbit_fourier(one, 1)
    assert ch == {(2,): Fraction(2, 3), (0,): Fraction(-1, 3)}
    assert ch == D.orbit_fourier(one, 1, exhaustive=True)
    assert len(D.orbit_character_sum(one, (2,), 1).coeffs) == 3


@pytest.mark.parametrize("b,a,expected", [
    (1, (0,), Fraction(4, 3)),
    (1, (0, 0), Fraction(8, 9)),
    (1, (1, 1), Fraction(0)),
    (3, (0, 0), Fraction(296, 243)),
    (3, (1, 1), Fraction(80, 27)),
    (9, (0,), Fraction(4, 27)),
    (9, (0, 0), Fraction(8072, 6561)),
    (9, (1, 1), Fraction(2240, 729)),
])
def test_density_values_both_paths(cfg3, b, a, expected):
    B = diagonal(cfg3, [b])
    rec = D.mu_reconstructed(B, a)
    start = D.min_level(B)
    br = D.mu_brute(B, canonical_form(cfg3, a), start + 2, start)
    assert rec.value == expected
    assert br.stabilized and br.value == expected


def test_reconstruction_audit_reports_gap(cfg3):
    rec = D.mu_reconstructed(diagonal(cfg3, [1]), (0, 0), audit=True)
    assert rec.audit["strict_stabilizer_value"] == rec.value
    assert rec.audit["q_power_gap"] == 1


def test_full_character_expansion(cfg3):
    for b in (1, 3):
        for a in ((0,), (2,)):
            B, A = diagonal(cfg3, [b]), canonical_form(cfg3, a)
            for ell in (1, 2):
                assert D.fourier_count(B, A, ell) == D.count_N(B, A, ell, "strict")


def test_n_identity_one_pair(cfg3):
    r = D.N_identity(canonical_form(cfg3, (2, 0)), (1, 1), 1)
    assert r.brute == r.fourier_strict == r.fourier_closed


def test_ratio_stability():
    for alpha in ((0, 0), (2, 0), (2, 2, 0)):
        D.ratio_stability_check(alpha, "1", 1, (2, 3), 3)
    D.ratio_stability_check((1, 1, 0, 0), "H", 2, (2, 3), 3)
    with pytest.raises(ValueError):
        D.ratio_stability_check((4,), "1", 1, (1,), 3)


def test_scaling_relation(cfg3):
    for b in (1, 3):
        for a in ((0,), (0, 0)):
            B, A = diagonal(cfg3, [b]), canonical_form(cfg3, a)
            s = D.min_level(B)
            mu = D.mu_brute(B, A, s + 2, s).value
            s3 = D.min_level(B.scale(3))
            mu3 = D.mu_brute(B.scale(3), A.scale(3), s3 + 3, s3).value
            assert mu3 == 3 * mu
