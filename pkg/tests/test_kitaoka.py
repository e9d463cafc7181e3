from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatdens import kitaoka as K
from quatdens.forms import diagonal


def test_unit_form_series_matches_closed_expansion(cfg3):
    got = K.kitaoka_series(diagonal(cfg3, [1]), (0, 0), 6)
    assert got.complete and got.series == K.remark_series(3, 6)
    assert got.series.coeffs[:3] == (Fraction(8, 9), Fraction(296, 243), Fraction(8072, 6561))


def test_brute_path_agrees_on_first_terms(cfg3):
    rec = K.kitaoka_series(diagonal(cfg3, [1]), (0, 0), 2)
    br = K.kitaoka_series(diagonal(cfg3, [1]), (0, 0), 2, path="brute")
    assert br.complete and br.series == rec.series


def test_quaternion_denominator():
    d = K.denominator_quaternion(1, 2, 3)
    assert d.coeffs == (1, Fraction(-28, 27), Fraction(1, 27))
    assert d.degree == 2
    assert K.denominator_quaternion(1, 1, 3).factors == ((Fraction(1, 3), 1), (Fraction(1), 1))
    with pytest.raises(ValueError):
        K.denominator_quaternion(2, 1, 3)


def test_appendix_denominators():
    assert K.denominator_appendix("S-general", 2, 3, 3).degree == 5
    assert K.denominator_appendix("R-general", 1, 2, 3).degree == 3
    assert K.denominator_appendix("U", 1, 1, 3).factors[0][0] == -1
    assert K.denominator_appendix("R-split", 1, 1, 3).factors[0][0] == Fraction(1, 3)
    assert K.denominator_appendix("S-even", 1, 2, 3, eps_A=-1).factors[0][0] == -1
    with pytest.raises(ValueError):
        K.denominator_appendix("S-even", 1, 3, 3, eps_A=1)
    with pytest.raises(ValueError):
        K.denominator_appendix("X", 1, 1, 3)


@pytest.mark.parametrize("b,alpha", [(1, (0,)), (3, (0,)), (1, (0, 0)), (3, (1, 1)), (1, (2, 0))])
def test_rationality_and_negative_control(cfg3, b, alpha):
    den = K.denominator_quaternion(1, len(alpha), 3)
    R = den.degree + 4
    s = K.kitaoka_series(diagonal(cfg3, [b]), alpha, R).series
    assert K.rationality_check(s, den, 4).verdict == "pass"
    assert K.rationality_check(s.perturb(R), den, 4).verdict == "fail"


def test_short_series_is_inconclusive(cfg3):
    s = K.kitaoka_series(diagonal(cfg3, [1]), (0, 0), 3).series
    assert K.rationality_check(s, K.denominator_quaternion(1, 2, 3), 4).verdict == "inconclusive"
    with pytest.raises(ValueError):
        K.rationality_check(s, K.denominator_quaternion(1, 2, 3), 0)


def test_minimality_probe_records_observations(cfg3):
    den = K.denominator_quaternion(1, 2, 3)
    s = K.kitaoka_series(diagonal(cfg3, [1]), (0, 0), 6).series
    assert K.minimality_probe([s], den, 4) == {0: True, 1: True}


coef = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=1, max_size=3), st.lists(coef, min_size=1, max_size=2))
def test_rational_expansion_roundtrip(num, tail):
    den = K.denominator_quaternion(1, 2, 3)
    s = K.RatSeries.from_rational(num, den.coeffs, 8)
    v = K.rationality_check(s, den, 4)
    assert v.verdict == "pass"
    assert K._trim(v.numerator) == K._trim(tuple(num) + (Fraction(0),) * 3)[: len(v.numerator)]


def test_needs_m_at_least_n(cfg3):
    with pytest.raises(ValueError):
        K.kitaoka_series(diagonal(cfg3, [1, 1]), (0,), 2)
