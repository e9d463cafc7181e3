from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from quatdens import gauss as G
from quatdens import kernels
from quatdens.forms import INF, canonical_form, enumerate_Lambda, build_H, H_partition
from quatdens.padic import PAdicConfig


def test_elementary_closed_forms():
    assert G.I_closed(0, 3) == 1
    assert G.I_closed(-2, 3) == Fraction(-1, 3)
    assert G.J_closed(-3, 5) == Fraction(1, 625)
    with pytest.raises(ValueError):
        G.I_closed(-1, 3)


@pytest.mark.parametrize("q", [3, 5])
def test_elementary_oracles(q):
    cfg = PAdicConfig(q)
    for a in (-4, -2, 0, 2):
        assert G.I_oracle(cfg, a) == G.I_closed(a, q)
    for b in range(-4, 3):
        assert G.J_oracle(cfg, b) == G.J_closed(b, q)


def test_known_values(cfg3):
    assert G.finite_gauss_closed((0,), (0,), 1, 3) == -27
    assert G.gauss_closed((0,), (-2,), 3) == Fraction(-1, 3)
    assert G.gauss_closed((1, 1), (-2,), 3) == 1
    assert G.gauss_integral_oracle(cfg3, (0,), (-2,)) == Fraction(-1, 3)
    assert G.gauss_integral_oracle(cfg3, (1, 1), (-2,)) == 1
    one = canonical_form(cfg3, (0,), 1)
    assert G.gauss_oracle(one, one, 1) == -27


def test_degenerate_sentinel_is_skipped():
    assert G.gauss_closed((INF, 0), (0,), 3) == G.gauss_closed((0,), (0,), 3)
    assert G.finite_gauss_closed((INF,), (0,), 1, 3) == 3**4


def test_block_oracle_matches_full_enumeration(cfg3):
    parts = enumerate_Lambda(1, 2) + enumerate_Lambda(2, 2)
    for alpha in parts:
        for beta in parts:
            if len(alpha) * len(beta) > 2:
                continue
            A, C = canonical_form(cfg3, alpha, 1), canonical_form(cfg3, beta, 1)
            assert G.gauss_oracle_blocks(A, C, 1) == G.gauss_oracle(A, C, 1) == \
                G.finite_gauss_closed(alpha, beta, 1, 3)


def test_block_oracle_level_two(cfg3):
    for alpha in ((2,), (0,), (3, 3), (1, 1)):
        for beta in ((0,), (2,), (4,)):
            A, C = canonical_form(cfg3, alpha, 2), canonical_form(cfg3, beta, 2)
            assert G.gauss_oracle_blocks(A, C, 2) == G.finite_gauss_closed(alpha, beta, 2, 3)


def test_nrd_counts_total_and_classes(cfg3):
    c = G.nrd_counts(cfg3, 1)
    assert c == [9, 36, 36]
    assert sum(G.nrd_counts(cfg3, 2)) == 3**8


def test_split_bilinear_counts_agree(cfg5):
    M = 5
    rng = random.Random(5)
    for _ in range(5):
        w = cfg5.quat(*(rng.randrange(M) for _ in range(4)), level=1)
        zf = lambda X: G._rmul(kernels.star(X), w, cfg5, M)  # noqa: E731
        assert G.bilinear_counts_split(cfg5, 1, zf) == G.bilinear_counts(cfg5, 1, zf)


def test_scaling_identity_on_grid():
    for q in (3, 5):
        for m in (1, 2):
            for n in (1, 2):
                for alpha in enumerate_Lambda(m, 2):
                    for beta in enumerate_Lambda(n, 2):
                        lhs = G.finite_gauss_closed(alpha, beta, 1, q)
                        rhs = Fraction(q) ** (4 * m * n) * G.gauss_closed(G.shift(alpha, -2), beta, q)
                        assert lhs == rhs


def test_integral_oracle_random(cfg3):
    rng = random.Random(11)
    for _ in range(15):
        alpha = tuple(sorted((rng.choice((-2, 0, 2)) for _ in range(rng.randint(1, 2))), reverse=True))
        beta = (rng.choice((-4, -2, 0, 2)),)
        assert G.gauss_integral_oracle(cfg3, alpha, beta) == G.gauss_closed(alpha, beta, 3)


def test_hyperbolic_product_formula():
    for lam in ((0,), (1,), (2, 1), (2, 2, 0)):
        for beta in ((0,), (-2,), (-4,), (-1, -1), (-3, -3), (0, -2)):
            h = G.gauss_Hlam(lam, beta, 3)
            assert h.value == G.gauss_closed(H_partition(lam), beta, 3)


def test_hyperbolic_block_oracle(cfg3):
    # h^1 against <1>: hyperbolic blocks handled by the off-diagonal kernel
    H = build_H(cfg3, (1,), 1)
    C = canonical_form(cfg3, (0,), 1)
    assert G.gauss_oracle_blocks(H, C, 1) == G.gauss_oracle(H, C, 1) == G.finite_gauss_closed((1, 1), (0,), 1, 3)


def test_tau_sigma_and_nu():
    assert G.tau_sigma((0, -2, -5, -5)) == ((5, 5, 2), (4, 4, 1))
    assert G.nu((0, -2, -3, -3), 3) == 3**8


def test_estimate_holds_off_gap_and_fails_inside():
    assert G.gauss_estimate_holds((0,), (-2,), 3)
    assert G.gauss_estimate_holds((2, 0), (-4, -6), 3)
    # max alpha < -1 with an integral beta
    assert not G.gauss_estimate_holds((-6, -6, -6), (4,), 3)
    with pytest.raises(ValueError):
        G.estimate_bound((INF,), (0,), 3)
