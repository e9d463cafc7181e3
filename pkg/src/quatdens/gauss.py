"""Gauss sums over quaternion hermitian forms: closed forms and exact oracles.

Closed forms take exponent partitions (Pi-exponents, INF for a zero
divisor).  Oracles enumerate residues, collect the count vector of the
character argument and resolve it in :class:`~quatdens.cyclo.Cyclo`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .cyclo import Cyclo
from .forms import (DEFAULT_BUDGET, INF, Exponent, HermMat, canonical_form,
                    check_budget, check_lambda, column_space, conjugate, pair_histogram,
                    pair_partitions, residues_array)
from .padic import PAdicConfig, QuatRes

# ---------------------------------------------------------------- closed forms


def I_closed(a: int, q: int) -> Fraction:
    """(-q)^min(0, a+1) for even a."""
    if a % 2:
        raise ValueError(f"I(a) needs even a, got {a}")
    return Fraction(-q) ** min(0, a + 1)


def J_closed(b: int, q: int) -> Fraction:
    return Fraction(q) ** (2 * min(0, b + 1))


def _pair_terms(alpha: Sequence[Exponent], beta: Sequence[Exponent]):
    for a in alpha:
        for b in beta:
            if a is INF or b is INF:
                continue
            yield a, b


def gauss_closed(alpha: Sequence[Exponent], beta: Sequence[Exponent], q: int) -> Fraction:
    """(-1)^c prod_{i,j} q^min(0, a_i + b_j + 1); c counts even-even pairs with sum < -1."""
    check_lambda(alpha)
    check_lambda(beta)
    exp = 0
    c = 0
    for a, b in _pair_terms(alpha, beta):
        exp += min(0, a + b + 1)
        if a % 2 == 0 and b % 2 == 0 and a + b < -1:
            c += 1
    return (-1) ** c * Fraction(q) ** exp


def finite_gauss_closed(alpha: Sequence[Exponent], beta: Sequence[Exponent], ell: int,
                        q: int) -> int:
    """S_ell(pi^alpha, pi^beta) = q^(2 ell m n) (-1)^c prod q^min(2 ell, a_i + b_j + 1)."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    alpha, beta = check_lambda(alpha), check_lambda(beta)
    if any(x is not INF and x < 0 for x in (*alpha, *beta)):
        raise ValueError("finite Gauss sums need integral exponents")
    m, n = len(alpha), len(beta)
    exp = 2 * ell * m * n
    c = 0
    for a in alpha:
        for b in beta:
            if a is INF or b is INF:
                exp += 2 * ell
                continue
            exp += min(2 * ell, a + b + 1)
            if a % 2 == 0 and b % 2 == 0 and a + b + 1 < 2 * ell:
                c += 1
    return (-1) ** c * q**exp


def shift(parts: Sequence[Exponent], k: int) -> tuple[Exponent, ...]:
    """Add k to every finite exponent (multiplication by Pi^k when k is even)."""
    return tuple(x if x is INF else x + k for x in parts)


def nu(beta: Sequence[Exponent], q: int) -> Fraction:
    """q^(sum of -b over negative exponents b)."""
    return Fraction(q) ** sum(-b for b in beta if b is not INF and b < 0)


def estimate_bound(alpha: Sequence[Exponent], beta: Sequence[Exponent], q: int) -> Fraction:
    """q^(m n (a_max + 1)) nu[C]^(-m)."""
    if any(a is INF for a in alpha):
        raise ValueError("the estimate needs nondegenerate A")
    m, n = len(alpha), len(beta)
    return Fraction(q) ** (m * n * (max(alpha) + 1)) / nu(beta, q) ** m


def gauss_estimate_holds(alpha: Sequence[Exponent], beta: Sequence[Exponent], q: int) -> bool:
    return abs(gauss_closed(alpha, beta, q)) <= estimate_bound(alpha, beta, q)


@dataclass(frozen=True)
class HlamGauss:
    """G(H^lam, pi^beta) with its exponent data."""

    value: Fraction
    tau: tuple[int, ...]
    sigma: tuple[int, ...]
    pair: int  # <lam-hat, sigma-hat>
    sigma_size: int


def tau_sigma(beta: Sequence[Exponent]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """tau = negated negative exponents (decreasing), sigma = tau - 1."""
    tau = tuple(sorted((-b for b in beta if b is not INF and b < 0), reverse=True))
    return tau, tuple(t - 1 for t in tau)


def gauss_Hlam(lam: Sequence[int], beta: Sequence[Exponent], q: int) -> HlamGauss:
    """q^(2 <lam-hat, sigma-hat> - 2 k |sigma|) for H^lam against pi^beta."""
    check_lambda(beta)
    k = len(lam)
    tau, sigma = tau_sigma(beta)
    L = max((*lam, *sigma, 0))
    pr = pair_partitions(conjugate(lam, L), conjugate(sigma, L))
    size = sum(sigma)
    return HlamGauss(Fraction(q) ** (2 * pr - 2 * k * size), tau, sigma, pr, size)


# ---------------------------------------------------------------- oracles


def _vp_array(x: np.ndarray, p: int, cap: int) -> np.ndarray:
    out = np.full(x.shape, cap, dtype=np.int64)
    x = x.copy()
    live = x != 0
    out[live] = 0
    for _ in range(cap):
        div = live & (x % p == 0)
        if not div.any():
            break
        out[div] += 1
        x[div] //= p
        live = div
    return out


def _pairs(p: int, level: int) -> np.ndarray:
    M = p**level
    return np.indices((M, M)).reshape(2, -1).T.astype(np.int64)


def nrd_counts(cfg: PAdicConfig, level: int) -> list[int]:
    """#{x in O/P^(2 level) : Nrd x = t} for each t mod p^level.

    Nrd(a, b, c, d) = (a^2 - e b^2) - p (c^2 - e d^2) separates into two
    coordinate pairs, so the distribution is the convolution of two pair
    distributions.
    """
    p, e, M = cfg.p, cfg.eps_sq, cfg.p**level
    ab = _pairs(p, level)
    n1 = np.mod(ab[:, 0] ** 2 - e * ab[:, 1] ** 2, M)
    h1 = Cyclo.from_counts(p, level, np.bincount(n1, minlength=M))
    h2 = Cyclo.from_counts(p, level, np.bincount(np.mod(-p * n1, M), minlength=M))
    return list((h1 * h2).coeffs)


def _trd_form_valuation(z: np.ndarray, p: int, e: int, level: int) -> np.ndarray:
    """Valuation of the linear form y -> Trd(z y) mod p^level, per row of z.

    Trd(z y) = 2 (z_a y_a + e z_b y_b + p z_c y_c - p e z_d y_d); with 2 and e
    units the image of the form is p^k Z/p^level for the returned k.
    """
    M = p**level
    coef = np.stack([z[:, 0], z[:, 1], p * z[:, 2], p * z[:, 3]], axis=1) % M
    return _vp_array(coef, p, level).min(axis=1)


def _fibre_counts(p: int, level: int, khist: Sequence[int], ydim: int) -> list[int]:
    """Counts of Trd(z y) values given #x per form valuation k, y over ydim coordinates."""
    M = p**level
    out = [0] * M
    for k, nx in enumerate(khist):
        if not nx:
            continue
        per = nx * p ** (ydim * level - (level - k))
        for t in range(0, M, p**k):
            out[t] += per
    return out


def bilinear_counts(cfg: PAdicConfig, level: int, zfun) -> list[int]:
    """Counts of Trd(z(x) y) for x, y over O/P^(2 level); zfun maps (N, 4) to (N, 4)."""
    p, M = cfg.p, cfg.p**level
    X = residues_array(p, level)
    k = _trd_form_valuation(np.mod(zfun(X), M), p, cfg.eps_sq, level)
    return _fibre_counts(p, level, np.bincount(k, minlength=level + 1).tolist(), 4)


def bilinear_counts_split(cfg: PAdicConfig, level: int, zfun) -> list[int]:
    """As :func:`bilinear_counts` for linear zfun whose (a, b) and (c, d) parts of x
    land on disjoint coordinates of z; then the form valuation is a minimum of
    two independent pieces and only q^(2 level) pairs are enumerated per piece.
    """
    p, M = cfg.p, cfg.p**level
    P = _pairs(p, level)
    zero = np.zeros_like(P)
    z1 = np.mod(zfun(np.concatenate([P, zero], axis=1)), M)
    z2 = np.mod(zfun(np.concatenate([zero, P], axis=1)), M)
    s1, s2 = z1.any(axis=0), z2.any(axis=0)
    if (s1 & s2).any():
        return bilinear_counts(cfg, level, zfun)
    k1 = _trd_form_valuation(z1, p, cfg.eps_sq, level)
    k2 = _trd_form_valuation(z2, p, cfg.eps_sq, level)
    h1 = np.bincount(k1, minlength=level + 1)
    h2 = np.bincount(k2, minlength=level + 1)
    khist = [0] * (level + 1)
    for i in range(level + 1):
        for j in range(level + 1):
            khist[min(i, j)] += int(h1[i]) * int(h2[j])
    return _fibre_counts(p, level, khist, 4)


def _qarr(x: QuatRes) -> np.ndarray:
    return np.array(x.coords, dtype=np.int64)


def _lmul(w: QuatRes, X: np.ndarray, cfg: PAdicConfig, M: int) -> np.ndarray:
    return kernels.qmul(np.broadcast_to(_qarr(w), X.shape), X, cfg.p, cfg.eps_sq, M)


def _rmul(X: np.ndarray, w: QuatRes, cfg: PAdicConfig, M: int) -> np.ndarray:
    return kernels.qmul(X, np.broadcast_to(_qarr(w), X.shape), cfg.p, cfg.eps_sq, M)


def I_oracle_level(a: int) -> int:
    return max(1, ceil(-a / 2) + 1)


def J_oracle_level(b: int) -> int:
    return max(1, ceil(-b / 2) + 1)


def I_oracle(cfg: PAdicConfig, a: int) -> Fraction:
    """q^(-4L) sum_x chi_L(p^(L + a/2) Nrd x), exact."""
    if a % 2:
        raise ValueError("I(a) needs even a")
    L = I_oracle_level(a)
    M = cfg.p**L
    counts = nrd_counts(cfg, L)
    scale = cfg.p ** (L + a // 2)
    vec = [0] * M
    for t, c in enumerate(counts):
        vec[t * scale % M] += c
    return Fraction(Cyclo(cfg.p, L, tuple(vec)).rational_part(), cfg.p ** (4 * L))


def J_oracle(cfg: PAdicConfig, b: int) -> Fraction:
    """q^(-8L) sum_{x,y} chi_L(Trd(Pi^(2L + b) x y)), exact."""
    L = J_oracle_level(b)
    M = cfg.p**L
    w = cfg.Pi_power(2 * L + b)
    counts = bilinear_counts_split(cfg, L, lambda X: _lmul(w, X, cfg, M))
    return Fraction(Cyclo(cfg.p, L, tuple(counts)).rational_part(), cfg.p ** (8 * L))


def _pairing_values(cfg: PAdicConfig, diag_x: np.ndarray, diag_y: np.ndarray,
                    codes: np.ndarray, C: HermMat, level: int) -> np.ndarray:
    """<X, C> for 2x2 X given diagonal values and the code of X_12 mod P^(2 level)."""
    p, M = cfg.p, cfg.p**level
    c11, c22 = C.diag_value(0), C.diag_value(1)
    mu = p**level
    d = codes % mu
    c = (codes // mu) % mu
    b = (codes // mu**2) % mu
    a = codes // mu**3
    X12 = np.stack([a, b, c, d], axis=-1)
    tr = 2 * _rmul(X12, C[1, 0], cfg, M)[..., 0]
    return np.mod(c11 * diag_x + c22 * diag_y + tr, M)


def gauss_oracle_cyclo(A: HermMat, C: HermMat, ell: int,
                       budget: Optional[int] = DEFAULT_BUDGET) -> Cyclo:
    """sum over v in M_{m,n}(O/P^(2 ell)) of zeta^<A[v], C>, by direct enumeration."""
    cfg, p = A.cfg, A.cfg.p
    M = p**ell
    m, n = A.n, C.n
    Al = A.reduce(ell) if A.level is None else A
    Cl = C.reduce(ell) if C.level is None else C
    check_budget("Gauss sum enumeration", p ** (4 * ell * m * n), budget)
    if n == 1:
        cols = column_space(p, ell, m)
        diag = kernels.sesq(cols, Al.as_array(), cols, p, cfg.eps_sq, M)[:, 0]
        vals = np.mod(Cl.diag_value(0) * diag, M)
        return Cyclo.from_counts(p, ell, np.bincount(vals, minlength=M))
    if n == 2:
        hist = pair_histogram(Al, ell, 2 * ell, False)
        gx, gy, code = np.nonzero(hist)
        vals = _pairing_values(cfg, gx, gy, code, Cl, ell)
        counts = np.zeros(M, dtype=object)
        np.add.at(counts, vals, hist[gx, gy, code].astype(object))
        return Cyclo.from_counts(p, ell, counts)
    raise NotImplementedError("direct enumeration supports n <= 2; use gauss_oracle_blocks")


def gauss_oracle(A: HermMat, C: HermMat, ell: int, budget: Optional[int] = DEFAULT_BUDGET) -> int:
    return gauss_oracle_cyclo(A, C, ell, budget).rational_part()


@dataclass(frozen=True)
class Block:
    """A diagonal entry (kind "d", central value) or [[0, w], [w^*, 0]] (kind "o")."""

    kind: str
    value: QuatRes

    @property
    def size(self) -> int:
        return 1 if self.kind == "d" else 2


def split_blocks(H: HermMat) -> list[Block]:
    n, out, i = H.n, [], 0
    while i < n:
        off = [j for j in range(n) if j != i and not H[i, j].is_zero()]
        if not off:
            out.append(Block("d", H[i, i]))
            i += 1
        elif off == [i + 1] and H[i, i].is_zero() and H[i + 1, i + 1].is_zero() \
                and all(H[i + 1, j].is_zero() for j in range(n) if j not in (i, i + 1)):
            out.append(Block("o", H[i, i + 1]))
            i += 2
        else:
            raise ValueError("matrix is not a sum of diagonal entries and antidiagonal planes")
    return out


def block_pair_counts(cfg: PAdicConfig, a: Block, c: Block, level: int) -> Cyclo:
    """Count vector of <a[v], c> over v in M_{size a, size c}(O/P^(2 level))."""
    p, M = cfg.p, cfg.p**level
    if a.kind == "d" and c.kind == "d":
        s = a.value.a * c.value.a
        vec = [0] * M
        for t, k in enumerate(nrd_counts(cfg, level)):
            vec[t * s % M] += k
        return Cyclo(p, level, tuple(vec))
    star = kernels.star
    if a.kind == "d":
        # Trd(a x^* y u^*) = Trd((u^* a x^*) y)
        ua = c.value.star() * a.value
        return Cyclo(p, level, tuple(bilinear_counts_split(cfg, level, lambda X: _lmul(ua, star(X), cfg, M))))
    if c.kind == "d":
        # c Trd(x^* w y)
        cw = a.value * c.value
        return Cyclo(p, level, tuple(bilinear_counts_split(cfg, level, lambda X: _rmul(star(X), cw, cfg, M))))
    w, us = a.value, c.value.star()
    # Trd(u^* v11^* w v22) + Trd(u^* v21^* w^* v12)
    one = bilinear_counts_split(cfg, level, lambda X: _rmul(_lmul(us, star(X), cfg, M), w, cfg, M))
    two = bilinear_counts_split(cfg, level, lambda X: _rmul(_lmul(us, star(X), cfg, M), w.star(), cfg, M))
    return Cyclo(p, level, tuple(one)) * Cyclo(p, level, tuple(two))


def gauss_oracle_blocks_cyclo(A: HermMat, C: HermMat, ell: int) -> Cyclo:
    """S_ell(A, C) for block-diagonal A and C, assembled from block pairs.

    <A[v], C> is the sum over block pairs (I, J) of <A_I[v_IJ], C_J> with the
    v_IJ independent, so the count vector is the convolution of the pair
    count vectors.  Each pair is enumerated exactly.
    """
    cfg = A.cfg
    Al = A.reduce(ell) if A.level is None else A
    Cl = C.reduce(ell) if C.level is None else C
    total = Cyclo.constant(cfg.p, ell, 1)
    for a in split_blocks(Al):
        for c in split_blocks(Cl):
            total = total * block_pair_counts(cfg, a, c, ell)
    return total


def gauss_oracle_blocks(A: HermMat, C: HermMat, ell: int) -> int:
    return gauss_oracle_blocks_cyclo(A, C, ell).rational_part()


def integral_levels(alpha: Sequence[Exponent], beta: Sequence[Exponent]) -> tuple[int, int]:
    """(e, L) with beta + 2e and alpha - 2e + 2L integral, L >= 1."""
    fb = [b for b in beta if b is not INF]
    e = max(0, ceil(-min(fb, default=0) / 2))
    fa = [a - 2 * e for a in alpha if a is not INF]
    L = max(1, ceil(-min(fa, default=0) / 2))
    return e, L


def gauss_integral_oracle(cfg: PAdicConfig, alpha: Sequence[Exponent],
                          beta: Sequence[Exponent]) -> Fraction:
    """G(pi^alpha, pi^beta) = q^(-4 L m n) S_L(pi^(alpha - 2e + 2L), pi^(beta + 2e)).

    Moving the central factor p^e from C to A leaves <A[v], C> unchanged; the
    finite sum then realizes the integral at a level where both are integral.
    """
    e, L = integral_levels(alpha, beta)
    A = canonical_form(cfg, shift(alpha, 2 * L - 2 * e), L)
    C = canonical_form(cfg, shift(beta, 2 * e), L)
    S = gauss_oracle_blocks(A, C, L)
    return Fraction(S, cfg.p ** (4 * L * len(alpha) * len(beta)))


__all__ = [
    "Block", "HlamGauss", "I_closed", "I_oracle", "J_closed", "J_oracle", "bilinear_counts",
    "estimate_bound", "finite_gauss_closed", "gauss_Hlam", "gauss_closed", "gauss_estimate_holds",
    "gauss_integral_oracle", "gauss_oracle", "gauss_oracle_blocks", "gauss_oracle_blocks_cyclo",
    "gauss_oracle_cyclo", "nrd_counts", "nu", "shift", "split_blocks", "tau_sigma",
]
