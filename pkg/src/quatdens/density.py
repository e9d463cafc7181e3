"""Local densities: brute-force counts, closed primitive counts and reconstruction.

Two congruence conditions appear.  "V" counts A[v] - B in V_n(pi, l)
(diagonal in p^l, off-diagonal in P^(2l-1)); "strict" counts A[v] - B in
p^l M_n(O).  The density is normalized as

    mu(B, A) = N_strict / q^(l n (4m - 2n + 1)) = N_V / q^(l n (4m - 2n + 1) + n (n - 1))

for l large enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby, product
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .cyclo import Cyclo
from .forms import (DEFAULT_BUDGET, INF, Exponent, HermMat, canonical_form, check_budget,
                    _invertible_mod_P, check_lambda, column_space, enumerate_Lambda, gl_order,
                    orbit_enumerate, orbit_scalar, pair_histogram, pairing, transform)
from .gauss import finite_gauss_closed, gauss_oracle_blocks_cyclo, nrd_counts, split_blocks
from .padic import _vp

NORMALIZATION = "mu = N_strict(B,A) / q^(l*n*(4m-2n+1)) = N_V(B,A) / q^(l*n*(4m-2n+1) + n*(n-1))"

VARIANTS = ("V", "strict")


def _koff(ell: int, variant: str) -> int:
    if variant == "V":
        return 2 * ell - 1
    if variant == "strict":
        return 2 * ell
    raise ValueError(f"unknown congruence variant {variant!r}")


def _at_level(H: HermMat, ell: int) -> HermMat:
    return H.reduce(ell) if H.level is None or H.level > ell else H


def _off_code(H: HermMat, koff: int) -> int:
    return int(kernels.code_mod_P(np.array(H[0, 1].coords), H.cfg.p, koff))


# ---------------------------------------------------------------- brute counts


def value_counts(A: HermMat, ell: int, budget: Optional[int] = DEFAULT_BUDGET) -> list[int]:
    """#{v in (O/P^(2 ell))^m : A[v] = t} for each t mod p^ell."""
    cfg, p = A.cfg, A.cfg.p
    Al = _at_level(A, ell)
    try:
        split_blocks(Al)
    except ValueError:
        check_budget("column enumeration", p ** (4 * ell * A.n), budget)
        cols = column_space(p, ell, A.n)
        d = kernels.sesq(cols, Al.as_array(), cols, p, cfg.eps_sq, p**ell)[:, 0]
        return np.bincount(d, minlength=p**ell).tolist()
    one = HermMat(((cfg.one(ell),),), ell, cfg)
    return list(gauss_oracle_blocks_cyclo(Al, one, ell).coeffs)


def count_N(B: HermMat, A: HermMat, ell: int, variant: str = "V",
            budget: Optional[int] = DEFAULT_BUDGET) -> int:
    """#{v in M_{m,n}(O/P^(2 ell)) : A[v] - B in V_n(pi, ell)} (or in p^ell M_n(O))."""
    koff = _koff(ell, variant)
    p, n, m = A.cfg.p, B.n, A.n
    Bl, Al = _at_level(B, ell), _at_level(A, ell)
    if n == 1:
        return value_counts(Al, ell, budget)[Bl.diag_value(0)]
    if n == 2:
        check_budget("pair enumeration", p ** (8 * ell * m), budget)
        hist = pair_histogram(Al, ell, koff, False)
        return int(hist[Bl.diag_value(0), Bl.diag_value(1), _off_code(Bl, koff)])
    return _count_naive(Bl, Al, ell, variant, False, budget)


def count_Npr(B: HermMat, ell: int, variant: str = "V",
              budget: Optional[int] = DEFAULT_BUDGET) -> int:
    """#{g in GL_n(O/P^(2 ell)) : B[g] - B in V_n(pi, ell)} (or in p^ell M_n(O))."""
    koff = _koff(ell, variant)
    cfg, p, n = B.cfg, B.cfg.p, B.n
    Bl = _at_level(B, ell)
    M = p**ell
    if n == 1:
        b = Bl.diag_value(0)
        counts = nrd_counts(cfg, ell)
        return sum(c for t, c in enumerate(counts) if t % p and (t * b - b) % M == 0)
    if n == 2:
        check_budget("pair enumeration", p ** (16 * ell), budget)
        hist = pair_histogram(Bl, ell, koff, True)
        return int(hist[Bl.diag_value(0), Bl.diag_value(1), _off_code(Bl, koff)])
    return _count_naive(Bl, Bl, ell, variant, True, budget)


def _count_naive(B: HermMat, A: HermMat, ell: int, variant: str, primitive: bool,
                 budget: Optional[int]) -> int:
    cfg, m, n = A.cfg, A.n, B.n
    M = cfg.p**ell
    check_budget("matrix enumeration", cfg.p ** (4 * ell * m * n), budget)
    total = 0
    for flat in product(range(M), repeat=4 * m * n):
        v = [[cfg.quat(*flat[4 * (i * n + j): 4 * (i * n + j) + 4], level=ell) for j in range(n)]
             for i in range(m)]
        if primitive and not _invertible_mod_P(v):
            continue
        d = transform(A, v) - B
        ok = d.in_V(ell) if variant == "V" else d.in_strict(ell)
        total += ok
    return total


def stabilizer_strict(B: HermMat, ell: int, budget: Optional[int] = DEFAULT_BUDGET) -> int:
    """|GL_n(O/P^(2 ell))| / |strict orbit of B|."""
    orb = orbit_enumerate(B, ell, budget)
    g = gl_order(B.cfg.p, B.n, ell)
    assert g % len(orb) == 0
    return g // len(orb)


# ---------------------------------------------------------------- closed counts


def w_factor(m: int, t: Fraction) -> Fraction:
    """w_m(t) = prod_{i=1..m} (1 - t^i)."""
    out = Fraction(1)
    for i in range(1, m + 1):
        out *= 1 - t**i
    return out


def multiplicities(alpha: Sequence[int]) -> list[tuple[int, int]]:
    """(value, multiplicity) runs of a decreasing partition."""
    return [(v, len(list(g))) for v, g in groupby(alpha)]


def m_exponent(alpha: Sequence[int], ell: int) -> Fraction:
    """l n (2n+1) + n (n-1) + 2 sum (i-1) a_i + |a|/2 + #odd/2."""
    n = len(alpha)
    return (Fraction(ell * n * (2 * n + 1) + n * (n - 1) + 2 * sum(i * a for i, a in enumerate(alpha)))
            + Fraction(sum(alpha), 2) + Fraction(sum(1 for a in alpha if a % 2), 2))


def closed_Npr(alpha: Sequence[int], ell: int, q: int) -> Fraction:
    """Closed primitive count for alpha in Lambda_{n, 2 ell}^+."""
    alpha = check_lambda(alpha)
    if any(a is INF or a < 0 or a > 2 * ell for a in alpha):
        raise ValueError(f"{alpha} is not in Lambda^+_(n, 2 ell) for ell = {ell}")
    out = Fraction(1)
    for v, k in multiplicities(alpha):
        if v == 2 * ell:
            out *= w_factor(k, Fraction(1, q * q))
        elif v % 2 == 0:
            out *= w_factor(k, Fraction(-1, q))
        else:
            out *= w_factor(k // 2, Fraction(1, q**4))
    e = m_exponent(alpha, ell)
    if e.denominator != 1:
        raise ValueError("multiplicity data gives a non-integral exponent")
    return out * Fraction(q) ** int(e)


# ---------------------------------------------------------------- orbit transforms


def stable_level(gamma: Sequence[Exponent]) -> int:
    """Smallest l at which the orbit of pi^gamma is a union of V_n(pi, l) cosets."""
    top = max((g for g in gamma if g is not INF), default=0)
    return top // 2 + 1


def orbit_character_sum(B: HermMat, gamma: Sequence[int], ell: int, exhaustive: bool = False,
                        budget: Optional[int] = DEFAULT_BUDGET) -> Cyclo:
    """sum over z in the strict orbit of B of zeta^<pi^gamma, z>, as a Cyclo."""
    cfg, p = B.cfg, B.cfg.p
    M = p**ell
    if B.n == 1 and not exhaustive:
        scale = p ** (gamma[0] // 2)
        vals = [scale * z % M for z in orbit_scalar(cfg, _at_level(B, ell).diag_value(0), ell)]
        return Cyclo.from_values(p, ell, vals)
    G = canonical_form(cfg, gamma, ell)
    return Cyclo.from_values(p, ell, (pairing(G, z) for z in orbit_enumerate(B, ell, budget)))


def orbit_fourier(B: HermMat, ell: int, exhaustive: bool = False,
                  budget: Optional[int] = DEFAULT_BUDGET) -> dict[tuple[int, ...], Fraction]:
    """(ch_B)^_ell(pi^gamma) = q^(-l n (2n-1)) sum_{z ~ B} chi(<pi^gamma, z>) for gamma in Lambda_{n,2l}^+."""
    n, q = B.n, B.cfg.p
    norm = q ** (ell * n * (2 * n - 1))
    out = {}
    for g in enumerate_Lambda(n, 2 * ell):
        s = orbit_character_sum(B, g, ell, exhaustive, budget).rational_part()
        out[g] = Fraction(s, norm)
    return out


# ---------------------------------------------------------------- densities


@dataclass(frozen=True)
class DensityResult:
    value: Fraction
    ell_used: int
    stabilized: bool
    path: str
    history: tuple[Fraction, ...] = field(default=())


def normalizer(n: int, m: int, ell: int, q: int, variant: str = "strict") -> int:
    e = ell * n * (4 * m - 2 * n + 1)
    if variant == "V":
        e += n * (n - 1)
    return q**e


def mu_brute(B: HermMat, A: HermMat, max_ell: int, start: Optional[int] = None,
             budget: Optional[int] = DEFAULT_BUDGET) -> DensityResult:
    """Normalized strict counts at successive levels until two agree."""
    n, m, q = B.n, A.n, B.cfg.p
    if start is None:
        start = min_level(B)
    hist: list[Fraction] = []
    for ell in range(start, max_ell + 1):
        val = Fraction(count_N(B, A, ell, "strict", budget), normalizer(n, m, ell, q))
        hist.append(val)
        if len(hist) >= 2 and hist[-1] == hist[-2]:
            return DensityResult(val, ell, True, "brute", tuple(hist))
    if not hist:
        raise ValueError("empty level range")
    return DensityResult(hist[-1], start + len(hist) - 1, False, "brute", tuple(hist))


def min_level(B: HermMat) -> int:
    """Level at which B is visibly nondegenerate, from its diagonal (n = 1) or entries."""
    if B.level is not None:
        raise ValueError("B must be exact to choose a level")
    if B.n == 1:
        b = B.diag_value(0)
        if b == 0:
            raise ValueError("B is degenerate")
        return _vp(b, B.cfg.p, 10**9) + 1
    vals = [B[i, j].pi_valuation() for i in range(B.n) for j in range(B.n) if not B[i, j].is_zero()]
    return max(vals) // 2 + 1


@dataclass(frozen=True)
class Reconstruction:
    value: Fraction
    ell: int
    n_BB: int
    terms: dict
    audit: Optional[dict] = None


def mu_reconstructed(B: HermMat, alpha: Sequence[int], ell: Optional[int] = None,
                     audit: bool = False, budget: Optional[int] = DEFAULT_BUDGET) -> Reconstruction:
    """q^(-l n (4m-2n+1) - n(n-1)) N_l(B,B) sum_gamma S_l(A, pi^gamma) / N^pr_l(pi^gamma) (ch_B)^(pi^gamma).

    N_l(B, B) is the brute V-count; N^pr is the closed primitive count.
    With ``audit`` the same sum is also formed with brute strict
    stabilizers, and the q-power separating the two is reported.
    """
    alpha = check_lambda(alpha)
    n, m, q = B.n, len(alpha), B.cfg.p
    if ell is None:
        ell = min_level(B)
    ch = orbit_fourier(B, ell, budget=budget)
    nbb = count_N(B, B, ell, "V", budget)
    terms = {}
    total = Fraction(0)
    for g, f in ch.items():
        s = finite_gauss_closed(alpha, g, ell, q)
        t = Fraction(s) / closed_Npr(g, ell, q) * f
        terms[g] = t
        total += t
    value = total * nbb / Fraction(q) ** (ell * n * (4 * m - 2 * n + 1) + n * (n - 1))
    report = None
    if audit:
        stab_total = sum(Fraction(finite_gauss_closed(alpha, g, ell, q),
                                  stabilizer_strict(canonical_form(B.cfg, g), ell, budget)) * f
                         for g, f in ch.items())
        strict_value = stab_total * stabilizer_strict(B, ell, budget) / normalizer(n, m, ell, q)
        ratios = {g: closed_Npr(g, ell, q) / stabilizer_strict(canonical_form(B.cfg, g), ell, budget)
                  for g in ch}
        report = {"strict_stabilizer_value": strict_value,
                  "closed_over_strict_stabilizer": ratios,
                  "q_power_gap": value / strict_value if strict_value else None}
    return Reconstruction(value, ell, nbb, terms, report)


@dataclass(frozen=True)
class NIdentity:
    """Both sides of N_l(B, A) = Stab(B) sum_gamma S_l(A, pi^gamma) / Stab(pi^gamma) (ch_B)^(pi^gamma)."""

    brute: int
    fourier_strict: Fraction
    fourier_closed: Fraction


def N_identity(B: HermMat, alpha: Sequence[int], ell: int,
               budget: Optional[int] = DEFAULT_BUDGET) -> NIdentity:
    """The V-count of B by pi^alpha, directly and through orbit transforms.

    The right side groups the character sum over V_n(O)/p^l V_n(O) by
    GL_n-orbits; it holds at every level, stabilized or not.  The closed
    variant divides by closed_Npr and multiplies by q^(n(n-1)) Stab(B).
    """
    cfg, q, n = B.cfg, B.cfg.p, B.n
    A = canonical_form(cfg, alpha)
    brute = count_N(B, A, ell, "V", budget)
    ch = orbit_fourier(B, ell, budget=budget)
    sb = stabilizer_strict(B, ell, budget)
    strict = Fraction(0)
    closed = Fraction(0)
    for g, f in ch.items():
        s = finite_gauss_closed(alpha, g, ell, q)
        strict += Fraction(s, stabilizer_strict(canonical_form(cfg, g), ell, budget)) * f
        closed += Fraction(s) / closed_Npr(g, ell, q) * f
    return NIdentity(brute, strict * sb, closed * sb * q ** (n * (n - 1)))


def fourier_count(B: HermMat, A: HermMat, ell: int, budget: Optional[int] = DEFAULT_BUDGET) -> Fraction:
    """q^(-l n (2n-1)) sum_y sum_v chi(<A[v] - B, y>) for n = m = 1, y over Z/p^l.

    Every character sum is accumulated as a Cyclo count vector.
    """
    if B.n != 1:
        raise NotImplementedError("the full character expansion is enumerated for n = 1 only")
    cfg, p = B.cfg, B.cfg.p
    M = p**ell
    dist = value_counts(A, ell, budget)
    b = _at_level(B, ell).diag_value(0)
    total = Cyclo.constant(p, ell, 0)
    for y in range(M):
        vec = [0] * M
        for t, c in enumerate(dist):
            vec[(t - b) * y % M] += c
        total = total + Cyclo(p, ell, tuple(vec))
    # single characters need not be rational; the sum over y is
    return Fraction(total.rational_part(), M)


def ratio_stability_check(alpha: Sequence[int], target: str, n: int, ells: Sequence[int],
                          q: int) -> Fraction:
    """S_l(A, T) / N_l(T, T) / q^(l n (2m - 2n - 1)) for T = 1_n or H_(n/2); must not depend on l."""
    alpha = check_lambda(alpha)
    m = len(alpha)
    if target == "1":
        gamma = (0,) * n
    elif target == "H":
        if n % 2:
            raise ValueError("H_(n/2) needs even n")
        gamma = (1,) * n
    else:
        raise ValueError("target must be '1' or 'H'")
    amax = max(alpha)
    vals = set()
    for ell in ells:
        if 2 * ell < amax + 2:
            raise ValueError(f"level {ell} violates 2l >= alpha_max + 2")
        r = Fraction(finite_gauss_closed(alpha, gamma, ell, q)) / closed_Npr(gamma, ell, q)
        vals.add(r / Fraction(q) ** (ell * n * (2 * m - 2 * n - 1)))
    if len(vals) != 1:
        raise AssertionError(f"ratio is not stable: {sorted(vals)}")
    return vals.pop()


def shift_identity(B: HermMat, A: HermMat, ell: int, e: int,
                   budget: Optional[int] = DEFAULT_BUDGET) -> tuple[int, int]:
    """(N_(l+e)(p^e B, p^e A), q^(4 e m n) N_l(B, A)), both V-counts."""
    q = B.cfg.p
    lhs = count_N(B.scale(q**e), A.scale(q**e), ell + e, "V", budget)
    rhs = q ** (4 * e * A.n * B.n) * count_N(B, A, ell, "V", budget)
    return lhs, rhs


def split_factor(beta: Sequence[int], gamma: Sequence[int], ell: int, q: int) -> int:
    i, n = len(beta), len(beta) + len(gamma)
    return q ** ((4 * ell + 2) * i * (n - i) + 2 * i * sum(gamma))


def splits(alpha: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All alpha = beta gamma with beta_i > gamma_1, both parts valid partitions."""
    out = []
    for i in range(1, len(alpha)):
        b, g = tuple(alpha[:i]), tuple(alpha[i:])
        if b[-1] > g[0]:
            out.append((b, g))
    return out


__all__ = [
    "DensityResult", "NIdentity", "NORMALIZATION", "Reconstruction", "closed_Npr", "count_N",
    "count_Npr", "fourier_count", "m_exponent", "mu_brute", "mu_reconstructed", "multiplicities",
    "N_identity", "normalizer", "orbit_character_sum", "orbit_fourier", "ratio_stability_check",
    "shift_identity", "split_factor", "splits", "stabilizer_strict", "stable_level", "value_counts",
    "w_factor",
]
