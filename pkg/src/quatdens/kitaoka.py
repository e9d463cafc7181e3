"""Truncated Kitaoka series and their denominator polynomials.

P(B, A; X) = sum_r mu(p^r B, A) X^r.  A series is certified rational
against a candidate denominator when the product with the denominator has a
block of trailing zero coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .density import min_level, mu_brute, mu_reconstructed
from .forms import DEFAULT_BUDGET, BudgetError, HermMat, canonical_form, check_lambda


def _trim(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RatSeries:
    """c_0 + c_1 X + ... + c_R X^R, exact through degree R."""

    coeffs: tuple[Fraction, ...]

    @property
    def R(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "RatSeries") -> "RatSeries":
        R = min(self.R, other.R)
        return RatSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(R + 1)))

    def mul_poly(self, poly: Sequence[Fraction]) -> "RatSeries":
        out = [Fraction(0)] * (self.R + 1)
        for i, a in enumerate(poly):
            if a:
                for j in range(self.R + 1 - i):
                    out[i + j] += a * self.coeffs[j]
        return RatSeries(tuple(out))

    def perturb(self, index: int, delta: Fraction = Fraction(1)) -> "RatSeries":
        c = list(self.coeffs)
        c[index] += delta
        return RatSeries(tuple(c))

    @classmethod
    def from_rational(cls, num: Sequence[Fraction], den: Sequence[Fraction], R: int) -> "RatSeries":
        """Expand num/den through degree R; den[0] must be nonzero."""
        if den[0] == 0:
            raise ZeroDivisionError("constant term of the denominator is zero")
        out: list[Fraction] = []
        for k in range(R + 1):
            s = Fraction(num[k]) if k < len(num) else Fraction(0)
            for i in range(1, min(k, len(den) - 1) + 1):
                s -= den[i] * out[k - i]
            out.append(s / den[0])
        return cls(tuple(out))


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


@dataclass(frozen=True)
class DenomPoly:
    """prod (1 - c X^k) over ``factors`` = ((c, k), ...)."""

    case: str
    factors: tuple[tuple[Fraction, int], ...]

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        out: tuple[Fraction, ...] = (Fraction(1),)
        for c, k in self.factors:
            out = poly_mul(out, (Fraction(1),) + (Fraction(0),) * (k - 1) + (-c,))
        return out

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.factors)

    def without(self, index: int) -> "DenomPoly":
        f = self.factors[:index] + self.factors[index + 1:]
        return DenomPoly(f"{self.case}-drop{index}", f)


def _qpow(q: int, e: int) -> Fraction:
    return Fraction(q) ** e


def denominator_quaternion(n: int, m: int, q: int) -> DenomPoly:
    """prod_{i=0..n} (1 - q^((n-i)(2n+2i-2m-1)) X)."""
    if not m >= n >= 1:
        raise ValueError("need m >= n >= 1")
    return DenomPoly("quaternion", tuple((_qpow(q, (n - i) * (2 * n + 2 * i - 2 * m - 1)), 1)
                                         for i in range(n + 1)))


APPENDIX_CASES = ("S-even", "S-general", "U", "R-split", "R-general")


def denominator_appendix(case: str, n: int, m: int, q: int, eps_A: Optional[int] = None) -> DenomPoly:
    """Denominators for symmetric (S), unramified (U) and ramified (R) hermitian forms.

    "R-split" is the ramified case where -1 is a square mod p or m is even.
    """
    if not m >= n >= 1:
        raise ValueError("need m >= n >= 1")
    if case == "S-even":
        if eps_A not in (1, -1):
            raise ValueError("S-even needs eps_A = +1 or -1")
        if m % 2:
            raise ValueError("S-even needs even m")
        f = []
        for i in range(n + 1):
            e2 = (n + i - m + 1) * (n - i)
            assert e2 % 2 == 0
            f.append((Fraction(eps_A) ** (n - i) * _qpow(q, e2 // 2), 1))
        return DenomPoly(case, tuple(f))
    if case == "S-general":
        return DenomPoly(case, ((Fraction(1), 1),) + tuple(
            (_qpow(q, (n - i) * (n + i - m + 1)), 2) for i in range(n)))
    if case == "U":
        return DenomPoly(case, tuple(((-1) ** (m * (n - i)) * _qpow(q, (n - i) * (n + i - m)), 1)
                                     for i in range(n + 1)))
    if case == "R-split":
        return DenomPoly(case, tuple((_qpow(q, (n - i) * (n + i - m - 1)), 1) for i in range(n + 1)))
    if case == "R-general":
        return DenomPoly(case, ((Fraction(1), 1),) + tuple(
            (_qpow(q, 2 * (n - i) * (n + i - m - 1)), 2) for i in range(n)))
    raise ValueError(f"unknown case {case!r}; expected one of {APPENDIX_CASES}")


@dataclass(frozen=True)
class SeriesResult:
    series: RatSeries
    requested: int
    levels: tuple[int, ...]
    complete: bool


def kitaoka_series(B: HermMat, alpha: Sequence[int], R: int, path: str = "reconstructed",
                   budget: Optional[int] = DEFAULT_BUDGET) -> SeriesResult:
    """c_r = mu(p^r B, pi^alpha) for r = 0..R; stops early (complete=False) on budget."""
    alpha = check_lambda(alpha)
    if len(alpha) < B.n:
        raise ValueError("the Kitaoka series needs m >= n")
    q = B.cfg.p
    coeffs: list[Fraction] = []
    levels: list[int] = []
    for r in range(R + 1):
        Br = B.scale(q**r)
        try:
            if path == "reconstructed":
                res = mu_reconstructed(Br, alpha, budget=budget)
                coeffs.append(res.value)
                levels.append(res.ell)
            elif path == "brute":
                A = canonical_form(B.cfg, alpha)
                start = min_level(Br)
                res = mu_brute(Br, A, start + 1, start, budget)
                if not res.stabilized:
                    break
                coeffs.append(res.value)
                levels.append(res.ell_used)
            else:
                raise ValueError(f"unknown path {path!r}")
        except BudgetError:
            break
    return SeriesResult(RatSeries(tuple(coeffs)), R, tuple(levels), len(coeffs) == R + 1)


@dataclass(frozen=True)
class RationalityVerdict:
    verdict: str  # "pass", "fail" or "inconclusive"
    product: tuple[Fraction, ...]
    numerator: tuple[Fraction, ...]
    first_nonzero: Optional[int]


def rationality_check(series: RatSeries, denom: DenomPoly, window: int) -> RationalityVerdict:
    """Multiply by the denominator; the last ``window`` coefficients must vanish.

    Needs R >= deg(denom) + window, else the verdict is inconclusive.  The
    numerator is the product truncated before the window, not reduced.
    """
    if window < 1:
        raise ValueError("window must be positive")
    prod = series.mul_poly(denom.coeffs).coeffs
    cut = series.R - window
    if series.R < denom.degree + window:
        return RationalityVerdict("inconclusive", prod, _trim(prod), None)
    bad = [i for i in range(cut + 1, series.R + 1) if prod[i] != 0]
    if bad:
        return RationalityVerdict("fail", prod, _trim(prod), bad[0])
    return RationalityVerdict("pass", prod, _trim(prod[:cut + 1]), None)


def minimality_probe(instances: Sequence[RatSeries], denom: DenomPoly, window: int) -> dict[int, bool]:
    """For each factor: does dropping it make some instance fail?"""
    out = {}
    for i in range(len(denom.factors)):
        d = denom.without(i)
        out[i] = any(rationality_check(s, d, window).verdict == "fail" for s in instances)
    return out


def remark_series(q: int, R: int) -> RatSeries:
    """(1 - q^-2)(1 + (1+q^-1)/(1-q^-3) X/(1-X) - (1+q^-2)/(1-q^-3) q^-4 X/(1-q^-3 X)), expanded."""
    Q = Fraction(1, q)
    c1 = (1 + Q) / (1 - Q**3)
    c2 = (1 + Q**2) / (1 - Q**3) * Q**4
    out = []
    for r in range(R + 1):
        v = Fraction(1) if r == 0 else c1 - c2 * Q ** (3 * (r - 1))
        out.append((1 - Q**2) * v)
    return RatSeries(tuple(out))


__all__ = [
    "APPENDIX_CASES", "DenomPoly", "RatSeries", "RationalityVerdict", "SeriesResult",
    "denominator_appendix", "denominator_quaternion", "kitaoka_series", "minimality_probe",
    "poly_mul", "rationality_check", "remark_series",
]
