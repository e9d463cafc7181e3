"""Exact elements of Z[zeta] for zeta a primitive p^level-th root of unity.

Character sums are never evaluated numerically: an oracle counts how often
each residue t mod p^level occurs and the sum is the element sum c_t zeta^t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class NotRationalError(ArithmeticError):
    """A character sum that should be rational is not; signals an arithmetic bug."""


@dataclass(frozen=True)
class Cyclo:
    """sum_t coeffs[t] zeta^t with t in Z/p^level (redundant spanning set)."""

    p: int
    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.p**self.level:
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def from_counts(cls, p: int, level: int, counts: Sequence[int] | np.ndarray) -> "Cyclo":
        return cls(p, level, tuple(int(c) for c in counts))

    @classmethod
    def from_values(cls, p: int, level: int, values: Iterable[int]) -> "Cyclo":
        M = p**level
        counts = np.bincount(np.mod(np.fromiter(values, dtype=np.int64), M), minlength=M)
        return cls.from_counts(p, level, counts)

    @classmethod
    def constant(cls, p: int, level: int, c: int) -> "Cyclo":
        v = [0] * p**level
        v[0] = c
        return cls(p, level, tuple(v))

    @property
    def modulus(self) -> int:
        return self.p**self.level

    def __add__(self, other: "Cyclo") -> "Cyclo":
        self._check(other)
        return Cyclo(self.p, self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "Cyclo") -> "Cyclo":
        """Product in Z[zeta]: cyclic convolution of count vectors."""
        self._check(other)
        a = np.array(self.coeffs, dtype=object)
        out = np.zeros(self.modulus, dtype=object)
        for s, cs in enumerate(other.coeffs):
            if cs:
                out += cs * np.roll(a, s)
        return Cyclo(self.p, self.level, tuple(int(x) for x in out))

    def _check(self, other: "Cyclo") -> None:
        if (self.p, self.level) != (other.p, other.level):
            raise ValueError("cyclotomic elements of different conductors")

    def galois(self, u: int) -> "Cyclo":
        """Apply zeta -> zeta^u for u prime to p."""
        if u % self.p == 0:
            raise ValueError("u must be prime to p")
        M = self.modulus
        out = [0] * M
        for t, c in enumerate(self.coeffs):
            out[t * u % M] += c
        return Cyclo(self.p, self.level, tuple(out))

    def reduce(self) -> tuple[int, ...]:
        """Coordinates in the power basis zeta^0 .. zeta^(phi - 1).

        Each relation sum_j zeta^(s + j p^(level-1)) = 0 removes one index
        s + (p-1) p^(level-1) from the top range, which leaves the power basis.
        """
        p, L = self.p, self.level
        step = p ** (L - 1)
        phi = (p - 1) * step
        c = list(self.coeffs)
        for s in range(step):
            top = s + (p - 1) * step
            k = c[top]
            if k:
                for j in range(p):
                    c[s + j * step] -= k
        assert all(x == 0 for x in c[phi:])
        return tuple(c[:phi])

    def is_zero(self) -> bool:
        return not any(self.reduce())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self.p, self.level) == (other.p, other.level) and self.reduce() == other.reduce()

    def __hash__(self) -> int:
        return hash((self.p, self.level, self.reduce()))

    def is_galois_fixed(self) -> bool:
        r = self.reduce()
        return all(self.galois(u).reduce() == r for u in range(2, self.modulus) if u % self.p)

    def class_constant(self) -> bool:
        """Raw coefficients are constant on each valuation class {t : v_p(t) = k}."""
        seen: dict[int, int] = {}
        for t, c in enumerate(self.coeffs):
            k = _vp(t, self.p, self.level)
            if seen.setdefault(k, c) != c:
                return False
        return True

    def rational_part(self) -> int:
        """The integer value, or NotRationalError when the element is not in Z."""
        r = self.reduce()
        if any(r[1:]):
            raise NotRationalError(f"character sum is not rational: {r}")
        return r[0]

    def class_value(self) -> int:
        """Value of a class-constant vector: c(v=L) - c(v=L-1), other Ramanujan sums vanish."""
        if not self.class_constant():
            raise NotRationalError("coefficients are not constant on valuation classes")
        c0 = self.coeffs[0]
        c1 = self.coeffs[self.p ** (self.level - 1)] if self.level >= 1 else 0
        return c0 - c1


def _vp(t: int, p: int, cap: int) -> int:
    if t == 0:
        return cap
    v = 0
    while t % p == 0:
        t //= p
        v += 1
    return v


def character_sum(p: int, level: int, counts: Sequence[int] | np.ndarray) -> int:
    """sum_t counts[t] chi(t) for chi a character of Z/p^level nontrivial on p^(level-1)."""
    return Cyclo.from_counts(p, level, counts).rational_part()


def to_fraction(x: int | Fraction) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)
