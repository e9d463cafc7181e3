"""Division quaternion algebra over Q_p at finite precision.

Elements are written a + b*eps + c*Pi + d*Pi*eps with eps^2 = eps_sq (a
non-residue unit), Pi^2 = p and eps*Pi = -Pi*eps.  A residue at level l is
known modulo P^(2l) = p^l O, so its four coordinates live in Z/p^l.  Level
``None`` marks an exact element of the order O with integer coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Optional


class PrecisionError(ValueError):
    """Raised when residues of different levels are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def smallest_nonresidue(p: int) -> int:
    for t in range(2, p):
        if pow(t, (p - 1) // 2, p) == p - 1:
            return t
    raise ValueError(f"no quadratic non-residue modulo {p}")


@dataclass(frozen=True)
class PAdicConfig:
    """Base data: the odd prime p (so q = p) and the square of eps."""

    p: int
    eps_sq: int = field(default=0)

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.eps_sq == 0:
            object.__setattr__(self, "eps_sq", smallest_nonresidue(self.p))
        if pow(self.eps_sq % self.p, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"{self.eps_sq} is not a non-residue modulo {self.p}")

    @property
    def q(self) -> int:
        return self.p

    def modulus(self, level: Optional[int]) -> Optional[int]:
        return None if level is None else self.p**level

    def quat(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0,
             level: Optional[int] = None) -> "QuatRes":
        return QuatRes(a, b, c, d, level, self)

    def one(self, level: Optional[int] = None) -> "QuatRes":
        return self.quat(1, 0, 0, 0, level)

    def zero(self, level: Optional[int] = None) -> "QuatRes":
        return self.quat(0, 0, 0, 0, level)

    def eps(self, level: Optional[int] = None) -> "QuatRes":
        return self.quat(0, 1, 0, 0, level)

    def Pi(self, level: Optional[int] = None) -> "QuatRes":
        return self.quat(0, 0, 1, 0, level)

    def Pi_power(self, k: int, level: Optional[int] = None) -> "QuatRes":
        """Pi^k for k >= 0: p^(k//2), times Pi when k is odd."""
        if k < 0:
            raise ValueError("negative powers of Pi are not integral")
        e, odd = divmod(k, 2)
        if odd:
            return self.quat(0, 0, self.p**e, 0, level)
        return self.quat(self.p**e, 0, 0, 0, level)


def qmul_coords(x: tuple[int, int, int, int], y: tuple[int, int, int, int],
                p: int, e: int) -> tuple[int, int, int, int]:
    """Raw product of coordinate tuples, unreduced."""
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 + e * b1 * b2 + p * (c1 * c2 - e * d1 * d2),
        a1 * b2 + b1 * a2 + p * (c1 * d2 - d1 * c2),
        c1 * a2 + e * d1 * b2 + a1 * c2 - e * b1 * d2,
        c1 * b2 + d1 * a2 + a1 * d2 - b1 * c2,
    )


def _vp(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class QuatRes:
    """A quaternion in O/P^(2*level), or in O itself when level is None."""

    a: int
    b: int
    c: int
    d: int
    level: Optional[int]
    cfg: PAdicConfig = field(compare=True, repr=False)

    def __post_init__(self) -> None:
        if self.level is not None:
            if self.level < 0:
                raise ValueError("level must be non-negative")
            m = self.cfg.p**self.level
            for name in "abcd":
                object.__setattr__(self, name, getattr(self, name) % m)

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def _check(self, other: "QuatRes") -> None:
        if self.cfg != other.cfg:
            raise ValueError("residues over different algebras")
        if self.level != other.level:
            raise PrecisionError(f"level mismatch: {self.level} vs {other.level}")

    def _coerce(self, other: object) -> "QuatRes":
        if isinstance(other, QuatRes):
            self._check(other)
            return other
        if isinstance(other, int):
            return QuatRes(other, 0, 0, 0, self.level, self.cfg)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "QuatRes":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuatRes(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d,
                       self.level, self.cfg)

    __radd__ = __add__

    def __neg__(self) -> "QuatRes":
        return QuatRes(-self.a, -self.b, -self.c, -self.d, self.level, self.cfg)

    def __sub__(self, other: object) -> "QuatRes":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "QuatRes":
        return (-self) + other

    def __mul__(self, other: object) -> "QuatRes":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuatRes(*qmul_coords(self.coords, o.coords, self.cfg.p, self.cfg.eps_sq),
                       self.level, self.cfg)

    def __rmul__(self, other: object) -> "QuatRes":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self

    def star(self) -> "QuatRes":
        """The involution a + b eps + c Pi + d Pi eps -> a - b eps - c Pi - d Pi eps."""
        return QuatRes(self.a, -self.b, -self.c, -self.d, self.level, self.cfg)

    def nrd(self) -> int:
        p, e = self.cfg.p, self.cfg.eps_sq
        v = self.a**2 - e * self.b**2 - p * self.c**2 + p * e * self.d**2
        return v if self.level is None else v % p**self.level

    def trd(self) -> int:
        v = 2 * self.a
        return v if self.level is None else v % self.cfg.p**self.level

    def is_central(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def is_zero(self) -> bool:
        return self.coords == (0, 0, 0, 0)

    def is_unit(self) -> bool:
        return self.nrd() % self.cfg.p != 0

    def pi_valuation(self) -> int:
        """Largest v with self in P^v, capped at 2*level (an exact 0 has no cap)."""
        p = self.cfg.p
        if self.level is None:
            if self.is_zero():
                raise ValueError("exact zero has infinite valuation")
            cap = 10**9
        else:
            cap = 2 * self.level
        vu = _vp(self.a, p, cap) if self.b == 0 else min(_vp(self.a, p, cap), _vp(self.b, p, cap))
        vz = _vp(self.c, p, cap) if self.d == 0 else min(_vp(self.c, p, cap), _vp(self.d, p, cap))
        return min(2 * vu, 2 * vz + 1, cap)

    def reduce(self, level: int) -> "QuatRes":
        """Reduce an exact element, or a finer residue, to the given level."""
        if self.level is not None and level > self.level:
            raise PrecisionError(f"cannot lift level {self.level} to {level}")
        return QuatRes(self.a, self.b, self.c, self.d, level, self.cfg)

    def phi(self) -> "PhiImage":
        return phi(self)

    def __repr__(self) -> str:
        return f"QuatRes({self.a}, {self.b}, {self.c}, {self.d}, level={self.level})"


@dataclass(frozen=True)
class GaloisRingElem:
    """x + y*eps in Z/p^level [eps], the unramified quadratic extension ring."""

    x: int
    y: int
    level: Optional[int]
    cfg: PAdicConfig = field(repr=False)

    def __post_init__(self) -> None:
        if self.level is not None:
            m = self.cfg.p**self.level
            object.__setattr__(self, "x", self.x % m)
            object.__setattr__(self, "y", self.y % m)

    def _check(self, other: "GaloisRingElem") -> None:
        if self.level != other.level or self.cfg != other.cfg:
            raise PrecisionError("Galois ring elements at different levels")

    def __add__(self, other: "GaloisRingElem") -> "GaloisRingElem":
        self._check(other)
        return GaloisRingElem(self.x + other.x, self.y + other.y, self.level, self.cfg)

    def __sub__(self, other: "GaloisRingElem") -> "GaloisRingElem":
        self._check(other)
        return GaloisRingElem(self.x - other.x, self.y - other.y, self.level, self.cfg)

    def __neg__(self) -> "GaloisRingElem":
        return GaloisRingElem(-self.x, -self.y, self.level, self.cfg)

    def __mul__(self, other: "GaloisRingElem") -> "GaloisRingElem":
        self._check(other)
        e = self.cfg.eps_sq
        return GaloisRingElem(self.x * other.x + e * self.y * other.y,
                              self.x * other.y + self.y * other.x, self.level, self.cfg)

    def scale(self, k: int) -> "GaloisRingElem":
        return GaloisRingElem(k * self.x, k * self.y, self.level, self.cfg)

    def frobenius(self) -> "GaloisRingElem":
        return GaloisRingElem(self.x, -self.y, self.level, self.cfg)

    def norm(self) -> int:
        v = self.x**2 - self.cfg.eps_sq * self.y**2
        return v if self.level is None else v % self.cfg.p**self.level


@dataclass(frozen=True)
class PhiImage:
    """2x2 matrix [[m11, m12], [m21, m22]] over the Galois ring."""

    m11: GaloisRingElem
    m12: GaloisRingElem
    m21: GaloisRingElem
    m22: GaloisRingElem

    def __mul__(self, o: "PhiImage") -> "PhiImage":
        return PhiImage(self.m11 * o.m11 + self.m12 * o.m21,
                        self.m11 * o.m12 + self.m12 * o.m22,
                        self.m21 * o.m11 + self.m22 * o.m21,
                        self.m21 * o.m12 + self.m22 * o.m22)

    def det(self) -> GaloisRingElem:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> GaloisRingElem:
        return self.m11 + self.m22


def phi(x: QuatRes) -> PhiImage:
    """The embedding a + b eps + c Pi + d Pi eps -> [[a+b eps, (c-d eps)p], [c+d eps, a-b eps]]."""
    lv, cfg = x.level, x.cfg
    g = lambda s, t: GaloisRingElem(s, t, lv, cfg)  # noqa: E731
    return PhiImage(g(x.a, x.b), g(cfg.p * x.c, -cfg.p * x.d), g(x.c, x.d), g(x.a, -x.b))


def phi_inverse(m: PhiImage) -> QuatRes:
    """Read a quaternion back from the first column of its image."""
    return QuatRes(m.m11.x, m.m11.y, m.m21.x, m.m21.y, m.m11.level, m.m11.cfg)


def enumerate_residues(cfg: PAdicConfig, level: int) -> Iterator[QuatRes]:
    if level < 1:
        raise ValueError("level must be >= 1")
    r = range(cfg.p**level)
    for a, b, c, d in product(r, r, r, r):
        yield QuatRes(a, b, c, d, level, cfg)


def enumerate_units(cfg: PAdicConfig, level: int) -> Iterator[QuatRes]:
    for x in enumerate_residues(cfg, level):
        if x.is_unit():
            yield x


def unit_count(q: int, level: int) -> int:
    """|(O/P^(2 level))^x| = q^(4 level) (1 - q^-2)."""
    return q ** (4 * level - 2) * (q * q - 1)
