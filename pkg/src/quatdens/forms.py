"""Hermitian matrices over O, partitions and orbit enumeration.

Exponents are Pi-exponents throughout.  An even exponent 2e stands for the
diagonal entry p^e; an odd exponent 2e+1 occurs in equal pairs and stands for
the block [[0, p^e Pi], [-p^e Pi, 0]].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernels
from .padic import PAdicConfig, PrecisionError, QuatRes, unit_count


class BudgetError(RuntimeError):
    """An enumeration would exceed the configured operation budget."""

    def __init__(self, what: str, cost: int, budget: int):
        super().__init__(f"{what}: estimated cost {cost:.3g} exceeds budget {budget:.3g}")
        self.cost = cost
        self.budget = budget


DEFAULT_BUDGET = 10**8


def check_budget(what: str, cost: int, budget: Optional[int]) -> None:
    if budget is not None and cost > budget:
        raise BudgetError(what, cost, budget)


class _Infinity:
    """Exponent of the degenerate divisor 0 = Pi^inf; absorbs finite sums."""

    _inst: Optional["_Infinity"] = None

    def __new__(cls) -> "_Infinity":
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __add__(self, other: object) -> "_Infinity":
        return self

    __radd__ = __add__

    def __sub__(self, other: object) -> "_Infinity":
        return self

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self) -> str:
        return "INF"


INF = _Infinity()
Exponent = Union[int, _Infinity]


# ---------------------------------------------------------------- partitions

def is_decreasing(parts: Sequence[Exponent]) -> bool:
    return all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))


def is_lambda(parts: Sequence[Exponent]) -> bool:
    """Decreasing, and every odd finite value occurs an even number of times."""
    if not is_decreasing(parts):
        return False
    for v in set(parts):
        if v is not INF and v % 2 == 1 and parts.count(v) % 2:
            return False
    return True


def check_lambda(parts: Sequence[Exponent]) -> tuple[Exponent, ...]:
    parts = tuple(parts)
    if not is_lambda(parts):
        raise ValueError(f"invalid elementary-divisor partition {parts}")
    return parts


def enumerate_Lambda(n: int, bound: int, low: int = 0) -> list[tuple[int, ...]]:
    """All gamma in Lambda_n with low <= gamma_i <= bound, largest first."""
    out = []
    for c in combinations_with_replacement(range(bound, low - 1, -1), n):
        if is_lambda(c):
            out.append(tuple(c))
    return out


def enumerate_Gamma(k: int, ell: int) -> list[tuple[int, ...]]:
    """Decreasing k-tuples with entries in [0, ell]; there are C(k+ell, k)."""
    out = [tuple(c) for c in combinations_with_replacement(range(ell, -1, -1), k)]
    assert len(out) == comb(k + ell, k)
    return out


def conjugate(lam: Sequence[int], length: Optional[int] = None) -> tuple[int, ...]:
    """lam-hat_i = #{j : lam_j >= i} for i = 1..length (default max(lam))."""
    if any(x < 0 for x in lam):
        raise ValueError("conjugate needs non-negative parts")
    L = max(lam, default=0) if length is None else length
    return tuple(sum(1 for x in lam if x >= i) for i in range(1, L + 1))


def pair_partitions(lam: Sequence[int], mu: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(lam, mu))


def H_partition(lam: Sequence[int]) -> tuple[int, ...]:
    """Exponents of H^lam: each part appears twice (h^(2e) is p^e times a unimodular plane)."""
    return tuple(sorted((x for x in lam for _ in range(2)), reverse=True))


_PART_ITEM = re.compile(r"^\s*(-?\d+|inf)\s*(?:\^\s*(\d+))?\s*$")


def parse_partition(text: str) -> tuple[Exponent, ...]:
    """Parse "2,1,1,0", "1^2,0" or "inf,0"; empty string gives ()."""
    if not text.strip():
        return ()
    out: list[Exponent] = []
    for item in text.split(","):
        m = _PART_ITEM.match(item)
        if not m:
            raise ValueError(f"malformed partition item {item!r}")
        val: Exponent = INF if m.group(1) == "inf" else int(m.group(1))
        out.extend([val] * int(m.group(2) or 1))
    return tuple(out)


def format_partition(parts: Sequence[Exponent]) -> str:
    return ",".join(str(x) for x in parts)


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class HermMat:
    """An n x n matrix over O (level None) or O/P^(2 level), rows of QuatRes."""

    rows: tuple[tuple[QuatRes, ...], ...]
    level: Optional[int]
    cfg: PAdicConfig

    def __post_init__(self) -> None:
        for r in self.rows:
            if len(r) != len(self.rows):
                raise ValueError("matrix is not square")
            for x in r:
                if x.level != self.level:
                    raise PrecisionError("entry level differs from matrix level")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> QuatRes:
        return self.rows[ij[0]][ij[1]]

    def is_hermitian(self) -> bool:
        n = self.n
        return all(self[j, i] == self[i, j].star() for i in range(n) for j in range(n))

    def reduce(self, level: int) -> "HermMat":
        return HermMat(tuple(tuple(x.reduce(level) for x in r) for r in self.rows), level, self.cfg)

    def scale(self, k: int) -> "HermMat":
        return HermMat(tuple(tuple(x * k for x in r) for r in self.rows), self.level, self.cfg)

    def __sub__(self, other: "HermMat") -> "HermMat":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return HermMat(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                       self.level, self.cfg)

    def __add__(self, other: "HermMat") -> "HermMat":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return HermMat(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                       self.level, self.cfg)

    def diag_value(self, i: int) -> int:
        x = self[i, i]
        if not x.is_central():
            raise ValueError("diagonal entry is not central")
        return x.a

    def in_V(self, ell: int) -> bool:
        """Diagonal in p^ell and off-diagonal in P^(2 ell - 1)."""
        p = self.cfg.p
        for i in range(self.n):
            for j in range(self.n):
                x = self[i, j]
                if i == j:
                    if not x.is_central() or x.a % p**ell:
                        return False
                elif not _in_P(x, 2 * ell - 1):
                    return False
        return True

    def in_strict(self, ell: int) -> bool:
        """All entries in p^ell O."""
        return all(_in_P(self[i, j], 2 * ell) for i in range(self.n) for j in range(self.n))

    def as_array(self) -> np.ndarray:
        return np.array([[x.coords for x in r] for r in self.rows], dtype=np.int64)

    def key(self) -> tuple:
        return tuple(x.coords for r in self.rows for x in r)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x.coords) for x in r) for r in self.rows)
        return f"HermMat[{body}] level={self.level}"


def _in_P(x: QuatRes, k: int) -> bool:
    if k <= 0:
        return True
    if x.level is not None and k >= 2 * x.level:
        return x.is_zero()
    j, odd = divmod(k, 2)
    p = x.cfg.p
    mu, mz = p ** (j + odd), p**j
    return x.a % mu == 0 and x.b % mu == 0 and x.c % mz == 0 and x.d % mz == 0


def matrix(cfg: PAdicConfig, entries: Sequence[Sequence[QuatRes]],
           level: Optional[int] = None) -> HermMat:
    return HermMat(tuple(tuple(x if level is None else x.reduce(level) for x in r) for r in entries),
                   level, cfg)


def diagonal(cfg: PAdicConfig, values: Sequence[int], level: Optional[int] = None) -> HermMat:
    n = len(values)
    return HermMat(tuple(tuple(cfg.quat(values[i] if i == j else 0, level=level) for j in range(n))
                         for i in range(n)), level, cfg)


def identity(cfg: PAdicConfig, n: int, level: Optional[int] = None) -> HermMat:
    return diagonal(cfg, [1] * n, level)


def block_sum(cfg: PAdicConfig, blocks: Sequence[HermMat]) -> HermMat:
    level = blocks[0].level if blocks else None
    n = sum(b.n for b in blocks)
    rows = [[cfg.zero(level) for _ in range(n)] for _ in range(n)]
    off = 0
    for b in blocks:
        if b.level != level:
            raise PrecisionError("blocks at different levels")
        for i in range(b.n):
            for j in range(b.n):
                rows[off + i][off + j] = b[i, j]
        off += b.n
    return HermMat(tuple(tuple(r) for r in rows), level, cfg)


def canonical_form(cfg: PAdicConfig, gamma: Sequence[Exponent],
                   level: Optional[int] = None) -> HermMat:
    """The representative pi^gamma of an elementary-divisor partition."""
    gamma = check_lambda(gamma)
    blocks: list[HermMat] = []
    i = 0
    while i < len(gamma):
        g = gamma[i]
        if g is INF:
            blocks.append(diagonal(cfg, [0]))
            i += 1
        elif g < 0:
            raise ValueError("canonical_form needs non-negative exponents")
        elif g % 2 == 0:
            blocks.append(diagonal(cfg, [cfg.p ** (g // 2)]))
            i += 1
        else:
            w = cfg.Pi_power(g)
            z = cfg.zero()
            blocks.append(HermMat(((z, w), (-w, z)), None, cfg))
            i += 2
    m = block_sum(cfg, blocks) if blocks else HermMat((), None, cfg)
    return m if level is None else m.reduce(level)


def h_block(cfg: PAdicConfig, r: int) -> HermMat:
    """h^r = [[0, Pi^r], [(-Pi)^r, 0]]."""
    if r < 0:
        raise ValueError("h^r needs r >= 0")
    w = cfg.Pi_power(r)
    z = cfg.zero()
    return HermMat(((z, w), (w if r % 2 == 0 else -w, z)), None, cfg)


def build_H(cfg: PAdicConfig, lam: Sequence[int], level: Optional[int] = None) -> HermMat:
    if any(x < 0 for x in lam):
        raise ValueError("H^lam needs non-negative parts")
    m = block_sum(cfg, [h_block(cfg, r) for r in lam]) if lam else HermMat((), None, cfg)
    return m if level is None else m.reduce(level)


def build_Hk(cfg: PAdicConfig, k: int, level: Optional[int] = None) -> HermMat:
    return build_H(cfg, [1] * k, level)


# ---------------------------------------------------------------- operations

QMat = Sequence[Sequence[QuatRes]]


def transform(A: HermMat, v: QMat) -> HermMat:
    """A[v] = v^* A v for an m x n matrix v."""
    m = A.n
    if len(v) != m:
        raise ValueError(f"v has {len(v)} rows, A has size {m}")
    n = len(v[0]) if m else 0
    level, cfg = A.level, A.cfg
    Av = [[sum((A[i, k] * v[k][j] for k in range(m)), cfg.zero(level)) for j in range(n)]
          for i in range(m)]
    rows = tuple(tuple(sum((v[k][i].star() * Av[k][j] for k in range(m)), cfg.zero(level))
                       for j in range(n)) for i in range(n))
    return HermMat(rows, level, cfg)


def pairing(A: HermMat, B: HermMat) -> int:
    """sum A_ii B_ii + sum_{i<j} Trd(A_ij B_ji), reduced mod p^level when finite."""
    if A.n != B.n:
        raise ValueError("size mismatch")
    if A.level != B.level:
        raise PrecisionError("pairing at different levels")
    total = 0
    for i in range(A.n):
        total += A.diag_value(i) * B.diag_value(i)
        for j in range(i + 1, A.n):
            total += (A[i, j] * B[j, i]).trd()
    return total if A.level is None else total % A.cfg.p**A.level


def pairing_phi(A: HermMat, B: HermMat) -> int:
    """Half the trace of phi_n(A) phi_n(B), computed in the Galois ring."""
    n = A.n
    if A.level is None:
        raise ValueError("pairing_phi works at a finite level")
    tr = None
    for i in range(n):
        for k in range(n):
            m = A[i, k].phi() * B[k, i].phi()
            t = m.trace()
            tr = t if tr is None else tr + t
    if tr is None:
        return 0
    if tr.y != 0:
        raise AssertionError("trace left the base ring")
    M = A.cfg.p**A.level
    return tr.x * pow(2, -1, M) % M


def reduce_V(H: HermMat, ell: int) -> tuple:
    """Key of H modulo V_n(pi, ell): diagonals mod p^ell, off-diagonals mod P^(2 ell - 1)."""
    p = H.cfg.p
    key = []
    for i in range(H.n):
        for j in range(H.n):
            x = H[i, j]
            if i == j:
                key.append(x.a % p**ell)
            elif i < j:
                key.append(int(kernels.code_mod_P(np.array(x.coords), p, 2 * ell - 1)))
    return tuple(key)


# ---------------------------------------------------------------- orbits

def residues_array(p: int, level: int) -> np.ndarray:
    """All (a, b, c, d) in (Z/p^level)^4 as an (N, 4) int64 array."""
    M = p**level
    g = np.indices((M, M, M, M)).reshape(4, -1).T
    return np.ascontiguousarray(g, dtype=np.int64)


def nrd_array(X: np.ndarray, p: int, e: int, M: int) -> np.ndarray:
    a, b, c, d = X[:, 0], X[:, 1], X[:, 2], X[:, 3]
    return np.mod(a * a - e * b * b - p * c * c + p * e * d * d, M)


def unit_norm_image(cfg: PAdicConfig, level: int, budget: Optional[int] = DEFAULT_BUDGET) -> frozenset[int]:
    """Nrd((O/P^(2 level))^x) by exhaustive enumeration."""
    check_budget("unit norm image", cfg.p ** (4 * level), budget)
    M = cfg.p**level
    vals = nrd_array(residues_array(cfg.p, level), cfg.p, cfg.eps_sq, M)
    return frozenset(int(v) for v in np.unique(vals[vals % cfg.p != 0]))


def _decode(code: int, p: int, k: int) -> tuple[int, int, int, int]:
    j, odd = divmod(k, 2)
    mu, mz = p ** (j + odd), p**j
    code, d = divmod(code, mz) if mz > 1 else (code, 0)
    code, c = divmod(code, mz) if mz > 1 else (code, 0)
    a, b = divmod(code, mu)
    return a, b, c, d


def _herm2(cfg: PAdicConfig, d1: int, d2: int, off: tuple[int, int, int, int], level: int) -> HermMat:
    x = cfg.quat(*off, level=level)
    return HermMat(((cfg.quat(d1, level=level), x), (x.star(), cfg.quat(d2, level=level))), level, cfg)


def orbit_enumerate(B: HermMat, level: int, budget: Optional[int] = DEFAULT_BUDGET,
                    modulo: str = "strict") -> frozenset:
    """{g^* B g mod p^level : g in GL_n(O/P^(2 level))}, exhaustively.

    ``modulo="V"`` reduces off-diagonal entries modulo P^(2 level - 1) instead
    and returns keys from :func:`reduce_V`.
    """
    cfg, n, p = B.cfg, B.n, B.cfg.p
    Bl = B.reduce(level) if B.level is None else B
    if Bl.level != level:
        raise PrecisionError("B must be exact or at the requested level")
    cost = p ** (4 * level * (n if n < 2 else n * n))
    check_budget("orbit enumeration", cost, budget)
    out = _orbit_cached(Bl, level)
    if modulo == "V":
        return frozenset(reduce_V(h, level) for h in out)
    if modulo != "strict":
        raise ValueError(f"unknown reduction {modulo!r}")
    return out


@lru_cache(maxsize=256)
def _orbit_cached(Bl: HermMat, level: int) -> frozenset[HermMat]:
    cfg, n, p = Bl.cfg, Bl.n, Bl.cfg.p
    M = p**level
    if n == 1:
        b = Bl.diag_value(0)
        return frozenset(diagonal(cfg, [u * b % M], level) for u in unit_norm_image(cfg, level, None))
    if n == 2:
        hist = pair_histogram(Bl, level, 2 * level, True)
        return frozenset(_herm2(cfg, int(d1), int(d2), _decode(int(code), p, 2 * level), level)
                         for d1, d2, code in zip(*np.nonzero(hist)))
    out = set()
    for flat in product(range(M), repeat=4 * n * n):
        g = [[cfg.quat(*flat[4 * (i * n + j): 4 * (i * n + j) + 4], level=level) for j in range(n)]
             for i in range(n)]
        if _invertible_mod_P(g):
            out.add(transform(Bl, g))
    return frozenset(out)


def column_space(p: int, level: int, m: int) -> np.ndarray:
    """All columns in (O/P^(2 level))^m as an (N, m, 4) array."""
    R = residues_array(p, level)
    idx = np.indices((len(R),) * m).reshape(m, -1).T
    return np.ascontiguousarray(R[idx], dtype=np.int64)


@lru_cache(maxsize=64)
def pair_histogram(A: HermMat, level: int, koff: int, check_inv: bool) -> np.ndarray:
    """hist[d1, d2, code] over column pairs (x, y) in (O/P^(2 level))^m.

    d1 = x^*Ax and d2 = y^*Ay (central, mod p^level); code is x^*Ay modulo
    P^koff.  With ``check_inv`` (m = 2) only pairs forming an invertible
    matrix count.  The result is read-only and shared between callers.
    """
    cfg, p = A.cfg, A.cfg.p
    if A.level != level:
        raise PrecisionError("A must be reduced to the histogram level")
    M = p**level
    cols = column_space(p, level, A.n)
    Aarr = A.as_array()
    diag = kernels.sesq(cols, Aarr, cols, p, cfg.eps_sq, M)[:, 0]
    hist = kernels.pair_hist(cols, cols, Aarr, diag, diag, M, M, p, cfg.eps_sq, level, koff, check_inv)
    hist.setflags(write=False)
    return hist


def orbit_scalar(cfg: PAdicConfig, b: int, level: int) -> frozenset[int]:
    """Orbit of the 1x1 form <b> as residues mod p^level.

    Uses Nrd(O^x) = Z_p^x: the orbit is b times every unit.  The tests check
    this against :func:`orbit_enumerate` at small levels.
    """
    M = cfg.p**level
    return frozenset(u * b % M for u in range(M) if u % cfg.p)


def _invertible_mod_P(g: QMat) -> bool:
    """Invertibility over the residue field F_{p^2} by Gaussian elimination."""
    cfg = g[0][0].cfg
    p, e = cfg.p, cfg.eps_sq
    rows = [[(x.a % p, x.b % p) for x in r] for r in g]
    n = len(rows)

    def mul(s, t):
        return ((s[0] * t[0] + e * s[1] * t[1]) % p, (s[0] * t[1] + s[1] * t[0]) % p)

    def inv(s):
        nm = (s[0] * s[0] - e * s[1] * s[1]) % p
        ni = pow(nm, -1, p)
        return (s[0] * ni % p, -s[1] * ni % p)

    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != (0, 0)), None)
        if piv is None:
            return False
        rows[c], rows[piv] = rows[piv], rows[c]
        iv = inv(rows[c][c])
        for r in range(c + 1, n):
            f = mul(rows[r][c], iv)
            rows[r] = [((rows[r][k][0] - mul(f, rows[c][k])[0]) % p,
                        (rows[r][k][1] - mul(f, rows[c][k])[1]) % p) for k in range(n)]
    return True


def gl_order(q: int, n: int, level: int) -> int:
    """|GL_n(O/P^(2 level))| = q^(4 level n^2) prod_{i=1..n} (1 - q^(-2i))."""
    out = q ** (4 * level * n * n)
    for i in range(1, n + 1):
        out = out * (q ** (2 * i) - 1) // q ** (2 * i)
    return out


__all__ = [
    "INF", "BudgetError", "HermMat", "H_partition", "build_H", "build_Hk", "canonical_form",
    "check_lambda", "column_space", "conjugate", "diagonal", "enumerate_Gamma", "enumerate_Lambda", "gl_order",
    "identity", "is_lambda", "orbit_enumerate", "orbit_scalar", "pair_histogram", "pair_partitions", "pairing",
    "pairing_phi", "parse_partition", "transform", "unit_count", "unit_norm_image",
]
