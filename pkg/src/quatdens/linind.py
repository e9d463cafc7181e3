"""Linear independence of densities mu(T, H^lam + S) as functions of T.

Each density expands as sum_tau a_tau q^(2 <lam-hat, tau-hat>) over
tau in Gamma_{n,l}.  The coefficients are fitted on the padded rows
lam = (mu, 0, ..., 0) and then checked on every other lam.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Optional, Sequence, Union

import sympy

from .density import mu_reconstructed
from .forms import (
    DEFAULT_BUDGET,
    HermMat,
    check_lambda,
    canonical_form,
    conjugate,
    enumerate_Gamma,
    enumerate_Lambda,
    format_partition,
    H_partition,
    pair_partitions,
)
from .gauss import gauss_closed, gauss_Hlam
from .padic import PAdicConfig


class GuardError(ValueError):
    """k < n or 2k + r < 8n - 1 without ``force``."""


def guard_holds(k: int, n: int, r: int) -> bool:
    return k >= n and 2 * k + r >= 8 * n - 1


def _check_guard(k: int, n: int, r: int, force: bool) -> Optional[str]:
    if guard_holds(k, n, r):
        return None
    msg = f"k={k}, n={n}, r={r} violates k >= n and 2k + r >= 8n - 1"
    if not force:
        raise GuardError(msg)
    return msg + "; forced, the expansion is not guaranteed"


def padded(mu: Sequence[int], k: int) -> tuple[int, ...]:
    return tuple(mu) + (0,) * (k - len(mu))


def expansion_weight(lam: Sequence[int], tau: Sequence[int], ell: int, q: int) -> Fraction:
    """q^(2 <lam-hat, tau-hat>) with both conjugates of length l."""
    return Fraction(q) ** (2 * pair_partitions(conjugate(lam, ell), conjugate(tau, ell)))


TSet = Union[Sequence[HermMat], Mapping[str, HermMat]]


def default_T_set(cfg: PAdicConfig, n: int, ell: int) -> dict[str, HermMat]:
    """pi^gamma for gamma in Lambda_{n,2l}^+; for n = 1 this has exactly l + 1 members."""
    return {format_partition(g): canonical_form(cfg, g) for g in enumerate_Lambda(n, 2 * ell)}


def _labelled(T_set: TSet) -> dict[str, HermMat]:
    if isinstance(T_set, Mapping):
        return dict(T_set)
    return {repr(T): T for T in T_set}


def _exact(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def _frac(x: sympy.Rational) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix([[_exact(x) for x in r] for r in rows]).rank()


@dataclass
class DensityMatrix:
    """Rows lam in Gamma_{k,l}, columns T; ``basis`` flags the padded Gamma_{n,l} rows."""

    rows: list[tuple[int, ...]]
    T_labels: list[str]
    entries: list[list[Fraction]]
    basis: list[bool]


def density_matrix(cfg: PAdicConfig, k: int, ell: int, n: int, S: Sequence[int],
                   T_set: TSet, budget: Optional[int] = DEFAULT_BUDGET) -> DensityMatrix:
    S = tuple(S)
    T_map = _labelled(T_set)
    basis_rows = {padded(mu, k) for mu in enumerate_Gamma(n, ell)}
    rows = enumerate_Gamma(k, ell)
    entries = []
    for lam in rows:
        alpha = check_lambda(tuple(sorted(H_partition(lam) + S, reverse=True)))
        entries.append([mu_reconstructed(T, alpha, budget=budget).value for T in T_map.values()])
    return DensityMatrix(rows, list(T_map), entries, [lam in basis_rows for lam in rows])


@dataclass
class FitReport:
    k: int
    ell: int
    n: int
    S: tuple[int, ...]
    taus: list[tuple[int, ...]]
    fits: dict[str, Optional[list[Fraction]]] = field(default_factory=dict)
    residuals: dict[str, list[Fraction]] = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)
    caveat: Optional[str] = None

    @property
    def all_zero(self) -> bool:
        return not self.findings and all(x == 0 for r in self.residuals.values() for x in r)


def verify_expansion(cfg: PAdicConfig, k: int, ell: int, n: int, S: Sequence[int] = (),
                     T_set: Optional[TSet] = None, force: bool = False,
                     budget: Optional[int] = DEFAULT_BUDGET) -> FitReport:
    """Fit a_tau per T on the padded rows, then residuals on the remaining rows."""
    S = tuple(S)
    caveat = _check_guard(k, n, len(S), force)
    if T_set is None:
        T_set = default_T_set(cfg, n, ell)
    q = cfg.p
    taus = enumerate_Gamma(n, ell)
    report = FitReport(k, ell, n, S, taus, caveat=caveat)
    if not T_set:
        return report
    dm = density_matrix(cfg, k, ell, n, S, T_set, budget)
    W = {lam: [expansion_weight(lam, t, ell, q) for t in taus] for lam in dm.rows}
    fit_rows = [i for i, b in enumerate(dm.basis) if b]
    check_rows = [i for i, b in enumerate(dm.basis) if not b]
    M = sympy.Matrix([[_exact(w) for w in W[dm.rows[i]]] for i in fit_rows])
    for j, label in enumerate(dm.T_labels):
        rhs = sympy.Matrix([_exact(dm.entries[i][j]) for i in fit_rows])
        if M.rank() < len(taus):
            report.fits[label] = None
            report.findings.append(f"singular fit system for T={label}")
            continue
        a = [_frac(x) for x in M.LUsolve(rhs)]
        report.fits[label] = a
        report.residuals[label] = [
            dm.entries[i][j] - sum((w * c for w, c in zip(W[dm.rows[i]], a)), Fraction(0))
            for i in check_rows
        ]
    return report


@dataclass
class RankReport:
    rank: int
    expected_rank: int
    basis_rank: int
    verdict: str  # "pass", "fail" or "inconclusive"
    matrix: DensityMatrix
    caveat: Optional[str] = None


def rank_check(cfg: PAdicConfig, k: int, ell: int, n: int, S: Sequence[int] = (),
               T_set: Optional[TSet] = None, force: bool = False,
               budget: Optional[int] = DEFAULT_BUDGET) -> RankReport:
    S = tuple(S)
    caveat = _check_guard(k, n, len(S), force)
    if T_set is None:
        T_set = default_T_set(cfg, n, ell)
    expected = comb(n + ell, n)
    dm = density_matrix(cfg, k, ell, n, S, T_set, budget)
    rank = exact_rank(dm.entries)
    basis_rank = exact_rank([r for r, b in zip(dm.entries, dm.basis) if b])
    if len(T_set) < expected and rank < expected:
        verdict = "inconclusive"
    else:
        verdict = "pass" if rank == expected == basis_rank else "fail"
    return RankReport(rank, expected, basis_rank, verdict, dm, caveat)


@dataclass
class GaussRankReport:
    rank: int
    reduced_rank: int
    expected_rank: int
    betas: list[tuple[int, ...]]
    consistent: bool  # each entry equals the H^lam product formula times G(S, X)


def sample_betas(n: int, ell: int) -> list[tuple[int, ...]]:
    """Divisor classes X with beta_j in [-2l-2, 0]; they realise every sigma-hat truncated to l."""
    return enumerate_Lambda(n, 0, low=-2 * ell - 2)


def gauss_independence_check(k: int, ell: int, n: int, S: Sequence[int] = (), q: int = 3,
                             sigma_set: Optional[Sequence[Sequence[int]]] = None) -> GaussRankReport:
    """Rank of [G(H^lam + S, X)] over sampled X, and of [q^(2 <lam-hat, sigma-hat>)] over sigma."""
    S = tuple(S)
    rows = enumerate_Gamma(k, ell)
    betas = sample_betas(n, ell)
    mat = []
    consistent = True
    for lam in rows:
        alpha = tuple(sorted(H_partition(lam) + S, reverse=True))
        row = []
        for b in betas:
            g = gauss_closed(alpha, b, q)
            if g != gauss_Hlam(lam, b, q).value * gauss_closed(S, b, q):
                consistent = False
            row.append(g)
        mat.append(row)
    sigmas = [tuple(s) for s in sigma_set] if sigma_set is not None else enumerate_Gamma(n, ell)
    reduced = [[expansion_weight(lam, s, ell, q) for s in sigmas] for lam in rows]
    return GaussRankReport(exact_rank(mat), exact_rank(reduced), comb(n + ell, n), betas, consistent)


__all__ = [
    "DensityMatrix", "FitReport", "GaussRankReport", "GuardError", "RankReport",
    "default_T_set", "density_matrix", "exact_rank", "expansion_weight", "gauss_independence_check",
    "guard_holds", "padded", "rank_check", "sample_betas", "verify_expansion",
]
