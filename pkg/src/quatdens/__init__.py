"""Exact local densities of p-adic quaternion hermitian forms, checked against brute force."""

from __future__ import annotations

from .density import NORMALIZATION, closed_Npr, count_N, count_Npr, mu_brute, mu_reconstructed
from .forms import BudgetError, HermMat, canonical_form, diagonal, parse_partition
from .gauss import finite_gauss_closed, gauss_closed, gauss_oracle
from .kernels import BACKEND
from .kitaoka import denominator_quaternion, kitaoka_series, rationality_check
from .linind import gauss_independence_check, rank_check, verify_expansion
from .padic import PAdicConfig, QuatRes

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BudgetError", "HermMat", "NORMALIZATION", "PAdicConfig", "QuatRes", "canonical_form",
    "closed_Npr", "count_N", "count_Npr", "denominator_quaternion", "diagonal", "finite_gauss_closed",
    "gauss_closed", "gauss_independence_check", "gauss_oracle", "kitaoka_series", "mu_brute",
    "mu_reconstructed", "parse_partition", "rank_check", "rationality_check", "verify_expansion",
]
