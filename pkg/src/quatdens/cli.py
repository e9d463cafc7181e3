"""Command-line front end.  Exit codes: 0 ok, 1 verification failure, 2 usage or feasibility."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import density as D
from . import forms as F
from . import gauss as G
from . import kitaoka as K
from . import linind as L
from . import selftest as ST
from .padic import PAdicConfig, PrecisionError

SCHEMA = "quatdens-report/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def to_json(x: Any) -> Any:
    """Fractions become {"num", "den"} decimal strings; tuples become lists."""
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else F.format_partition(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if x is F.INF:
        return "inf"
    return repr(x)


def parse_budget(text: Optional[str]) -> Optional[int]:
    env = os.environ.get("QUATDENS_BUDGET")
    if env is not None:
        text = env
    if text is None:
        return F.DEFAULT_BUDGET
    if text.lower() in ("none", "inf", "unlimited"):
        return None
    try:
        value = int(float(text)) if any(c in text for c in ".eE") else int(text)
    except ValueError as exc:
        raise UsageError(f"bad budget {text!r}") from exc
    if value <= 0:
        raise UsageError("budget must be positive")
    return value


def _partition(text: str) -> tuple:
    try:
        return F.parse_partition(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _exact_partition(text: str) -> tuple:
    parts = _partition(text)
    if not F.is_lambda(parts):
        raise UsageError(f"{text!r} is not a valid elementary-divisor partition")
    return parts


def _config(q: int) -> PAdicConfig:
    try:
        return PAdicConfig(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _header(command: str, formulas: Sequence[str], **extra: Any) -> dict:
    out = {"schema": SCHEMA, "command": command, "normalization": D.NORMALIZATION,
           "formulas": list(formulas)}
    out.update(extra)
    return out


# ---------------------------------------------------------------- subcommands


def cmd_gauss(args: argparse.Namespace, budget: Optional[int]) -> tuple[dict, bool]:
    cfg = _config(args.q)
    alpha, beta = _exact_partition(args.alpha), _exact_partition(args.beta)
    report = _header("gauss", ["gauss.closed_product"], q=args.q, alpha=list(alpha), beta=list(beta))
    if args.ell is None:
        closed = G.gauss_closed(alpha, beta, args.q)
        oracle = None if args.no_oracle else G.gauss_integral_oracle(cfg, alpha, beta)
    else:
        report["formulas"] = ["gauss.finite_closed_product"]
        report["ell"] = args.ell
        closed = Fraction(G.finite_gauss_closed(alpha, beta, args.ell, args.q))
        if args.no_oracle:
            oracle = None
        else:
            A = F.canonical_form(cfg, alpha, args.ell)
            C = F.canonical_form(cfg, beta, args.ell)
            try:
                oracle = Fraction(G.gauss_oracle(A, C, args.ell, budget))
            except F.BudgetError:
                oracle = Fraction(G.gauss_oracle_blocks(A, C, args.ell))
                report["oracle_kind"] = "block-factorized"
    report["closed"] = closed
    report["oracle"] = oracle
    match = oracle is None or oracle == closed
    report["match"] = match
    return report, match


def cmd_density(args: argparse.Namespace, budget: Optional[int]) -> tuple[dict, bool]:
    cfg = _config(args.q)
    b, a = _exact_partition(args.B), _exact_partition(args.A)
    B, A = F.canonical_form(cfg, b), F.canonical_form(cfg, a)
    report = _header("density", ["density.normalized_count", "density.fourier_reconstruction",
                                 "density.closed_primitive_count"], q=args.q, B=list(b), A=list(a))
    values = {}
    if args.path in ("reconstructed", "both"):
        rec = D.mu_reconstructed(B, a, ell=args.ell, audit=args.audit_normalization, budget=budget)
        values["reconstructed"] = rec.value
        report["reconstructed"] = {"value": rec.value, "ell": rec.ell, "n_BB": rec.n_BB,
                                   "terms": rec.terms}
        if rec.audit is not None:
            report["normalization_audit"] = rec.audit
    if args.path in ("brute", "both"):
        start = args.ell if args.ell is not None else D.min_level(B)
        br = D.mu_brute(B, A, start + args.extra_levels, start, budget)
        values["brute"] = br.value
        report["brute"] = {"value": br.value, "ell": br.ell_used, "stabilized": br.stabilized,
                           "history": list(br.history)}
    match = len(set(values.values())) <= 1
    if "brute" in report and not report["brute"]["stabilized"]:
        match = False
    report["match"] = match
    return report, match


def cmd_kitaoka(args: argparse.Namespace, budget: Optional[int]) -> tuple[dict, bool]:
    cfg = _config(args.q)
    b, a = _exact_partition(args.B), _exact_partition(args.A)
    B = F.canonical_form(cfg, b)
    den = K.denominator_quaternion(B.n, len(a), args.q)
    R = args.truncation if args.truncation is not None else den.degree + args.window
    s = K.kitaoka_series(B, a, R, path=args.path, budget=budget)
    v = K.rationality_check(s.series, den, args.window)
    report = _header("kitaoka", ["kitaoka.series", "kitaoka.quaternion_denominator"], q=args.q,
                     B=list(b), A=list(a), truncation=R, window=args.window, path=args.path,
                     complete=s.complete, coefficients=list(s.series.coeffs),
                     denominator=list(den.coeffs), product_coefficients=list(v.product),
                     verdict=v.verdict, numerator=list(v.numerator))
    if not s.complete:
        raise F.BudgetError("kitaoka series", R, budget or 0)
    return report, v.verdict == "pass"


def cmd_linind(args: argparse.Namespace, budget: Optional[int]) -> tuple[dict, bool]:
    cfg = _config(args.q)
    S = _exact_partition(args.S) if args.S else ()
    T_set = None
    if args.T_set:
        T_set = {}
        for item in args.T_set.split(";"):
            g = _exact_partition(item)
            if len(g) != args.n:
                raise UsageError(f"T-set member {item!r} has size {len(g)}, expected {args.n}")
            T_set[F.format_partition(g)] = F.canonical_form(cfg, g)
    try:
        fit = L.verify_expansion(cfg, args.k, args.ell, args.n, S, T_set, args.force, budget)
        rk = L.rank_check(cfg, args.k, args.ell, args.n, S, T_set, args.force, budget)
    except L.GuardError as exc:
        raise UsageError(f"{exc}; pass --force to explore outside the guard") from exc
    gr = L.gauss_independence_check(args.k, args.ell, args.n, S, args.q)
    dm = rk.matrix
    report = _header("linind", ["linind.expansion", "linind.hyperbolic_gauss_closed"], q=args.q,
                     k=args.k, ell=args.ell, n=args.n, S=list(S),
                     matrix={"rows": [list(r) for r in dm.rows], "columns": dm.T_labels,
                             "entries": dm.entries, "basis_rows": dm.basis},
                     rank=rk.rank, expected_rank=rk.expected_rank, basis_rank=rk.basis_rank,
                     rank_verdict=rk.verdict, gauss_rank=gr.rank, gauss_reduced_rank=gr.reduced_rank,
                     fits={k: v for k, v in fit.fits.items()}, residuals=fit.residuals,
                     findings=fit.findings, caveat=fit.caveat)
    ok = fit.all_zero and rk.verdict == "pass" and gr.rank == rk.rank
    return report, ok


def cmd_selftest(args: argparse.Namespace, budget: Optional[int]) -> tuple[dict, bool]:
    only = args.suite or None
    if only:
        unknown = [s for s in only if s not in ST.SUITES]
        if unknown:
            raise UsageError(f"unknown suites {unknown}; choose from {sorted(ST.SUITES)}")
    if args.mutate is not None and args.mutate not in ST.MUTATIONS:
        raise UsageError(f"unknown mutation {args.mutate!r}; choose from {sorted(ST.MUTATIONS)}")
    results = ST.run_selftest(args.tier, args.seed, budget, only, args.mutate)
    suites = [{"name": r.name, "criterion": r.criterion, "status": r.status, "checked": r.checked,
               "counterexample": r.counterexample, "notes": r.notes,
               "expected_failure": r.expected_failure} for r in results]
    ok = all(r.ok for r in results)
    report = _header("selftest", ["selftest.acceptance_suites"], q=args.q, tier=args.tier, seed=args.seed,
                     mutation=args.mutate, suites=suites, passed=ok)
    return report, ok


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--q", type=int, default=3, help="odd prime")
    common.add_argument("--budget", default=None, help="max ring operations; QUATDENS_BUDGET overrides")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="also write the report to this file")
    common.add_argument("--seed", type=int, default=1)

    p = _Parser(prog="quatdens", description="Local densities of quaternion hermitian forms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gauss", parents=[common], help="closed Gauss sum against the oracle")
    g.add_argument("--alpha", required=True)
    g.add_argument("--beta", required=True)
    g.add_argument("--ell", type=int, default=None, help="finite sum at this level")
    g.add_argument("--no-oracle", action="store_true")
    g.set_defaults(func=cmd_gauss)

    d = sub.add_parser("density", parents=[common], help="local density mu(B, A)")
    d.add_argument("--B", required=True)
    d.add_argument("--A", required=True)
    d.add_argument("--ell", type=int, default=None)
    d.add_argument("--path", choices=("brute", "reconstructed", "both"), default="both")
    d.add_argument("--extra-levels", type=int, default=2, help="brute levels beyond the first")
    d.add_argument("--audit-normalization", action="store_true")
    d.set_defaults(func=cmd_density)

    k = sub.add_parser("kitaoka", parents=[common], help="Kitaoka series and its denominator")
    k.add_argument("--B", required=True)
    k.add_argument("--A", required=True)
    k.add_argument("--truncation", type=int, default=None, help="default: degree of the denominator + window")
    k.add_argument("--window", type=int, default=4)
    k.add_argument("--path", choices=("reconstructed", "brute"), default="reconstructed")
    k.set_defaults(func=cmd_kitaoka)

    li = sub.add_parser("linind", parents=[common], help="linear independence of densities")
    li.add_argument("--k", type=int, required=True)
    li.add_argument("--ell", type=int, required=True)
    li.add_argument("--n", type=int, default=1)
    li.add_argument("--S", default="")
    li.add_argument("--T-set", dest="T_set", default=None, help='partitions separated by ";"')
    li.add_argument("--force", action="store_true", help="run outside k >= n, 2k + r >= 8n - 1")
    li.set_defaults(func=cmd_linind)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suites")
    s.add_argument("--tier", choices=ST.TIERS, default="quick")
    s.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    s.add_argument("--mutate", default=None, help="corrupt one closed formula as a negative control")
    s.set_defaults(func=cmd_selftest)
    return p


def _flatten(prefix: str, x: Any, rows: list[tuple[str, str]]) -> None:
    if isinstance(x, dict) and set(x) == {"num", "den"}:
        rows.append((prefix, x["num"] if x["den"] == "1" else f"{x['num']}/{x['den']}"))
    elif isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, "" if x is None else str(x)))


def render(report: dict, fmt: str) -> str:
    data = to_json(report)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    rows: list[tuple[str, str]] = []
    _flatten("", data, rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    w.writerows(rows)
    return buf.getvalue()


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        budget = parse_budget(args.budget)
        report, ok = args.func(args, budget)
    except UsageError as exc:
        print(f"quatdens: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (F.BudgetError, PrecisionError, NotImplementedError, ValueError) as exc:
        print(f"quatdens: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, args.format)
    stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
