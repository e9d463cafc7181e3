"""Compare the compiled and pure pair-histogram kernels on the same input.

    python3 benchmarks/bench_kernels.py [--rows 600] [--repeat 3]

Uses all columns of (O/P^2)^2 at q = 3 for Y and the first ``rows`` of them
for X, against the form pi^(1,1).  Prints one timing line per backend and
checks that both histograms agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from quatdens import _pykernels as pure
from quatdens import kernels
from quatdens.forms import canonical_form, column_space
from quatdens.padic import PAdicConfig


def run_backend(impl, X, Y, A, gx, gy, M, cfg, level, repeat: int) -> tuple[float, np.ndarray]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = impl.pair_hist(X, Y, A, gx, gy, M, M, cfg.p, cfg.eps_sq, level, 2 * level, True)
        best = min(best, time.perf_counter() - t)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=600)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cfg, level = PAdicConfig(3), 1
    M = cfg.p**level
    A = canonical_form(cfg, (1, 1), level).as_array()
    Y = column_space(cfg.p, level, 2)
    X = Y[: args.rows]
    gx = kernels.sesq(X, A, X, cfg.p, cfg.eps_sq, M)[:, 0]
    gy = kernels.sesq(Y, A, Y, cfg.p, cfg.eps_sq, M)[:, 0]
    pairs = len(X) * len(Y)

    results = {}
    backends = [("pure", pure)]
    if kernels.compiled is not None:
        backends.append(("compiled", kernels.compiled))
    for name, impl in backends:
        t, h = run_backend(impl, X, Y, A, gx, gy, M, cfg, level, args.repeat)
        results[name] = h
        print(f"{name:9s} {pairs:>10d} pairs  {t:8.3f} s  {pairs / t / 1e6:8.2f} Mpairs/s")
    if len(results) == 2:
        same = np.array_equal(results["pure"], results["compiled"])
        print(f"histograms agree: {same}")
        if not same:
            raise SystemExit(1)
    else:
        print("compiled extension not built; only the pure kernel ran")


if __name__ == "__main__":
    main()
