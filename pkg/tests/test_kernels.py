from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from quatdens import _pykernels as pure
from quatdens import kernels
from quatdens.forms import canonical_form, column_space
from quatdens.padic import PAdicConfig

needs_compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled extension not built")


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "pure")


def test_qmul_matches_quatres():
    cfg = PAdicConfig(5)
    rng = np.random.default_rng(2)
    X = rng.integers(0, 25, size=(50, 4))
    Y = rng.integers(0, 25, size=(50, 4))
    Z = pure.qmul(X, Y, 5, cfg.eps_sq, 25)
    for x, y, z in zip(X, Y, Z):
        want = cfg.quat(*map(int, x), level=2) * cfg.quat(*map(int, y), level=2)
        assert tuple(int(v) for v in z) == want.coords


@needs_compiled
@pytest.mark.parametrize("gamma,level,koff,check_inv", [
    ((0,), 2, 4, False),
    ((2,), 2, 3, False),
    ((1, 1), 1, 2, True),
    ((2, 0), 1, 1, False),
])
def test_compiled_equals_pure(gamma, level, koff, check_inv):
    cfg = PAdicConfig(3)
    A = canonical_form(cfg, gamma, level).as_array()
    Y = column_space(3, level, len(gamma))
    X = Y[::7]
    M = 3**level
    gx = pure.sesq(X, A, X, 3, cfg.eps_sq, M)[:, 0]
    gy = pure.sesq(Y, A, Y, 3, cfg.eps_sq, M)[:, 0]
    args = (X, Y, A, gx, gy, M, M, 3, cfg.eps_sq, level, koff, check_inv)
    assert np.array_equal(pure.pair_hist(*args), kernels.compiled.pair_hist(*args))


def test_pure_fallback_selected_by_env():
    env = dict(os.environ, QUATDENS_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from quatdens import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "pure"
