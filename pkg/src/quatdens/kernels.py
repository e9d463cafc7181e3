"""Kernel backend selection.

The compiled extension is used when it imports; set ``QUATDENS_PURE=1`` to
force the numpy fallback.  Both expose ``qmul`` and ``pair_hist``.
"""

from __future__ import annotations

import os

from . import _pykernels as pure

compiled = None
if os.environ.get("QUATDENS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

BACKEND = "compiled" if compiled is not None else "pure"
_impl = compiled if compiled is not None else pure

qmul = pure.qmul
star = pure.star
sesq = pure.sesq
code_mod_P = pure.code_mod_P
pair_hist = _impl.pair_hist
