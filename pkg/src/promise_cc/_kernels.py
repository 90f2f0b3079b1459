"""Kernel backend selection.

The compiled extension (_core) is preferred when it imported cleanly; the
pure-numpy fallback (_pykernels) is used otherwise, or when the environment
variable PROMISE_CC_PURE is set to anything other than "" or "0".  Both
backends implement identical call contracts; benchmarks/bench_kernels.py
compares them.
"""

import os

from . import _pykernels as pure

_EXPORTS = ("diagonal_phase", "pair_swap", "rotation_block", "dense_matvec", "max_clique")

try:
    from . import _core as compiled
except ImportError:
    compiled = None
if compiled is not None and any(not hasattr(compiled, f) for f in _EXPORTS):
    compiled = None  # stale or partial build

if compiled is None or os.environ.get("PROMISE_CC_PURE", "") not in ("", "0"):
    _active = pure
    BACKEND = "pure"
else:
    _active = compiled
    BACKEND = "compiled"

diagonal_phase = _active.diagonal_phase
pair_swap = _active.pair_swap
rotation_block = _active.rotation_block
dense_matvec = _active.dense_matvec
max_clique = _active.max_clique


def backend() -> str:
    """Name of the active kernel backend ("compiled" or "pure")."""
    return BACKEND
