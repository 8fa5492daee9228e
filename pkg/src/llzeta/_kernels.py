"""Kernel backend selection.

The compiled extension is used when it imports; set ``LLZETA_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("LLZETA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def use_backend(name):
    """Switch backend at runtime ("cython" or "python"); returns the previous name."""
    global _impl, BACKEND, power_sum, lerch_sum, powexp_sum, hankel_sum, taylor_moments
    prev = BACKEND
    if name == "cython":
        from . import _ckernels as mod
    elif name == "python":
        mod = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    _impl, BACKEND = mod, name
    power_sum = mod.power_sum
    lerch_sum = mod.lerch_sum
    powexp_sum = mod.powexp_sum
    hankel_sum = mod.hankel_sum
    taylor_moments = mod.taylor_moments
    return prev


power_sum = _impl.power_sum
lerch_sum = _impl.lerch_sum
powexp_sum = _impl.powexp_sum
hankel_sum = _impl.hankel_sum
taylor_moments = _impl.taylor_moments
