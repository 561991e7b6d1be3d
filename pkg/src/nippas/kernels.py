"""Kernel dispatch: compiled extension when importable, NumPy fallback otherwise.

Set ``NIPPAS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("NIPPAS_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

cheb_vandermonde = _impl.cheb_vandermonde
rusanov_march = _impl.rusanov_march

__all__ = ["BACKEND", "cheb_vandermonde", "rusanov_march"]
