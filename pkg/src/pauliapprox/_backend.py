"""Kernel backend chosen at import: compiled extension if built, numpy otherwise."""

from . import _fallback

try:
    from . import _kernels as kernels
    BACKEND = "cython"
except ImportError:  # extension not built
    kernels = _fallback
    BACKEND = "python"

fallback = _fallback
