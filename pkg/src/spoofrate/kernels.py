"""Backend dispatch for the hot numeric kernels.

The numba backend is used when numba imports cleanly, unless the
environment sets ``SPOOFRATE_BACKEND=numpy``.  Both backends stay
importable so they can be compared side by side.
"""

import os

from . import _kernels_numpy as numpy_impl

try:
    from . import _kernels_numba as numba_impl
except ImportError:  # numba missing
    numba_impl = None

TIN = numpy_impl.TIN
SIC = numpy_impl.SIC


def _select():
    wanted = os.environ.get("SPOOFRATE_BACKEND", "").strip().lower()
    if wanted not in ("", "numba", "numpy"):
        raise RuntimeError(f"SPOOFRATE_BACKEND must be 'numba' or 'numpy', got {wanted!r}")
    if wanted == "numpy" or numba_impl is None:
        return "numpy", numpy_impl
    return "numba", numba_impl


BACKEND, _impl = _select()

ray_search = _impl.ray_search
polar_search = _impl.polar_search
moment_sums = _impl.moment_sums


def implementations():
    """Mapping of available backend name -> kernel module."""
    impls = {"numpy": numpy_impl}
    if numba_impl is not None:
        impls["numba"] = numba_impl
    return impls
