"""Backend selection for the hot residual-assembly kernels.

Two interchangeable implementations exist: a numba-jitted one (default when
numba imports) and a pure-numpy one.  Set DFMHD_BACKEND=numpy|numba|auto to
force the choice; "auto" prefers numba and silently falls back to numpy.
"""

import os

_active = None


def select_backend(choice=None):
    if choice is None:
        choice = os.environ.get("DFMHD_BACKEND", "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"DFMHD_BACKEND must be auto, numba or numpy, got {choice!r}")
    if choice in ("auto", "numba"):
        try:
            from . import numba_backend
            return numba_backend
        except ImportError:
            if choice == "numba":
                raise
    from . import numpy_backend
    return numpy_backend


def active():
    """The backend module in use for this process."""
    global _active
    if _active is None:
        _active = select_backend()
    return _active
