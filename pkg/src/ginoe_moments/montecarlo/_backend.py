"""Kernel selection at import.

GINOE_KERNEL=python forces the pure-Python kernel; GINOE_KERNEL=cython makes
a missing compiled kernel an error instead of a silent fallback.
"""
import os

_choice = os.environ.get("GINOE_KERNEL", "").strip().lower()

if _choice == "python":
    from . import _pykernel as kernel
else:
    try:
        from . import _kernel as kernel
    except ImportError:
        if _choice == "cython":
            raise
        from . import _pykernel as kernel

BACKEND = kernel.BACKEND
