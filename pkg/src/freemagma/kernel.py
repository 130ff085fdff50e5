"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``FREEMAGMA_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernel

python_kernel = _pykernel
compiled_kernel = None

if not os.environ.get("FREEMAGMA_PURE_PYTHON"):
    try:
        from . import _ckernel as compiled_kernel
    except ImportError:
        compiled_kernel = None

active = compiled_kernel or python_kernel
BACKEND = active.BACKEND
