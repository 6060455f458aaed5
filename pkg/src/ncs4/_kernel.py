"""Select the product kernel at import time.

The compiled extension is used when it was built; set ``NCS4_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
import os

BACKEND = "python"

if not os.environ.get("NCS4_PURE_PYTHON"):
    try:
        from ._ckernel import add_terms, divide_terms, mul_terms  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pykernel import add_terms, divide_terms, mul_terms  # noqa: F401
