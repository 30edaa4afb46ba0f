"""Hot kernels: compiled extension when built, numpy fallback otherwise.

``BACKEND`` names the active implementation.  Set ``MAGWEYL_PURE_PYTHON=1`` to
force the fallback.
"""
import os

from . import _kernels_py

try:
    if os.environ.get("MAGWEYL_PURE_PYTHON"):
        raise ImportError("pure python requested")
    from . import _kernels as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

direct_moyal_affine = _impl.direct_moyal_affine
crossed_product_dense = _impl.crossed_product_dense
