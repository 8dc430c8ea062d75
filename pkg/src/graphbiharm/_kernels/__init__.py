"""Kernel backend selection.

The compiled Cython module is preferred; the numpy implementation is the
fallback when the extension has not been built. Set ``GRAPHBIHARM_PURE_PYTHON=1``
to force the fallback (used by the benchmark and for debugging).
"""

import os

if os.environ.get("GRAPHBIHARM_PURE_PYTHON", "") not in ("", "0"):
    from . import _ref as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _ref as _impl

        BACKEND = "numpy"

laplacian = _impl.laplacian
gradient_form = _impl.gradient_form
