"""Backend selection for the graph kernels.

The compiled extension ``systolic._kernels`` is used when it is importable;
otherwise the pure-Python module is used.  Setting the environment variable
``SYSTOLIC_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("SYSTOLIC_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

bfs = _impl.bfs
all_pairs_distances = _impl.all_pairs_distances
geodesic_interval = _impl.geodesic_interval
far_distances = _impl.far_distances
bigon_thinness = _impl.bigon_thinness
triangle_thinness = _impl.triangle_thinness
scan_bigons = _impl.scan_bigons
scan_triangles = _impl.scan_triangles


def compiled_module():
    """Return the compiled module, or ``None`` if it was not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
