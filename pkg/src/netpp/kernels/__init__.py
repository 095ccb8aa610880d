"""Envelope kernels with a compiled fast path.

Imports the Cython extension when it was built, otherwise the numpy
fallback.  Set ``NETPP_PURE_PYTHON=1`` to force the fallback (used by the
parity tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("NETPP_PURE_PYTHON"):
    from netpp.kernels.envelope_py import (
        edge_candidates, edge_comin_matrix, profile_values)
    BACKEND = "python"
else:
    try:
        from netpp.kernels._envelope import (  # type: ignore[no-redef]
            edge_candidates, edge_comin_matrix, profile_values)
        BACKEND = "compiled"
    except ImportError:
        from netpp.kernels.envelope_py import (  # type: ignore[no-redef]
            edge_candidates, edge_comin_matrix, profile_values)
        BACKEND = "python"

__all__ = ["edge_candidates", "profile_values", "edge_comin_matrix", "BACKEND"]
