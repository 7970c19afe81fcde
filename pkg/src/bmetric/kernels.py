"""Kernel dispatch: compiled ``_ckernels`` when built, numpy fallback otherwise.

Set ``BMETRIC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from ._kernels_py import DEGENERACY_TOL, DegenerateMetricError
from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("BMETRIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "compiled" if compiled_backend is not None else "python"

inverse_metric = backend.inverse_metric
christoffel = backend.christoffel
curvature = backend.curvature
nabla_endomorphism = backend.nabla_endomorphism

__all__ = [
    "BACKEND_NAME",
    "DEGENERACY_TOL",
    "DegenerateMetricError",
    "backend",
    "christoffel",
    "compiled_backend",
    "curvature",
    "inverse_metric",
    "nabla_endomorphism",
    "python_backend",
]
