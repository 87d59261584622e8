"""Hot ODE kernel with a compiled backend and a pure-Python fallback.

The compiled extension is used when it imports; set
``ANISO_SOLITONS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _dopri_py

STATUS_DONE = _dopri_py.STATUS_DONE
STATUS_STOP = _dopri_py.STATUS_STOP
STATUS_MAXSTEPS = _dopri_py.STATUS_MAXSTEPS
STATUS_UNDERFLOW = _dopri_py.STATUS_UNDERFLOW

try:
    from . import _dopri as _dopri_c
except ImportError:  # extension not built
    _dopri_c = None

BACKENDS = {"python": _dopri_py.integrate}
if _dopri_c is not None:
    BACKENDS["compiled"] = _dopri_c.integrate

if _dopri_c is not None and os.environ.get("ANISO_SOLITONS_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

integrate = BACKENDS[BACKEND]

__all__ = [
    "BACKEND",
    "BACKENDS",
    "integrate",
    "STATUS_DONE",
    "STATUS_STOP",
    "STATUS_MAXSTEPS",
    "STATUS_UNDERFLOW",
]
