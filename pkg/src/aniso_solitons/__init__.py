"""Translating solitons of anisotropic mean curvature flow.

Planar grim reapers and their lifts, rotationally symmetric bowls for
cylindrical anisotropies, and explicit crystalline examples.  The profile
ODEs run through a compiled Dormand-Prince kernel when it is built and a
pure-Python copy otherwise (see ``aniso_solitons._kernels``).
"""

__version__ = "0.1.0"

from . import anisotropy, bowl, crystalline, grim, io, tables
from ._kernels import BACKEND
from .anisotropy import *  # noqa: F401,F403
from .bowl import *  # noqa: F401,F403
from .crystalline import *  # noqa: F401,F403
from .grim import *  # noqa: F401,F403

__all__ = (
    ["__version__", "BACKEND"]
    + anisotropy.__all__
    + grim.__all__
    + bowl.__all__
    + crystalline.__all__
)
