"""Exact homological algebra over the integers and prime fields.

Chain complexes, mapping cones and distinguished triangles, derived
functors and truncations, spectral sequences of filtered complexes and the
Dold-Kan correspondence, all computed with exact integer arithmetic.
"""

from .errors import *  # noqa: F401,F403
from .linalg import *  # noqa: F401,F403
from .chain import *  # noqa: F401,F403
from .triangles import *  # noqa: F401,F403
from .derived import *  # noqa: F401,F403
from .filtered import *  # noqa: F401,F403
from .doldkan import *  # noqa: F401,F403
from .io import *  # noqa: F401,F403
from .randgen import SplitMix64  # noqa: F401

__version__ = "0.1.0"
