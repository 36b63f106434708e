"""Exact-arithmetic Schwartz forms in the Fock model.

Coefficients live in the Laurent ring Q(i, sqrt2)[pi, 1/pi]; nothing is ever
evaluated in floating point except the lattice-enumeration bounding heuristics,
whose output is re-checked exactly.
"""

from fockforms.scalars import Scalar, QQ
from fockforms.multilinear import MixedForm, SpaceParams

__all__ = ["Scalar", "QQ", "MixedForm", "SpaceParams"]

__version__ = "0.1.0"
