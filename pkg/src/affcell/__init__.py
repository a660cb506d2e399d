"""Multi-parameter Kazhdan-Lusztig cells and affine cellularity for affine G2 and B2."""

from .coxeter import CoxeterGroup, CoxeterSystem, GroupElement, group
from .hecke import HeckeElement
from .klbasis import KLCache
from .laurent import LaurentPoly

__version__ = "0.1.0"

__all__ = ["CoxeterGroup", "CoxeterSystem", "GroupElement", "group", "HeckeElement", "KLCache", "LaurentPoly", "__version__"]
