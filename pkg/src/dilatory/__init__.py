"""Stinespring dilations, categorical law checks, and purification for
finite-dimensional C*-algebras."""

from .algebra import FdCStarAlgebra, AlgebraElement, StarHom
from .cpmap import OcpMap, OcpMorphism
from .dilation import AnchoredRep, DilationCertificate, RepMorphism
from .numerics import Tolerance

__all__ = [
    "FdCStarAlgebra",
    "AlgebraElement",
    "StarHom",
    "OcpMap",
    "OcpMorphism",
    "AnchoredRep",
    "DilationCertificate",
    "RepMorphism",
    "Tolerance",
]

__version__ = "0.1.0"
