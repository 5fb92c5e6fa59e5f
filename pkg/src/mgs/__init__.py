"""Multigraded supports: local cohomology, Tor and truncations over standard Z^k-graded rings."""

from .field import FieldSpec
from .region import BlockStructure, StarRegion, Window, star
from .ring import GradedPresentation, IdealDescriptor, Ring, free_module, truncate

__all__ = [
    "BlockStructure",
    "FieldSpec",
    "GradedPresentation",
    "IdealDescriptor",
    "Ring",
    "StarRegion",
    "Window",
    "free_module",
    "star",
    "truncate",
]
