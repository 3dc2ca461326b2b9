"""Combinatorics of Abel maps on stable curves, computed on dual graphs."""
from .errors import AbelGraphError, InvariantViolation
from .graph import DualGraph, PointOnCurve, Subcurve, Tail, blow_up, bridges, tails
from .lattice import Multidegree, canonical_representative, class_group, classes_equal
from .balanced import enumerate_balanced, is_balanced, is_d_general, is_semibalanced
from .abel import abel_fibers, abel_image, abel_images_equal, abel_multidegree

__version__ = "0.1.0"

__all__ = [
    "AbelGraphError",
    "DualGraph",
    "InvariantViolation",
    "Multidegree",
    "PointOnCurve",
    "Subcurve",
    "Tail",
    "abel_fibers",
    "abel_image",
    "abel_images_equal",
    "abel_multidegree",
    "blow_up",
    "bridges",
    "canonical_representative",
    "class_group",
    "classes_equal",
    "enumerate_balanced",
    "is_balanced",
    "is_d_general",
    "is_semibalanced",
    "tails",
]
