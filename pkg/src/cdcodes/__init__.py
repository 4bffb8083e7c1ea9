"""Constant-dimension subspace codes from linkage and echelon-Ferrers constructions."""

from .field import Field, make_field
from .matrix import Matrix, rank, rref
from .subspace import IdentifyingVector, Subspace, canonicalize, identifying_vector, subspace_distance

__all__ = [
    "Field",
    "IdentifyingVector",
    "Matrix",
    "Subspace",
    "canonicalize",
    "identifying_vector",
    "make_field",
    "rank",
    "rref",
    "subspace_distance",
]

__version__ = "0.1.0"
