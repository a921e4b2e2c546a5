"""Scalar domains and exact linear algebra."""
from .fraction import PrecisionError, SeriesFraction
from .linalg import (
    exact_nullspace,
    exact_rank,
    generic_nullspace,
    generic_rank,
    inverse,
    jacobian_rank_at_points,
    primitive,
    rref,
    solve,
)
from .matrix import Matrix, domain_of
from .series import DomainError, ShapeError, TruncSeries, ring

__all__ = [
    "DomainError", "Matrix", "PrecisionError", "SeriesFraction", "ShapeError",
    "TruncSeries", "domain_of", "exact_nullspace", "exact_rank", "generic_nullspace",
    "generic_rank", "inverse", "jacobian_rank_at_points", "primitive", "ring", "rref",
    "solve",
]
