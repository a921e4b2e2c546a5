"""Exact matrix exponentials over truncated power series, eigencoordinates,
weakly special subvarieties and an Ax-Schanuel checking harness."""
from .scalars import (  # noqa: F401
    DomainError,
    Matrix,
    PrecisionError,
    SeriesFraction,
    ShapeError,
    TruncSeries,
)

__version__ = "0.1.0"
