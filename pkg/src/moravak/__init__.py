"""Exact computations with formal group laws over p-local coefficients, and torsion bounds for quadrics."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConsistencyError,
    DomainError,
    IntegralityError,
    MoravakError,
    NonUnitDivision,
    StructuralError,
)
from .series import GradedSeries, PLocalScalar, SeriesSpace  # noqa: E402
from .fgl import FormalGroupLaw, bp, fgl_from_log, morava  # noqa: E402

__all__ = [
    "ConsistencyError", "DomainError", "IntegralityError", "MoravakError", "NonUnitDivision",
    "StructuralError", "GradedSeries", "PLocalScalar", "SeriesSpace", "FormalGroupLaw",
    "bp", "fgl_from_log", "morava", "__version__",
]
