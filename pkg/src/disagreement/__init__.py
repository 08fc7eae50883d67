"""Survey-based disagreement indicators for business and consumer tendency surveys."""

from disagreement.metrics import (
    SharesVector,
    balance,
    discrepancy,
    dispersion,
    max_vertex_distance,
    point_at_discrepancy,
)

__all__ = [
    "SharesVector",
    "balance",
    "discrepancy",
    "dispersion",
    "max_vertex_distance",
    "point_at_discrepancy",
]

__version__ = "0.1.0"
