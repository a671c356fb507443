"""Transfer operators of smooth expanding circle maps."""

from ._expcircle import (
    Error,
    ExpandingMap,
    FloorViolation,
    InvalidAlpha,
    MapError,
    NoConvergence,
    NotInvariant,
    TransferOperator,
    constants,
    correlation_series,
    decay_report,
    holder_coefficient,
    integrate,
    invariant_density,
    monte_carlo_coupling,
)

__all__ = [
    "Error",
    "ExpandingMap",
    "FloorViolation",
    "InvalidAlpha",
    "MapError",
    "NoConvergence",
    "NotInvariant",
    "TransferOperator",
    "constants",
    "correlation_series",
    "decay_report",
    "holder_coefficient",
    "integrate",
    "invariant_density",
    "monte_carlo_coupling",
]
