"""Permutation symmetry and entanglement of N-particle, n-level systems."""

from .errors import (
    DegenerateStateError,
    InvalidArgumentError,
    NumericalFailureError,
    QunitError,
    ResourceLimitError,
)
from .partitions import Partition, decomposition_table, enumerate_partitions
from .statespace import StateVector, SystemShape

__version__ = "0.1.0"

__all__ = [
    "DegenerateStateError",
    "InvalidArgumentError",
    "NumericalFailureError",
    "Partition",
    "QunitError",
    "ResourceLimitError",
    "StateVector",
    "SystemShape",
    "__version__",
    "decomposition_table",
    "enumerate_partitions",
]
