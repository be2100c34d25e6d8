"""Combinatorial disks in {3,n} triangle tilings and their Fibonacci growth laws."""

from .errors import HypergrowthError
from .recurrence import (
    Matrix2,
    area_closed,
    area_delta_closed,
    counts_by_recurrence,
    fibonacci,
    matrix_power,
    perimeter_closed,
    transfer_matrix,
)
from .tiling import (
    BoundaryColor,
    DiskComplex,
    DiskMetrics,
    Limits,
    boundary_cycle,
    build_disk,
    classify_boundary,
    grow_layer,
    measure,
    validate_complex,
)

__version__ = "0.1.0"
