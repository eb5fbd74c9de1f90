"""Denjoy circle maps, their invariant Cantor measure and measured partitions."""

from .denjoy import (
    ASSERT_SLACK,
    DEFAULT_TOL,
    DenjoyMap,
    ToleranceError,
    apply_map,
    arc_measure,
    blow_up,
    build_denjoy,
    collapse,
    estimate_rotation_number,
    head_size,
    inverse_map,
    lift_inverse,
    lift_map,
)
from .gaps import GapSchedule
from .partition import (
    EXACT,
    GAP_SEPARATED,
    MeasuredPartition,
    PartitionError,
    as_fraction,
    block_arcs,
    build_partition,
    locate_block,
    locate_blocks,
    partition_from_dict,
)
from .rotation import RotationNumber, from_fixed, rotation_orbit, to_fixed

__all__ = [
    "ASSERT_SLACK",
    "DEFAULT_TOL",
    "EXACT",
    "GAP_SEPARATED",
    "DenjoyMap",
    "GapSchedule",
    "MeasuredPartition",
    "PartitionError",
    "RotationNumber",
    "ToleranceError",
    "apply_map",
    "arc_measure",
    "as_fraction",
    "block_arcs",
    "blow_up",
    "build_denjoy",
    "build_partition",
    "collapse",
    "estimate_rotation_number",
    "from_fixed",
    "head_size",
    "inverse_map",
    "lift_inverse",
    "lift_map",
    "locate_block",
    "locate_blocks",
    "partition_from_dict",
    "rotation_orbit",
    "to_fixed",
]
