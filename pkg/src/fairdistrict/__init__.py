"""Fair redistricting: exact geometric-target partitions in the state-cutting
model, plus ensemble analysis of the cost of imposing the target."""

from .cutting import austin_cut, iterated_cut
from .intervals import Density, District, Instance
from .protocol import ProtocolInvariantError, ProtocolTrace, build_gt_partition
from .targets import (
    LabeledPartition,
    TargetReport,
    battleground,
    count_seats,
    geometric_target,
    max_competitive_measure,
    seat_bounds,
    verify_gt,
)

__version__ = "0.1.0"

__all__ = [
    "Density",
    "District",
    "Instance",
    "LabeledPartition",
    "ProtocolInvariantError",
    "ProtocolTrace",
    "TargetReport",
    "austin_cut",
    "battleground",
    "build_gt_partition",
    "count_seats",
    "geometric_target",
    "iterated_cut",
    "max_competitive_measure",
    "seat_bounds",
    "verify_gt",
]
