"""Homotopy-continuation solver for the Bethe polynomial systems."""

from .polysys import PolySystem, build_system_x, build_system_xxx
from .tracker import (
    SolveResult,
    TrackedPath,
    TrackerConfig,
    dedupe,
    polish,
    refine,
    solve_all,
)

__all__ = [
    "PolySystem",
    "build_system_x",
    "build_system_xxx",
    "TrackerConfig",
    "TrackedPath",
    "SolveResult",
    "solve_all",
    "refine",
    "dedupe",
    "polish",
]
