"""Polynomial dynamics: preimages, periodic points, filled Julia sets and balanced measures."""

from .blmeasure import BLResult, PreimageTree, bl_measure_approx, default_start, path_choices, pushforward_residual
from .boxgrid import ESCAPING, INTERIOR, UNKNOWN, BoxGrid, filled_julia_approx, read_pgm
from .bryuno import BryunoSums, bryuno_partial_sums, denominators, partial_quotients
from .periodic import (
    ATTRACTING,
    PARABOLIC,
    REPELLING,
    UNRESOLVED,
    PeriodicPointReport,
    attracting_disks,
    basin_disk,
    classify_periodic,
    krawczyk,
    multiplier_box,
)
from .poly import PolySpec, box_derivative, box_eval, escape_radius
from .roots import PreimageResult, preimages, solve_preimages

__all__ = [
    "ATTRACTING", "BLResult", "BoxGrid", "BryunoSums", "ESCAPING", "INTERIOR", "PARABOLIC",
    "PeriodicPointReport", "PolySpec", "PreimageResult", "PreimageTree", "REPELLING", "UNKNOWN",
    "UNRESOLVED", "attracting_disks", "basin_disk", "bl_measure_approx", "box_derivative", "box_eval",
    "bryuno_partial_sums", "classify_periodic", "default_start", "denominators", "escape_radius",
    "filled_julia_approx", "krawczyk", "multiplier_box", "partial_quotients", "path_choices",
    "preimages", "pushforward_residual", "read_pgm", "solve_preimages",
]
