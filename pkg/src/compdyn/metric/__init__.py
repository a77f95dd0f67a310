"""Entropy estimates for circle maps."""

from .katok import KatokBrinEstimate, birkhoff_measure, bowen_hits, katok_brin_estimate
from .maps import (
    Doubling,
    IntervalMap,
    OrbitSample,
    Rotation,
    TableMap,
    circle_dist,
    make_map,
    pseudo_random_point,
)
from .separated import (
    SeparatedSetReport,
    SeparationEntropy,
    entropy_from_separation,
    separated_count,
    verify_separated,
)

__all__ = [
    "Doubling", "IntervalMap", "KatokBrinEstimate", "OrbitSample", "Rotation", "SeparatedSetReport",
    "SeparationEntropy", "TableMap", "birkhoff_measure", "bowen_hits", "circle_dist",
    "entropy_from_separation", "katok_brin_estimate", "make_map", "pseudo_random_point",
    "separated_count", "verify_separated",
]
