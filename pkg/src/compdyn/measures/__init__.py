"""Discrete measures and Wasserstein-1 transport."""

from .measure import (
    CIRCLE,
    PLANAR,
    SPHERICAL,
    DiscreteMeasure,
    dirac,
    discretize_reference,
    metric_eval,
    parse_reference,
    pushforward,
    roots_of_unity,
    uniform,
)
from .transport import TransportPlan, circle_w1, min_cost_flow, transport, wasserstein1

__all__ = [
    "CIRCLE", "PLANAR", "SPHERICAL", "DiscreteMeasure", "TransportPlan", "circle_w1", "dirac",
    "discretize_reference", "metric_eval", "min_cost_flow", "parse_reference", "pushforward",
    "roots_of_unity", "transport", "uniform", "wasserstein1",
]
