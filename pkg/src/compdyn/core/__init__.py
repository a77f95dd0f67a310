"""Exact dyadic arithmetic, interval boxes and number oracles."""

from .dyadic import ComplexBox, DInterval, Dyadic, box_image, dyadic_arith
from .logbounds import ln2_bounds, log_bounds, log_lower, log_upper
from .oracles import (
    ComplexOracle,
    RealOracle,
    check_consistency,
    complex_from_rational,
    named_real,
    oracle_from_rational,
    sqrt_oracle,
)

__all__ = [
    "ComplexBox", "ComplexOracle", "DInterval", "Dyadic", "RealOracle", "box_image",
    "check_consistency", "complex_from_rational", "dyadic_arith", "ln2_bounds", "log_bounds",
    "log_lower", "log_upper", "named_real", "oracle_from_rational", "sqrt_oracle",
]
