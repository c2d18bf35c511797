"""Weighted generalized interval entropy of doubly truncated lifetimes."""

from .distributions import (
    GPD,
    Beta1,
    Distribution,
    ExpExponential,
    Exponential,
    Gamma,
    LinearDensity,
    NumericDensity,
    ParetoI,
    Power,
    Uniform,
    Weibull,
    Window,
    gfr,
    model_from_spec,
    sample_truncated,
)
from .entropy import (
    EntropyOrder,
    EntropyValue,
    generalized_entropy,
    interval_shannon,
    weighted_generalized_entropy,
    weighted_interval_entropy,
    wgie,
)

__all__ = [
    "GPD", "Beta1", "Distribution", "ExpExponential", "Exponential", "Gamma", "LinearDensity",
    "NumericDensity", "ParetoI", "Power", "Uniform", "Weibull", "Window", "gfr", "model_from_spec",
    "sample_truncated", "EntropyOrder", "EntropyValue", "generalized_entropy", "interval_shannon",
    "weighted_generalized_entropy", "weighted_interval_entropy", "wgie",
]
__version__ = "0.1.0"
