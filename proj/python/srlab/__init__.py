"""Pullback orbits, periodic measures and resonance indicators for the forced double-well SDE."""

from ._srlab import (
    Config,
    ConfigError,
    ConvergenceError,
    NumericalError,
    periodic_measure,
    philox4x32_10,
    pullback_point,
    resonance_indicator,
    simulate,
    sweep,
)

__all__ = [
    "Config",
    "ConfigError",
    "ConvergenceError",
    "NumericalError",
    "periodic_measure",
    "philox4x32_10",
    "pullback_point",
    "resonance_indicator",
    "simulate",
    "sweep",
]
