"""Outage probability and average SER of mixed THz-RF decode-and-forward links."""

from .channel import MisalignmentGeometry, RfLinkParams, ThzLinkParams
from .errors import (
    BandWarning,
    ConfigError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    ParameterError,
    UnsupportedParameterError,
)
from .perf import Modulation, Scenario, modulation_constants

__version__ = "0.1.0"

__all__ = [
    "BandWarning", "ConfigError", "ConvergenceError", "DivergenceError", "DomainError",
    "MisalignmentGeometry", "Modulation", "ParameterError", "RfLinkParams", "Scenario",
    "ThzLinkParams", "UnsupportedParameterError", "modulation_constants",
]
