"""Finite-speed-of-light phase shifts in light-pulse atom interferometers."""

from ._core import (
    Scenario,
    compensation_delay,
    e1m1_differential_phase,
    gravimetry,
    oracle,
    phase,
    sweep,
)

__all__ = [
    "Scenario",
    "compensation_delay",
    "e1m1_differential_phase",
    "gravimetry",
    "oracle",
    "phase",
    "sweep",
]
