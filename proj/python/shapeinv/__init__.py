"""Shape-invariance checks for Calogero, harmonic Calogero and Calogero-Sutherland models."""

from ._core import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    Model,
    algebraic_spectrum,
    constant_fit,
    grid_spectrum_1d,
    partner_grid_energy,
    reduced_spectrum,
    run_cli,
    susy,
    verify,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "Model",
    "algebraic_spectrum",
    "constant_fit",
    "grid_spectrum_1d",
    "partner_grid_energy",
    "reduced_spectrum",
    "run_cli",
    "susy",
    "verify",
]
