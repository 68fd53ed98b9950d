"""Equivariant sigma orientation checks over C / Lambda."""

from ._sigorient import (
    SUITES,
    ConfigError,
    NonUnitError,
    delta_a,
    gluing_check,
    phi,
    run_suites,
    sigma,
    sigma_jet,
    weil_pairing,
)

__all__ = [
    "SUITES",
    "ConfigError",
    "NonUnitError",
    "delta_a",
    "gluing_check",
    "phi",
    "run_suites",
    "sigma",
    "sigma_jet",
    "weil_pairing",
]
