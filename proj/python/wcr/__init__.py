"""Weak-form collocation identification of SDE drift and diffusion from snapshot data."""

from ._core import (
    ConfigError,
    DataError,
    NumericalError,
    __version__,
    complete_polynomial_basis,
    evaluate,
    fit,
    least_squares,
    load_csv,
    preset_config,
    preset_names,
    save_csv,
    simulate,
    stridge,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericalError",
    "__version__",
    "complete_polynomial_basis",
    "evaluate",
    "fit",
    "least_squares",
    "load_csv",
    "preset_config",
    "preset_names",
    "save_csv",
    "simulate",
    "stridge",
]
