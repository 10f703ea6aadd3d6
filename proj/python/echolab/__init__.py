"""Python access to the echo-lab simulation core."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    EchoLabError,
    InvalidArgument,
    NumericalError,
    angular_correlation,
    fit_decay_rate,
    hbar,
    lyapunov_exponent,
    populations,
    presets,
    rotor_echo,
    thermal_populations,
)

__version__ = _core.__version__


def run(source, is_text=False):
    """Run an experiment and return (summary dict, series dict)."""
    summary, series = _core.run(source, is_text)
    return _json.loads(summary), series


__all__ = [
    "ConfigError",
    "EchoLabError",
    "InvalidArgument",
    "NumericalError",
    "angular_correlation",
    "fit_decay_rate",
    "hbar",
    "lyapunov_exponent",
    "populations",
    "presets",
    "rotor_echo",
    "run",
    "thermal_populations",
]
