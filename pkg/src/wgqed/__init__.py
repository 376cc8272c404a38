"""Single-photon scattering on qubits in a one-dimensional waveguide."""

from .errors import (ConfigurationError, DomainError, InvariantError, NumericalError,
                     QuadratureError, SingularSystemError, WgqedError)
from .kernels import ChainConfig, CouplingMode, g_kernel
from .pulse import PulseShape, PulseSpec
from .quadrature import FrequencyGrid
from .solver import SpectrumResult, solve_beta, spectra

__all__ = [
    "ChainConfig", "ConfigurationError", "CouplingMode", "DomainError", "FrequencyGrid",
    "InvariantError", "NumericalError", "PulseShape", "PulseSpec", "QuadratureError",
    "SingularSystemError", "SpectrumResult", "WgqedError", "g_kernel", "solve_beta", "spectra",
]
