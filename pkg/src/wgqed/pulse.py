"""Incident single-photon pulses in the frequency domain.

Frequencies are measured in units of the qubit frequency and times in units
of its inverse.  ``PulseSpec.gaussian`` takes the standoff distance in metres
and converts it once.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, DomainError
from .quadrature import FrequencyGrid, integrate_on_grid

# reference device: 5 GHz transmon in a coplanar line
OMEGA_Q = 2 * np.pi * 5e9
VG = 3e8

CUTOFF_WIDTHS = 12.0


class PulseShape(str, Enum):
    GAUSSIAN = "gaussian"
    DELTA = "delta"


@dataclass(frozen=True)
class PulseSpec:
    """Single-photon pulse.

    Attributes
    ----------
    shape : PulseShape
    omega_s : float
        Carrier frequency / qubit frequency.
    delta : float
        Spectral width / qubit frequency (Gaussian only).
    t0 : float
        Flight time of the pulse peak to the first qubit, times the qubit
        frequency (``Omega * x0 / vg``).
    """

    shape: PulseShape = PulseShape.GAUSSIAN
    omega_s: float = 1.0
    delta: float = 0.1
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shape", PulseShape(self.shape))
        if not self.omega_s > 0:
            raise ConfigurationError("carrier frequency must be positive")
        if self.shape is PulseShape.GAUSSIAN and not self.delta > 0:
            raise ConfigurationError("Gaussian width must be positive")
        if not self.t0 >= 0:
            raise ConfigurationError("standoff distance x0 must be >= 0")

    @classmethod
    def gaussian(cls, delta, omega_s=1.0, x0=0.0, omega_q=OMEGA_Q, vg=VG):
        """Gaussian pulse with ``x0`` in metres and ``omega_q`` in rad/s."""
        return cls(PulseShape.GAUSSIAN, omega_s, delta, omega_q * x0 / vg)

    @classmethod
    def delta_limit(cls, omega_s=1.0):
        return cls(PulseShape.DELTA, omega_s, 0.0, 0.0)

    @property
    def is_delta(self):
        return self.shape is PulseShape.DELTA

    @property
    def cutoff(self):
        """Upper limit for half-line integrals over the pulse spectrum."""
        return self.omega_s + CUTOFF_WIDTHS * self.delta

    def x0(self, omega_q=OMEGA_Q, vg=VG):
        return self.t0 * vg / omega_q

    def spatial_width(self, omega_q=OMEGA_Q, vg=VG):
        """Width of the packet in space, ``vg / Delta``, in metres."""
        return vg / (self.delta * omega_q)


def gaussian_amplitude(omega, spec):
    """gamma_0(omega) of a travelling Gaussian pulse, omega >= 0 (scalar or array)."""
    if spec.is_delta:
        raise DomainError("a delta-limit pulse has no pointwise amplitude")
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("pulse amplitudes live on the positive frequency axis")
    u = w - spec.omega_s
    amp = (2.0 / (np.pi * spec.delta ** 2)) ** 0.25 * np.exp(1j * u * spec.t0 - (u / spec.delta) ** 2)
    return complex(amp) if amp.ndim == 0 else amp


def pulse_norm(spec, grid: FrequencyGrid):
    """``int |gamma_0|^2 dw`` over the grid, which must cover the pulse band."""
    lo = max(0.0, spec.omega_s - 10 * spec.delta)
    hi = spec.omega_s + 10 * spec.delta
    if not grid.covers(lo, hi):
        raise ConfigurationError(
            f"grid [{grid.lo}, {grid.hi}] does not cover the pulse band [{lo:.4g}, {hi:.4g}]")
    return float(integrate_on_grid(np.abs(gaussian_amplitude(grid.points, spec)) ** 2, grid))
