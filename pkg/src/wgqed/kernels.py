"""Physics kernels shared by the solvers.

Units: frequencies in units of the qubit frequency Omega, positions as
phases ``Omega * x / vg`` (so ``k_nu * x = nu * position``).  In these units
the photon amplitude ``gamma`` is already scaled by ``sqrt(Omega)`` and the
spectra ``S = |gamma|^2 Omega`` are plain ``|gamma|^2``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, DomainError
from .pulse import OMEGA_Q, VG, gaussian_amplitude
from .quadrature import DEFAULT_TOL, hilbert_sum
from .specfun import sici

MIN_SEPARATION = 1e-6


class CouplingMode(str, Enum):
    WW = "ww"  # g(w) = g(Omega), Wigner-Weisskopf
    LINEAR = "linear"  # g^2(w) = lambda * w


@dataclass(frozen=True)
class ChainConfig:
    """Qubit chain coupled to the waveguide.

    ``positions`` are dimensionless phases ``k0 * x_n`` with ``k0 = Omega/vg``;
    use :meth:`from_si` to build from metres.  ``omega_q`` (rad/s) and ``vg``
    (m/s) are carried along only for unit conversion at the boundary.
    """

    gamma_ratio: float
    positions: tuple = (0.0,)
    coupling_mode: CouplingMode = CouplingMode.WW
    omega_q: float = OMEGA_Q
    vg: float = VG

    def __post_init__(self):
        pos = tuple(float(p) for p in np.atleast_1d(self.positions))
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "coupling_mode", CouplingMode(self.coupling_mode))
        if not 0 < self.gamma_ratio < 1:
            raise ConfigurationError("gamma_ratio = Gamma/Omega must lie in (0, 1)")
        if len(pos) < 1:
            raise ConfigurationError("need at least one qubit")
        if not np.all(np.isfinite(pos)):
            raise ConfigurationError("qubit positions must be finite")
        if len(pos) > 1:
            gaps = np.diff(pos)
            if np.any(gaps <= 0):
                raise ConfigurationError("qubit positions must be strictly increasing")
            if np.min(gaps) < MIN_SEPARATION:
                raise ConfigurationError("qubits closer than k0*|dx| = 1e-6")
        if self.omega_q <= 0 or self.vg <= 0:
            raise ConfigurationError("omega_q and vg must be positive")

    @classmethod
    def from_si(cls, gamma_ratio, positions_m, omega_q=OMEGA_Q, vg=VG, coupling_mode=CouplingMode.WW):
        k0 = omega_q / vg
        return cls(gamma_ratio, tuple(k0 * np.asarray(positions_m, dtype=float)),
                   coupling_mode, omega_q, vg)

    @classmethod
    def single(cls, gamma_ratio, **kwargs):
        return cls(gamma_ratio, (0.0,), **kwargs)

    @classmethod
    def pair(cls, gamma_ratio, k0d, **kwargs):
        """Two qubits at ``x = 0`` and ``x = d`` given the phase ``k0 * d``."""
        return cls(gamma_ratio, (0.0, float(k0d)), **kwargs)

    @property
    def n_qubits(self):
        return len(self.positions)

    @property
    def positions_m(self):
        return np.asarray(self.positions) * self.vg / self.omega_q

    @property
    def k0d(self):
        """Phase separation of the first two qubits."""
        if self.n_qubits < 2:
            raise ConfigurationError("k0d needs at least two qubits")
        return self.positions[1] - self.positions[0]


def coupling_g(omega, cfg):
    """Qubit-photon coupling g(omega) in units of sqrt(Omega)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("coupling is defined for omega >= 0 only")
    g2 = cfg.gamma_ratio / (4 * np.pi)
    if cfg.coupling_mode is CouplingMode.LINEAR:
        out = np.sqrt(g2 * w)
    else:
        out = np.full(w.shape, np.sqrt(g2))
    return float(out) if out.ndim == 0 else out


def decay_rate(omega, cfg):
    """Gamma(omega) = 4 pi g^2(omega)."""
    return 4 * np.pi * np.asarray(coupling_g(omega, cfg)) ** 2


def g_kernel(kd):
    """Dipole-dipole correction G(kd) from restricting the coupling to omega > 0.

    ``G(x) = [cos(x) Ci(|x|) + sin(x) (Si(x) - pi/2 sgn(x))] / pi``; even in x,
    diverges logarithmically as x -> 0.
    """
    x = np.asarray(kd, dtype=float)
    if np.any(x == 0):
        raise DomainError("G(kd) diverges at kd = 0")
    ax = np.abs(x)
    si, ci = sici(ax)
    # evenness: sin(x) (Si(x) - pi/2 sgn x) == sin|x| (Si|x| - pi/2)
    out = (np.cos(ax) * ci + np.sin(ax) * (si - np.pi / 2)) / np.pi
    return float(out) if np.ndim(out) == 0 else out


def _g_on_axis(w, cfg):
    # g on arbitrary real abscissae, zero where the coupling does not exist
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape)
    pos = w > 0
    out[pos] = coupling_g(w[pos], cfg)
    return out


def _pulse_on_axis(w, pulse):
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape, dtype=complex)
    pos = w >= 0
    out[pos] = gaussian_amplitude(w[pos], pulse)
    return out


def drive_terms(nu, cfg, pulse, include_pv=True, tol=DEFAULT_TOL):
    """Right-hand sides C_n(nu) of the amplitude equations, shape ``(N, len(nu))``.

    ``C_n(nu) = pi g(nu) gamma_0(nu) e^{i nu x_n}
                + i P int_0^inf g(w) gamma_0(w) e^{i w x_n} / (nu - w) dw``

    ``nu`` may be any real frequency; off the positive axis the first term
    vanishes and the integral is an ordinary one.  For a delta-limit pulse the
    result is the transfer coefficient ``2 pi g(nu) e^{i nu x_n}`` multiplying
    gamma_0(nu).  ``include_pv=False`` drops the principal-value term
    (diagnostic only).
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    x = np.asarray(cfg.positions)
    phase = np.exp(1j * np.outer(x, nu))
    if pulse.is_delta:
        if np.any(nu <= 0):
            raise DomainError("delta-pulse transfer functions need nu > 0")
        return 2 * np.pi * coupling_g(nu, cfg) * phase
    local = np.pi * _g_on_axis(nu, cfg) * _pulse_on_axis(nu, pulse) * phase
    if not include_pv:
        return local
    cutoff = pulse.cutoff
    out = np.empty_like(local)
    for n, xn in enumerate(x):
        def f(w, xn=xn):
            return _g_on_axis(w, cfg) * _pulse_on_axis(w, pulse) * np.exp(1j * w * xn)
        out[n] = local[n] + 1j * hilbert_sum(f, nu, 0.0, cutoff, tol=tol)
    return out


def drive_term(nu, n, cfg, pulse, include_pv=True):
    """Drive term of qubit ``n`` (0-based) at a single frequency ``nu > 0``."""
    if not nu > 0:
        raise DomainError("drive term is evaluated for nu > 0")
    if not 0 <= n < cfg.n_qubits:
        raise ConfigurationError(f"qubit index {n} out of range")
    sub = ChainConfig(cfg.gamma_ratio, (cfg.positions[n],), cfg.coupling_mode, cfg.omega_q, cfg.vg)
    return complex(drive_terms([nu], sub, pulse, include_pv=include_pv)[0, 0])
