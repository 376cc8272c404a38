"""Analytic one- and two-qubit solutions.

Exact (positive-frequency) amplitudes carry principal-value integrals over
the incident pulse; the baselines are the familiar negative-frequency-extended
forms, proportional to gamma_0.  The frequency shift F is absorbed into the
qubit frequency throughout (F = 0).
"""

import numpy as np

from .errors import ConfigurationError
from .kernels import CouplingMode, coupling_g, decay_rate, drive_terms, g_kernel
from .pulse import gaussian_amplitude
from .quadrature import DEFAULT_TOL, integrate_halfline, pv_halfline
from .solver import SpectrumResult


def _require(cfg, n, origin=True):
    if cfg.n_qubits != n:
        raise ConfigurationError(f"closed form needs exactly {n} qubit(s), got {cfg.n_qubits}")
    if origin and cfg.positions[0] != 0.0:
        raise ConfigurationError("closed forms place the first qubit at x = 0")


def _require_ww(cfg):
    if cfg.coupling_mode is not CouplingMode.WW:
        raise ConfigurationError("this closed form assumes the Wigner-Weisskopf coupling")


def beta_omega_single(omega, cfg, pulse, include_pv=True):
    """Fourier amplitude beta(omega) = C(omega) / (omega - Omega + i Gamma(omega)/2)."""
    _require(cfg, 1, origin=False)
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    c = drive_terms(w, cfg, pulse, include_pv=include_pv)[0]
    out = c / (w - 1.0 + 0.5j * decay_rate(w, cfg))
    return complex(out[0]) if np.ndim(omega) == 0 else out


def spectra_single_approx(cfg, pulse, grid):
    """Baseline gamma = gamma_0 Delta/(Delta + i Gamma/2), delta = -i Gamma/2 gamma_0/(...)."""
    _require(cfg, 1, origin=False)
    w = grid.points
    gam = decay_rate(w, cfg)
    den = w - 1.0 + 0.5j * gam
    g0 = np.ones(w.shape, dtype=complex) if pulse.is_delta else gaussian_amplitude(w, pulse)
    return SpectrumResult(grid, gamma_approx=g0 * (w - 1.0) / den,
                          delta_approx=g0 * (-0.5j * gam) / den, gamma0=g0, transfer=pulse.is_delta)


def spectra_single_exact(cfg, pulse, grid, include_pv=True, tol=DEFAULT_TOL):
    """Positive-frequency one-qubit spectra.

    ``gamma = gamma_0 (D + i Gamma/4 - i Gamma/2)/D + g PV/D`` with
    ``D = w - Omega + i Gamma/2`` and ``PV = P int g(w') gamma_0(w')/(w - w') dw'``;
    ``delta`` has ``-i Gamma/4`` in the first numerator.  A delta-limit pulse
    reduces the PV integral to ``-i pi g gamma_0`` and returns the baseline
    transfer functions.
    """
    _require(cfg, 1)
    if pulse.is_delta:
        base = spectra_single_approx(cfg, pulse, grid)
        return SpectrumResult(grid, base.gamma_approx, base.delta_approx, gamma0=base.gamma0, transfer=True)
    w = grid.points
    gam = decay_rate(w, cfg)
    g = coupling_g(w, cfg)
    g0 = gaussian_amplitude(w, pulse)
    den = w - 1.0 + 0.5j * gam
    if include_pv:
        pv = pv_halfline(lambda x: coupling_g(x, cfg) * gaussian_amplitude(x, pulse),
                         w, pulse.cutoff, tol=tol)
    else:
        pv = 0.0
    gamma = g0 * (w - 1.0 + 0.25j * gam) / den + g * pv / den
    delta = g0 * (-0.25j * gam) / den + g * pv / den
    return SpectrumResult(grid, gamma, delta, gamma0=g0)


def spectra_single(cfg, pulse, grid, **kwargs):
    """Exact spectra with the baseline attached (S1..S4)."""
    return spectra_single_exact(cfg, pulse, grid, **kwargs).merged(spectra_single_approx(cfg, pulse, grid))


def beta_t_single(t, cfg, pulse, tol=DEFAULT_TOL):
    """Qubit amplitude beta(t) of one qubit driven by a Gaussian pulse.

    Residue evaluation of the inverse Fourier transform in the
    Wigner-Weisskopf limit::

        beta(t) = int_0^inf g gamma_0(w) (e^{-i(w - Omega)t} - e^{-Gamma t/2}) / (w - Omega + i Gamma/2) dw

    and ``beta(t) = 0`` for ``t < 0``.  ``t`` in units of 1/Omega.
    """
    _require(cfg, 1)
    if pulse.is_delta:
        raise ConfigurationError("time evolution needs a normalisable (Gaussian) pulse")
    t = np.asarray(t, dtype=float)
    tt = np.atleast_1d(t).ravel()
    out = np.zeros(tt.shape, dtype=complex)
    pos = tt > 0
    if np.any(pos):
        tp = tt[pos][:, None]
        gam = cfg.gamma_ratio

        def f(w):
            amp = coupling_g(w, cfg) * gaussian_amplitude(w, pulse)
            return amp * (np.exp(-1j * (w - 1.0) * tp) - np.exp(-0.5 * gam * tp)) / (w - 1.0 + 0.5j * gam)

        # resolve e^{-i w t} at the latest time requested
        width = min(0.05, 2.0 / max(1.0, float(tp.max())))
        out[pos] = integrate_halfline(f, pulse.cutoff, tol=tol, panel_width=width)
    out = out.reshape(t.shape)
    return complex(out) if out.ndim == 0 else out


# --- two qubits -------------------------------------------------------------

def _pair_setup(cfg):
    _require(cfg, 2)
    return cfg.k0d


def spectra_pair_exact(cfg, pulse, grid, include_pv=True, tol=DEFAULT_TOL):
    """Two-qubit exact spectra (constant Gamma, retardation through k = w/vg).

    With ``D = w - Omega``, ``E = e^{ikd} + i G(kd)`` and
    ``den = (D + i Gamma/2)^2 + Gamma^2 E^2 / 4``::

        gamma = gamma_0 - Gamma/4 [(D + Gamma/2 e^{-ikd} G) A_1
                                   + (D e^{-ikd} + Gamma sin kd + Gamma/2 G) A_2] / den
        delta = -e^{ikd} Gamma/4 [(D + Gamma/2 e^{-ikd} G) A_2
                                  + (D e^{-ikd} + Gamma sin kd + Gamma/2 G) A_1] / den

    where ``A_1 = i gamma_0 + (1/pi) P int gamma_0(w')/(w' - w) dw'`` and
    ``A_2`` is the same with an extra ``e^{ik d}`` (``e^{ik'd}`` inside the
    integral).
    """
    k0d = _pair_setup(cfg)
    _require_ww(cfg)
    if pulse.is_delta:
        return spectra_pair_delta(cfg, grid)
    gam = cfg.gamma_ratio
    w = grid.points
    kd = w * k0d
    gk = g_kernel(kd)
    g0 = gaussian_amplitude(w, pulse)
    e = np.exp(1j * kd)
    if include_pv:
        # P int f(w')/(w' - w) = -pv_halfline(f, w)
        pv1 = -pv_halfline(lambda x: gaussian_amplitude(x, pulse), w, pulse.cutoff, tol=tol)
        pv2 = -pv_halfline(lambda x: gaussian_amplitude(x, pulse) * np.exp(1j * x * k0d),
                           w, pulse.cutoff, tol=tol)
    else:
        pv1 = pv2 = 0.0
    a1 = 1j * g0 + pv1 / np.pi
    a2 = 1j * g0 * e + pv2 / np.pi
    d = w - 1.0
    den = (d + 0.5j * gam) ** 2 + 0.25 * gam ** 2 * (e + 1j * gk) ** 2
    p = d + 0.5 * gam * gk / e
    q = d / e + gam * np.sin(kd) + 0.5 * gam * gk
    gamma = g0 - 0.25 * gam * (p * a1 + q * a2) / den
    delta = -e * 0.25 * gam * (p * a2 + q * a1) / den
    return SpectrumResult(grid, gamma, delta, gamma0=g0)


def _pair_phase(w, k0d, markovian):
    return np.full(w.shape, k0d) if markovian else w * k0d


def spectra_pair_approx(cfg, pulse, grid, markovian=False):
    """Negative-frequency-extended two-qubit spectra.

    ``gamma = gamma_0 D^2 / ((D + i Gamma/2)^2 + Gamma^2/4 e^{2ikd})`` and
    ``delta = -i Gamma/2 gamma_0 e^{ikd} (2 D cos kd + Gamma sin kd) / (...)``
    with ``k = w/vg``, or ``k = Omega/vg`` when ``markovian``.
    """
    k0d = _pair_setup(cfg)
    _require_ww(cfg)
    gam = cfg.gamma_ratio
    w = grid.points
    kd = _pair_phase(w, k0d, markovian)
    g0 = np.ones(w.shape, dtype=complex) if pulse.is_delta else gaussian_amplitude(w, pulse)
    d = w - 1.0
    den = (d + 0.5j * gam) ** 2 + 0.25 * gam ** 2 * np.exp(2j * kd)
    gamma = g0 * d ** 2 / den
    delta = -0.5j * gam * g0 * np.exp(1j * kd) * (2 * d * np.cos(kd) + gam * np.sin(kd)) / den
    return SpectrumResult(grid, gamma_approx=gamma, delta_approx=delta, gamma0=g0, transfer=pulse.is_delta)


def spectra_pair_delta(cfg, grid, markovian=False, include_g=True):
    """Delta-pulse transfer functions t(w), r(w) of two qubits, including G(kd).

    ``t = [D^2 - Gamma^2 G^2/4 - Gamma^2/2 G sin kd] / den``
    ``r = -i Gamma/2 e^{ikd} (2 D cos kd + Gamma sin kd + Gamma G) / den``
    with ``den = (D + i Gamma/2)^2 + Gamma^2/4 (e^{ikd} + i G)^2``.  With
    ``G = 0`` these are the baseline transfer functions.
    """
    k0d = _pair_setup(cfg)
    _require_ww(cfg)
    gam = cfg.gamma_ratio
    w = grid.points
    kd = _pair_phase(w, k0d, markovian)
    gk = g_kernel(kd) if include_g else np.zeros(w.shape)
    d = w - 1.0
    den = (d + 0.5j * gam) ** 2 + 0.25 * gam ** 2 * (np.exp(1j * kd) + 1j * gk) ** 2
    t = (d ** 2 - 0.25 * gam ** 2 * gk ** 2 - 0.5 * gam ** 2 * gk * np.sin(kd)) / den
    r = -0.5j * gam * np.exp(1j * kd) * (2 * d * np.cos(kd) + gam * np.sin(kd) + gam * gk) / den
    return SpectrumResult(grid, t, r, gamma0=np.ones(w.shape, dtype=complex), transfer=True)


def spectra_pair(cfg, pulse, grid, markovian=False, **kwargs):
    """Exact two-qubit spectra with the (optionally Markovian) baseline attached."""
    return spectra_pair_exact(cfg, pulse, grid, **kwargs).merged(
        spectra_pair_approx(cfg, pulse, grid, markovian=markovian))
