"""Derived diagnostics: collective poles, norms, spectral zeros and peaks."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigurationError, InvariantError, NumericalError
from .kernels import CouplingMode, decay_rate, g_kernel
from .quadrature import FrequencyGrid

ZERO_THRESHOLD = 1e-6
FIXED_POINT_TOL = 1e-10
FIXED_POINT_MAXITER = 100
GRID_FLOOR = 0.1  # keeps principal values away from omega = 0


@dataclass(frozen=True)
class ResonanceSet:
    """Two collective resonances ``omega_pm = Omega + dOmega_pm - i Gamma_pm``.

    Shifts and rates in rad/s; ``omega_q`` is the qubit frequency they refer to.
    """

    shift_plus: float
    shift_minus: float
    rate_plus: float
    rate_minus: float
    omega_q: float
    gamma: float  # Gamma(Omega), rad/s

    def __post_init__(self):
        if min(self.rate_plus, self.rate_minus) < -1e-12 * self.gamma:
            raise InvariantError("negative collective decay rate")
        if abs(self.rate_plus + self.rate_minus - self.gamma) > 1e-12 * self.gamma:
            raise InvariantError("Gamma_+ + Gamma_- differs from Gamma")

    @property
    def poles(self):
        """Complex pole positions in units of Omega, ordered (+, -)."""
        q = self.omega_q
        return np.array([1 + (self.shift_plus - 1j * self.rate_plus) / q,
                         1 + (self.shift_minus - 1j * self.rate_minus) / q])

    def ratios(self):
        """(dOmega_+, dOmega_-, Gamma_+, Gamma_-) in units of Gamma."""
        g = self.gamma
        return (self.shift_plus / g, self.shift_minus / g, self.rate_plus / g, self.rate_minus / g)


def _pair_terms(gam, kd):
    shift = 0.5 * gam * (np.sin(kd) + g_kernel(kd))
    return shift, 0.5 * gam * (1 + np.cos(kd)), 0.5 * gam * (1 - np.cos(kd))


def poles_markovian(cfg):
    """Markovian two-qubit resonances (retardation phase frozen at k0 d)."""
    if cfg.n_qubits != 2:
        raise ConfigurationError("poles_markovian needs exactly two qubits")
    gam = cfg.gamma_ratio
    shift, rp, rm = _pair_terms(gam, cfg.k0d)
    w = cfg.omega_q
    # Gamma_- as the complement keeps the sum rule to rounding
    return ResonanceSet(shift * w, -shift * w, rp * w, gam * w - rp * w, w, gam * w)


def poles_nonmarkovian(cfg, tol=FIXED_POINT_TOL, maxiter=FIXED_POINT_MAXITER):
    """Self-consistent resonances with ``k = Re(omega)/vg`` in the phase.

    Each branch iterates ``omega <- Omega + Delta_pm(Re omega)`` from the
    Markovian seed.  Raises NumericalError if a branch has not settled to
    ``tol`` after ``maxiter`` steps.
    """
    if cfg.n_qubits != 2:
        raise ConfigurationError("poles_nonmarkovian needs exactly two qubits")
    seed = poles_markovian(cfg).poles
    out = []
    for sign, w in zip((1, -1), seed):
        for _ in range(maxiter):
            x = w.real
            gam = float(decay_rate(x, cfg))
            kd = x * cfg.k0d
            new = 1 + sign * 0.5 * gam * (np.sin(kd) + g_kernel(kd)) - 0.5j * gam * (1 + sign * np.cos(kd))
            if abs(new - w) < tol:
                w = new
                break
            w = new
        else:
            raise NumericalError(f"pole fixed point did not converge in {maxiter} iterations")
        out.append(w)
    return np.array(out)


def poles_chain(cfg):
    """Markovian poles of an arbitrary chain, ``1 - i Gamma/2 * eig(K)``.

    ``K_nn = 1`` and ``K_nm = exp(i k0 |x_n - x_m|) + i G(k0 (x_n - x_m))``.
    Sorted by real part.
    """
    x = np.asarray(cfg.positions)
    d = np.abs(x[:, None] - x[None, :])
    k = np.eye(x.size, dtype=complex)
    off = ~np.eye(x.size, dtype=bool)
    k[off] = np.exp(1j * d[off]) + 1j * g_kernel(d[off])
    lam = np.linalg.eigvals(k)
    poles = 1 - 0.5j * cfg.gamma_ratio * lam
    return poles[np.argsort(poles.real)]


def collective_rates(cfg):
    """Markovian decay rates ``-Im(pole)`` in units of Omega (amplitude decay constants)."""
    return np.sort(-poles_chain(cfg).imag)


def norm_integral(result):
    """Trapezoid ``int (|gamma|^2 + |delta|^2) d omega`` over the result grid.

    Uses the exact amplitudes when present, else the baseline.
    """
    if result.transfer:
        raise ConfigurationError("transfer functions carry no normalisation")
    x = result.omega
    if result.gamma_out is not None:
        s = result.s_exact_fwd + result.s_exact_bwd
    elif result.gamma_approx is not None:
        s = result.s_approx_fwd + result.s_approx_bwd
    else:
        raise ConfigurationError("result holds no amplitudes")
    return float(np.trapezoid(s, x))


def _pick(result, which):
    arr = getattr(result, which, None)
    if arr is None:
        raise ConfigurationError(f"result has no {which!r}")
    return np.asarray(arr)


def _quadratic_min(x3, y3):
    # complex quadratic through three samples, minimise |p|^2 between the outer two
    c = np.polyfit(x3 - x3[1], y3, 2)

    def mag(u):
        return abs(np.polyval(c, u)) ** 2

    res = minimize_scalar(mag, bounds=(x3[0] - x3[1], x3[2] - x3[1]), method="bounded",
                          options={"xatol": 1e-14 * max(1.0, abs(x3[1]))})
    return x3[1] + res.x, res.fun


def find_reflection_zeros(result, which="delta_out", threshold=ZERO_THRESHOLD):
    """Frequencies where the reflected amplitude vanishes.

    Every interior local minimum of ``|delta|^2`` is refined with a complex
    quadratic through its three samples; it counts as a zero when the refined
    ``|delta|^2`` is below ``threshold * max |delta|^2``.  ``which`` may be
    ``"delta_approx"`` to analyse the baseline.
    """
    amp = _pick(result, which)
    x = result.omega
    s = np.abs(amp) ** 2
    top = s.max()
    if top == 0:
        return []
    idx = np.nonzero((s[1:-1] <= s[:-2]) & (s[1:-1] <= s[2:]))[0] + 1
    zeros = []
    for i in idx:
        x0, v = _quadratic_min(x[i - 1:i + 2], amp[i - 1:i + 2])
        if min(v, s[i]) < threshold * top:
            zeros.append(float(x0))
    return zeros


class Peak(NamedTuple):
    omega: float
    height: float
    fwhm: float


def _half_crossing(x, s, i, half, step):
    j = i
    while 0 <= j + step < s.size:
        if s[j + step] <= half:
            a, b = j, j + step
            return x[a] + (half - s[a]) * (x[b] - x[a]) / (s[b] - s[a])
        j += step
    return np.nan


def peak_features(result, which="s_exact_fwd", min_rel_height=1e-3):
    """Local maxima of a spectrum as (omega, height, FWHM), tallest first.

    Peak positions and heights come from a parabola through the three
    samples around each discrete maximum; the FWHM interpolates linearly
    between samples at half height (NaN when a side never drops that low).
    """
    s = _pick(result, which).astype(float)
    x = result.omega
    top = s.max()
    idx = np.nonzero((s[1:-1] > s[:-2]) & (s[1:-1] >= s[2:]))[0] + 1
    peaks = []
    for i in idx:
        if s[i] < min_rel_height * top:
            continue
        c = np.polyfit(x[i - 1:i + 2] - x[i], s[i - 1:i + 2], 2)
        if c[0] < 0:
            u = -c[1] / (2 * c[0])
            u = min(max(u, x[i - 1] - x[i]), x[i + 1] - x[i])
            xp, h = x[i] + u, float(np.polyval(c, u))
        else:
            xp, h = x[i], s[i]
        half = 0.5 * h
        left = _half_crossing(x, s, i, half, -1)
        right = _half_crossing(x, s, i, half, 1)
        peaks.append(Peak(float(xp), max(h, float(s[i])), float(right - left)))
    peaks.sort(key=lambda p: -p.height)
    return peaks


def default_grid(cfg, pulse, n_points=2001, refine=True, cluster_points=401):
    """Frequency grid around the pulse band and the collective resonances.

    Spans ``omega_s +- 5 Delta`` (delta pulse: ``Omega +- 10 Gamma``) widened to
    include every Markovian pole +- 5 linewidths.  With ``refine`` each
    resonance narrower than Gamma/4 gets a cluster of ``cluster_points``
    points over +- 10 linewidths, a spacing of at most a twentieth of the
    linewidth.
    """
    gam = cfg.gamma_ratio
    if pulse.is_delta:
        lo, hi = pulse.omega_s - 10 * gam, pulse.omega_s + 10 * gam
    else:
        lo, hi = pulse.omega_s - 5 * pulse.delta, pulse.omega_s + 5 * pulse.delta
    poles = poles_chain(cfg)
    if cfg.n_qubits == 2 and cfg.coupling_mode is CouplingMode.WW:
        try:
            poles = np.concatenate([poles, poles_nonmarkovian(cfg)])
        except NumericalError:
            pass
    widths = np.maximum(-poles.imag, 1e-9 * gam)
    lo = max(GRID_FLOOR, min(lo, float(np.min(poles.real - 5 * widths))))
    hi = max(hi, float(np.max(poles.real + 5 * widths)))
    clusters = []
    if refine:
        for p, w in zip(poles, widths):
            if w < gam / 4:
                clusters.append((float(p.real), float(10 * w)))
    if clusters:
        return FrequencyGrid(lo, hi, n_points, "refined", tuple(clusters), cluster_points)
    return FrequencyGrid(lo, hi, n_points)
