"""Time-domain qubit amplitudes by direct inverse Fourier quadrature.

``beta_n(t) = int dnu/2pi beta_n(nu) exp(-i(nu - Omega) t)`` over the whole
real line.  On the negative axis the drive is an ordinary integral and the
inter-qubit kernel keeps only its G part.  The slow ``1/nu^2`` tail of
``beta_n(nu)`` is removed analytically: we subtract

    beta_ref(nu) = i A_n / ((nu - a)(nu - b)),   A_n = int g gamma_0 e^{i w x_n} dw

whose transform ``A_n (e^{-i(a-1)t} - e^{-i(b-1)t})/(a - b)`` is added back
(``a = omega_s - i Delta``, ``b = Omega - i Gamma/2``, both in the lower
half plane, so the reference is causal).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .kernels import CouplingMode, coupling_g, drive_terms, g_kernel
from .pulse import OMEGA_Q, gaussian_amplitude
from .quadrature import DEFAULT_TOL, integrate_halfline
from .solver import _solve

HALF_WIDTH = 25.0  # frequency window Omega +- HALF_WIDTH
PANEL_PHASE = 2.5  # panel width times t_max
NODE_LIMIT = 2_000_000
_CHUNK = 2 ** 22


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid in units of 1/Omega."""

    t_lo: float
    t_hi: float
    n_points: int = 401

    def __post_init__(self):
        if not self.t_lo >= 0:
            raise ConfigurationError("t_lo must be >= 0")
        if not self.t_hi > self.t_lo:
            raise ConfigurationError("need t_lo < t_hi")
        if self.n_points < 2:
            raise ConfigurationError("time grid needs at least two points")

    @classmethod
    def from_si(cls, t_lo_s, t_hi_s, n_points=401, omega_q=OMEGA_Q):
        return cls(t_lo_s * omega_q, t_hi_s * omega_q, n_points)

    @classmethod
    def in_decay_times(cls, t_max_gamma, gamma_ratio, n_points=401):
        """``[0, t_max_gamma / Gamma]``."""
        return cls(0.0, t_max_gamma / gamma_ratio, n_points)

    @property
    def points(self):
        return np.linspace(self.t_lo, self.t_hi, self.n_points)


def _full_line_system(nu, cfg):
    # WW: constant Gamma on the whole axis; e^{i nu |d|} exists only for nu > 0
    x = np.asarray(cfg.positions)
    n = x.size
    gam = cfg.gamma_ratio
    m = np.zeros((nu.size, n, n), dtype=complex)
    idx = np.arange(n)
    m[:, idx, idx] = (nu - 1.0 + 0.5j * gam)[:, None]
    for a in range(n):
        for b in range(a + 1, n):
            kd = np.abs(nu) * abs(x[a] - x[b])
            coup = np.where(nu > 0, np.exp(1j * kd), 0.0) + 1j * g_kernel(kd)
            m[:, a, b] = m[:, b, a] = 0.5j * gam * coup
    return m


def _frequency_nodes(cfg, t_max, half_width):
    h = PANEL_PHASE / max(t_max, 1.0)
    if 8 * 2 * half_width / h > NODE_LIMIT:
        raise ConfigurationError(
            f"t_max = {t_max:g} needs more than {NODE_LIMIT} frequency nodes; shorten the time window")
    edges = [np.arange(1 - half_width, 1 + half_width + h / 2, h)]
    from .analysis import poles_chain

    # narrow resonances get panels of an eighth of their width
    for p in poles_chain(cfg):
        w = max(-p.imag, 1e-7)
        if w * 8 < h:
            edges.append(np.arange(p.real - 40 * w, p.real + 40 * w, w / 8))
    e = np.unique(np.concatenate(edges))
    e = e[(e >= 1 - half_width) & (e <= 1 + half_width)]
    e = e[np.concatenate([[True], np.diff(e) > 1e-14])]
    from numpy.polynomial.legendre import leggauss

    xr, wr = leggauss(8)
    a, b = e[:-1, None], e[1:, None]
    nodes = ((a + b) / 2 + (b - a) / 2 * xr).ravel()
    weights = ((b - a) / 2 * wr).ravel()
    if nodes.size > NODE_LIMIT:
        raise ConfigurationError(
            f"time window needs {nodes.size} frequency nodes (> {NODE_LIMIT}); shorten t_max")
    return nodes, weights


def _times(times):
    if isinstance(times, TimeGrid):
        return times.points
    return np.atleast_1d(np.asarray(times, dtype=float))


def beta_t_numeric(cfg, pulse, times, half_width=HALF_WIDTH, tol=DEFAULT_TOL):
    """Qubit amplitudes beta_n(t), shape ``(N, n_t)``, for a Gaussian pulse.

    ``times`` is a TimeGrid or an array in units of 1/Omega; entries with
    ``t < 0`` return 0.  Only the Wigner-Weisskopf coupling is supported.
    """
    if cfg.coupling_mode is not CouplingMode.WW:
        raise ConfigurationError("time evolution is implemented for the Wigner-Weisskopf coupling")
    if pulse.is_delta:
        raise ConfigurationError("time evolution needs a normalisable (Gaussian) pulse")
    t = _times(times)
    if not np.all(np.isfinite(t)):
        raise ConfigurationError("non-finite times")
    n = cfg.n_qubits
    out = np.zeros((n, t.size), dtype=complex)
    pos = t > 0
    if not np.any(pos):
        return out
    tp = t[pos]
    nu, wts = _frequency_nodes(cfg, float(tp.max()), half_width)
    c = drive_terms(nu, cfg, pulse, tol=tol)
    beta = _solve(_full_line_system(nu, cfg), c)

    x = np.asarray(cfg.positions)
    g = coupling_g(1.0, cfg)
    amp = integrate_halfline(
        lambda w: g * gaussian_amplitude(w, pulse) * np.exp(1j * np.outer(x, w)), pulse.cutoff, tol=tol)
    a = pulse.omega_s - 1j * pulse.delta
    b = 1.0 - 0.5j * cfg.gamma_ratio
    ref = 1j * amp[:, None] / ((nu - a) * (nu - b))
    resid = (beta - ref) * (wts / (2 * np.pi))

    acc = np.zeros((n, tp.size), dtype=complex)
    chunk = max(1, _CHUNK // nu.size)
    for s in range(0, tp.size, chunk):
        ts = tp[s:s + chunk]
        acc[:, s:s + chunk] = resid @ np.exp(-1j * np.outer(nu - 1.0, ts))
    acc += amp[:, None] * (np.exp(-1j * (a - 1) * tp) - np.exp(-1j * (b - 1) * tp)) / (a - b)
    out[:, pos] = acc
    return out


def excitation(beta_t):
    """Total qubit excitation ``sum_n |beta_n(t)|^2``."""
    return np.sum(np.abs(beta_t) ** 2, axis=0)


def photon_norm(cfg, pulse, t, grid=None, dt=0.25, half_width=HALF_WIDTH):
    """Split of the norm at time ``t`` into (photons, qubit excitation).

    The photon part is ``int (|gamma(w,t)|^2 + |delta(w,t)|^2) dw`` with

    ``gamma(w,t) = gamma_0 - i g sum_n e^{-ikx_n} int_0^t beta_n(t') e^{i(w-Omega)t'} dt'``
    (``delta`` alike with ``e^{+ikx_n}`` and no incident term), the time
    integral by Simpson's rule on steps of at most ``dt``.  The two parts
    should add up to one.
    """
    if not t > 0:
        raise ConfigurationError("photon_norm needs t > 0")
    if grid is None:
        from .analysis import default_grid

        grid = default_grid(cfg, pulse)
    m = int(np.ceil(t / dt))
    m += m % 2
    ts = np.linspace(0.0, t, m + 1)
    bt = beta_t_numeric(cfg, pulse, ts, half_width=half_width)
    sw = np.ones(m + 1)
    sw[1:-1:2], sw[2:-1:2] = 4, 2
    sw *= (t / m) / 3
    w = grid.points
    x = np.asarray(cfg.positions)
    acc = np.zeros((cfg.n_qubits, w.size), dtype=complex)
    chunk = max(1, _CHUNK // max(1, ts.size))
    for s in range(0, w.size, chunk):
        ws = w[s:s + chunk]
        acc[:, s:s + chunk] = (bt * sw) @ np.exp(1j * np.outer(ts, ws - 1.0))
    g = coupling_g(w, cfg)
    ph = np.exp(1j * np.outer(x, w))
    gamma = gaussian_amplitude(w, pulse) - 1j * g * np.sum(ph.conj() * acc, axis=0)
    delta = -1j * g * np.sum(ph * acc, axis=0)
    return float(np.trapezoid(np.abs(gamma) ** 2 + np.abs(delta) ** 2, w)), excitation(bt[:, -1:])[0]

