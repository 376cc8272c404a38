"""Frequency-domain solver for an arbitrary chain.

For every frequency ``nu`` the qubit amplitudes solve ``M(nu) beta = C(nu)``
with::

    M_nn  = nu - Omega + i Gamma(nu)/2
    M_nm  = i Gamma(nu)/2 (exp(i k_nu |x_n - x_m|) + i G(k_nu (x_n - x_m)))

and the outgoing photon amplitudes follow as
``gamma = gamma_0 - i g sum_n beta_n e^{-ikx_n}``,
``delta = -i g sum_n beta_n e^{ikx_n}``.

The negative-frequency-extended baseline is the same system with ``G = 0``
and the drive replaced by ``2 pi g gamma_0 e^{ikx_n}``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SingularSystemError
from .kernels import coupling_g, decay_rate, drive_terms, g_kernel
from .pulse import gaussian_amplitude
from .quadrature import FrequencyGrid

RCOND_MIN = 1e-12


@dataclass(frozen=True)
class BetaSpectrum:
    grid: FrequencyGrid
    beta: np.ndarray  # (N, n_points)
    transfer: bool = False  # True: per unit gamma_0 (delta-limit pulse)

    def __post_init__(self):
        if not np.all(np.isfinite(self.beta)):
            raise SingularSystemError("non-finite qubit amplitudes")


@dataclass
class SpectrumResult:
    """Asymptotic (t -> infinity) photon amplitudes on a frequency grid.

    ``gamma_out`` / ``delta_out`` hold the positive-frequency (exact)
    amplitudes and ``gamma_approx`` / ``delta_approx`` the
    negative-frequency-extended baseline.  Either pair may be missing.  With
    ``transfer=True`` all amplitudes are transfer functions multiplying
    gamma_0 (delta-limit pulse).
    """

    grid: FrequencyGrid
    gamma_out: np.ndarray = None
    delta_out: np.ndarray = None
    gamma_approx: np.ndarray = None
    delta_approx: np.ndarray = None
    gamma0: np.ndarray = None
    transfer: bool = False
    norm_I: float = field(default=float("nan"))

    def __post_init__(self):
        if self.gamma_out is not None and not self.transfer:
            x = self.grid.points
            self.norm_I = float(np.trapezoid(np.abs(self.gamma_out) ** 2 + np.abs(self.delta_out) ** 2, x))

    @property
    def omega(self):
        return self.grid.points

    @staticmethod
    def _intensity(a):
        return None if a is None else np.abs(a) ** 2

    # S1..S4 in the usual notation: |.|^2 Omega, Omega = 1 here
    @property
    def s_exact_fwd(self):
        return self._intensity(self.gamma_out)

    @property
    def s_exact_bwd(self):
        return self._intensity(self.delta_out)

    @property
    def s_approx_fwd(self):
        return self._intensity(self.gamma_approx)

    @property
    def s_approx_bwd(self):
        return self._intensity(self.delta_approx)

    @property
    def norm_approx(self):
        if self.gamma_approx is None or self.transfer:
            return float("nan")
        return float(np.trapezoid(self.s_approx_fwd + self.s_approx_bwd, self.omega))

    def merged(self, other):
        """Combine exact amplitudes from ``self`` with the baseline of ``other``."""
        return SpectrumResult(self.grid, self.gamma_out, self.delta_out,
                              other.gamma_approx, other.delta_approx, self.gamma0, self.transfer)


def assemble_system(nu, cfg, include_g=True, markovian=False):
    """Coefficient matrices M(nu); shape (N, N) for scalar nu, else (len(nu), N, N).

    ``markovian`` freezes the inter-qubit phases at ``k0 |x_n - x_m|``.
    """
    scalar = np.ndim(nu) == 0
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    x = np.asarray(cfg.positions)
    n = x.size
    gam = decay_rate(nu, cfg)
    m = np.zeros((nu.size, n, n), dtype=complex)
    idx = np.arange(n)
    m[:, idx, idx] = (nu - 1.0 + 0.5j * gam)[:, None]
    for a in range(n):
        for b in range(a + 1, n):
            d = abs(x[a] - x[b])
            kd = np.full(nu.shape, d) if markovian else nu * d
            coup = np.exp(1j * kd)
            if include_g:
                coup = coup + 1j * g_kernel(kd)
            m[:, a, b] = m[:, b, a] = 0.5j * gam * coup
    return m[0] if scalar else m


def _solve(m, c):
    # m: (n_nu, N, N), c: (N, n_nu)
    cond = np.linalg.cond(m)
    bad = ~np.isfinite(cond) | (1.0 / cond < RCOND_MIN)
    if np.any(bad):
        raise SingularSystemError(
            f"amplitude equations singular at {int(bad.sum())} frequencies "
            f"(reciprocal condition < {RCOND_MIN:g}); exact dark state?")
    return np.linalg.solve(m, c.T[:, :, None])[:, :, 0].T


def _points(grid_or_nu):
    if isinstance(grid_or_nu, FrequencyGrid):
        return grid_or_nu, grid_or_nu.points
    nu = np.atleast_1d(np.asarray(grid_or_nu, dtype=float))
    return None, nu


def _phases(nu, cfg, markovian):
    # e^{i k x_n}, shape (N, len(nu)); Markovian: k -> k0
    k = np.ones(nu.shape) if markovian else nu
    return np.exp(1j * np.outer(cfg.positions, k))


def solve_beta(cfg, pulse, grid, include_pv=True, approximate=False, markovian=False):
    """Qubit amplitudes beta_n(nu) on ``grid``.

    ``approximate=True`` gives the negative-frequency-extended baseline;
    ``markovian`` (baseline only) evaluates every retardation phase at k0.
    ``grid`` may also be a plain array of frequencies (then ``.grid`` is None).
    """
    g_obj, nu = _points(grid)
    if markovian and not approximate:
        raise ConfigurationError("the Markovian phase approximation applies to the baseline only")
    if approximate:
        c = 2 * np.pi * coupling_g(nu, cfg) * _phases(nu, cfg, markovian)
        if not pulse.is_delta:
            c = c * gaussian_amplitude(nu, pulse)
    else:
        c = drive_terms(nu, cfg, pulse, include_pv=include_pv)
    m = assemble_system(nu, cfg, include_g=not approximate, markovian=markovian)
    beta = _solve(m, c)
    return BetaSpectrum(g_obj, beta, transfer=pulse.is_delta)


def outgoing_amplitudes(nu, cfg, beta, gamma0, markovian=False):
    """gamma(w, t->inf), delta(w, t->inf) from beta; ``gamma0`` = 1 for transfer functions."""
    g = coupling_g(nu, cfg)
    ph = _phases(nu, cfg, markovian)
    gamma = gamma0 - 1j * g * np.sum(beta * ph.conj(), axis=0)
    delta = -1j * g * np.sum(beta * ph, axis=0)
    return gamma, delta


def baseline_spectra(cfg, pulse, grid, markovian=False):
    """Negative-frequency-extended spectra only (``*_approx`` fields)."""
    nu = grid.points
    g0 = np.ones(nu.shape, dtype=complex) if pulse.is_delta else gaussian_amplitude(nu, pulse)
    approx = solve_beta(cfg, pulse, grid, approximate=True, markovian=markovian)
    ga, da = outgoing_amplitudes(nu, cfg, approx.beta, g0, markovian=markovian)
    return SpectrumResult(grid, gamma_approx=ga, delta_approx=da, gamma0=g0, transfer=pulse.is_delta)


def spectra(cfg, pulse, grid, beta=None, include_pv=True, baseline=True, markovian=False):
    """Exact spectra from the general solver, with the baseline attached."""
    if beta is None:
        beta = solve_beta(cfg, pulse, grid, include_pv=include_pv)
    if beta.grid is not None and beta.grid != grid:
        raise ConfigurationError("beta was computed on a different grid")
    nu = grid.points
    g0 = np.ones(nu.shape, dtype=complex) if pulse.is_delta else gaussian_amplitude(nu, pulse)
    gamma, delta = outgoing_amplitudes(nu, cfg, beta.beta, g0)
    exact = SpectrumResult(grid, gamma, delta, gamma0=g0, transfer=pulse.is_delta)
    return exact.merged(baseline_spectra(cfg, pulse, grid, markovian)) if baseline else exact
