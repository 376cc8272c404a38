"""Half-line quadrature and Cauchy principal-value integrals.

All integrals use composite Gauss-Legendre panels, refined by doubling the
panel count until two successive estimates agree to the requested absolute
tolerance.  Integrands are vectorised callables ``f(omega_array)`` whose last
axis runs over the abscissae.

Principal values use pole subtraction on a finite interval ``[lo, hi]``::

    P int_lo^hi f(w)/(p - w) dw
        = int_lo^hi [f(w) - f(p)]/(p - w) dw + f(p) ln((p - lo)/(hi - p))

so the remaining integrand is smooth and the logarithm is exact.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError, QuadratureError

DEFAULT_TOL = 1e-9
GL_ORDER = 10
DEFAULT_PANEL_WIDTH = 0.05
MAX_PANELS = 2 ** 16
_POLE_CHUNK_ELEMS = 2 ** 22


@dataclass(frozen=True)
class FrequencyGrid:
    """Discretisation of the positive frequency axis, in units of the qubit frequency.

    ``spacing="uniform"`` gives ``n_points`` equally spaced points on
    ``[lo, hi]``.  ``spacing="refined"`` adds a dense cluster of
    ``refine_points`` points on ``center +- halfwidth`` for every entry of
    ``refine``, for resolving narrow (subradiant) lines.
    """

    lo: float
    hi: float
    n_points: int = 2001
    spacing: str = "uniform"
    refine: tuple = field(default=())
    refine_points: int = 401

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ConfigurationError(f"grid needs 0 <= lo < hi, got [{self.lo}, {self.hi}]")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ConfigurationError("grid n_points must be odd and >= 3")
        if self.spacing not in ("uniform", "refined"):
            raise ConfigurationError(f"unknown grid spacing {self.spacing!r}")
        object.__setattr__(self, "refine", tuple(tuple(map(float, r)) for r in self.refine))

    @property
    def points(self):
        return _grid_points(self)

    @property
    def is_uniform(self):
        return self.spacing == "uniform" or not self.refine

    def covers(self, lo, hi):
        return self.lo <= lo and self.hi >= hi

    def refined(self, n_points):
        """Same window and refinement clusters with a different base resolution."""
        return FrequencyGrid(self.lo, self.hi, n_points, self.spacing, self.refine, self.refine_points)


@lru_cache(maxsize=64)
def _grid_points_cached(lo, hi, n, spacing, refine, refine_points):
    base = np.linspace(lo, hi, n)
    if spacing == "uniform" or not refine:
        return base
    parts = [base]
    for center, halfwidth in refine:
        a, b = max(lo, center - halfwidth), min(hi, center + halfwidth)
        if a < b:
            parts.append(np.linspace(a, b, refine_points))
    pts = np.unique(np.concatenate(parts))
    return pts


def _grid_points(grid):
    pts = _grid_points_cached(grid.lo, grid.hi, grid.n_points, grid.spacing,
                              grid.refine, grid.refine_points)
    pts = pts.view()
    pts.flags.writeable = False
    return pts


def integrate_on_grid(values, grid):
    """Integrate samples over a FrequencyGrid (Simpson if uniform, else trapezoid)."""
    from scipy.integrate import simpson

    x = grid.points
    if grid.is_uniform:
        return simpson(values, x=x)
    return np.trapezoid(values, x)


@lru_cache(maxsize=8)
def _gl_reference(order):
    return np.polynomial.legendre.leggauss(order)


def gauss_legendre_panels(lo, hi, n_panels, order=GL_ORDER):
    """Nodes and weights of composite Gauss-Legendre on ``n_panels`` equal panels."""
    x, w = _gl_reference(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = (b - a) / 2
    nodes = ((a + b) / 2 + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def _initial_panels(lo, hi, panel_width, max_panels=MAX_PANELS):
    n = max(16, int(np.ceil((hi - lo) / panel_width)))
    if n > max_panels // 2:
        raise ConfigurationError(f"{n} starting panels leave no room for refinement under max_panels={max_panels}")
    return n


def integrate(f, lo, hi, tol=DEFAULT_TOL, panel_width=DEFAULT_PANEL_WIDTH, max_panels=MAX_PANELS):
    """Integrate ``f`` over ``[lo, hi]`` to absolute accuracy ``tol``.

    ``f`` may return an array with the abscissae on the last axis; the result
    then has the leading shape.
    """
    n = _initial_panels(lo, hi, panel_width, max_panels)
    nodes, weights = gauss_legendre_panels(lo, hi, n)
    prev = np.asarray(f(nodes)) @ weights
    err = np.inf
    while True:
        n *= 2
        if n > max_panels:
            raise QuadratureError(
                f"no convergence on [{lo}, {hi}] with {n // 2} panels (error {err:.3g} > {tol:.3g})",
                estimate=prev, error=err, panels=n // 2)
        nodes, weights = gauss_legendre_panels(lo, hi, n)
        cur = np.asarray(f(nodes)) @ weights
        err = float(np.max(np.abs(cur - prev)))
        if err <= tol:
            return cur
        prev = cur


def integrate_halfline(f, cutoff, tol=DEFAULT_TOL, **kwargs):
    """``int_0^cutoff f(w) dw``; the caller guarantees ``f`` is negligible beyond ``cutoff``."""
    if cutoff <= 0:
        raise DomainError("cutoff must be positive")
    return integrate(f, 0.0, cutoff, tol=tol, **kwargs)


def _derivative(f, p, lo, hi):
    h = np.minimum(1e-6, 0.5 * np.minimum(p - lo, hi - p))
    return (np.asarray(f(p + h)) - np.asarray(f(p - h))) / (2 * h)


def _cauchy_sum(f, vals, nodes, weights, poles, fp, inside, lo, hi):
    """Sum_j w_j [f_j - f(p) 1_inside] / (p - x_j) for every pole (chunked)."""
    out = np.empty(poles.shape, dtype=complex)
    chunk = max(1, _POLE_CHUNK_ELEMS // max(1, nodes.size))
    for s in range(0, poles.size, chunk):
        p = poles[s:s + chunk, None]
        sub = np.where(inside[s:s + chunk], fp[s:s + chunk], 0.0)[:, None]
        diff = p - nodes[None, :]
        near = np.abs(diff) < 1e-10
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (vals[None, :] - sub) / diff
        if np.any(near):
            # removable singularity: [f(w) - f(p)]/(p - w) -> -f'(p)
            rows, cols = np.nonzero(near)
            q[rows, cols] = -_derivative(f, p[rows, 0], lo, hi)
        out[s:s + chunk] = q @ weights
    return out


def hilbert_sum(f, poles, lo, hi, tol=DEFAULT_TOL, panel_width=DEFAULT_PANEL_WIDTH,
                max_panels=MAX_PANELS):
    """``P int_lo^hi f(w)/(p - w) dw`` for every real ``p`` (array).

    Poles strictly inside ``(lo, hi)`` are treated as principal values by pole
    subtraction; poles outside give ordinary integrals.  Poles exactly on an
    endpoint are rejected.
    """
    poles = np.atleast_1d(np.asarray(poles, dtype=float))
    if np.any((poles == lo) | (poles == hi)):
        raise DomainError("pole on an integration endpoint")
    inside = (poles > lo) & (poles < hi)
    fp = np.zeros(poles.shape, dtype=complex)
    if np.any(inside):
        fp[inside] = f(poles[inside])
    log_term = np.zeros(poles.shape, dtype=complex)
    with np.errstate(divide="ignore"):
        log_term[inside] = fp[inside] * np.log((poles[inside] - lo) / (hi - poles[inside]))

    n = _initial_panels(lo, hi, panel_width, max_panels)
    err = np.inf
    nodes, weights = gauss_legendre_panels(lo, hi, n)
    prev = _cauchy_sum(f, np.asarray(f(nodes), dtype=complex), nodes, weights, poles, fp, inside, lo, hi)
    while True:
        n *= 2
        if n > max_panels:
            raise QuadratureError(
                f"principal value did not converge with {n // 2} panels (error {err:.3g})",
                estimate=prev + log_term, error=err, panels=n // 2)
        nodes, weights = gauss_legendre_panels(lo, hi, n)
        cur = _cauchy_sum(f, np.asarray(f(nodes), dtype=complex), nodes, weights, poles, fp, inside, lo, hi)
        err = float(np.max(np.abs(cur - prev)))
        if err <= tol:
            return cur + log_term
        prev = cur


def pv_integral(f, pole, lo, hi, tol=DEFAULT_TOL, panel_width=DEFAULT_PANEL_WIDTH, **kwargs):
    """Principal value ``P int_lo^hi f(w)/(pole - w) dw`` with ``pole`` inside ``(lo, hi)``.

    ``pole`` may be a scalar or an array of poles; ``f`` must be smooth at
    each pole.
    """
    p = np.asarray(pole, dtype=float)
    cell = (hi - lo) / _initial_panels(lo, hi, panel_width)
    if np.any(p <= lo) or np.any(p >= hi):
        raise DomainError(f"pole must lie strictly inside ({lo}, {hi})")
    if np.any(p >= hi - cell) or np.any(p <= lo + cell):
        raise DomainError("pole within one quadrature cell of an endpoint")
    res = hilbert_sum(f, p.ravel(), lo, hi, tol=tol, panel_width=panel_width, **kwargs)
    res = res.reshape(p.shape)
    return complex(res) if res.ndim == 0 else res


def pv_halfline(f, pole, cutoff, tol=DEFAULT_TOL, **kwargs):
    """``P int_0^cutoff f(w)/(pole - w) dw``; the lower limit stays exactly at zero."""
    if cutoff <= 0:
        raise DomainError("cutoff must be positive")
    return pv_integral(f, pole, 0.0, cutoff, tol=tol, **kwargs)
