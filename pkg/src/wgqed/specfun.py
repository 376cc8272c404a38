"""Real sine and cosine integrals.

``Si(x) = int_0^x sin(t)/t dt`` and ``Ci(x) = -int_x^inf cos(t)/t dt``.

Small arguments (|x| < 4) use the power series; larger ones use the
continued fraction of the exponential integral ``E1(ix)``, which is the
convergent form of the auxiliary-function asymptotics.  Both branches are
accurate to a few ulp of the result's magnitude, far below 1e-10 absolute.
"""

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061

_SERIES_MAX = 4.0
_SERIES_TERMS = 20
_CF_EPS = 1e-16
_CF_MAX_ITER = 200
_FPMIN = 1e-300


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("sine/cosine integral needs finite arguments")
    return arr


def _series(x):
    # x >= 0, x < _SERIES_MAX
    x2 = x * x
    si = np.zeros_like(x)
    ci = np.zeros_like(x)
    # term_k = (-1)^k x^(2k+1) / (2k+1)!  and  (-1)^k x^(2k) / (2k)!
    odd = x.copy()
    even = np.ones_like(x)
    for k in range(_SERIES_TERMS):
        si += odd / (2 * k + 1)
        if k > 0:
            ci += even / (2 * k)
        odd = -odd * x2 / ((2 * k + 2) * (2 * k + 3))
        even = -even * x2 / ((2 * k + 1) * (2 * k + 2))
    with np.errstate(divide="ignore"):
        ci = ci + EULER_GAMMA + np.log(x)
    return si, ci


def _continued_fraction(x):
    # modified Lentz evaluation of E1(ix) * exp(ix); x >= _SERIES_MAX
    b = 1.0 + 1j * x
    c = np.full_like(b, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    for i in range(2, _CF_MAX_ITER):
        a = -float((i - 1) ** 2)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            break
    h = h * (np.cos(x) - 1j * np.sin(x))
    return np.pi / 2 + h.imag, -h.real


def _sici_nonneg(x):
    si = np.empty_like(x)
    ci = np.empty_like(x)
    small = x < _SERIES_MAX
    if np.any(small):
        si[small], ci[small] = _series(x[small])
    if np.any(~small):
        si[~small], ci[~small] = _continued_fraction(x[~small])
    return si, ci


def sine_integral(x):
    """Si(x) for real finite x (scalar or array); odd in x."""
    arr = _as_array(x)
    flat = np.abs(arr).ravel()
    si, _ = _sici_nonneg(flat)
    out = np.copysign(si.reshape(arr.shape), arr)
    return float(out) if out.ndim == 0 else out


def cosine_integral(x):
    """Ci(x), defined only for x > 0.

    Callers working with signed phases must pass ``|kd|``.
    """
    arr = _as_array(x)
    if np.any(arr <= 0):
        raise DomainError("cosine integral is defined for x > 0 only")
    flat = arr.ravel()
    _, ci = _sici_nonneg(flat)
    out = ci.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def sici(x):
    """Return ``(Si(x), Ci(x))`` for x > 0 in one pass."""
    arr = _as_array(x)
    if np.any(arr <= 0):
        raise DomainError("cosine integral is defined for x > 0 only")
    flat = arr.ravel()
    si, ci = _sici_nonneg(flat)
    si = si.reshape(arr.shape)
    ci = ci.reshape(arr.shape)
    if si.ndim == 0:
        return float(si), float(ci)
    return si, ci
