import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import erf

from wgqed.errors import ConfigurationError, DomainError, QuadratureError
from wgqed.quadrature import (FrequencyGrid, gauss_legendre_panels, hilbert_sum, integrate,
                              integrate_halfline, integrate_on_grid, pv_halfline, pv_integral)


def gauss(w, c=1.0, s=0.1):
    return np.exp(-((w - c) / s) ** 2)


def cauchy_oracle(f, pole, lo, hi):
    # QUADPACK's weight='cauchy' gives P int f/(w - pole); ours is P int f/(pole - w)
    re = quad(lambda w: f(w).real, lo, hi, weight="cauchy", wvar=pole, limit=400, epsabs=1e-13)[0]
    im = quad(lambda w: np.imag(f(w)), lo, hi, weight="cauchy", wvar=pole, limit=400, epsabs=1e-13)[0]
    return -(re + 1j * im)


class TestGrid:
    def test_uniform(self):
        g = FrequencyGrid(0.5, 1.5, 11)
        assert np.allclose(g.points, np.linspace(0.5, 1.5, 11))
        assert g.is_uniform

    def test_refined_cluster(self):
        g = FrequencyGrid(0.5, 1.5, 11, "refined", ((1.0, 0.01),), 101)
        x = g.points
        assert np.all(np.diff(x) > 0)
        assert np.sum(np.abs(x - 1.0) <= 0.01 + 1e-12) >= 101
        assert not g.is_uniform

    def test_points_read_only(self):
        with pytest.raises(ValueError):
            FrequencyGrid(0.5, 1.5, 11).points[0] = 3

    @pytest.mark.parametrize("args", [(1.0, 0.5, 11), (-0.1, 1.0, 11), (0.5, 1.5, 10), (0.5, 1.5, 1)])
    def test_invalid(self, args):
        with pytest.raises(ConfigurationError):
            FrequencyGrid(*args)

    def test_bad_spacing(self):
        with pytest.raises(ConfigurationError):
            FrequencyGrid(0.5, 1.5, 11, "log")

    def test_integrate_on_grid(self):
        g = FrequencyGrid(0.0, 2.0, 2001)
        exact = 0.1 * np.sqrt(np.pi) / 2 * (erf(10) + erf(10))
        assert integrate_on_grid(gauss(g.points), g) == pytest.approx(exact, abs=1e-12)


def test_gauss_legendre_exact_for_polynomials():
    x, w = gauss_legendre_panels(0.0, 2.0, 3, order=10)
    assert np.sum(w * x ** 19) == pytest.approx(2 ** 20 / 20, rel=1e-13)


def test_integrate_matches_erf():
    exact = 0.1 * np.sqrt(np.pi) / 2 * (erf(10) + erf(2))
    assert integrate(gauss, 0.8, 3.0) == pytest.approx(exact, abs=1e-12)


def test_integrate_vector_valued():
    res = integrate(lambda w: np.vstack([w, w ** 2]), 0.0, 1.0)
    assert np.allclose(res, [0.5, 1 / 3], atol=1e-13)


def test_integrate_reports_failure():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda w: np.sin(1e5 * w), 0.0, 10.0, tol=1e-14, max_panels=1024)
    assert info.value.panels == 800
    assert np.isfinite(info.value.error)


def test_panel_budget_too_small():
    with pytest.raises(ConfigurationError):
        integrate(gauss, 0.0, 10.0, max_panels=64)


def test_halfline_rejects_bad_cutoff():
    with pytest.raises(DomainError):
        integrate_halfline(gauss, 0.0)


def test_pv_elementary():
    # P int_{-1}^{1} dw/(p - w) = ln((1+p)/(1-p))
    p = np.array([-0.7, -0.1, 0.3, 0.9])
    res = pv_integral(lambda w: np.ones_like(w), p, -1.0, 1.0)
    assert np.allclose(res, np.log((1 + p) / (1 - p)), atol=1e-12)


@pytest.mark.parametrize("pole", [0.6, 0.95, 1.0, 1.0371, 1.4])
def test_pv_against_quadpack(pole):
    f = lambda w: gauss(w) * np.exp(3j * w)  # noqa: E731
    assert abs(pv_integral(f, pole, 0.0, 2.2) - cauchy_oracle(f, pole, 0.0, 2.2)) < 1e-10


def test_pv_symmetric_pairing_oracle():
    # P int f/(p - w) = int_0^a [f(p-s) - f(p+s)]/s ds + tails, here f is negligible beyond a
    p, a = 1.02, 0.9
    ref = quad(lambda s: (gauss(p - s) - gauss(p + s)) / s, 0, a, epsabs=1e-14, limit=200)[0]
    assert pv_halfline(gauss, p, 2.2) == pytest.approx(ref, abs=1e-10)


def test_pole_exactly_on_node():
    # GL nodes never hit the midpoint of a panel for even order; use a pole on a node explicitly
    x, _ = gauss_legendre_panels(0.0, 2.2, 44 * 2)
    p = x[437]
    assert abs(pv_halfline(gauss, p, 2.2) - cauchy_oracle(gauss, p, 0.0, 2.2)) < 1e-9


def test_hilbert_sum_outside_poles_are_ordinary_integrals():
    res = hilbert_sum(gauss, np.array([-0.5, 3.0]), 0.0, 2.2)
    for p, r in zip([-0.5, 3.0], res):
        assert r == pytest.approx(quad(lambda w: gauss(w) / (p - w), 0, 2.2, epsabs=1e-14)[0], abs=1e-11)


def test_pole_on_endpoint_rejected():
    with pytest.raises(DomainError):
        hilbert_sum(gauss, np.array([0.0]), 0.0, 2.2)
    with pytest.raises(DomainError):
        pv_integral(gauss, 2.2, 0.0, 2.2)
    with pytest.raises(DomainError):
        pv_integral(gauss, 0.001, 0.0, 2.2)


def test_refinement_drift():
    poles = np.linspace(0.6, 1.4, 33)
    a = hilbert_sum(gauss, poles, 0.0, 2.2, tol=1e-12, panel_width=0.05)
    b = hilbert_sum(gauss, poles, 0.0, 2.2, tol=1e-12, panel_width=0.01)
    assert np.max(np.abs(a - b)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 1.7), st.floats(-3, 3), st.floats(-3, 3))
def test_pv_linear_in_integrand(pole, a, b):
    f1 = lambda w: gauss(w)  # noqa: E731
    f2 = lambda w: gauss(w, 1.1, 0.2) * np.exp(2j * w)  # noqa: E731
    lhs = pv_halfline(lambda w: a * f1(w) + b * f2(w), pole, 2.5)
    rhs = a * pv_halfline(f1, pole, 2.5) + b * pv_halfline(f2, pole, 2.5)
    assert abs(lhs - rhs) < 1e-8
