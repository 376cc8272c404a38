import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from wgqed.errors import DomainError
from wgqed.goldens import ci_oracle, si_oracle
from wgqed.specfun import EULER_GAMMA, cosine_integral, sici, sine_integral

X = np.concatenate([np.geomspace(1e-8, 3.99, 40), [4.0, 4.0000001], np.geomspace(4.01, 1e4, 40)])


def test_against_scipy():
    si, ci = sici(X)
    ref_si, ref_ci = special.sici(X)
    assert np.max(np.abs(si - ref_si)) < 1e-13
    assert np.max(np.abs(ci - ref_ci) / np.maximum(1, np.abs(ref_ci))) < 1e-13


@pytest.mark.parametrize("x", [0.01, 0.5, 2.0, 3.999, 4.001, 7.5, 25.0, 60.0])
def test_against_quadrature_oracle(x):
    assert abs(sine_integral(x) - si_oracle(x)) < 1e-8
    assert abs(cosine_integral(x) - ci_oracle(x)) < 1e-8


def test_branch_switch_is_continuous():
    eps = 1e-9
    for f in (sine_integral, cosine_integral):
        assert abs(f(4 - eps) - f(4 + eps)) < 1e-8


def test_known_values():
    assert sine_integral(0.0) == 0.0
    assert sine_integral(1e5) == pytest.approx(np.pi / 2, abs=2e-5)
    # Ci(x) - ln x -> Euler's constant as x -> 0
    assert cosine_integral(1e-10) - np.log(1e-10) == pytest.approx(EULER_GAMMA, abs=1e-12)


def test_scalar_in_scalar_out():
    assert isinstance(sine_integral(1.0), float)
    assert isinstance(cosine_integral(1.0), float)
    assert sine_integral(np.array([1.0, 2.0])).shape == (2,)


def test_domain_errors():
    with pytest.raises(DomainError):
        cosine_integral(0.0)
    with pytest.raises(DomainError):
        cosine_integral(-1.0)
    with pytest.raises(DomainError):
        sine_integral(np.nan)
    with pytest.raises(DomainError):
        sici(np.inf)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-6, 500.0))
def test_si_odd(x):
    assert sine_integral(-x) == -sine_integral(x)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 200.0))
def test_derivatives(x):
    h = 1e-5 * max(1.0, x)
    dsi = (sine_integral(x + h) - sine_integral(x - h)) / (2 * h)
    dci = (cosine_integral(x + h) - cosine_integral(x - h)) / (2 * h)
    assert dsi == pytest.approx(np.sin(x) / x, abs=1e-6)
    assert dci == pytest.approx(np.cos(x) / x, abs=1e-6)
