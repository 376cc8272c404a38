import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from wgqed.errors import ConfigurationError, DomainError
from wgqed.goldens import g_kernel_oracle
from wgqed.kernels import (ChainConfig, CouplingMode, coupling_g, decay_rate, drive_term, drive_terms,
                           g_kernel)
from wgqed.pulse import PulseSpec, gaussian_amplitude


def test_g_published_value():
    assert g_kernel(0.01) == pytest.approx(-1.28, abs=0.01)


def test_g_against_integral_oracle():
    x = np.linspace(0.01, 10, 20)
    assert max(abs(g_kernel(v) - g_kernel_oracle(v)) for v in x) < 1e-3


def test_g_against_oracle_tight():
    for v in (0.05, 0.7, 3.3, 9.1, 31.0):
        assert g_kernel(v) == pytest.approx(g_kernel_oracle(v), abs=1e-9)


def test_g_tail():
    # cos Ci + sin (Si - pi/2) ~ -1/x^2
    x = 200.0
    assert g_kernel(x) * np.pi * x ** 2 == pytest.approx(-1.0, rel=1e-3)


def test_g_log_divergence():
    # G ~ (gamma_E + ln x)/pi near zero
    x = 1e-6
    assert g_kernel(x) == pytest.approx((0.5772156649 + np.log(x)) / np.pi, abs=1e-5)
    with pytest.raises(DomainError):
        g_kernel(0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-4, 1e3))
def test_g_even(x):
    assert g_kernel(-x) == g_kernel(x)


class TestChainConfig:
    def test_si_roundtrip(self):
        cfg = ChainConfig.from_si(0.1, [0.0, 0.015])
        assert cfg.k0d == pytest.approx(104.7197551 * 0.015)
        assert np.allclose(cfg.positions_m, [0.0, 0.015])

    @pytest.mark.parametrize("gamma", [0.0, 1.0, -0.1])
    def test_gamma_range(self, gamma):
        with pytest.raises(ConfigurationError):
            ChainConfig.single(gamma)

    def test_ordering_and_separation(self):
        with pytest.raises(ConfigurationError):
            ChainConfig(0.1, (1.0, 0.0))
        with pytest.raises(ConfigurationError):
            ChainConfig(0.1, (0.0, 1e-8))
        with pytest.raises(ConfigurationError):
            ChainConfig.single(0.1).k0d

    def test_mode_string(self):
        assert ChainConfig.single(0.1, coupling_mode="linear").coupling_mode is CouplingMode.LINEAR


def test_couplings():
    ww = ChainConfig.single(0.1)
    lin = ChainConfig.single(0.1, coupling_mode="linear")
    w = np.array([0.5, 1.0, 2.0])
    assert np.allclose(decay_rate(w, ww), 0.1)
    assert np.allclose(decay_rate(w, lin), 0.1 * w)
    assert coupling_g(1.0, ww) == pytest.approx(np.sqrt(0.1 / (4 * np.pi)))
    with pytest.raises(DomainError):
        coupling_g(-0.1, ww)


def test_drive_delta_pulse():
    cfg = ChainConfig.pair(0.1, 2.0)
    nu = np.array([0.9, 1.1])
    c = drive_terms(nu, cfg, PulseSpec.delta_limit())
    g = coupling_g(1.0, cfg)
    assert np.allclose(c, 2 * np.pi * g * np.exp(1j * np.outer([0.0, 2.0], nu)))


def test_drive_against_quadpack():
    cfg = ChainConfig.pair(0.1, 2.5)
    p = PulseSpec.gaussian(0.1, x0=0.2)
    g = coupling_g(1.0, cfg)
    nu = 1.03
    for n, x in enumerate(cfg.positions):
        f = lambda w: g * gaussian_amplitude(w, p) * np.exp(1j * w * x)  # noqa: E731
        pv = -sum(quad(lambda w: part(f(w)), 0, p.cutoff, weight="cauchy", wvar=nu, epsabs=1e-13, limit=400)[0]
                  * unit for part, unit in ((np.real, 1), (np.imag, 1j)))
        ref = np.pi * f(nu) + 1j * pv
        assert drive_term(nu, n, cfg, p) == pytest.approx(ref, abs=1e-10)


def test_drive_off_axis_is_ordinary_integral():
    cfg = ChainConfig.single(0.1)
    p = PulseSpec.gaussian(0.1)
    g = coupling_g(1.0, cfg)
    nu = -2.0
    ref = quad(lambda w: g * gaussian_amplitude(w, p).real / (nu - w), 0, p.cutoff, epsabs=1e-14)[0]
    assert drive_terms([nu], cfg, p)[0, 0].imag == pytest.approx(ref, abs=1e-12)


def test_drive_without_pv():
    cfg = ChainConfig.single(0.1)
    p = PulseSpec.gaussian(0.1)
    c = drive_terms([1.0], cfg, p, include_pv=False)[0, 0]
    assert c == pytest.approx(np.pi * coupling_g(1.0, cfg) * gaussian_amplitude(1.0, p))


def test_drive_term_index_checked():
    with pytest.raises(ConfigurationError):
        drive_term(1.0, 3, ChainConfig.single(0.1), PulseSpec.gaussian(0.1))
