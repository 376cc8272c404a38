import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgqed import closed_form as cf
from wgqed import solver
from wgqed.analysis import (ResonanceSet, collective_rates, default_grid, find_reflection_zeros,
                            norm_integral, peak_features, poles_chain, poles_markovian, poles_nonmarkovian)
from wgqed.errors import ConfigurationError, InvariantError, NumericalError
from wgqed.kernels import ChainConfig, g_kernel
from wgqed.pulse import PulseSpec, gaussian_amplitude, pulse_norm
from wgqed.quadrature import FrequencyGrid


class TestPoles:
    def test_published_shift(self):
        r = poles_markovian(ChainConfig.pair(0.1, 0.01)).ratios()
        assert abs(r[0]) == pytest.approx(0.64, abs=0.01)
        assert r[0] == -r[1]

    def test_quarter_wave(self):
        r = poles_markovian(ChainConfig.pair(0.1, np.pi / 2)).ratios()
        assert r[2] == pytest.approx(0.5) and r[3] == pytest.approx(0.5)

    def test_super_and_subradiant(self):
        r = poles_markovian(ChainConfig.pair(0.1, 1e-3)).ratios()
        assert r[2] == pytest.approx(1.0, abs=1e-6) and r[3] == pytest.approx(0.0, abs=1e-6)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(1e-3, 60.0), st.floats(1e-3, 0.9))
    def test_rate_sum_and_shift_symmetry(self, k0d, gamma):
        rs = poles_markovian(ChainConfig.pair(gamma, k0d))
        assert rs.rate_plus + rs.rate_minus == pytest.approx(rs.gamma, rel=4e-16)
        assert rs.shift_plus == -rs.shift_minus
        assert rs.rate_plus >= 0 and rs.rate_minus >= 0

    def test_units(self):
        cfg = ChainConfig.pair(0.1, 1.0)
        rs = poles_markovian(cfg)
        assert rs.gamma == pytest.approx(0.1 * cfg.omega_q)
        shift = 0.05 * (np.sin(1.0) + g_kernel(1.0))
        assert rs.poles[0] == pytest.approx(1 + shift - 0.05j * (1 + np.cos(1.0)))

    def test_invariant_guard(self):
        with pytest.raises(InvariantError):
            ResonanceSet(0.0, 0.0, 0.3, 0.3, 1.0, 1.0)

    def test_chain_eigen_poles_reduce_to_pair(self):
        cfg = ChainConfig.pair(0.1, 2.0)
        assert np.allclose(np.sort_complex(poles_chain(cfg)), np.sort_complex(poles_markovian(cfg).poles))
        assert np.allclose(poles_chain(ChainConfig.single(0.1)), [1 - 0.05j])
        assert np.allclose(collective_rates(cfg), np.sort(-poles_markovian(cfg).poles.imag))

    def test_nonmarkovian_markov_limit(self):
        # weak coupling: the running phase barely moves, so the poles agree to O(Gamma^2 k0d)
        cfg = ChainConfig.pair(1e-4, 2.0)
        assert np.allclose(poles_nonmarkovian(cfg), poles_markovian(cfg).poles, atol=1e-7)

    def test_nonmarkovian_pole_locates_subradiant_line(self):
        cfg = ChainConfig.pair(0.1, 0.95 * np.pi)
        pole = poles_nonmarkovian(cfg)[0]
        g = default_grid(cfg, PulseSpec.delta_limit(), n_points=4001)
        t = cf.spectra_pair_delta(cfg, g)
        narrow = [p for p in peak_features(t, "s_exact_fwd") if p.fwhm < 0.01]
        assert narrow[0].omega == pytest.approx(pole.real, abs=2e-4)
        assert narrow[0].fwhm == pytest.approx(-2 * pole.imag, rel=0.15)

    def test_nonmarkovian_iteration_limit(self):
        with pytest.raises(NumericalError):
            poles_nonmarkovian(ChainConfig.pair(0.1, 2.25 * np.pi), maxiter=1)

    def test_pair_only(self):
        with pytest.raises(ConfigurationError):
            poles_markovian(ChainConfig.single(0.1))


class TestNorm:
    def test_single(self):
        cfg, p = ChainConfig.single(0.1), PulseSpec.gaussian(0.1)
        r = cf.spectra_single(cfg, p, default_grid(cfg, p))
        assert norm_integral(r) == pytest.approx(1.0, abs=1e-2)

    def test_pair(self):
        cfg, p = ChainConfig.pair(0.1, 3.125 * np.pi), PulseSpec.gaussian(0.1)
        assert norm_integral(cf.spectra_pair(cfg, p, default_grid(cfg, p))) == pytest.approx(1.0, abs=5e-3)

    def test_baseline_equals_pulse_norm(self):
        cfg, p = ChainConfig.single(0.1), PulseSpec.gaussian(0.1)
        g = FrequencyGrid(0.0, 2.2, 8001)
        r = cf.spectra_single_approx(cfg, p, g)
        assert norm_integral(r) == pytest.approx(pulse_norm(p, g), abs=1e-9)

    def test_transfer_rejected(self):
        r = cf.spectra_pair_delta(ChainConfig.pair(0.1, 1.0), FrequencyGrid(0.5, 1.5, 11))
        with pytest.raises(ConfigurationError):
            norm_integral(r)


class TestZeros:
    def test_pair_one_zero(self):
        cfg, p = ChainConfig.pair(0.1, 2.25 * np.pi), PulseSpec.gaussian(0.1, x0=0.5)
        r = cf.spectra_pair_approx(cfg, p, default_grid(cfg, p), markovian=True)
        z = find_reflection_zeros(r, "delta_approx")
        assert len(z) == 1 and z[0] == pytest.approx(1 - 0.05 * np.tan(2.25 * np.pi), abs=1e-6)

    def test_single_has_none(self):
        cfg, p = ChainConfig.single(0.1), PulseSpec.gaussian(0.1)
        r = cf.spectra_single(cfg, p, default_grid(cfg, p))
        assert find_reflection_zeros(r) == [] and find_reflection_zeros(r, "delta_approx") == []

    @pytest.mark.parametrize("k", [0.3, 1.3, 2.25, 3.7])
    def test_three_equally_spaced_have_two(self, k):
        cfg = ChainConfig(0.1, (0.0, k * np.pi, 2 * k * np.pi))
        r = solver.baseline_spectra(cfg, PulseSpec.delta_limit(), FrequencyGrid(0.1, 2.0, 20001), markovian=True)
        assert len(find_reflection_zeros(r, "delta_approx")) == 2

    def test_three_generic_spacing_only_dips(self):
        cfg = ChainConfig(0.1, (0.0, 1.3 * np.pi, 3.1 * np.pi))
        r = solver.baseline_spectra(cfg, PulseSpec.delta_limit(), FrequencyGrid(0.1, 2.0, 20001), markovian=True)
        assert find_reflection_zeros(r, "delta_approx") == []

    @settings(max_examples=30, deadline=None)
    @given(st.floats(1e-6, 1e6))
    def test_scale_invariant(self, scale):
        cfg, g = ChainConfig.pair(0.1, 2.25 * np.pi), FrequencyGrid(0.5, 1.5, 1001)
        r = cf.spectra_pair_approx(cfg, PulseSpec.delta_limit(), g, markovian=True)
        scaled = solver.SpectrumResult(g, gamma_approx=r.gamma_approx, delta_approx=r.delta_approx * scale,
                                       transfer=True)
        assert find_reflection_zeros(scaled, "delta_approx") == pytest.approx(
            find_reflection_zeros(r, "delta_approx"), abs=1e-9)


class TestPeaks:
    def test_subradiant_height(self):
        cfg, p = ChainConfig.pair(0.1, 3.125 * np.pi), PulseSpec.gaussian(0.1)
        assert peak_features(cf.spectra_pair(cfg, p, default_grid(cfg, p)))[0].height == pytest.approx(14.7, abs=1.5)

    def test_single_baseline_reflection_peak(self):
        cfg, p = ChainConfig.single(0.1), PulseSpec.gaussian(0.1)
        r = cf.spectra_single_approx(cfg, p, FrequencyGrid(0.5, 1.5, 2001))
        top = peak_features(r, "s_approx_bwd")[0]
        assert top.omega == pytest.approx(1.0, abs=1e-6)
        assert top.height == pytest.approx(abs(gaussian_amplitude(1.0, p)) ** 2, rel=1e-6)

    def test_lorentzian_fwhm(self):
        cfg = ChainConfig.single(0.1)
        r = cf.spectra_single_approx(cfg, PulseSpec.delta_limit(), FrequencyGrid(0.5, 1.5, 20001))
        assert peak_features(r, "s_approx_bwd")[0].fwhm == pytest.approx(0.1, rel=1e-4)

    @pytest.mark.parametrize("k", [0.95, 1.05])
    def test_subradiant_fwhm(self, k):
        cfg = ChainConfig.pair(0.1, k * np.pi)
        g = default_grid(cfg, PulseSpec.delta_limit(), n_points=4001)
        peaks = [p for p in peak_features(cf.spectra_pair_delta(cfg, g), "s_exact_fwd") if np.isfinite(p.fwhm)]
        narrow = min(peaks, key=lambda p: p.fwhm)
        rs = poles_markovian(cfg)
        sub = min(rs.rate_plus, rs.rate_minus) / rs.omega_q
        gamma_minus = rs.rate_minus / rs.omega_q
        assert narrow.fwhm < 1.5 * gamma_minus
        # the physical width: twice the subradiant decay constant
        assert narrow.fwhm < 1.5 * 2 * sub


class TestDefaultGrid:
    def test_pulse_band(self):
        cfg, p = ChainConfig.single(0.1), PulseSpec.gaussian(0.1)
        g = default_grid(cfg, p)
        assert g.lo <= 0.5 and g.hi >= 1.5 and g.is_uniform

    def test_refines_subradiant(self):
        cfg = ChainConfig.pair(0.1, 3.125 * np.pi)
        g = default_grid(cfg, PulseSpec.gaussian(0.1))
        assert not g.is_uniform
        width = -poles_nonmarkovian(cfg)[0].imag
        x = g.points
        near = x[np.abs(x - poles_nonmarkovian(cfg)[0].real) < 5 * width]
        assert np.max(np.diff(near)) <= width / 20 + 1e-15

    def test_delta_pulse_window(self):
        g = default_grid(ChainConfig.single(0.1), PulseSpec.delta_limit())
        assert g.lo == pytest.approx(0.1) and g.hi == pytest.approx(2.0)
