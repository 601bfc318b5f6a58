import numpy as np
import pytest
from scipy.integrate import quad

from pulsepol import avgham
from pulsepol.avgham import (alpha, angular_window_tolerance,
                             detuning_resonances, exchange_period,
                             fourier_coeffs, modulation_f1,
                             orientation_fraction, phase_shift_slope,
                             predict_transfer, resonance_tau, transfer_time)
from pulsepol.units import mhz

TAU = 1.0  # the coefficients are scale-free; integrate with tau = 1


def quadrature_coeff(n, kind):
    """Independent Fourier integral of the piecewise modulation function."""
    trig = np.cos if kind == "a" else np.sin

    def integrand(t):
        return modulation_f1(t, TAU) * trig(np.pi * n * t / TAU)

    breaks = [0, TAU / 4, TAU / 2, TAU, 5 * TAU / 4, 3 * TAU / 2, 2 * TAU]
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        val, _ = quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-13)
        total += val
    return total / TAU


class TestFourierCoeffs:
    def test_n1_closed_form(self):
        c = fourier_coeffs(1)
        assert c.a == pytest.approx((2 / np.pi) * (np.sqrt(2) - 1), abs=1e-12)
        assert c.b == pytest.approx(-c.a, abs=1e-12)

    def test_n3_closed_form(self):
        c = fourier_coeffs(3)
        want = (2 / (3 * np.pi)) * (np.sqrt(2) + 1)
        assert c.a == pytest.approx(want, abs=1e-12)
        assert c.b == pytest.approx(want, abs=1e-12)

    def test_even_exactly_zero(self):
        for n in range(2, 16, 2):
            c = fourier_coeffs(n)
            assert c.a == 0.0 and c.b == 0.0

    @pytest.mark.parametrize("n", range(1, 16))
    def test_matches_quadrature_oracle(self, n):
        c = fourier_coeffs(n)
        assert c.a == pytest.approx(quadrature_coeff(n, "a"), abs=1e-10)
        assert c.b == pytest.approx(quadrature_coeff(n, "b"), abs=1e-10)

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            fourier_coeffs(0)


class TestAlpha:
    def test_n3_value(self):
        want = (2 / (3 * np.pi)) * (2 + np.sqrt(2))
        assert alpha(3) == pytest.approx(want, abs=1e-12)

    def test_n1_value(self):
        want = np.sqrt(2) * (2 / np.pi) * (np.sqrt(2) - 1)
        assert alpha(1) == pytest.approx(want, abs=1e-12)

    def test_third_to_first_harmonic_ratio(self):
        ratio = abs(fourier_coeffs(3).a) / abs(fourier_coeffs(1).a)
        assert ratio == pytest.approx(1.94, abs=0.01)

    def test_decreases_with_order(self):
        values = [alpha(n) for n in (3, 5, 7, 9)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            alpha(2)


class TestResonance:
    def test_tau_n3(self):
        assert resonance_tau(mhz(2), 3) == pytest.approx(0.75e-6, rel=1e-12)

    def test_tau_n1(self):
        assert resonance_tau(mhz(2), 1) == pytest.approx(0.25e-6, rel=1e-12)

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            resonance_tau(mhz(2), 4)

    def test_detuning_comb(self):
        tau = resonance_tau(mhz(2), 3)
        comb = detuning_resonances(tau, 3)
        assert np.allclose(comb, [4 * np.pi * k / tau for k in (1, 2, 3)])


class TestPredictTransfer:
    def test_zero_time(self):
        assert predict_transfer(mhz(0.03), 3, 0.0) == 0.0

    def test_full_transfer_at_transfer_time(self):
        ax = mhz(0.03)
        t = transfer_time(ax, 3)
        assert predict_transfer(ax, 3, t) == pytest.approx(1.0, abs=1e-12)

    def test_times_expose_both_conventions(self):
        ax = mhz(0.03)
        assert transfer_time(ax, 3) == pytest.approx(
            2 * np.pi / (alpha(3) * ax))
        assert exchange_period(ax, 3) == pytest.approx(
            2 * transfer_time(ax, 3))
        # for the Fig-2b coupling the nominal figures are ~46 and ~92 us
        assert transfer_time(ax, 3) == pytest.approx(46.0e-6, rel=0.01)
        assert exchange_period(ax, 3) == pytest.approx(92.0e-6, rel=0.01)


class TestPhaseShiftSlope:
    def test_n3(self):
        assert phase_shift_slope(3) == pytest.approx(2 / (3 * np.pi),
                                                     abs=1e-12)

    def test_n5_opposite_direction(self):
        assert phase_shift_slope(5) == pytest.approx(-2 / (5 * np.pi),
                                                     abs=1e-12)

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            phase_shift_slope(4)


class TestOrientationFraction:
    def test_matches_angular_window(self):
        zfs = mhz(2870)
        tol = angular_window_tolerance(zfs, np.deg2rad(6.5))
        frac = orientation_fraction(mhz(50), zfs, tol)
        assert frac == pytest.approx(np.cos(np.deg2rad(83.5)), abs=1e-12)

    def test_zero_tolerance(self):
        assert orientation_fraction(mhz(50), mhz(2870), 0.0) == 0.0

    def test_whole_sphere(self):
        zfs = mhz(2870)
        assert orientation_fraction(mhz(50), zfs, 1.5 * zfs) == 1.0
        assert orientation_fraction(mhz(50), zfs, 2.0 * zfs) == 1.0

    def test_monte_carlo_oracle(self):
        # isotropic orientations: the closed form is a solid-angle fraction
        zfs = mhz(2870)
        tol = mhz(60)
        rng = np.random.default_rng(7)
        cos_t = rng.uniform(-1, 1, 200_000)
        detuning = 1.5 * zfs * cos_t ** 2
        mc = np.mean(np.abs(detuning) <= tol)
        assert orientation_fraction(mhz(50), zfs, tol) == pytest.approx(
            mc, abs=5e-3)
