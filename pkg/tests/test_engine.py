import numpy as np
import pytest

from pulsepol.avgham import predict_transfer, transfer_time
from pulsepol.engine import (DensityState, ToleranceError, initial_state,
                             polarisation_trace, propi_run,
                             sequence_propagator, transfer_efficiency)
from pulsepol.linalg import SIGMA_X
from pulsepol.sequence import (Chirp, Pulse, PulseSequence, build_ise,
                               build_novel, build_pulsepol)
from pulsepol.spinsys import ErrorModel, NuclearSpin, SpinSystem
from pulsepol.units import mhz

LARMOR = mhz(2.0)
AX = mhz(0.03)
RABI = mhz(50.0)


def single_spin_system(ax=AX, az=0.0, detuning=0.0):
    return SpinSystem((NuclearSpin(LARMOR, ax, az),), detuning, RABI)


def electron_only(detuning=0.0):
    return SpinSystem((), detuning, RABI)


class TestSequencePropagator:
    def test_empty_sequence(self):
        seq = PulseSequence(())
        u = sequence_propagator(electron_only(), seq)
        assert np.array_equal(u, np.eye(2))

    def test_single_pi_pulse(self):
        seq = PulseSequence((Pulse(np.pi, 0.0, RABI),))
        u = sequence_propagator(electron_only(), seq)
        assert np.abs(u - (-1j * SIGMA_X)).max() < 1e-12

    def test_unitarity(self):
        seq = build_pulsepol(LARMOR, RABI, 3, 6, timing="finite")
        err = ErrorModel(detuning=mhz(7.0), rabi_error_frac=0.03)
        u = sequence_propagator(single_spin_system(), seq, err)
        assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-9

    def test_delta_pulse_detuning_cancellation(self):
        # with instantaneous pulses the block propagator is independent of
        # the detuning, nuclei included
        seq = build_pulsepol(LARMOR, RABI, 3, 2, timing="ideal")
        sys0 = single_spin_system(az=mhz(0.02))
        u0 = sequence_propagator(sys0, seq, mode="delta")
        for frac in (0.1, 0.25, 0.5):
            err = ErrorModel(detuning=frac * LARMOR)
            u = sequence_propagator(sys0, seq, err, mode="delta")
            assert np.abs(u - u0).max() < 1e-9

    def test_delta_mode_scales_angle_with_rabi_error(self):
        seq = PulseSequence((Pulse(np.pi, 0.0, RABI),))
        err = ErrorModel(rabi_error_frac=0.02)
        u = sequence_propagator(electron_only(), seq, err, mode="delta")
        angle = 0.98 * np.pi
        want = np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * SIGMA_X
        assert np.abs(u - want).max() < 1e-12

    def test_chirp_zero_range_limit_is_spin_lock(self):
        duration = 5e-6
        tiny = mhz(1e-5)
        chirp = PulseSequence((Chirp(duration, LARMOR, tiny / 2, -tiny / 2),))
        lock = PulseSequence((Pulse(LARMOR * duration, 0.0, LARMOR),))
        sys = single_spin_system()
        u_chirp = sequence_propagator(sys, chirp)
        u_lock = sequence_propagator(sys, lock)
        assert np.abs(u_chirp - u_lock).max() < 1e-5


class TestErrorOrderScaling:
    """Pulse-only double block (two brackets, no delays), electron only."""

    @staticmethod
    def _double_block_pulses():
        seq = build_pulsepol(LARMOR, RABI, 3, 2, timing="ideal")
        pulses = tuple(e for e in seq.elements if isinstance(e, Pulse))
        return PulseSequence(pulses)

    def _deviation(self, detuning_frac, rabi_frac):
        seq = self._double_block_pulses()
        err = ErrorModel(detuning=detuning_frac * RABI,
                         rabi_error_frac=rabi_frac)
        u = sequence_propagator(electron_only(), seq, err)
        return u + np.eye(2)

    def test_zero_error_is_minus_identity(self):
        assert np.abs(self._deviation(0.0, 0.0)).max() < 1e-12

    def test_detuning_slope_two_and_sigma_z_dominant(self):
        eps = np.logspace(-3, -2, 7)
        devs = [np.abs(self._deviation(e, 0.0)).max() for e in eps]
        slope = np.polyfit(np.log(eps), np.log(devs), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.1)
        dev = self._deviation(5e-3, 0.0)
        cz = np.trace(np.diag([1, -1]) @ dev) / 2
        rest = np.linalg.norm(dev - cz * np.diag([1, -1]))
        assert rest / abs(cz) < 0.05

    def test_rabi_error_cancels_beyond_second_order(self):
        # pure amplitude errors leave only an eps^4 deviation, i.e. the
        # block cancels them even one order better than detuning errors
        eps = np.logspace(-3, -2, 7)
        devs = [np.abs(self._deviation(0.0, e)).max() for e in eps]
        slope = np.polyfit(np.log(eps), np.log(devs), 1)[0]
        assert slope == pytest.approx(4.0, abs=0.15)


class TestPolarisationTrace:
    def test_uncoupled_nucleus_is_constant(self):
        seq = build_pulsepol(LARMOR, RABI, 3, 10, timing="finite")
        trace = polarisation_trace(single_spin_system(ax=0.0), seq,
                                   nuclei="down")
        assert np.abs(trace.iz - trace.iz[:, :1]).max() < 1e-9

    def test_matches_effective_model(self):
        brackets = 40
        seq = build_pulsepol(LARMOR, RABI, 3, brackets, timing="finite")
        trace = polarisation_trace(single_spin_system(), seq, nuclei="down")
        transfer = (2 * trace.iz[0] + 1) / 2
        model = predict_transfer(AX, 3, trace.times)
        assert np.abs(transfer - model).max() < 0.05

    def test_small_detuning_barely_degrades(self):
        brackets = 64  # past the full-transfer time
        seq = build_pulsepol(LARMOR, RABI, 3, brackets, timing="finite")

        def best(err):
            trace = polarisation_trace(single_spin_system(), seq, err,
                                       nuclei="down")
            return trace.iz[0].max() * 2

        clean = best(None)
        # away from the detuning comb (lines at multiples of 4 pi / tau,
        # i.e. every (2pi) 2.67 MHz) a 4 MHz detuning costs almost nothing
        assert best(ErrorModel(detuning=mhz(4.0))) > 0.9 * clean
        # 0.1 Omega_0 = (2pi) 5 MHz sits on the k = 2 comb shoulder and
        # loses somewhat more, but the transfer survives
        assert best(ErrorModel(detuning=0.1 * RABI)) > 0.75 * clean

    def test_sample_dt_resolves_lock_oscillation(self):
        lock_time = 2 * np.pi / AX
        seq = build_novel(LARMOR, LARMOR, lock_time, pulse_rabi=RABI)
        trace = polarisation_trace(single_spin_system(), seq, nuclei="down",
                                   sample_dt=lock_time / 200)
        assert len(trace.times) > 100
        assert trace.iz[0].max() * 2 > 0.99
        peak_t = trace.times[np.argmax(trace.iz[0])]
        assert peak_t == pytest.approx(lock_time, rel=0.05)

    def test_csv_export(self, tmp_path):
        seq = build_pulsepol(LARMOR, RABI, 3, 2)
        trace = polarisation_trace(single_spin_system(), seq, nuclei="down")
        path = tmp_path / "trace.csv"
        trace.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "time_s,observable,value"
        assert any(",iz_0," in ln for ln in lines[1:])
        assert any(",sz," in ln for ln in lines[1:])


class TestTransferEfficiency:
    def test_zero_time(self):
        seq = build_pulsepol(LARMOR, RABI, 3, 10)
        assert transfer_efficiency(single_spin_system(), seq,
                                   t_final=0.0) == 0.0

    def test_resonant_single_nucleus_reaches_one(self):
        brackets = round(transfer_time(AX, 3) / (3 * np.pi / LARMOR))
        seq = build_pulsepol(LARMOR, RABI, 3, brackets, timing="finite")
        eff = transfer_efficiency(single_spin_system(), seq)
        assert eff > 0.99

    def test_off_resonance_transfers_nothing(self):
        # shift tau from 3 pi / omega to 4 pi / omega: an even multiple
        brackets = 40
        seq = build_pulsepol(LARMOR, RABI, 3, brackets, timing="finite")
        err = ErrorModel(resonance_shift=1.0 / 3.0)
        eff = transfer_efficiency(single_spin_system(), seq, err)
        assert abs(eff) < 0.05

    def test_bounded_by_one_quantum(self):
        seq = build_pulsepol(LARMOR, RABI, 3, 80, timing="finite")
        sys = SpinSystem(
            tuple(NuclearSpin(LARMOR, mhz(0.02 * (k + 1)), 0.0)
                  for k in range(3)),
            0.0, RABI,
        )
        eff = transfer_efficiency(sys, seq)
        assert -1.0 - 1e-9 <= eff <= 1.0 + 1e-9


class TestPropiRun:
    def test_saturates_at_full_nuclear_polarisation(self):
        brackets = round(transfer_time(AX, 3) / (3 * np.pi / LARMOR))
        seq = build_pulsepol(LARMOR, RABI, 3, brackets, timing="finite")
        curve = propi_run(single_spin_system(), seq, cycles=5)
        assert curve[0] == pytest.approx(0.0, abs=1e-12)
        assert curve[-1] == pytest.approx(1.0, abs=0.02)
        # saturating buildup; finite pulses allow per-mille wiggle at the top
        assert np.all(np.diff(curve) > -0.01)

    def test_zero_coupling_flat(self):
        seq = build_pulsepol(LARMOR, RABI, 3, 10)
        curve = propi_run(single_spin_system(ax=0.0), seq, cycles=3)
        assert np.abs(curve).max() < 1e-10

    def test_retains_aligned_polarisation(self):
        seq = build_pulsepol(LARMOR, RABI, 3, 40, timing="finite")
        curve = propi_run(single_spin_system(), seq, cycles=4, nuclei="up")
        assert curve[-1] / curve[0] > 0.99

    def test_imperfect_reset_slows_buildup(self):
        brackets = round(transfer_time(AX, 3) / (3 * np.pi / LARMOR))
        seq = build_pulsepol(LARMOR, RABI, 3, brackets, timing="finite")
        perfect = propi_run(single_spin_system(), seq, cycles=3)
        lossy = propi_run(single_spin_system(), seq, cycles=3,
                          reset_fidelity=0.92)
        assert lossy[1] < perfect[1]

    def test_validates_state(self):
        state = initial_state(single_spin_system(), "mixed")
        state.validate()
        state.rho = state.rho * 1.5
        with pytest.raises(ToleranceError):
            state.validate()


class TestNovelFragility:
    def _peak(self, err):
        lock_time = 2.5 * 2 * np.pi / AX
        seq = build_novel(LARMOR, LARMOR, lock_time, pulse_rabi=RABI)
        trace = polarisation_trace(single_spin_system(), seq, err,
                                   nuclei="down",
                                   sample_dt=lock_time / 400)
        return trace.iz[0].max() * 2 + 1.0  # transfer on the 0..2 scale

    def test_small_detuning_halves_transfer(self):
        clean = self._peak(None)
        detuned = self._peak(ErrorModel(detuning=mhz(0.5)))
        assert detuned < 0.5 * clean

    def test_two_percent_rabi_error_halves_transfer(self):
        clean = self._peak(None)
        off = self._peak(ErrorModel(rabi_error_frac=0.02))
        assert off < 0.5 * clean


class TestISE:
    def test_strong_coupling_sweep_transfers(self):
        rate = 3e-6 / mhz(1.0)
        seq = build_ise(mhz(1.79), mhz(12), rate)
        sys = SpinSystem((NuclearSpin(LARMOR, mhz(0.3), 0.0),), 0.0,
                         mhz(1.79))
        eff = transfer_efficiency(sys, seq)
        assert eff > 0.3

    def test_initial_pulse_suppresses_transfer(self):
        rate = 3e-6 / mhz(1.0)
        sys = SpinSystem((NuclearSpin(LARMOR, mhz(0.3), 0.0),), 0.0,
                         mhz(1.79))
        plain = transfer_efficiency(sys, build_ise(mhz(1.79), mhz(12), rate))
        pulsed = transfer_efficiency(
            sys, build_ise(mhz(1.79), mhz(12), rate, initial_pulse=True))
        assert pulsed < 0.5 * plain
