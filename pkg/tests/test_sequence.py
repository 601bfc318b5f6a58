import numpy as np
import pytest

from pulsepol.linalg import SIGMA_X, SIGMA_Y, SX, SY
from pulsepol.sequence import (Chirp, Delay, Pulse, apply_phase_error,
                               build_ise, build_novel, build_polxy,
                               build_pulsepol, expand_composite)
from pulsepol.units import mhz


def rotation(angle, phase):
    """Independent 2x2 rotation product oracle (drive cos Sx - sin Sy)."""
    axis = np.cos(phase) * SIGMA_X - np.sin(phase) * SIGMA_Y
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * axis


class TestBuildPulsePol:
    def test_ideal_delays(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=3, reps=2)
        delays = [e for e in seq.elements if isinstance(e, Delay)]
        assert len(delays) == 8
        assert all(d.duration == pytest.approx(187.5e-9, rel=1e-12)
                   for d in delays)
        assert seq.tau == pytest.approx(0.75e-6, rel=1e-12)

    def test_block_structure(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=3, reps=4)
        assert seq.cycle_len == 10
        assert len(seq.elements) == 40
        pulses = [e for e in seq.elements[:10] if isinstance(e, Pulse)]
        assert len(pulses) == 6
        angles = [p.angle for p in pulses]
        assert angles == [np.pi / 2, np.pi, np.pi / 2, np.pi / 2, np.pi,
                          np.pi / 2]

    def test_finite_timing(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=3, reps=2,
                             timing="finite")
        block = seq.elements[:10]
        delay_sum = sum(e.duration for e in block if isinstance(e, Delay))
        assert delay_sum == pytest.approx(710e-9, rel=1e-12)
        # two blocks' delays: 2 (750 - 40) ns
        total = sum(e.duration for e in seq.elements if isinstance(e, Delay))
        assert total == pytest.approx(1420e-9, rel=1e-12)
        # block wall time stays n pi / omega_I exactly
        assert sum(e.duration for e in block) == pytest.approx(
            0.75e-6, rel=1e-12)

    def test_even_order_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            build_pulsepol(mhz(2), mhz(50), order=2)

    def test_finite_budget_enforced(self):
        # n=1 at (2pi)30 MHz: 66.7 ns of pulses vs 183 ns free -> 36% > 20%
        with pytest.raises(ValueError, match="larger resonance order"):
            build_pulsepol(mhz(2), mhz(30), order=1, reps=2, timing="finite")
        build_pulsepol(mhz(2), mhz(30), order=3, reps=2, timing="finite")

    def test_combined_needs_multiple_of_four(self):
        with pytest.raises(ValueError):
            build_pulsepol(mhz(2), mhz(50), reps=2, variant="combined")
        seq = build_pulsepol(mhz(2), mhz(50), reps=4, variant="combined")
        assert len(seq.elements) == 40


class TestBuildPolXY:
    def test_element_counts(self):
        seq = build_polxy(mhz(2), mhz(50), order=1, reps=1)
        block = seq.elements[1:-1]
        assert len(block) == 18
        assert sum(isinstance(e, Pulse) for e in block) == 9
        assert sum(isinstance(e, Delay) for e in block) == 9

    def test_tau(self):
        seq = build_polxy(mhz(2), mhz(50), order=1, reps=1)
        assert seq.tau == pytest.approx(0.25e-6, rel=1e-12)

    def test_zero_reps_is_identity(self):
        seq = build_polxy(mhz(2), mhz(50), order=1, reps=0)
        assert len(seq.elements) == 2
        u = rotation(*[(p.angle, p.phase) for p in seq.elements][1]) @ \
            rotation(seq.elements[0].angle, seq.elements[0].phase)
        assert np.allclose(u, np.eye(2), atol=1e-12)

    def test_pumps_down(self):
        assert build_polxy(mhz(2), mhz(50)).pump_direction == -1


class TestBuildNovel:
    def test_two_elements(self):
        seq = build_novel(mhz(1.86), mhz(1.86), 10e-6)
        assert len(seq.elements) == 2
        prep, lock = seq.elements
        assert prep.angle == pytest.approx(np.pi / 2)
        assert lock.duration == pytest.approx(10e-6, rel=1e-12)
        assert lock.phase == 0.0

    def test_zero_duration(self):
        seq = build_novel(mhz(1.86), mhz(1.86), 0.0)
        assert len(seq.elements) == 1

    def test_mismatched_lock_allowed(self):
        seq = build_novel(mhz(2.0), mhz(1.8), 10e-6)
        assert seq.elements[1].rabi == pytest.approx(mhz(1.8))


class TestBuildISE:
    def test_chirp_duration_12mhz(self):
        rate = 3e-6 / mhz(1.0)
        seq = build_ise(mhz(1.79), mhz(12), rate)
        chirp = seq.elements[-1]
        assert isinstance(chirp, Chirp)
        assert chirp.duration == pytest.approx(36e-6, rel=1e-12)

    def test_chirp_duration_52mhz(self):
        rate = 3e-6 / mhz(1.0)
        seq = build_ise(mhz(1.79), mhz(52), rate)
        assert seq.elements[-1].duration == pytest.approx(156e-6, rel=1e-12)

    def test_sweep_endpoints(self):
        seq = build_ise(mhz(1.79), mhz(12), 3e-6 / mhz(1.0))
        chirp = seq.elements[-1]
        assert chirp.detuning_start == pytest.approx(+mhz(6))
        assert chirp.detuning_end == pytest.approx(-mhz(6))

    def test_range_must_be_positive(self):
        with pytest.raises(ValueError):
            build_ise(mhz(1.79), 0.0, 3e-6 / mhz(1.0))


class TestExpandComposite:
    def test_total_rotation_angles(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=5, reps=2,
                             timing="finite")
        comp = expand_composite(seq)
        block = comp.elements[:comp.cycle_len]
        pulses = [e for e in block if isinstance(e, Pulse)]
        assert len(pulses) == 4 * 7 + 2 * 5
        total_deg = np.rad2deg(sum(p.angle for p in pulses))
        assert total_deg == pytest.approx(4 * 1218 + 2 * 1232, rel=1e-12)

    def test_delays_preserved_in_position(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=5, reps=2,
                             timing="finite")
        comp = expand_composite(seq)
        assert sum(isinstance(e, Delay) for e in comp.elements) == \
            sum(isinstance(e, Delay) for e in seq.elements)
        # the delay pattern per block: after 7+5 pulses, after 7, etc.
        kinds = ["D" if isinstance(e, Delay) else "P"
                 for e in comp.elements[:comp.cycle_len]]
        assert kinds.count("D") == 4

    def test_retiming(self):
        rabi = mhz(50)
        seq = build_pulsepol(mhz(2), rabi, order=5, reps=2, timing="finite")
        comp = expand_composite(seq)
        free = sum(e.duration for e in comp.elements[:comp.cycle_len]
                   if isinstance(e, Delay))
        want = 5 * np.pi / mhz(2) - (2 * 1232 + 4 * 1218) / 180 * np.pi / rabi
        assert free == pytest.approx(want, rel=1e-12)

    def test_budget_advises_larger_order(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=3, reps=2,
                             timing="finite")
        with pytest.raises(ValueError, match="larger resonance order"):
            expand_composite(seq)

    def test_composite_pi_equals_ideal_rotation(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=5, reps=1,
                             timing="finite")
        comp = expand_composite(seq)
        pulses = [e for e in comp.elements if isinstance(e, Pulse)]
        # elements 7..11 are the composite pi_X train (after the first pi/2)
        train = pulses[7:12]
        u = np.eye(2, dtype=complex)
        for p in train:
            u = rotation(p.angle, p.phase) @ u
        assert np.abs(u - (-1j * SIGMA_X)).max() < 1e-8

    def test_composite_pi2_equals_ideal_rotation(self):
        seq = build_pulsepol(mhz(2), mhz(50), order=5, reps=1,
                             timing="finite")
        comp = expand_composite(seq)
        pulses = [e for e in comp.elements if isinstance(e, Pulse)]
        train = pulses[:7]  # leading (pi/2)_Y
        u = np.eye(2, dtype=complex)
        for p in train:
            u = rotation(p.angle, p.phase) @ u
        assert np.abs(u - rotation(np.pi / 2, np.pi / 2)).max() < 1e-8


class TestApplyPhaseError:
    def test_zero_is_identity(self):
        seq = build_pulsepol(mhz(2), mhz(50))
        assert apply_phase_error(seq, 0.0) is seq

    def test_half_pi_turns_leading_y_into_minus_x(self):
        seq = build_pulsepol(mhz(2), mhz(50))
        shifted = apply_phase_error(seq, np.pi / 2)
        assert shifted.elements[0].phase == pytest.approx(np.pi)

    def test_only_chained_pulses_shift(self):
        alpha = 0.1
        seq = build_pulsepol(mhz(2), mhz(50), reps=2)
        shifted = apply_phase_error(seq, alpha)
        for start in (0, 10):
            assert shifted.elements[start].phase == pytest.approx(
                np.pi / 2 + alpha)
            assert shifted.elements[start + 5].phase == pytest.approx(
                np.pi - alpha)
            for idx in (2, 4, 7, 9):
                assert shifted.elements[start + idx].phase == \
                    seq.elements[start + idx].phase

    def test_requires_pulsepol_structure(self):
        seq = build_novel(mhz(2), mhz(2), 10e-6)
        with pytest.raises(ValueError):
            apply_phase_error(seq, 0.1)
