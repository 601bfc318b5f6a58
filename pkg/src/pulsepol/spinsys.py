"""Electron-nuclear spin system types and rotating-frame Hamiltonians.

The electron is an effective two-level system (the |0> <-> |-1> branch of
the NV ground state); its spin-1 structure enters only through
:func:`nv_effective_detuning` and :func:`nv_effective_rabi`. Spin operators
use S = sigma/2 and the electron comes first in all tensor products.

Phase convention: the electron gyromagnetic ratio is negative, so in the
frame rotating with the microwave the co-rotating drive component carries
exp(+i phi). A pulse of phase phi therefore drives along

    cos(phi) Sx - sin(phi) Sy

and the sequence-notation axes map to phi = 0 (X), pi/2 (Y), pi (-X),
3pi/2 (-Y). With this convention the PulsePol block written in the
standard notation transfers polarisation toward +Iz.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import ID2, SX, SY, SZ, embed, kron_all

SMALL_TILT_MAX = np.deg2rad(10.0)


@dataclass(frozen=True)
class NuclearSpin:
    """One spin-1/2 nucleus: Larmor frequency and secular hyperfine vector.

    The nuclear basis is chosen so the transverse hyperfine component lies
    along x (A_y = 0). All fields in rad/s.
    """

    larmor: float
    hyperfine_x: float = 0.0
    hyperfine_z: float = 0.0

    def __post_init__(self):
        if self.larmor <= 0:
            raise ValueError("nuclear Larmor frequency must be positive")


@dataclass(frozen=True)
class SpinSystem:
    """Effective two-level electron coupled to N nuclear spins.

    ``detuning`` is the static microwave-frequency mismatch of the baseline
    system; sweeps add their own contribution through :class:`ErrorModel`.
    """

    nuclei: tuple = ()
    detuning: float = 0.0
    rabi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "nuclei", tuple(self.nuclei))
        if self.rabi <= 0:
            raise ValueError("nominal Rabi frequency must be positive")

    @property
    def dims(self):
        return [2] * (1 + len(self.nuclei))

    @property
    def dim(self):
        return 2 ** (1 + len(self.nuclei))


@dataclass(frozen=True)
class ErrorModel:
    """Control-error parameters applied on top of a baseline system.

    detuning: extra microwave detuning (rad/s), present in pulses and delays.
    rabi_error_frac: delta Omega / Omega0; the drive amplitude becomes
        Omega0 * (1 - rabi_error_frac) while pulse durations stay nominal.
    phase_error: systematic phase offset (rad) on chained pi/2 pulses.
    resonance_shift: fractional stretch of the free-evolution delays,
        the Delta T / T knob that compensates phase errors.
    """

    detuning: float = 0.0
    rabi_error_frac: float = 0.0
    phase_error: float = 0.0
    resonance_shift: float = 0.0

    def __post_init__(self):
        if abs(self.rabi_error_frac) >= 1:
            raise ValueError("|rabi_error_frac| must be < 1")


NO_ERRORS = ErrorModel()


@dataclass(frozen=True)
class NVGeometry:
    """NV orientation relative to the magnetic field axis."""

    zero_field_splitting: float
    polar_angle: float
    azimuth: float = 0.0

    def __post_init__(self):
        if not 0 <= self.polar_angle <= np.pi:
            raise ValueError("polar angle must lie in [0, pi]")


def _total_system(sys, err):
    if err is None or err.detuning == 0.0:
        return sys
    return replace(sys, detuning=sys.detuning + err.detuning)


def free_hamiltonian(sys, err=None):
    """Rotating-frame Hamiltonian without drive, electron first.

    H = Delta Sz + sum_n [ omega_I Iz_n + Sz (A_x Ix_n + A_z Iz_n) ]

    with Delta = sys.detuning plus the error model's detuning if given.
    """
    sys = _total_system(sys, err)
    n = len(sys.nuclei)
    dim = 2 ** (1 + n)
    h = np.zeros((dim, dim), dtype=complex)
    if sys.detuning != 0.0:
        h += sys.detuning * embed(SZ, 0, 1 + n)
    for k, nuc in enumerate(sys.nuclei):
        iz = embed(SZ, 1 + k, 1 + n)
        h += nuc.larmor * iz
        if nuc.hyperfine_x != 0.0 or nuc.hyperfine_z != 0.0:
            sz_ax = [ID2] * (1 + n)
            sz_ax[0] = SZ
            sz_ax[1 + k] = nuc.hyperfine_x * SX + nuc.hyperfine_z * SZ
            h += kron_all(sz_ax)
    return h


def drive_operator(phase, nsites):
    """Electron drive axis for a pulse of the given phase (unit amplitude)."""
    ax = np.cos(phase) * SX - np.sin(phase) * SY
    return embed(ax, 0, nsites)


def pulse_hamiltonian(sys, phase, err=None):
    """Hamiltonian during a pulse: free part plus the (mis-set) drive.

    The drive amplitude is Omega0 (1 - rabi_error_frac) along the axis
    cos(phase) Sx - sin(phase) Sy.
    """
    err = err or NO_ERRORS
    rabi = sys.rabi * (1.0 - err.rabi_error_frac)
    return free_hamiltonian(sys, err) + rabi * drive_operator(
        phase, 1 + len(sys.nuclei)
    )


def nv_effective_detuning(geom, omega_s, omega_mw):
    """Effective two-level detuning for an NV tilted by theta from the field.

    Returns omega_s - omega_mw + D (1 - 3/2 sin^2 theta). The secular
    reduction behind this expression assumes a small tilt; larger angles
    are evaluated with the same formula but flagged with a warning.
    """
    theta = geom.polar_angle
    if theta > SMALL_TILT_MAX and theta < np.pi - SMALL_TILT_MAX:
        warnings.warn(
            "NV tilt exceeds the small-angle regime of the secular "
            "reduction; the splitting formula is extrapolated",
            stacklevel=2,
        )
    d_theta = geom.zero_field_splitting * (1.0 - 1.5 * np.sin(theta) ** 2)
    return omega_s - omega_mw + d_theta


def nv_effective_rabi(rabi3):
    """Two-level Rabi frequency of the driven NV branch: Omega_3 / sqrt(2)."""
    if rabi3 < 0:
        raise ValueError("Rabi frequency must be non-negative")
    return rabi3 / np.sqrt(2.0)
