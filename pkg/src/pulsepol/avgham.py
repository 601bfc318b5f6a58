"""Closed-form average-Hamiltonian results for the PulsePol family.

The sequence toggles the hyperfine coupling between the electron x and y
axes according to two piecewise modulation functions of period twice the
pulse spacing. On resonance (spacing tau = n pi / omega_I, odd n) the
resonant Fourier component survives and produces an effective flip-flop
Hamiltonian with coupling scale alpha(n) A_x / 4.

Sign conventions pinned numerically against exact evolution:
full exchange of one polarisation quantum first occurs at 2 pi / (alpha A_x);
the oscillation period is twice that.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FourierPair:
    """Cosine/sine Fourier coefficients of the first modulation function."""

    n: int
    a: float
    b: float


def fourier_coeffs(n):
    """Fourier coefficients (a_n, b_n) of the x-axis modulation function.

    Both vanish for even n. Note the sine coefficient carries
    cos(pi n / 4): the quadrature form below is the one that matches both
    direct integration of the piecewise modulation function and the known
    n = 1, 3 values ((2/pi)(sqrt2 - 1) and (2/3pi)(sqrt2 + 1)).
    """
    if n < 1:
        raise ValueError("harmonic index must be >= 1")
    if n % 2 == 0:
        return FourierPair(n, 0.0, 0.0)
    a = (4.0 * np.sin(np.pi * n / 4.0) - 2.0 * np.sin(np.pi * n / 2.0)) / (np.pi * n)
    b = (2.0 - 4.0 * np.cos(np.pi * n / 4.0)) / (np.pi * n)
    return FourierPair(n, a, b)


def modulation_f1(t, tau):
    """Piecewise x-axis modulation function, period 2 tau (vectorised)."""
    x = np.mod(np.asarray(t, dtype=float), 2.0 * tau) / tau
    out = np.zeros_like(x)
    out[(x <= 0.25) | ((x >= 1.25) & (x <= 1.5))] = 1.0
    out[((x >= 0.25) & (x <= 0.5)) | ((x >= 1.0) & (x <= 1.25))] = -1.0
    return out


def _require_odd(n):
    if n % 2 == 0:
        raise ValueError("resonance requires odd n")
    if n < 1:
        raise ValueError("resonance order must be >= 1")


def alpha(n):
    """Effective coupling scale sqrt(a_n^2 + b_n^2) of the resonant harmonic.

    For n = 3 this is (2 / 3 pi)(2 + sqrt 2), the strongest resonance.
    """
    _require_odd(n)
    c = fourier_coeffs(n)
    return float(np.hypot(c.a, c.b))


def resonance_tau(larmor, n):
    """Pulse spacing tau = n pi / omega_I meeting the odd-n resonance."""
    _require_odd(n)
    if larmor <= 0:
        raise ValueError("Larmor frequency must be positive")
    return n * np.pi / larmor


def detuning_resonances(tau, count):
    """Detunings Delta_k = 4 pi k / tau where free evolution itself revives.

    These are the spurious vertical resonance lines seen in detuning sweeps
    (Delta tau / 4 = k pi for integer k).
    """
    return np.array([4.0 * np.pi * k / tau for k in range(1, count + 1)])


def transfer_time(ax, n):
    """Time of the first complete polarisation exchange, 2 pi / (alpha A_x).

    Pinned by exact two-spin evolution; see also :func:`exchange_period`.
    """
    return 2.0 * np.pi / (alpha(n) * ax)


def exchange_period(ax, n):
    """Full period of the polarisation oscillation, 4 pi / (alpha A_x)."""
    return 4.0 * np.pi / (alpha(n) * ax)


def predict_transfer(ax, n, t):
    """Analytic transfer for one nucleus after time t on the n-th resonance.

    Starting from a polarised electron and nuclear |down>, the flip-flop
    effective Hamiltonian gives transfer sin^2(alpha A_x t / 4), i.e.
    2<Iz>(t) = 2 * predict_transfer - 1. Valid for A_x << omega_I.
    """
    return np.sin(alpha(n) * ax * np.asarray(t, dtype=float) / 4.0) ** 2


def phase_shift_slope(n):
    """Resonance-shift-per-phase-error slope (Delta T / T) / alpha_phi.

    Magnitude 2 / (pi n). The shift direction alternates with the
    resonance order (opposite for n = 5 vs n = 3); the sign convention
    here (positive for n = 3) matches the simulated best-transfer ridge.
    """
    _require_odd(n)
    sign = 1.0 if n % 4 == 3 else -1.0
    return sign * 2.0 / (np.pi * n)


def orientation_fraction(rabi, zfs, delta_max):
    """Fraction of isotropic NV orientations addressable near theta = 90 deg.

    With the microwave set at the theta = 90 deg resonance, an orientation
    at polar angle theta sees an effective detuning (3 D / 2) cos^2 theta;
    the solid-angle fraction with |detuning| <= delta_max is
    sqrt(2 delta_max / 3 D), clipped to 1. ``rabi`` sets the practical
    tolerance in use (delta_max is typically a fraction of it) but does not
    enter the geometric result.
    """
    if delta_max < 0:
        raise ValueError("detuning tolerance must be >= 0")
    if zfs <= 0:
        raise ValueError("zero-field splitting must be positive")
    return float(min(1.0, np.sqrt(2.0 * delta_max / (3.0 * zfs))))


def angular_window_tolerance(zfs, half_width):
    """Detuning tolerance equivalent to a polar window 90 deg +- half_width."""
    return 1.5 * zfs * np.sin(half_width) ** 2
