"""Unit helpers and physical constants.

All frequencies inside the package are angular (rad/s). Interfaces quoting
"(2pi) MHz" values go through :func:`mhz` at the boundary.
"""

import numpy as np

# multiply a linear-frequency value by this to get rad/s
TWO_PI = 2.0 * np.pi

HBAR = 1.054_571_817e-34  # J s
MU0 = 4.0e-7 * np.pi  # T m / A

# gyromagnetic ratios, rad/s/T; electron moment is anti-parallel to its spin
GAMMA_E = -TWO_PI * 28.024e9
GAMMA_C13 = TWO_PI * 10.705e6

NS = 1e-9
US = 1e-6


def mhz(value):
    """Convert a '(2pi) MHz' figure to angular frequency in rad/s."""
    return TWO_PI * 1e6 * value


def to_mhz(omega):
    """Inverse of :func:`mhz`: angular rad/s to '(2pi) MHz' units."""
    return omega / (TWO_PI * 1e6)
