"""Random 13C baths on the diamond lattice with point-dipole hyperfine.

Sites of the conventional diamond cell (a0 = 0.357 nm, 8 atoms per cell)
around an NV at the origin are occupied independently with the 1.1%
natural abundance. Realizations are reproducible: occupancy is drawn
site-by-site in distance order from a generator seeded only by the
realization seed, so growing the search radius never changes earlier
draws.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .spinsys import NuclearSpin, SpinSystem
from .units import GAMMA_C13, GAMMA_E, HBAR, MU0

A0 = 0.357e-9
OCCUPANCY = 0.011
MIN_RADIUS = 0.25e-9  # excludes the vacancy/nitrogen sites themselves
NV_AXIS = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)

# conventional cell: FCC plus the (1/4,1/4,1/4) basis
_CELL = np.array([
    [0.00, 0.00, 0.00], [0.00, 0.50, 0.50],
    [0.50, 0.00, 0.50], [0.50, 0.50, 0.00],
    [0.25, 0.25, 0.25], [0.25, 0.75, 0.75],
    [0.75, 0.25, 0.75], [0.75, 0.75, 0.25],
])


@dataclass(frozen=True)
class LatticeRealization:
    """Occupied 13C sites (distance-sorted) and their couplings.

    ``selected`` indexes the closest sites whose hyperfine pairs populate
    ``hyperfine``; ``n_candidates`` counts all lattice sites considered,
    for occupancy statistics.
    """

    seed: int
    positions: np.ndarray  # (n_occupied, 3), metres
    selected: tuple
    hyperfine: tuple  # (A_x, A_z) rad/s per selected site
    n_candidates: int
    radius: float
    b_axis: np.ndarray


def dipolar_hyperfine(r, b_axis=(0.0, 0.0, 1.0)):
    """Secular point-dipole hyperfine components (A_x, A_z) in rad/s.

    With d = -(mu0 / 4 pi) gamma_e gamma_C hbar / |r|^3 and
    cos(theta) = r_hat . b_hat:

        A_z = d (1 - 3 cos^2 theta),  A_x = |3 d sin theta cos theta|

    (the nuclear basis is rotated so A_y = 0, leaving A_x >= 0). The Fermi
    contact term is omitted; sites this close are excluded anyway.
    """
    r = np.asarray(r, dtype=float)
    dist = np.linalg.norm(r)
    if dist == 0.0:
        raise ValueError("hyperfine undefined at zero separation")
    b = np.asarray(b_axis, dtype=float)
    b = b / np.linalg.norm(b)
    d = -(MU0 / (4 * np.pi)) * GAMMA_E * GAMMA_C13 * HBAR / dist ** 3
    cos_t = float(np.dot(r / dist, b))
    sin_t = np.sqrt(max(0.0, 1.0 - cos_t ** 2))
    a_z = d * (1.0 - 3.0 * cos_t ** 2)
    a_x = abs(3.0 * d * sin_t * cos_t)
    return a_x, a_z


def _candidate_sites(radius):
    """Lattice sites within ``radius`` of the origin, distance-sorted."""
    m = int(np.ceil(radius / A0)) + 1
    cells = np.arange(-m, m + 1)
    ii, jj, kk = np.meshgrid(cells, cells, cells, indexing="ij")
    corners = np.stack([ii, jj, kk], axis=-1).reshape(-1, 3)
    sites = (corners[:, None, :] + _CELL[None, :, :]).reshape(-1, 3) * A0
    dist = np.linalg.norm(sites, axis=1)
    keep = (dist <= radius) & (dist >= MIN_RADIUS)
    sites, dist = sites[keep], dist[keep]
    order = np.lexsort((sites[:, 2], sites[:, 1], sites[:, 0], dist))
    return sites[order]


def sample_realization(seed, n_select=5, b_axis=NV_AXIS):
    """Draw one bath realization and its ``n_select`` closest occupied sites.

    The search radius grows until enough occupied sites exist; occupancy
    draws are stable under that growth, so the result is a pure function
    of ``seed``.
    """
    if n_select < 1:
        raise ValueError("n_select must be >= 1")
    density = OCCUPANCY * 8.0 / A0 ** 3
    radius = (3.0 * max(4.0 * n_select, 12.0) / (4.0 * np.pi * density)) ** (1 / 3)
    while True:
        sites = _candidate_sites(radius)
        draws = np.random.default_rng(seed).random(len(sites))
        occupied = sites[draws < OCCUPANCY]
        if len(occupied) >= n_select:
            break
        radius *= 1.4
    selected = tuple(range(n_select))
    hyperfine = tuple(dipolar_hyperfine(occupied[i], b_axis) for i in selected)
    return LatticeRealization(
        seed=int(seed), positions=occupied, selected=selected,
        hyperfine=hyperfine, n_candidates=len(sites), radius=radius,
        b_axis=np.asarray(b_axis, dtype=float),
    )


def occupancy_fraction(realization):
    """Observed occupied fraction over all candidate sites."""
    return len(realization.positions) / realization.n_candidates


def spin_system(realization, larmor, rabi, detuning=0.0):
    """Build a :class:`SpinSystem` from the selected sites of a realization."""
    nuclei = tuple(
        NuclearSpin(larmor, ax, az) for ax, az in realization.hyperfine
    )
    return SpinSystem(nuclei=nuclei, detuning=detuning, rabi=rabi)


def write_realization_csv(realization, path):
    """CSV rows: seed, site_index, x_m, y_m, z_m, ax_rad_s, az_rad_s."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "site_index", "x_m", "y_m", "z_m",
                         "ax_rad_s", "az_rad_s"])
        for idx in realization.selected:
            x, y, z = (float(v) for v in realization.positions[idx])
            ax, az = realization.hyperfine[idx]
            writer.writerow([realization.seed, idx, repr(x), repr(y),
                             repr(z), repr(float(ax)), repr(float(az))])
