"""Dense complex linear algebra for small spin Hilbert spaces.

Matrices are plain complex ``numpy.ndarray``. Everything here assumes
dimensions of at most a few hundred (one electron plus a handful of
spin-1/2 nuclei), so matrix exponentials go through a full Hermitian
eigendecomposition rather than scaling-and-squaring.
"""

import numpy as np

HERMITICITY_TOL = 1e-12

# Pauli matrices and spin-1/2 operators, S_i = sigma_i / 2
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SX = 0.5 * SIGMA_X
SY = 0.5 * SIGMA_Y
SZ = 0.5 * SIGMA_Z
ID2 = np.eye(2, dtype=complex)


def kron(a, b):
    """Kronecker product of two complex matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(mats):
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.array([[1.0 + 0.0j]])
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def embed(op, site, nsites):
    """Place a single-spin operator at ``site`` in an ``nsites`` spin-1/2 register."""
    mats = [ID2] * nsites
    mats[site] = op
    return kron_all(mats)


def is_hermitian(m, tol=HERMITICITY_TOL):
    m = np.asarray(m)
    scale = max(np.abs(m).max(), 1.0)
    return np.abs(m - m.conj().T).max() <= tol * scale


def propagator(h, t):
    """Unitary exp(-i h t) of a Hermitian ``h`` (rad/s) over ``t`` seconds.

    Uses the eigendecomposition U = V exp(-i E t) V^dagger, exact to
    rounding for the small Hermitian matrices used here.

    Raises:
        ValueError: if ``h`` is not Hermitian within tolerance.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("propagator requires a Hermitian generator")
    energies, vectors = np.linalg.eigh(h)
    phases = np.exp(-1j * energies * t)
    return (vectors * phases) @ vectors.conj().T


def partial_trace_electron(rho, dims):
    """Trace out the first (electron) subsystem of a density matrix.

    Args:
        rho: density matrix on the full electron (x) bath space.
        dims: subsystem dimensions, electron first, e.g. ``[2, 2, 2]``.

    Returns:
        The reduced bath density matrix; the trace is preserved exactly.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(
            f"density matrix shape {rho.shape} does not match dims {dims}"
        )
    d0 = dims[0]
    dr = total // d0
    return np.einsum("ikil->kl", rho.reshape(d0, dr, d0, dr))
