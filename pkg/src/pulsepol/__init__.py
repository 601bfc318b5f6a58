"""Pulsed dynamic nuclear polarisation toolkit.

Simulates polarisation transfer from an optically reset electron spin to
surrounding nuclear spins under the PulsePol sequence family and the
reference protocols (NOVEL spin locking, integrated solid effect,
PolXY), with control-error models, closed-form average-Hamiltonian
predictions, diamond-lattice bath sampling, and reproducible robustness
sweeps.
"""

from .avgham import (alpha, exchange_period, fourier_coeffs,
                     orientation_fraction, phase_shift_slope,
                     predict_transfer, resonance_tau, transfer_time)
from .engine import (DensityState, PolarisationTrace, ToleranceError,
                     initial_state, polarisation_trace, propi_run,
                     sequence_propagator, transfer_efficiency)
from .lattice import (LatticeRealization, dipolar_hyperfine,
                      sample_realization)
from .sequence import (Chirp, Delay, Pulse, PulseSequence, apply_phase_error,
                       build_ise, build_novel, build_polxy, build_pulsepol,
                       expand_composite)
from .spinsys import (ErrorModel, NVGeometry, NuclearSpin, SpinSystem,
                      free_hamiltonian, nv_effective_detuning,
                      nv_effective_rabi, pulse_hamiltonian)
from .units import mhz, to_mhz

__version__ = "0.1.0"
