"""Pulse-sequence data model and protocol builders.

Sequences are flat tuples of elements (pulses, delays, chirps) plus block
metadata. Pulse phases follow the axis map X = 0, Y = pi/2, -X = pi,
-Y = 3pi/2 (see :mod:`pulsepol.spinsys` for the drive convention that makes
these labels physical).

``pump_direction`` records which way a protocol moves nuclear polarisation
under that convention: the PulsePol family and NOVEL (as built here) pump
toward +Iz, PolXY toward -Iz. The opposing directions are real, not a
bookkeeping artifact: polarisation-inversion readout exploits exactly this.
"""

from dataclasses import dataclass, replace

import numpy as np

from .avgham import resonance_tau

PHASE_X = 0.0
PHASE_Y = np.pi / 2
PHASE_MX = np.pi
PHASE_MY = 3 * np.pi / 2

# composite-pulse trains (flip angles in degrees; True marks a 180deg
# phase-inverted sub-pulse)
COMPOSITE_PI2 = ((16, True), (300, False), (266, True), (54, False),
                 (266, True), (300, False), (16, True))
COMPOSITE_PI = ((325, False), (263, True), (56, False), (263, True),
                (325, False))
COMPOSITE_PI2_TOTAL_DEG = 1218.0
COMPOSITE_PI_TOTAL_DEG = 1232.0

PULSE_BUDGET_PLAIN = 0.2
PULSE_BUDGET_COMPOSITE = 0.5


@dataclass(frozen=True)
class Pulse:
    """Rotation by ``angle`` about the in-plane axis at ``phase``.

    ``rabi`` is the nominal drive amplitude; the physical duration is
    angle / rabi regardless of amplitude errors applied later.
    """

    angle: float
    phase: float
    rabi: float

    def __post_init__(self):
        if self.angle < 0:
            raise ValueError("pulse angle must be >= 0")
        if self.rabi <= 0:
            raise ValueError("pulse Rabi frequency must be positive")

    @property
    def duration(self):
        return self.angle / self.rabi


@dataclass(frozen=True)
class Delay:
    duration: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("delay duration must be >= 0")


@dataclass(frozen=True)
class Chirp:
    """Driven interval whose detuning ramps linearly over the duration."""

    duration: float
    rabi: float
    detuning_start: float
    detuning_end: float
    phase: float = 0.0

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("chirp duration must be >= 0")
        if self.rabi <= 0:
            raise ValueError("chirp Rabi frequency must be positive")


@dataclass(frozen=True)
class PulseSequence:
    """Ordered sequence elements plus block structure and provenance.

    ``cycle_len`` elements starting at ``prefix_len`` form the repeating
    block, repeated ``reps`` times. ``tau`` is the nominal pulse spacing
    the delays were derived from (used for symbolic DSL rendering).
    """

    elements: tuple
    name: str = ""
    cycle_len: int = 0
    prefix_len: int = 0
    reps: int = 0
    order: int = 0
    larmor: float = 0.0
    rabi: float = 0.0
    tau: float = 0.0
    timing: str = ""
    pump_direction: int = +1

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def total_duration(self):
        return sum(e.duration for e in self.elements)

    def block_boundaries(self):
        """Element indices at which one repeating block ends."""
        if not self.cycle_len:
            return [len(self.elements)]
        out = []
        idx = self.prefix_len
        while idx + self.cycle_len <= len(self.elements):
            idx += self.cycle_len
            out.append(idx)
        if not out or out[-1] != len(self.elements):
            out.append(len(self.elements))
        return out


def _pulsepol_bracket(rabi, delay, variant):
    d = Delay(delay)
    p2 = np.pi / 2
    if variant == "standard":
        phases = (PHASE_Y, PHASE_X, PHASE_Y, PHASE_MX, PHASE_Y, PHASE_MX)
    elif variant == "yx":
        phases = (PHASE_Y, PHASE_Y, PHASE_MY, PHASE_X, PHASE_X, PHASE_MX)
    else:
        raise ValueError(f"unknown PulsePol variant {variant!r}")
    a, b, c, e, f, g = phases
    return (
        Pulse(p2, a, rabi), d, Pulse(np.pi, b, rabi), d,
        Pulse(p2, c, rabi), Pulse(p2, e, rabi), d,
        Pulse(np.pi, f, rabi), d, Pulse(p2, g, rabi),
    )


def _check_budget(pulse_time, free_time, limit, order):
    if free_time <= 0 or pulse_time > limit * free_time:
        raise ValueError(
            f"pulse time {pulse_time * 1e9:.1f} ns exceeds {limit:.0%} of the "
            f"free evolution per block ({max(free_time, 0.0) * 1e9:.1f} ns at "
            f"n={order}); use a larger resonance order n"
        )


def build_pulsepol(larmor, rabi, order=3, reps=2, timing="ideal",
                   variant="standard"):
    """PulsePol sequence: ``reps`` repetitions of the 10-element block.

    The block is (pi/2)_Y t (pi)_X t (pi/2)_Y (pi/2)_-X t (pi)_Y t (pi/2)_-X
    with t = tau/4 and tau = order * pi / larmor (order odd). ``reps``
    counts basic blocks, i.e. the notation's 2N. With ``timing='finite'``
    the four delays per block are shortened so the block wall time stays
    tau exactly (delays sum to tau - 4 pi / rabi); this requires the pulse
    time to stay under 20% of the free evolution.

    The ``yx`` variant swaps the roles of the axes; ``combined``
    interleaves two blocks of each kind (reps must be a multiple of 4),
    which removes the residual detuning oscillations of either one.
    """
    if order % 2 == 0 or order < 1:
        raise ValueError("PulsePol resonance requires odd n")
    if reps < 0:
        raise ValueError("reps must be >= 0")
    tau = resonance_tau(larmor, order)
    if timing == "ideal":
        delay = tau / 4
    elif timing == "finite":
        pulse_time = 4 * np.pi / rabi
        free = tau - pulse_time
        _check_budget(pulse_time, free, PULSE_BUDGET_PLAIN, order)
        delay = free / 4
    else:
        raise ValueError(f"unknown timing mode {timing!r}")

    if variant == "combined":
        if reps % 4:
            raise ValueError("combined variant repeats in units of 4 blocks")
        unit = (_pulsepol_bracket(rabi, delay, "standard") * 2
                + _pulsepol_bracket(rabi, delay, "yx") * 2)
        elements = unit * (reps // 4)
    else:
        elements = _pulsepol_bracket(rabi, delay, variant) * reps
    # the surviving quadrature flips with the resonance order: n = 3, 7, ...
    # pump toward +Iz, n = 1, 5, ... toward -Iz
    direction = +1 if order % 4 == 3 else -1
    return PulseSequence(
        elements, name=f"pulsepol-{variant}", cycle_len=10, reps=reps,
        order=order, larmor=larmor, rabi=rabi, tau=tau, timing=timing,
        pump_direction=direction,
    )


def build_polxy(larmor, rabi, order=1, reps=1):
    """PolXY sequence with pulse spacing tau = order * pi / larmor.

    (pi/2)_Y [ t/2 (pi)_X t (pi)_Y t (pi)_X t (pi)_Y t/2
               (pi/2)_X t (pi)_Y t (pi)_X t (pi)_Y t (pi/2)_X ]^reps (pi/2)_-Y

    Each block holds 9 pulses and 9 delays. Under the conventions here
    PolXY pumps nuclear polarisation toward -Iz.
    """
    if order < 1:
        raise ValueError("resonance order must be >= 1")
    if reps < 0:
        raise ValueError("reps must be >= 0")
    tau = order * np.pi / larmor
    p2, p = np.pi / 2, np.pi
    dt, dh = Delay(tau), Delay(tau / 2)
    block = (
        dh, Pulse(p, PHASE_X, rabi), dt, Pulse(p, PHASE_Y, rabi), dt,
        Pulse(p, PHASE_X, rabi), dt, Pulse(p, PHASE_Y, rabi), dh,
        Pulse(p2, PHASE_X, rabi), dt, Pulse(p, PHASE_Y, rabi), dt,
        Pulse(p, PHASE_X, rabi), dt, Pulse(p, PHASE_Y, rabi), dt,
        Pulse(p2, PHASE_X, rabi),
    )
    elements = (Pulse(p2, PHASE_Y, rabi),) + block * reps \
        + (Pulse(p2, PHASE_MY, rabi),)
    return PulseSequence(
        elements, name="polxy", cycle_len=len(block), prefix_len=1,
        reps=reps, order=order, larmor=larmor, rabi=rabi, tau=tau,
        pump_direction=-1,
    )


def build_novel(larmor, lock_rabi, lock_duration, pulse_rabi=None):
    """NOVEL: a pi/2 preparation pulse followed by one spin-lock pulse.

    The lock drives along X; the preparation pulse is (pi/2)_-Y so the
    electron lands on the lock axis and the protocol pumps toward +Iz
    (the +Y preparation anti-locks in this frame and pumps the bath the
    other way, which is how polarisation-inversion readout uses it).
    Hartmann-Hahn matching (lock_rabi = larmor) is the caller's choice.
    """
    if lock_duration < 0:
        raise ValueError("lock duration must be >= 0")
    prep = Pulse(np.pi / 2, PHASE_MY, pulse_rabi or lock_rabi)
    elements = (prep,)
    if lock_duration > 0:
        elements += (Pulse(lock_rabi * lock_duration, PHASE_X, lock_rabi),)
    return PulseSequence(elements, name="novel", larmor=larmor,
                         rabi=lock_rabi)


def build_ise(center_rabi, sweep_range, inverse_rate, lock_phase=PHASE_X,
              initial_pulse=False):
    """Integrated solid effect: detuning chirp through resonance under drive.

    The chirp sweeps the extra detuning from +sweep_range/2 down to
    -sweep_range/2 over duration sweep_range * inverse_rate. The electron
    starts along +z, already aligned with the initial effective field, so
    no preparation pulse is applied by default (adding one puts the spin
    perpendicular to the field and suppresses the transfer; it is kept as
    an option for completeness).
    """
    if sweep_range <= 0:
        raise ValueError("sweep range must be positive")
    if inverse_rate <= 0:
        raise ValueError("inverse sweep rate must be positive")
    duration = sweep_range * inverse_rate
    elements = ()
    if initial_pulse:
        elements += (Pulse(np.pi / 2, lock_phase + np.pi / 2, center_rabi),)
    elements += (Chirp(duration, center_rabi, +sweep_range / 2,
                       -sweep_range / 2, lock_phase),)
    return PulseSequence(elements, name="ise", rabi=center_rabi)


def _composite_train(pulse, train):
    return tuple(
        Pulse(np.deg2rad(ang), pulse.phase + (np.pi if bar else 0.0),
              pulse.rabi)
        for ang, bar in train
    )


def expand_composite(seq):
    """Replace each pi/2 and pi pulse by its error-compensating train.

    The symmetric-phase trains rotate by 1218 deg (pi/2) and 1232 deg (pi)
    in total, so the delays are re-derived to keep the block resonant:
    free evolution per block = order*pi/larmor - (2*1232 + 4*1218)/180 *
    pi/rabi. The trains are long; the budget check only insists they stay
    under half the free evolution (the l=5 resonance at Omega0 = (2pi)50 MHz
    sits at 48%), and the fix for a violation is a larger resonance order.
    """
    if not seq.name.startswith("pulsepol") or not (seq.order and seq.larmor):
        raise ValueError("composite re-timing requires a PulsePol sequence")
    pulse_time = (2 * COMPOSITE_PI_TOTAL_DEG + 4 * COMPOSITE_PI2_TOTAL_DEG) \
        / 180.0 * np.pi / seq.rabi
    free = seq.order * np.pi / seq.larmor - pulse_time
    _check_budget(pulse_time, free, PULSE_BUDGET_COMPOSITE, seq.order)
    delay = Delay(free / 4)

    out = []
    for el in seq.elements:
        if isinstance(el, Delay):
            out.append(delay)
        elif isinstance(el, Pulse) and np.isclose(el.angle, np.pi / 2):
            out.extend(_composite_train(el, COMPOSITE_PI2))
        elif isinstance(el, Pulse) and np.isclose(el.angle, np.pi):
            out.extend(_composite_train(el, COMPOSITE_PI))
        else:
            raise ValueError(
                "composite expansion handles only pi/2 and pi pulses plus "
                "delays"
            )
    per_block = len(out) // seq.reps if seq.reps else 0
    return replace(
        seq, elements=tuple(out), name=seq.name + "-composite",
        cycle_len=per_block, timing="finite",
    )


def apply_phase_error(seq, alpha_phi):
    """Shift the phases of the chained pi/2 pulses by the error alpha_phi.

    In every block the two pi/2 pulses that directly follow another pulse
    (the leading one and the one after the mid-block pi/2) acquire a phase
    pulled toward the preceding pulse's phase: the leading Y becomes
    Y cos(a) - X sin(a) (phase pi/2 + a) and the chained -X becomes
    -X cos(a) + Y sin(a) (phase pi - a).
    """
    if alpha_phi == 0.0:
        return seq
    if not seq.name.startswith("pulsepol") or seq.cycle_len != 10:
        raise ValueError("phase-error model requires the PulsePol block "
                         "structure")
    elements = list(seq.elements)
    for start in range(seq.prefix_len, len(elements) - 9, 10):
        lead, chained = elements[start], elements[start + 5]
        if not (isinstance(lead, Pulse) and isinstance(chained, Pulse)):
            raise ValueError("unexpected PulsePol block layout")
        elements[start] = replace(lead, phase=lead.phase + alpha_phi)
        elements[start + 5] = replace(chained, phase=chained.phase - alpha_phi)
    return replace(seq, elements=tuple(elements))
