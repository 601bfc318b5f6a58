"""Robustness sweeps, protocol comparisons, and PROPI campaigns.

Work items (grid cell x realization) are independent; realization seeds
derive from the base seed and the realization index alone, so every grid
cell sees the same baths (paired comparisons across cells) and results
are bitwise independent of the thread count.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import lattice
from .engine import propi_run, transfer_efficiency
from .sequence import (apply_phase_error, build_ise, build_novel,
                       build_polxy, build_pulsepol, expand_composite)
from .spinsys import ErrorModel, NuclearSpin, SpinSystem
from .units import mhz


class ConfigError(ValueError):
    """Invalid sweep configuration; the message names the offending field."""


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep, comparison, or PROPI campaign needs.

    Frequencies are angular (rad/s); ``detuning_*`` and the Rabi-error grid
    describe the swept error model, the remaining fields the baseline
    system and sequence. Desk-scale defaults keep runs in the minutes.
    """

    detuning_min: float = -mhz(50.0)
    detuning_max: float = +mhz(50.0)
    detuning_steps: int = 41
    rabi_error_min: float = -0.10
    rabi_error_max: float = +0.10
    rabi_error_steps: int = 21
    realizations: int = 10
    base_seed: int = 2024
    larmor: float = mhz(2.0)
    rabi: float = mhz(50.0)
    order: int = 3
    brackets: int = 60
    nuclei: int = 5
    timing: str = "finite"
    variant: str = "standard"
    composite: bool = False
    resonance_shift: float = 0.0
    phase_error: float = 0.0
    cycles: int = 10
    # single-spin comparison bath (used when ``nuclei`` is 0)
    coupling: float = mhz(0.03)
    novel_lock_time: float = 0.0  # 0 -> matched to the full-transfer time
    ise_inverse_rate: float = 3e-6 / mhz(1.0)
    ise_ranges: tuple = (mhz(12.0), mhz(52.0))

    def validate(self):
        if self.detuning_steps < 1:
            raise ConfigError("detuning_steps must be >= 1")
        if self.rabi_error_steps < 1:
            raise ConfigError("rabi_error_steps must be >= 1")
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1")
        if self.detuning_max < self.detuning_min:
            raise ConfigError("detuning_max must be >= detuning_min")
        if self.rabi_error_max < self.rabi_error_min:
            raise ConfigError("rabi_error_max must be >= rabi_error_min")
        if not (-1 < self.rabi_error_min < 1 and -1 < self.rabi_error_max < 1):
            raise ConfigError("rabi_error grid must stay inside (-1, 1)")
        if self.larmor <= 0:
            raise ConfigError("larmor must be positive")
        if self.rabi <= 0:
            raise ConfigError("rabi must be positive")
        if self.order < 1 or self.order % 2 == 0:
            raise ConfigError("order must be odd and >= 1")
        if self.brackets < 1:
            raise ConfigError("brackets must be >= 1")
        if self.nuclei < 0:
            raise ConfigError("nuclei must be >= 0")
        if self.cycles < 1:
            raise ConfigError("cycles must be >= 1")
        if self.timing not in ("ideal", "finite"):
            raise ConfigError("timing must be 'ideal' or 'finite'")
        return self

    def detunings(self):
        return np.linspace(self.detuning_min, self.detuning_max,
                           self.detuning_steps)

    def rabi_errors(self):
        return np.linspace(self.rabi_error_min, self.rabi_error_max,
                           self.rabi_error_steps)


def realization_seed(base_seed, index):
    """Stable per-realization seed; shared by every grid cell."""
    return int(np.random.SeedSequence([int(base_seed), int(index)])
               .generate_state(1)[0])


def _sweep_sequence(cfg):
    seq = build_pulsepol(cfg.larmor, cfg.rabi, cfg.order, cfg.brackets,
                         timing=cfg.timing, variant=cfg.variant)
    if cfg.composite:
        seq = expand_composite(seq)
    if cfg.phase_error:
        seq = apply_phase_error(seq, cfg.phase_error)
    return seq


def _systems(cfg):
    out = []
    for r in range(cfg.realizations):
        seed = realization_seed(cfg.base_seed, r)
        if cfg.nuclei == 0:
            nuc = (NuclearSpin(cfg.larmor, cfg.coupling, 0.0),)
            out.append((seed, SpinSystem(nuc, 0.0, cfg.rabi)))
        else:
            real = lattice.sample_realization(seed, cfg.nuclei)
            out.append((seed, lattice.spin_system(real, cfg.larmor, cfg.rabi)))
    return out


@dataclass
class SweepResult:
    """Transfer efficiencies over the (detuning, Rabi-error) grid."""

    config: SweepConfig
    detunings: np.ndarray
    rabi_errors: np.ndarray
    seeds: list
    efficiency: np.ndarray  # (n_detuning, n_rabi, n_realizations)

    @property
    def mean_efficiency(self):
        return self.efficiency.mean(axis=2)

    def to_csv(self, path):
        """Rows: detuning_rad_s, rabi_error_frac, realization, seed, efficiency."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["detuning_rad_s", "rabi_error_frac",
                             "realization", "seed", "efficiency"])
            for i, d in enumerate(self.detunings):
                for j, r in enumerate(self.rabi_errors):
                    for k, seed in enumerate(self.seeds):
                        writer.writerow([repr(float(d)), repr(float(r)), k,
                                         seed, repr(float(self.efficiency[i, j, k]))])


def run_sweep(cfg, threads=1):
    """Transfer efficiency on the error grid, averaged over bath realizations.

    Deterministic for a fixed config: identical output for any ``threads``.
    """
    cfg.validate()
    seq = _sweep_sequence(cfg)
    systems = _systems(cfg)
    detunings = cfg.detunings()
    rabi_errors = cfg.rabi_errors()

    items = [
        (i, j, k)
        for i in range(len(detunings))
        for j in range(len(rabi_errors))
        for k in range(cfg.realizations)
    ]

    def work(item):
        i, j, k = item
        err = ErrorModel(detuning=float(detunings[i]),
                         rabi_error_frac=float(rabi_errors[j]),
                         resonance_shift=cfg.resonance_shift)
        return transfer_efficiency(systems[k][1], seq, err)

    eff = np.empty((len(detunings), len(rabi_errors), cfg.realizations))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(work, items))
    else:
        values = [work(it) for it in items]
    for (i, j, k), v in zip(items, values):
        eff[i, j, k] = v
    return SweepResult(cfg, detunings, rabi_errors,
                       [s for s, _ in systems], eff)


def _comparison_system(cfg):
    nuc = (NuclearSpin(cfg.larmor, cfg.coupling, 0.0),)
    return SpinSystem(nuc, 0.0, cfg.rabi)


def comparison_sequence(cfg, protocol):
    """Per-cycle sequence for a named protocol in a buildup comparison.

    All protocols get the same wall-clock time per cycle: the NOVEL lock
    time (defaulting to its full-transfer time 2 pi / A_x), with PulsePol
    running the nearest whole number of blocks and ISE running its own
    sweep duration (its rate is the point of the comparison).
    """
    lock = cfg.novel_lock_time or 2.0 * np.pi / cfg.coupling
    if protocol == "pulsepol":
        tau = cfg.order * np.pi / cfg.larmor
        reps = max(1, round(lock / tau))
        seq = build_pulsepol(cfg.larmor, cfg.rabi, cfg.order, reps,
                             timing=cfg.timing, variant=cfg.variant)
        if cfg.phase_error:
            seq = apply_phase_error(seq, cfg.phase_error)
        return seq
    if protocol == "novel":
        return build_novel(cfg.larmor, cfg.larmor, lock, pulse_rabi=cfg.rabi)
    if protocol.startswith("ise"):
        idx = int(protocol[3:] or 0)
        sweep = cfg.ise_ranges[idx]
        return build_ise(cfg.larmor, sweep, cfg.ise_inverse_rate)
    if protocol == "polxy":
        tau = cfg.order * np.pi / cfg.larmor
        reps = max(1, round(lock / (9 * tau)))
        return build_polxy(cfg.larmor, cfg.rabi, cfg.order, reps)
    raise ConfigError(f"unknown protocol {protocol!r}")


def run_comparison(protocols, deltas, cfg):
    """PROPI buildup curves per protocol per detuning.

    Returns rows (protocol, detuning_rad_s, cycle, polarisation) where
    polarisation is sum_i 2<Iz_i> after each reset-and-polarise cycle.
    """
    cfg.validate()
    sys = _comparison_system(cfg)
    rows = []
    for protocol in protocols:
        seq = comparison_sequence(cfg, protocol)
        shift = cfg.resonance_shift if protocol == "pulsepol" else 0.0
        for delta in deltas:
            err = ErrorModel(detuning=float(delta), resonance_shift=shift)
            curve = propi_run(sys, seq, err, cycles=cfg.cycles)
            for cycle, value in enumerate(curve):
                rows.append((protocol, float(delta), cycle, float(value)))
    return rows


def run_depolarisation(cfg, deltas, protocols=("pulsepol", "polxy")):
    """Fraction of aligned bath polarisation retained under each protocol.

    The bath starts fully polarised along the protocol's own pumping
    direction; a well-behaved sequence leaves it there (retention 1) and a
    misbehaving one destroys it at particular detunings.
    """
    cfg.validate()
    sys = _comparison_system(cfg)
    rows = []
    for protocol in protocols:
        seq = comparison_sequence(cfg, protocol)
        aligned = "up" if seq.pump_direction > 0 else "down"
        shift = cfg.resonance_shift if protocol == "pulsepol" else 0.0
        for delta in deltas:
            err = ErrorModel(detuning=float(delta), resonance_shift=shift)
            curve = propi_run(sys, seq, err, cycles=cfg.cycles,
                              nuclei=aligned)
            retention = curve[-1] / curve[0]
            rows.append((protocol, float(delta), float(retention)))
    return rows


def comparison_to_csv(rows, path):
    """Rows: protocol, detuning_rad_s, cycle, polarisation."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["protocol", "detuning_rad_s", "cycle",
                         "polarisation"])
        for protocol, delta, cycle, value in rows:
            writer.writerow([protocol, repr(delta), cycle, repr(value)])


def depolarisation_to_csv(rows, path):
    """Rows: protocol, detuning_rad_s, retention."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["protocol", "detuning_rad_s", "retention"])
        for protocol, delta, retention in rows:
            writer.writerow([protocol, repr(delta), repr(retention)])


_CONFIG_FIELD_TYPES = {f.name: f.type for f in fields(SweepConfig)}


def config_from_mapping(mapping, base=None):
    """Build a SweepConfig from string key/value pairs (CLI or config file)."""
    cfg = base or SweepConfig()
    updates = {}
    for key, raw in mapping.items():
        name = key.replace("-", "_")
        if name not in _CONFIG_FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(cfg, name)
        try:
            if isinstance(current, bool):
                value = str(raw).strip().lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                value = int(raw)
            elif isinstance(current, float):
                value = float(raw)
            elif isinstance(current, tuple):
                value = tuple(float(v) for v in str(raw).split(","))
            else:
                value = str(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        updates[name] = value
    return replace(cfg, **updates)


def load_config_file(path):
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(
                    f"{path}:{lineno}: expected key=value, got {stripped!r}")
            key, value = stripped.split("=", 1)
            mapping[key.strip()] = value.strip()
    return mapping
