"""Command-line interface.

Subcommands: simulate, sweep, compare, propi, depol, fourier, orientation,
seq parse / seq render. Flags mirror the SweepConfig fields (frequencies in
(2pi) MHz at this boundary); ``--config`` points at a flat key=value file,
with command-line flags taking precedence.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical
tolerance failure.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import avgham, seqdsl
from .engine import ToleranceError, polarisation_trace, propi_run
from .harness import (ConfigError, SweepConfig, comparison_sequence,
                      comparison_to_csv, config_from_mapping,
                      depolarisation_to_csv, load_config_file,
                      run_comparison, run_depolarisation, run_sweep,
                      _comparison_system)
from .spinsys import ErrorModel
from .units import mhz

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3

_MHZ_FIELDS = {"detuning_min", "detuning_max", "larmor", "rabi", "coupling"}


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--seed", type=int, dest="base_seed")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", help="output CSV path")
    for name in ("detuning-min", "detuning-max", "larmor", "rabi",
                 "coupling", "rabi-error-min", "rabi-error-max",
                 "resonance-shift", "phase-error", "novel-lock-time"):
        parser.add_argument(f"--{name}", type=float, default=None)
    for name in ("detuning-steps", "rabi-error-steps", "realizations",
                 "order", "brackets", "nuclei", "cycles"):
        parser.add_argument(f"--{name}", type=int, default=None)
    parser.add_argument("--timing", choices=("ideal", "finite"), default=None)
    parser.add_argument("--variant",
                        choices=("standard", "yx", "combined"), default=None)
    parser.add_argument("--composite", action="store_true", default=None)


def _parse_cfg(args):
    """SweepConfig from config file plus CLI flags (flags win).

    Frequency-valued keys (detuning bounds, larmor, rabi, coupling) are
    given in (2pi) MHz at this boundary, in the file and on the command
    line alike, and converted to rad/s here.
    """
    mapping = {}
    if args.config:
        mapping.update(load_config_file(args.config))
    skip = {"config", "threads", "out", "command", "func", "deltas",
            "protocols", "kind", "file", "window_deg", "delta_max", "zfs",
            "max_n", "duration", "protocol", "delta", "rabi_error", "mode",
            "action"}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        mapping[key] = value
    cfg = config_from_mapping({k: str(v) for k, v in mapping.items()})
    scaled = {}
    present = {k.replace("-", "_") for k in mapping}
    for name in _MHZ_FIELDS & present:
        scaled[name] = mhz(getattr(cfg, name))
    if scaled:
        cfg = replace(cfg, **scaled)
    return cfg.validate()


def _cmd_sweep(args):
    cfg = _parse_cfg(args)
    result = run_sweep(cfg, threads=args.threads)
    out = args.out or "sweep.csv"
    result.to_csv(out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_simulate(args):
    cfg = _parse_cfg(args)
    seq = comparison_sequence(cfg, args.protocol)
    sys_ = _comparison_system(cfg)
    err = ErrorModel(detuning=mhz(args.delta),
                     rabi_error_frac=args.rabi_error,
                     resonance_shift=cfg.resonance_shift)
    trace = polarisation_trace(sys_, seq, err, mode=args.mode,
                               nuclei="down", sample_dt=2e-7)
    out = args.out or "trace.csv"
    trace.to_csv(out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_compare(args):
    cfg = _parse_cfg(args)
    deltas = [mhz(v) for v in args.deltas]
    rows = run_comparison(args.protocols, deltas, cfg)
    out = args.out or "comparison.csv"
    comparison_to_csv(rows, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_propi(args):
    cfg = _parse_cfg(args)
    seq = comparison_sequence(cfg, args.protocol)
    err = ErrorModel(detuning=mhz(args.delta))
    curve = propi_run(_comparison_system(cfg), seq, err, cycles=cfg.cycles)
    rows = [(args.protocol, mhz(args.delta), k, float(v))
            for k, v in enumerate(curve)]
    out = args.out or "propi.csv"
    comparison_to_csv(rows, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_depol(args):
    cfg = _parse_cfg(args)
    deltas = [mhz(v) for v in args.deltas]
    rows = run_depolarisation(cfg, deltas, protocols=args.protocols)
    out = args.out or "depol.csv"
    depolarisation_to_csv(rows, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_fourier(args):
    lines = ["n,a_n,b_n,alpha"]
    for n in range(1, args.max_n + 1):
        c = avgham.fourier_coeffs(n)
        a = avgham.alpha(n) if n % 2 else 0.0
        lines.append(f"{n},{c.a!r},{c.b!r},{a!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_orientation(args):
    zfs = mhz(args.zfs)
    if args.window_deg is not None:
        delta_max = avgham.angular_window_tolerance(
            zfs, np.deg2rad(args.window_deg))
    elif args.delta_max is not None:
        delta_max = mhz(args.delta_max)
    else:
        raise ConfigError("give either --window-deg or --delta-max")
    frac = avgham.orientation_fraction(mhz(args.rabi or 50.0), zfs, delta_max)
    print(f"addressable orientation fraction: {frac:.6f}")
    return EXIT_OK


def _cmd_seq(args):
    if args.action == "parse":
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        ast = seqdsl.parse(text)
        print(seqdsl.render(ast))
        return EXIT_OK
    cfg = _parse_cfg(args)
    seq = comparison_sequence(cfg, args.protocol)
    print(seqdsl.sequence_to_text(seq))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pulsepol",
        description="Pulsed DNP simulator: PulsePol, NOVEL, ISE and friends",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="single polarisation trace -> CSV")
    _add_config_flags(p)
    p.add_argument("--protocol", default="pulsepol")
    p.add_argument("--delta", type=float, default=0.0,
                   help="detuning in (2pi) MHz")
    p.add_argument("--rabi-error", type=float, default=0.0)
    p.add_argument("--mode", choices=("finite", "delta"), default="finite")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="(detuning x Rabi error) efficiency grid")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("compare", help="PROPI buildup curves per protocol")
    _add_config_flags(p)
    p.add_argument("--protocols", nargs="+",
                   default=["pulsepol", "novel", "ise0", "ise1"])
    p.add_argument("--deltas", type=float, nargs="+", default=[0.0, 20.0],
                   help="detunings in (2pi) MHz")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("propi", help="PROPI buildup for one protocol")
    _add_config_flags(p)
    p.add_argument("--protocol", default="pulsepol")
    p.add_argument("--delta", type=float, default=0.0)
    p.set_defaults(func=_cmd_propi)

    p = sub.add_parser("depol", help="retained polarisation across detunings")
    _add_config_flags(p)
    p.add_argument("--protocols", nargs="+", default=["pulsepol", "polxy"])
    p.add_argument("--deltas", type=float, nargs="+",
                   default=[0.0, 10.0, 25.0, 40.0, 50.0])
    p.set_defaults(func=_cmd_depol)

    p = sub.add_parser("fourier", help="modulation Fourier coefficients")
    p.add_argument("--max-n", type=int, default=15)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fourier)

    p = sub.add_parser("orientation",
                       help="addressable NV orientation fraction")
    p.add_argument("--zfs", type=float, default=2870.0,
                   help="zero-field splitting in (2pi) MHz")
    p.add_argument("--rabi", type=float, default=50.0)
    p.add_argument("--window-deg", type=float, default=None)
    p.add_argument("--delta-max", type=float, default=None,
                   help="detuning tolerance in (2pi) MHz")
    p.set_defaults(func=_cmd_orientation)

    p = sub.add_parser("seq", help="parse or render sequence text")
    seq_sub = p.add_subparsers(dest="action", required=True)
    pp = seq_sub.add_parser("parse", help="validate and echo canonical text")
    pp.add_argument("file")
    pp.set_defaults(func=_cmd_seq, action="parse")
    pr = seq_sub.add_parser("render", help="print a builder's sequence text")
    _add_config_flags(pr)
    pr.add_argument("--protocol", default="pulsepol")
    pr.set_defaults(func=_cmd_seq, action="render")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, seqdsl.SeqSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceError as exc:
        print(f"numerical tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
