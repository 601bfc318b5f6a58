"""Render pulsepol CSV outputs to image files.

Four figure kinds, one per CSV schema:

* ``heatmap``: sweep CSV (detuning_rad_s, rabi_error_frac, realization,
  seed, efficiency) -> mean-efficiency map, detuning in (2pi) MHz on x.
* ``trace``: one or more trace CSVs (time_s, observable, value) ->
  overlaid polarisation curves.
* ``buildup``: comparison CSV (protocol, detuning_rad_s, cycle,
  polarisation) -> buildup curves per protocol and detuning.
* ``scan``: long-format CSV with a label column -> y vs x per label
  (defaults fit the depol schema protocol/detuning_rad_s/retention).

Rendering is deterministic for fixed inputs: the Agg/SVG backends carry
no timestamps (SVG date metadata is stripped and the hash salt pinned),
so re-rendering reproduces the bytes exactly. Inputs are never modified.
"""

from dataclasses import dataclass, field

import matplotlib
import numpy as np
import pandas as pd

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "pulsepol-figures"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

TWO_PI_MHZ = 2.0 * np.pi * 1e6

KINDS = ("heatmap", "trace", "buildup", "scan")


class FigureError(ValueError):
    """Bad figure request: unknown kind, empty input, missing columns."""


@dataclass
class FigureSpec:
    """What to draw: input CSVs, the figure kind, and the output path."""

    inputs: list
    kind: str
    out: str
    title: str = ""
    x_column: str = ""
    y_column: str = ""
    label_column: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {', '.join(KINDS)}")
        if not self.inputs:
            raise FigureError("at least one input CSV is required")


def _load(path, required):
    try:
        frame = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise FigureError(f"{path}: empty CSV") from None
    if frame.empty:
        raise FigureError(f"{path}: no data rows")
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise FigureError(
            f"{path}: missing column(s) {', '.join(missing)} "
            f"(have {', '.join(frame.columns)})")
    return frame


def _save(fig, out):
    metadata = {"Date": None} if out.endswith(".svg") else None
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)


def _heatmap(spec):
    frame = _load(spec.inputs[0],
                  ["detuning_rad_s", "rabi_error_frac", "efficiency"])
    grid = (frame.groupby(["rabi_error_frac", "detuning_rad_s"])
            ["efficiency"].mean().unstack())
    fig, ax = plt.subplots(figsize=(7, 4.2), constrained_layout=True)
    mesh = ax.pcolormesh(grid.columns.to_numpy() / TWO_PI_MHZ,
                         grid.index.to_numpy(),
                         grid.to_numpy(), shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="mean transfer efficiency")
    ax.set_xlabel(r"detuning $\Delta$ [(2$\pi$) MHz]")
    ax.set_ylabel(r"Rabi error $\delta\Omega/\Omega_0$")
    ax.set_title(spec.title or "transfer robustness")
    _save(fig, spec.out)


def _trace(spec):
    fig, ax = plt.subplots(figsize=(7, 4.2), constrained_layout=True)
    for path in spec.inputs:
        frame = _load(path, ["time_s", "observable", "value"])
        name = str(path).rsplit("/", 1)[-1].removesuffix(".csv")
        for observable, sub in frame.groupby("observable"):
            if not str(observable).startswith("iz"):
                continue
            label = name if observable == "iz_0" else f"{name}:{observable}"
            ax.plot(sub["time_s"].to_numpy() * 1e6,
                    2 * sub["value"].to_numpy(), label=label)
    if not ax.lines:
        raise FigureError("trace input holds no nuclear observables")
    ax.set_xlabel(r"time [$\mu$s]")
    ax.set_ylabel(r"2$\langle I_z \rangle$")
    ax.set_title(spec.title or "polarisation transfer")
    ax.legend(fontsize=8)
    _save(fig, spec.out)


def _buildup(spec):
    frame = _load(spec.inputs[0],
                  ["protocol", "detuning_rad_s", "cycle", "polarisation"])
    fig, ax = plt.subplots(figsize=(7, 4.2), constrained_layout=True)
    for (protocol, delta), sub in frame.groupby(["protocol",
                                                 "detuning_rad_s"]):
        label = f"{protocol} @ {delta / TWO_PI_MHZ:+.0f} MHz"
        ax.plot(sub["cycle"].to_numpy(), sub["polarisation"].to_numpy(),
                marker="o", markersize=3, label=label)
    ax.set_xlabel("polarise-reset cycle")
    ax.set_ylabel(r"bath polarisation $\sum_i 2\langle I_z^i \rangle$")
    ax.set_title(spec.title or "polarisation buildup")
    ax.legend(fontsize=8)
    _save(fig, spec.out)


def _scan(spec):
    frame = _load(spec.inputs[0], [])
    x = spec.x_column or "detuning_rad_s"
    numeric = [c for c in frame.columns
               if c != x and pd.api.types.is_numeric_dtype(frame[c])]
    y = spec.y_column or (numeric[-1] if numeric else "")
    label = spec.label_column or (
        "protocol" if "protocol" in frame.columns else "")
    for column in filter(None, (x, y)):
        if column not in frame.columns:
            raise FigureError(f"{spec.inputs[0]}: missing column(s) {column}")
    if not y:
        raise FigureError(f"{spec.inputs[0]}: no numeric column to plot")
    in_mhz = x.endswith("_rad_s")
    fig, ax = plt.subplots(figsize=(7, 4.2), constrained_layout=True)
    groups = frame.groupby(label) if label else [("", frame)]
    for name, sub in groups:
        xs = sub[x].to_numpy() / (TWO_PI_MHZ if in_mhz else 1.0)
        ax.plot(xs, sub[y].to_numpy(), marker="o", markersize=3,
                label=str(name) if label else None)
    ax.set_xlabel(x.replace("_rad_s", r" [(2$\pi$) MHz]"))
    ax.set_ylabel(y)
    ax.set_title(spec.title or f"{y} scan")
    if label:
        ax.legend(fontsize=8)
    _save(fig, spec.out)


_RENDERERS = {"heatmap": _heatmap, "trace": _trace, "buildup": _buildup,
              "scan": _scan}


def render(spec):
    """Draw the requested figure; raises :class:`FigureError` on bad input."""
    _RENDERERS[spec.kind](spec)
    return spec.out
