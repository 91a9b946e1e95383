"""Render paper-style figures from becharvest CSV outputs.

The CSV schema is the only contract with the computing package: dispersion
files carry `x` plus one or more `f*` columns; sweep files carry the axis
columns followed by `p,c,x_re,x_im,concurrence,p_err,x_err,status`.
Rows with status != ok are masked, never silently dropped into zeros.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "harvest-plots"  # deterministic SVG ids

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLES = ("dispersion_lines", "heatmap", "a_sweep_lines")

OBSERVABLE_COLUMNS = ("p", "c", "x_re", "x_im", "concurrence",
                      "p_err", "x_err", "status")

AXIS_LABELS = {
    "omega_gap": r"$\Omega/M_*$",
    "separation": r"$M_* L/c_0$",
    "sigma": r"$\sigma M_*$",
    "A": r"$A$",
    "R": r"$R$",
}

CONCURRENCE_LABEL = r"concurrence  [$\rho_0\lambda^2/c_0^2$]"
MASKED_COLOR = "lightgrey"


class SchemaError(Exception):
    """Input file does not match the sweep/dispersion CSV schema."""


@dataclass
class PlotSpec:
    input_path: str
    style: str
    output_path: str
    title: str | None = None
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.style not in STYLES:
            raise SchemaError(
                f"unknown style {self.style!r}; choose from {STYLES}")


def load_table(path):
    """CSV -> (ordered column names, dict of column lists).

    Numeric cells become floats, empty cells become None, the status
    column stays textual.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            rows = list(reader)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path} is empty")
    header = rows[0]
    columns = {name: [] for name in header}
    for row in rows[1:]:
        if len(row) != len(header):
            raise SchemaError(f"{path}: ragged row {row}")
        for name, cell in zip(header, row):
            if name == "status":
                columns[name].append(cell)
            elif cell == "":
                columns[name].append(None)
            else:
                columns[name].append(float(cell))
    return header, columns


def _require(header, columns, names, path):
    for name in names:
        if name not in columns:
            raise SchemaError(f"{path}: missing column {name!r}")


def _axis_label(name, labels):
    return labels.get(name, AXIS_LABELS.get(name, name))


def sweep_axis_names(header):
    """Axis columns are everything before the observable block."""
    if "status" not in header:
        raise SchemaError("not a sweep file: no 'status' column")
    first_obs = min(header.index(c) for c in OBSERVABLE_COLUMNS
                    if c in header)
    names = header[:first_obs]
    if not names:
        raise SchemaError("sweep file has no axis columns")
    return names


def build_heatmap_grid(header, columns, path="<input>"):
    """Pivot a two-axis sweep into (xs, ys, masked concurrence grid)."""
    _require(header, columns, ("concurrence", "status"), path)
    names = sweep_axis_names(header)
    if len(names) != 2:
        raise SchemaError(
            f"{path}: heatmap needs exactly two axes, found {names}")
    xs = np.array(sorted(set(columns[names[0]])))
    ys = np.array(sorted(set(columns[names[1]])))
    grid = np.ma.masked_all((ys.size, xs.size))
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for x, y, conc, status in zip(columns[names[0]], columns[names[1]],
                                  columns["concurrence"],
                                  columns["status"]):
        if status == "ok":
            grid[yi[y], xi[x]] = conc
    return names, xs, ys, grid


def _figure_dispersion_lines(header, columns, spec):
    if "x" not in columns:
        raise SchemaError(f"{spec.input_path}: missing column 'x'")
    f_cols = [name for name in header
              if name == "f" or name.startswith("f_")]
    if not f_cols:
        raise SchemaError(f"{spec.input_path}: missing column 'f'")
    xs = np.array(columns["x"], dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.axhline(1.0, color="black", linewidth=0.9, linestyle="--",
               label="LI (f = 1)")
    for name in f_cols:
        label = "f" if name == "f" else name[2:]
        ax.plot(xs, np.array(columns[name], dtype=float), label=label)
    ax.set_xlabel(spec.labels.get("x", r"$c_0|\mathbf{k}|/M_*$"))
    ax.set_ylabel(spec.labels.get("y", r"$f$"))
    ax.legend(fontsize=8)
    return fig


def _figure_heatmap(header, columns, spec):
    names, xs, ys, grid = build_heatmap_grid(header, columns,
                                             spec.input_path)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad(MASKED_COLOR)
    mesh = ax.pcolormesh(xs, ys, grid, cmap=cmap, shading="nearest")
    fig.colorbar(mesh, ax=ax,
                 label=spec.labels.get("colorbar", CONCURRENCE_LABEL))
    ax.set_xlabel(_axis_label(names[0], spec.labels))
    ax.set_ylabel(_axis_label(names[1], spec.labels))
    return fig


def _figure_a_sweep_lines(header, columns, spec):
    _require(header, columns, ("concurrence", "status"), spec.input_path)
    names = sweep_axis_names(header)
    if "A" not in names:
        raise SchemaError(f"{spec.input_path}: missing column 'A'")
    series_names = [n for n in names if n != "A"]
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if series_names:
        key_name = series_names[0]
        keys = sorted(set(columns[key_name]))
        for key in keys:
            pts = [(a, c) for a, k, c, s in zip(
                columns["A"], columns[key_name], columns["concurrence"],
                columns["status"]) if k == key and s == "ok"]
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    label=f"{_axis_label(key_name, spec.labels)} = {key:g}")
        ax.legend(fontsize=8)
    else:
        pts = [(a, c) for a, c, s in zip(
            columns["A"], columns["concurrence"], columns["status"])
            if s == "ok"]
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts])
    ax.set_xlabel(_axis_label("A", spec.labels))
    ax.set_ylabel(spec.labels.get("y", CONCURRENCE_LABEL))
    return fig


_BUILDERS = {
    "dispersion_lines": _figure_dispersion_lines,
    "heatmap": _figure_heatmap,
    "a_sweep_lines": _figure_a_sweep_lines,
}


def build_figure(spec: PlotSpec):
    header, columns = load_table(spec.input_path)
    fig = _BUILDERS[spec.style](header, columns, spec)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> str:
    """Build the figure and write it; returns the output path.

    PNG output is byte-deterministic for a fixed matplotlib version; SVG
    output strips the creation date for the same reason.
    """
    fig = build_figure(spec)
    metadata = {"Date": None} if spec.output_path.endswith(".svg") else None
    fig.savefig(spec.output_path, dpi=150, metadata=metadata)
    plt.close(fig)
    return spec.output_path
