"""Parameter-grid evaluation of the harvesting observables.

Grids are cartesian products of named axes, evaluated row-major in axis
declaration order.  Every point is evaluated independently: stability
failures become per-row statuses instead of aborting the sweep, and the
result is byte-identical for any worker count.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from . import __version__
from .dispersion import DispersionKind
from .errors import (ConfigError, EmptyResult, HarvestError, InvalidParams,
                     QuadratureError, StabilityViolation, UnstableSpectrum)
from .harvesting import DetectorPair, evaluate_pair
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .units import R_MAX, DimensionlessModel

AXIS_NAMES = ("omega_gap", "separation", "sigma", "A", "R")

STATUS_OK = "ok"
STATUS_UNSTABLE = "unstable"
STATUS_QUADRATURE_FAILED = "quadrature_failed"

WORKERS_ENV_VAR = "HARVEST_WORKERS"


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: a name and an explicit value tuple."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(
                f"axis name {self.name!r} not in {AXIS_NAMES}")
        if len(self.values) < 1:
            raise ConfigError(f"axis {self.name!r} needs at least one value")
        if not all(math.isfinite(v) for v in self.values):
            raise ConfigError(f"axis {self.name!r} has non-finite values")

    @staticmethod
    def linear(name, lo, hi, count):
        if count < 1:
            raise ConfigError("axis count must be >= 1")
        if count > 1 and not lo < hi:
            raise ConfigError("range axes need min < max")
        if count == 1:
            return SweepAxis(name, (float(lo),))
        step = (hi - lo) / (count - 1)
        return SweepAxis(name, tuple(lo + i * step for i in range(count)))

    @staticmethod
    def logspace(name, lo, hi, count):
        if lo <= 0.0:
            raise ConfigError("log-spaced axes need min > 0")
        if count < 1:
            raise ConfigError("axis count must be >= 1")
        if count > 1 and not lo < hi:
            raise ConfigError("range axes need min < max")
        if count == 1:
            return SweepAxis(name, (float(lo),))
        la, lb = math.log(lo), math.log(hi)
        step = (lb - la) / (count - 1)
        return SweepAxis(
            name, tuple(math.exp(la + i * step) for i in range(count)))

    @staticmethod
    def explicit(name, values):
        return SweepAxis(name, tuple(float(v) for v in values))

    @staticmethod
    def parse(text):
        """Parse the CLI form name:min:max:count[:log]."""
        parts = str(text).split(":")
        if len(parts) not in (4, 5):
            raise ConfigError(
                f"axis spec {text!r} is not name:min:max:count[:log]")
        name = parts[0]
        try:
            lo, hi = float(parts[1]), float(parts[2])
            count = int(parts[3])
        except ValueError as exc:
            raise ConfigError(f"axis spec {text!r}: {exc}") from None
        if len(parts) == 5:
            if parts[4] != "log":
                raise ConfigError(
                    f"axis spec {text!r}: spacing must be 'log'")
            return SweepAxis.logspace(name, lo, hi, count)
        return SweepAxis.linear(name, lo, hi, count)


@dataclass(frozen=True)
class SweepRow:
    coords: tuple[float, ...]
    status: str
    p: float | None = None
    c: float | None = None
    x_re: float | None = None
    x_im: float | None = None
    concurrence: float | None = None
    p_err: float | None = None
    x_err: float | None = None


@dataclass
class SweepResult:
    axes: list[SweepAxis]
    rows: list[SweepRow]
    metadata: dict

    def csv_text(self) -> str:
        names = [ax.name for ax in self.axes]
        out = [",".join(names +
                        ["p", "c", "x_re", "x_im", "concurrence",
                         "p_err", "x_err", "status"])]

        def fmt(v):
            return "" if v is None else f"{v:.17g}"

        for row in self.rows:
            cells = [f"{v:.17g}" for v in row.coords]
            cells += [fmt(row.p), fmt(row.c), fmt(row.x_re), fmt(row.x_im),
                      fmt(row.concurrence), fmt(row.p_err), fmt(row.x_err),
                      row.status]
            out.append(",".join(cells))
        return "\n".join(out) + "\n"

    def json_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "axes": [{"name": ax.name, "values": list(ax.values)}
                     for ax in self.axes],
            "rows": [{
                "coords": list(r.coords), "status": r.status,
                "p": r.p, "c": r.c, "x_re": r.x_re, "x_im": r.x_im,
                "concurrence": r.concurrence,
                "p_err": r.p_err, "x_err": r.x_err,
            } for r in self.rows],
        }

    def json_text(self) -> str:
        return json.dumps(self.json_dict(), indent=2) + "\n"

    def ok_rows(self):
        return [r for r in self.rows if r.status == STATUS_OK]


@dataclass(frozen=True)
class OptimumReport:
    coords: dict
    concurrence: float
    on_boundary: bool


def resolve_workers(explicit=None) -> int:
    """Worker count: CLI flag beats HARVEST_WORKERS beats min(8, cpus)."""
    if explicit is not None:
        if explicit < 1:
            raise ConfigError("worker count must be >= 1")
        return int(explicit)
    env = os.environ.get(WORKERS_ENV_VAR)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(
                f"{WORKERS_ENV_VAR}={env!r} is not an integer") from None
        if value < 1:
            raise ConfigError(f"{WORKERS_ENV_VAR} must be >= 1")
        return value
    return min(8, os.cpu_count() or 1)


def _validate_axes(axes, kind):
    if not axes:
        raise ConfigError("at least one axis is required")
    names = [ax.name for ax in axes]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate axis names in {names}")
    for ax in axes:
        if ax.name in ("A", "R") and kind != DispersionKind.DIPOLAR:
            raise ConfigError(
                f"axis {ax.name!r} requires the dipolar dispersion kind")
        lo = min(ax.values)
        if ax.name == "sigma" and lo <= 0.0:
            raise ConfigError("sigma axis values must be positive")
        if ax.name in ("omega_gap", "separation", "A") and lo < 0.0:
            raise ConfigError(f"{ax.name} axis values must be nonnegative")
        if ax.name == "R" and (lo < 0.0 or max(ax.values) > R_MAX * (1 + 1e-12)):
            raise ConfigError("R axis values must lie in [0, sqrt(pi/2)]")


def _apply_coords(model, base_pair, names, coords):
    pair_kw = {}
    model_kw = {}
    for name, value in zip(names, coords):
        if name in ("omega_gap", "separation", "sigma"):
            pair_kw[name] = value
        elif name == "A":
            model_kw["A"] = value
        else:
            model_kw["R"] = value
    if model_kw:
        model = replace(model, **model_kw)
    if pair_kw:
        base_pair = replace(base_pair, **pair_kw)
    return model, base_pair


def _evaluate_block(model, kind, base_pair, names, block, spec):
    rows = []
    for coords in block:
        try:
            m, pair = _apply_coords(model, base_pair, names, coords)
            vals = evaluate_pair(m, kind, pair, spec)
        except (StabilityViolation, UnstableSpectrum, InvalidParams):
            rows.append(SweepRow(coords=coords, status=STATUS_UNSTABLE))
            continue
        except (QuadratureError, HarvestError):
            rows.append(SweepRow(coords=coords,
                                 status=STATUS_QUADRATURE_FAILED))
            continue
        rows.append(SweepRow(
            coords=coords, status=STATUS_OK, p=vals.p, c=vals.c,
            x_re=vals.x.real, x_im=vals.x.imag,
            concurrence=vals.concurrence,
            p_err=vals.p_err, x_err=vals.x_err))
    return rows


def run_sweep(model: DimensionlessModel, kind: DispersionKind,
              base_pair: DetectorPair, axes,
              spec: QuadratureSpec = DEFAULT_SPEC,
              workers: int | None = None) -> SweepResult:
    """Evaluate observables over the cartesian grid of `axes`, row-major."""
    axes = list(axes)
    _validate_axes(axes, kind)
    names = [ax.name for ax in axes]
    coords_list = list(itertools.product(*(ax.values for ax in axes)))
    n_workers = resolve_workers(workers)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()

    if n_workers <= 1 or len(coords_list) < 64:
        rows = _evaluate_block(model, kind, base_pair, names,
                               coords_list, spec)
    else:
        block_size = max(8, -(-len(coords_list) // (n_workers * 8)))
        blocks = [coords_list[i:i + block_size]
                  for i in range(0, len(coords_list), block_size)]
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(_evaluate_block, model, kind, base_pair,
                                   names, blk, spec) for blk in blocks]
            rows = []
            for fut in futures:  # submission order keeps rows row-major
                rows.extend(fut.result())

    wall = time.perf_counter() - t0
    metadata = {
        "model": {"R": model.R, "A": model.A},
        "kind": kind.value,
        "quadrature": {
            "rel_tol": spec.rel_tol, "abs_tol": spec.abs_tol,
            "max_subdivisions": spec.max_subdivisions,
            "tail_lobes": spec.tail_lobes,
            "envelope_cutoff": spec.envelope_cutoff,
        },
        "base_pair": {
            "omega_gap": base_pair.omega_gap, "sigma": base_pair.sigma,
            "separation": base_pair.separation,
        },
        "version": __version__,
        "timestamp": started.isoformat(),
        "wall_time_s": wall,
        "workers": n_workers,
    }
    return SweepResult(axes=axes, rows=rows, metadata=metadata)


def find_optimum(result: SweepResult) -> OptimumReport:
    """Exact concurrence argmax over ok rows; first row wins ties."""
    best = None
    for row in result.rows:
        if row.status != STATUS_OK:
            continue
        if best is None or row.concurrence > best.concurrence:
            best = row
    if best is None:
        raise EmptyResult("no ok rows in sweep result")
    on_boundary = any(
        value in (min(ax.values), max(ax.values))
        for ax, value in zip(result.axes, best.coords))
    coords = {ax.name: value
              for ax, value in zip(result.axes, best.coords)}
    return OptimumReport(coords=coords, concurrence=best.concurrence,
                         on_boundary=on_boundary)
