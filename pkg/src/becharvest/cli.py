"""Command-line entry point.

Subcommands: dispersion, stability, harvest, sweep, validate.  A JSON config
file (--config) supplies any of the flag values; explicit flags win.  Exit
codes: 0 success, 1 computation error, 2 validation/config/usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

from .dispersion import DispersionKind, analyze_spectrum, critical_A
from .errors import (ConfigError, HarvestError, InvalidParams, NoInstability,
                     StabilityViolation)
from .harvesting import DetectorPair, evaluate_pair, validate_oracles
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .sweep import SweepAxis, run_sweep
from .units import CondensateParams, DimensionlessModel, nondimensionalize

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_CONFIG = 2

_PHYSICAL_KEYS = ("m", "omega_z", "g_c", "g_d", "rho0")
_KINDS = {k.value: k for k in DispersionKind}


@dataclass
class RunConfig:
    command: str
    kind: DispersionKind = DispersionKind.LORENTZ_INVARIANT
    model: DimensionlessModel | None = None
    pair: DetectorPair | None = None
    axes: list[SweepAxis] = field(default_factory=list)
    spec: QuadratureSpec = DEFAULT_SPEC
    out: str | None = None
    fmt: str = "json"
    workers: int | None = None
    x_max: float = 10.0
    n_samples: int = 512
    series: list[dict] | None = None
    stability_r: float | None = None
    inputs: dict = field(default_factory=dict)


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file and rename; an interrupted run never leaves a
    partial file at the target path."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".becharvest-",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becharvest",
        description="Entanglement harvesting observables for detector pairs "
                    "in a quasi-2D dipolar BEC")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, pair_flags=True, axes_flag=False):
        p.add_argument("--config", help="JSON config file; explicit flags "
                                        "override its values")
        p.add_argument("--R", type=float, default=None,
                       help="dimensionless interaction ratio in "
                            "[0, sqrt(pi/2)]")
        p.add_argument("--A", type=float, default=None,
                       help="dimensionless effective chemical potential")
        p.add_argument("--m", type=float, default=None, help="atomic mass")
        p.add_argument("--omega-z", type=float, default=None,
                       help="transverse trap frequency")
        p.add_argument("--g-c", type=float, default=None,
                       help="contact coupling")
        p.add_argument("--g-d", type=float, default=None,
                       help="dipolar coupling")
        p.add_argument("--rho0", type=float, default=None,
                       help="2D condensate density")
        p.add_argument("--kind", choices=sorted(_KINDS), default=None,
                       help="dispersion kind")
        p.add_argument("--rel-tol", type=float, default=None,
                       help="quadrature relative tolerance")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"),
                       default=None, help="output format")
        if pair_flags:
            p.add_argument("--omega-gap", type=float, default=None,
                           help="detector gap Omega/M*")
            p.add_argument("--sigma", type=float, default=None,
                           help="switching width sigma*M*")
            p.add_argument("--separation", type=float, default=None,
                           help="detector separation M*L/c0")
        if axes_flag:
            p.add_argument("--axis", action="append", default=None,
                           help="sweep axis name:min:max:count[:log]; "
                                "repeatable")
            p.add_argument("--workers", type=int, default=None,
                           help="parallel worker count (beats "
                                "HARVEST_WORKERS)")

    p_disp = sub.add_parser("dispersion",
                            help="sample f(x) and omega(x), report roton "
                                 "and stability")
    add_common(p_disp, pair_flags=False)
    p_disp.add_argument("--x-max", type=float, default=None,
                        help="scan range in x = c0 k/M*")
    p_disp.add_argument("--n", type=int, default=None,
                        help="number of grid samples")

    p_stab = sub.add_parser("stability",
                            help="critical A at which the spectrum "
                                 "destabilizes")
    p_stab.add_argument("--config", help="JSON config file")
    p_stab.add_argument("--R", type=float, default=None, required=False)
    p_stab.add_argument("--out", default=None)
    p_stab.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=None)

    p_harv = sub.add_parser("harvest",
                            help="single-point observables P, C, X and "
                                 "concurrence")
    add_common(p_harv)

    p_sweep = sub.add_parser("sweep", help="grid sweep of the observables")
    add_common(p_sweep, axes_flag=True)

    p_val = sub.add_parser("validate",
                           help="closed forms vs time-domain oracles at "
                                "preset points")
    p_val.add_argument("--config", help="JSON config file")
    p_val.add_argument("--out", default=None)
    p_val.add_argument("--format", dest="fmt", choices=("csv", "json"),
                       default=None)

    return parser


def _load_config_file(path):
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def _merged(args, file_cfg, key, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in file_cfg:
        return file_cfg[key]
    return default


def _parse_axis_entry(entry):
    if isinstance(entry, str):
        return SweepAxis.parse(entry)
    if isinstance(entry, dict):
        name = entry.get("name")
        if name is None:
            raise ConfigError(f"axis object {entry} lacks 'name'")
        if "values" in entry:
            return SweepAxis.explicit(name, entry["values"])
        try:
            lo, hi = float(entry["min"]), float(entry["max"])
            count = int(entry["count"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"axis object {entry}: {exc}") from None
        if entry.get("spacing", "linear") == "log":
            return SweepAxis.logspace(name, lo, hi, count)
        return SweepAxis.linear(name, lo, hi, count)
    raise ConfigError(f"axis entry {entry!r} must be a string or object")


def _build_model(args, file_cfg):
    r = _merged(args, file_cfg, "R")
    a = _merged(args, file_cfg, "A")
    physical = {k: _merged(args, file_cfg, k) for k in _PHYSICAL_KEYS}
    has_physical = any(v is not None for v in physical.values())
    has_dimensionless = r is not None or a is not None
    if has_physical and has_dimensionless:
        raise ConfigError("physical {m, omega_z, g_c, g_d, rho0} and "
                          "dimensionless {R, A} model forms are mutually "
                          "exclusive")
    if has_physical:
        missing = [k for k, v in physical.items() if v is None]
        if missing:
            raise ConfigError(f"physical model form lacks {missing}")
        params = CondensateParams(m=physical["m"],
                                  omega_z=physical["omega_z"],
                                  g_c=physical["g_c"], g_d=physical["g_d"],
                                  rho_0=physical["rho0"])
        return nondimensionalize(params), {"physical": physical}
    if r is None or a is None:
        raise ConfigError("model requires --R and --A (or the physical "
                          "field set)")
    return DimensionlessModel(R=float(r), A=float(a)), {"R": r, "A": a}


def _build_spec(args, file_cfg) -> QuadratureSpec:
    rel = _merged(args, file_cfg, "rel_tol")
    if rel is None:
        return DEFAULT_SPEC
    return QuadratureSpec(rel_tol=float(rel))


def parse_args(argv=None) -> RunConfig:
    parser = _build_parser()
    args = parser.parse_args(argv)
    file_cfg = _load_config_file(args.config) if args.config else {}
    if "command" in file_cfg and file_cfg["command"] != args.command:
        raise ConfigError(
            f"config file is for command {file_cfg['command']!r}, "
            f"invoked as {args.command!r}")

    cfg = RunConfig(command=args.command)
    cfg.out = _merged(args, file_cfg, "out")
    default_fmt = "csv" if args.command == "sweep" else "json"
    cfg.fmt = _merged(args, file_cfg, "fmt", file_cfg.get("format",
                                                          default_fmt))

    if args.command == "validate":
        return cfg
    if args.command == "stability":
        r = _merged(args, file_cfg, "R")
        if r is None:
            raise ConfigError("stability requires --R")
        cfg.stability_r = float(r)
        return cfg

    kind_name = _merged(args, file_cfg, "kind")
    if kind_name is None:
        raise ConfigError("--kind is required (li, contact or dipolar)")
    if kind_name not in _KINDS:
        raise ConfigError(f"unknown dispersion kind {kind_name!r}")
    cfg.kind = _KINDS[kind_name]
    cfg.model, model_inputs = _build_model(args, file_cfg)
    cfg.spec = _build_spec(args, file_cfg)
    cfg.inputs = {"kind": kind_name, **model_inputs}

    if args.command == "dispersion":
        cfg.x_max = float(_merged(args, file_cfg, "x_max", 10.0))
        cfg.n_samples = int(_merged(args, file_cfg, "n", 512))
        series = file_cfg.get("series")
        if series is not None:
            if cfg.fmt != "csv":
                raise ConfigError("dispersion series output requires csv")
            cfg.series = list(series)
        return cfg

    gap = _merged(args, file_cfg, "omega_gap")
    sigma = _merged(args, file_cfg, "sigma")
    sep = _merged(args, file_cfg, "separation")
    if args.command == "harvest" and None in (gap, sigma, sep):
        raise ConfigError("harvest requires --omega-gap, --sigma and "
                          "--separation")
    cfg.pair = DetectorPair(omega_gap=float(gap if gap is not None else 0.0),
                            sigma=float(sigma if sigma is not None else 1.0),
                            separation=float(sep if sep is not None else 0.0))
    cfg.inputs.update({"omega_gap": cfg.pair.omega_gap,
                       "sigma": cfg.pair.sigma,
                       "separation": cfg.pair.separation})

    if args.command == "sweep":
        axis_entries = args.axis if args.axis is not None \
            else file_cfg.get("axes")
        if not axis_entries:
            raise ConfigError("sweep requires at least one --axis")
        cfg.axes = [_parse_axis_entry(e) for e in axis_entries]
        cfg.workers = _merged(args, file_cfg, "workers")
        if cfg.workers is not None:
            cfg.workers = int(cfg.workers)
    return cfg


def _emit(cfg: RunConfig, text: str, summary: str) -> None:
    if cfg.out:
        write_atomic(cfg.out, text)
        print(f"{summary} -> {cfg.out}")
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def _run_dispersion(cfg: RunConfig) -> int:
    if cfg.series:
        import numpy as np
        xs = None
        columns = []
        labels = []
        for entry in cfg.series:
            kind = _KINDS[entry.get("kind", cfg.kind.value)]
            model = DimensionlessModel(R=float(entry.get("R", cfg.model.R)),
                                       A=float(entry.get("A", cfg.model.A)))
            rep = analyze_spectrum(model, kind, cfg.x_max, cfg.n_samples)
            xs = rep.x
            labels.append(entry.get("label", f"{kind.value}_A{model.A:g}"))
            columns.append(rep.f)
        lines = ["x," + ",".join(f"f_{lab}" for lab in labels)]
        for i in range(xs.size):
            lines.append(",".join([f"{xs[i]:.17g}"] +
                                  [f"{col[i]:.17g}" for col in columns]))
        _emit(cfg, "\n".join(lines) + "\n",
              f"dispersion series: {len(labels)} curves, "
              f"{xs.size} samples each")
        return EXIT_OK
    rep = analyze_spectrum(cfg.model, cfg.kind, cfg.x_max, cfg.n_samples)
    text = rep.csv_text() if cfg.fmt == "csv" else rep.json_text()
    roton = "none" if rep.roton is None else f"x={rep.roton[0]:.4f}"
    _emit(cfg, text, f"dispersion: {rep.x.size} samples, roton {roton}, "
                     f"min f^2 = {rep.min_f2:.4g}")
    return EXIT_OK


def _run_stability(cfg: RunConfig) -> int:
    try:
        a_c = critical_A(cfg.stability_r)
    except NoInstability as exc:
        payload = {"R": cfg.stability_r, "A_c": None,
                   "instability": False, "detail": str(exc)}
        _emit(cfg, json.dumps(payload, indent=2) + "\n",
              f"no instability for R = {cfg.stability_r}")
        return EXIT_OK
    payload = {"R": cfg.stability_r, "A_c": a_c, "instability": True}
    _emit(cfg, json.dumps(payload, indent=2) + "\n",
          f"A_c(R={cfg.stability_r}) = {a_c:.5f}")
    return EXIT_OK


def _run_harvest(cfg: RunConfig) -> int:
    vals = evaluate_pair(cfg.model, cfg.kind, cfg.pair, cfg.spec)
    payload = {
        "inputs": cfg.inputs,
        "p": vals.p, "c": vals.c,
        "x_re": vals.x.real, "x_im": vals.x.imag,
        "concurrence": vals.concurrence,
        "est_errors": {"p": vals.p_err, "c": vals.c_err, "x": vals.x_err},
        "units": "lambda^2 rho_0 / c_0^2",
    }
    _emit(cfg, json.dumps(payload, indent=2) + "\n",
          f"P={vals.p:.6g} |X|={abs(vals.x):.6g} "
          f"concurrence={vals.concurrence:.6g}")
    return EXIT_OK


def _run_sweep(cfg: RunConfig) -> int:
    result = run_sweep(cfg.model, cfg.kind, cfg.pair, cfg.axes,
                       spec=cfg.spec, workers=cfg.workers)
    counts = {}
    for row in result.rows:
        counts[row.status] = counts.get(row.status, 0) + 1
    text = result.csv_text() if cfg.fmt == "csv" else result.json_text()
    _emit(cfg, text,
          f"sweep: {len(result.rows)} rows {counts}, "
          f"{result.metadata['wall_time_s']:.1f} s, "
          f"{result.metadata['workers']} workers")
    return EXIT_OK


def _run_validate(cfg: RunConfig) -> int:
    checks = validate_oracles()
    for check in checks:
        state = "ok" if check["ok"] else "FAIL"
        print(f"  {check['observable']}/{check['kind']}: "
              f"rel_err={check['rel_err']:.3e} tol={check['tol']:g} "
              f"[{state}]")
    n_ok = sum(1 for c in checks if c["ok"])
    if cfg.out:
        write_atomic(cfg.out, json.dumps(checks, indent=2) + "\n")
    print(f"validate: {n_ok}/{len(checks)} oracle checks passed")
    return EXIT_OK if n_ok == len(checks) else EXIT_COMPUTATION


def run(cfg: RunConfig) -> int:
    handlers = {
        "dispersion": _run_dispersion,
        "stability": _run_stability,
        "harvest": _run_harvest,
        "sweep": _run_sweep,
        "validate": _run_validate,
    }
    return handlers[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ConfigError, InvalidParams, StabilityViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(cfg)
    except (ConfigError, InvalidParams, StabilityViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HarvestError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
