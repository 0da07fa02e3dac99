"""Command-line scenario runner.

Scenarios are JSON files::

    {
      "kernel": {"kind": "rational"}            # or {"kind": "trigonometric", "L": 6.28}
      "source": {"type": "iterative", "poles": [[-3, 1], [3, 1]],
                 "axes": [[...], [...]], "vacuum_direction": [0, 0, 1]},
      "evolve": {"mode": "first", "t_span": [-20, 20], "sample_count": 101},
      "outputs": {"grid": {"x_range": [-30, 30], "n": 512}, "sample_every": 10}
    }

Other sources: ``{"type": "traveling_wave", "poles": ..., "theta": ..., "chirality": 1}``,
``{"type": "catalog", "id": "two_soliton"}``, ``{"type": "random", "N": 3}`` and
``{"type": "explicit", "data": {...}}``.  Complex numbers are ``[re, im]``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure (a
``report.json`` describing the failure is always written).
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .constraints import constraint_residuals
from .dynamics import EvolveOptions, evolve
from .errors import ConfigError, HWMError
from .field import energy_density, eval_m, total_energy
from .initial import (IterationOptions, SolitonSpec, convergence_statistics, exact_catalog,
                      random_scenario, solve_iterative, traveling_wave)
from .oracle import GridField, compare_fields, evolve_pde, grid_points

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAILURE = 3


@dataclass
class Scenario:
    kernel: object
    source: dict
    evolve: EvolveOptions
    grid: dict
    sample_every: int = 1
    seed: int = 0
    tol: float = 1e-10
    oracle: dict = field(default_factory=dict)


def load_config(path):
    """Read a JSON config; syntax errors become :class:`ConfigError` with position."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return cfg


def _get(d, key, where, default=..., types=None):
    if key not in d:
        if default is ...:
            raise ConfigError(f"{where}.{key}: required field missing")
        return default
    v = d[key]
    if types is not None and not isinstance(v, types):
        raise ConfigError(f"{where}.{key}: expected {getattr(types, '__name__', types)}")
    return v


def _complex_list(v, where):
    try:
        a = io.decode_complex(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: expected a list of [re, im] pairs") from exc
    return np.atleast_1d(a).reshape(-1)


def _real_array(v, where, shape):
    try:
        return np.asarray(v, dtype=float).reshape(shape)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: expected real numbers of shape {shape}") from exc


def parse_scenario(cfg, seed=None, mode=None, tol=None, grid=None):
    """Validate a config dict and apply command-line overrides."""
    kd = _get(cfg, "kernel", "config", {"kind": "rational"}, dict)
    try:
        kernel = io.kernel_from_dict(kd)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"config.kernel: {exc}") from exc
    source = _get(cfg, "source", "config", types=dict)
    if _get(source, "type", "config.source", types=str) not in (
            "iterative", "traveling_wave", "catalog", "random", "explicit"):
        raise ConfigError(f"config.source.type: unknown source {source['type']!r}")

    ev = dict(_get(cfg, "evolve", "config", {}, dict))
    if mode is not None:
        ev["mode"] = mode
    if tol is not None:
        ev["rel_tol"] = ev["abs_tol"] = tol
    known = {"mode", "rel_tol", "abs_tol", "t_span", "sample_count", "pole_floor", "t_ref",
             "probe_points", "monitor_energy"}
    unknown = set(ev) - known
    if unknown:
        raise ConfigError(f"config.evolve: unknown fields {sorted(unknown)}")
    try:
        opts = EvolveOptions(**ev)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.evolve: {exc}") from exc

    out = _get(cfg, "outputs", "config", {}, dict)
    g = dict(_get(out, "grid", "config.outputs", {}, dict))
    if grid is not None:
        g["n"] = grid
    n = _get(g, "n", "config.outputs.grid", 256, int)
    if n < 1:
        raise ConfigError("config.outputs.grid.n: must be positive")
    if not kernel.is_periodic:
        xr = _real_array(_get(g, "x_range", "config.outputs.grid", [-20.0, 20.0]),
                         "config.outputs.grid.x_range", (2,))
        g = {"x_range": [float(xr[0]), float(xr[1])], "n": n}
    else:
        g = {"n": n}
    every = _get(out, "sample_every", "config.outputs", 1, int)
    if every < 1:
        raise ConfigError("config.outputs.sample_every: must be positive")
    oracle = _get(cfg, "oracle", "config", {}, dict)
    return Scenario(kernel, source, opts, g, every,
                    seed if seed is not None else int(_get(cfg, "seed", "config", 0, int)),
                    tol if tol is not None else opts.rel_tol, oracle)


def grid_x(scenario):
    g = scenario.grid
    if scenario.kernel.is_periodic:
        return grid_points(scenario.kernel.L, g["n"])
    return np.linspace(g["x_range"][0], g["x_range"][1], g["n"])


def build_initial(scenario):
    """Initial data and a dict describing how it was obtained."""
    src, kind = scenario.source, scenario.kernel
    t = src["type"]
    where = "config.source"
    if t == "explicit":
        try:
            data = io.data_from_dict(_get(src, "data", where, types=dict))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{where}.data: {exc}") from exc
        return data, {"source": "explicit"}
    if t == "catalog":
        if kind.is_periodic:
            raise ConfigError(f"{where}: catalog entries use the rational kernel")
        try:
            data = exact_catalog(_get(src, "id", where, types=str))
        except ValueError as exc:
            raise ConfigError(f"{where}.id: {exc}") from exc
        return data, {"source": "catalog", "id": src["id"]}
    if t == "traveling_wave":
        if kind.is_periodic:
            raise ConfigError(f"{where}: traveling waves use the rational kernel")
        poles = _complex_list(_get(src, "poles", where), f"{where}.poles")
        theta = float(_get(src, "theta", where, 0.0, (int, float)))
        chir = _get(src, "chirality", where, 1, int)
        try:
            data = traveling_wave(poles, theta, chir)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        return data, {"source": "traveling_wave", "velocity": data.meta["velocity"]}
    if t == "random":
        N = _get(src, "N", where, types=int)
        try:
            spec = random_scenario(N, scenario.seed, kind=kind)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    else:
        poles = _complex_list(_get(src, "poles", where), f"{where}.poles")
        axes = _real_array(_get(src, "axes", where), f"{where}.axes", (poles.size, 3))
        n0 = _real_array(_get(src, "vacuum_direction", where, [0.0, 0.0, 1.0]),
                         f"{where}.vacuum_direction", (3,))
        try:
            spec = SolitonSpec(kind, poles, axes, n0)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    it = IterationOptions(tol=scenario.tol, max_iter=_get(src, "max_iter", where, 500, int))
    res = solve_iterative(spec, it)
    return res.data, {"source": t, "iterations": res.iterations, "spec": spec.to_dict()}


def field_table(data, kind, x):
    m = eval_m(data, kind, x).real
    eps = energy_density(data, kind, x)
    return ["x", "m1", "m2", "m3", "eps"], np.column_stack([x, m, eps])


def export_series(traj, x, out_dir, sample_every=1, extra=None):
    """Write per-sample field CSVs, ``poles.csv`` and ``report.json``."""
    out_dir = Path(out_dir)
    if len(traj) == 0:
        raise ValueError("trajectory has no samples")
    fdir = out_dir / "fields"
    fdir.mkdir(parents=True, exist_ok=True)
    index = []
    for i in range(0, len(traj), sample_every):
        name = f"field_{i:05d}.csv"
        io.write_csv(fdir / name, *field_table(traj.states[i], traj.kind, x))
        index.append({"sample": i, "t": traj.times[i], "file": f"fields/{name}"})
    io.write_csv(out_dir / "poles.csv", *io.poles_table(traj))
    io.write_json(out_dir / "trajectory.json", io.trajectory_to_dict(traj))
    report = {"status": "ok", "fields": index, "samples": len(traj),
              "monitor_max": {k: np.max(np.abs(v)) for k, v in traj.monitors.items()
                              if k in ("constraint_residual", "spin_null", "norm_residual")}}
    if "energy" in traj.monitors:
        e = traj.monitors["energy"]
        report["energy_drift"] = float(np.max(np.abs(e - e[0])) / max(abs(e[0]), 1e-300))
    report.update(extra or {})
    io.write_json(out_dir / "report.json", report)
    return report


def _failure_report(out_dir, exc, extra=None):
    rep = {"status": "error", "error": type(exc).__name__, "message": str(exc)}
    for attr in ("time", "iterations", "last_change"):
        if getattr(exc, attr, None) is not None:
            rep[attr] = getattr(exc, attr)
    if getattr(exc, "report", None) is not None:
        rep["constraints"] = exc.report.to_dict()
    traj = getattr(exc, "trajectory", None)
    if traj is not None and len(traj):
        rep["partial_samples"] = len(traj)
        rep["partial_times"] = [float(traj.times[0]), float(traj.times[-1])]
        io.write_csv(Path(out_dir) / "poles_partial.csv", *io.poles_table(traj))
    rep.update(extra or {})
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    io.write_json(Path(out_dir) / "report.json", rep)


def run_scenario(config, out_dir, seed=None, mode=None, tol=None, grid=None):
    """source -> validate -> evolve -> export; returns the exit status."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenario = parse_scenario(load_config(config), seed, mode, tol, grid)
    info = {}
    try:
        data, info = build_initial(scenario)
        rep = constraint_residuals(data, scenario.kernel)
        info["initial_constraints"] = rep.to_dict() | {"admissible": rep.admissible()}
        io.write_json(out_dir / "initial.json", io.data_to_dict(data))
        traj = evolve(data, scenario.kernel, scenario.evolve)
        export_series(traj, grid_x(scenario), out_dir, scenario.sample_every,
                      {"initial": info, "evolve": scenario.evolve.to_dict(),
                       "kernel": scenario.kernel.to_dict()})
    except ConfigError:
        raise
    except HWMError as exc:
        _failure_report(out_dir, exc, {"initial": info})
        return EXIT_FAILURE
    return EXIT_OK


def _initial_or_data(args, scenario):
    if args.data:
        return io.data_from_dict(json.loads(Path(args.data).read_text())), {"source": args.data}
    return build_initial(scenario)


def cmd_init(args, scenario, out):
    data, info = build_initial(scenario)
    rep = constraint_residuals(data, scenario.kernel)
    io.write_json(out / "initial.json", io.data_to_dict(data))
    io.write_json(out / "report.json", {"status": "ok", "initial": info,
                                        "constraints": rep.to_dict() | {"admissible": rep.admissible()}})
    return EXIT_OK


def cmd_validate(args, scenario, out):
    data, info = _initial_or_data(args, scenario)
    rep = constraint_residuals(data, scenario.kernel)
    ok = rep.admissible(args.tol or 1e-8)
    io.write_json(out / "report.json", {"status": "ok" if ok else "not_admissible",
                                        "initial": info, "constraints": rep.to_dict(),
                                        "admissible": ok})
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_field(args, scenario, out):
    data, info = _initial_or_data(args, scenario)
    x = grid_x(scenario)
    io.write_csv(out / "field.csv", *field_table(data, scenario.kernel, x))
    io.write_json(out / "report.json", {"status": "ok", "initial": info, "points": len(x)})
    return EXIT_OK


def cmd_energy(args, scenario, out):
    data, info = _initial_or_data(args, scenario)
    x = grid_x(scenario)
    eps = energy_density(data, scenario.kernel, x)
    io.write_csv(out / "energy.csv", ["x", "eps"], np.column_stack([x, eps]))
    io.write_json(out / "report.json", {"status": "ok", "initial": info,
                                        "total_energy": total_energy(data, scenario.kernel),
                                        "max_density": float(np.max(eps))})
    return EXIT_OK


def cmd_oracle(args, scenario, out):
    kind = scenario.kernel
    if not kind.is_periodic:
        raise ConfigError("config.kernel: the PDE oracle needs the trigonometric kernel")
    data, info = _initial_or_data(args, scenario)
    t_end = float(scenario.oracle.get("t_end", 1.0))
    dt = float(scenario.oracle.get("dt", 1e-3))
    n = scenario.grid["n"]
    x = grid_points(kind.L, n)
    m0 = GridField(kind.L, eval_m(data, kind, x).real)
    pde = evolve_pde(m0, (0.0, t_end), dt, dealias=bool(scenario.oracle.get("dealias", False)))
    opts = EvolveOptions(mode=scenario.evolve.mode, rel_tol=scenario.evolve.rel_tol,
                         abs_tol=scenario.evolve.abs_tol, t_span=(0.0, t_end), sample_count=2,
                         monitor_energy=False)
    traj = evolve(data, kind, opts)
    ansatz = GridField(kind.L, eval_m(traj.states[-1], kind, x).real)
    pde[-1].to_csv(out / "pde_final.csv")
    pde[-1].to_binary(out / "pde_final.bin")
    ansatz.to_csv(out / "ansatz_final.csv")
    linf, l2 = compare_fields(pde[-1], ansatz)
    io.write_json(out / "report.json", {"status": "ok", "initial": info, "t_end": t_end,
                                        "dt": dt, "n": n, "linf": linf, "l2": l2,
                                        "max_norm_drift": float(pde.norm_drift.max())})
    return EXIT_OK


def _grid_from_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x = data[:, 0]
    L = (x[1] - x[0]) * len(x) if len(x) > 1 else 1.0
    return GridField(L, data[:, 1:4])


def cmd_compare(args, out):
    a, b = _grid_from_csv(args.files[0]), _grid_from_csv(args.files[1])
    linf, l2 = compare_fields(a, b)
    io.write_json(out / "report.json", {"status": "ok", "linf": linf, "l2": l2,
                                        "files": list(args.files)})
    print(f"linf={linf:.17g} l2={l2:.17g}")
    return EXIT_OK


def _stats_chunk(job):
    start, count, seed, tol, max_iter = job
    return convergence_statistics(count, seed + start, tol=tol, max_iter=max_iter)


def cmd_stats(args, out):
    seed = args.seed or 0
    tol = args.tol or 1e-10
    workers = max(1, int(os.environ.get("HWM_NUM_THREADS", "1")))
    count = args.count
    if workers == 1:
        records = convergence_statistics(count, seed, tol=tol, max_iter=args.max_iter)
    else:
        # Chunks of a multiple of four keep the round-robin N assignment aligned.
        size = 4 * max(1, -(-count // (4 * workers)))
        jobs = [(s, min(size, count - s), seed, tol, args.max_iter) for s in range(0, count, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_stats_chunk, jobs))
        records = []
        for (start, *_), part in zip(jobs, parts):
            for r in part:
                r["index"] += start
            records.extend(part)
    header = ["index", "seed", "N", "converged", "iterations", "iterations_to_coarse"]
    rows = [[r["index"], r["seed"], r["N"], int(r["converged"]), r["iterations"],
             np.nan if r["iterations_to_coarse"] is None else r["iterations_to_coarse"]]
            for r in records]
    io.write_csv(out / "stats.csv", header, rows)
    coarse = [np.inf if r["iterations_to_coarse"] is None else r["iterations_to_coarse"]
              for r in records]
    frac = float(np.mean([r["converged"] for r in records])) if records else 0.0
    io.write_json(out / "report.json", {"status": "ok", "count": count, "converged_fraction": frac,
                                        "median_iterations_to_coarse": float(np.median(coarse)),
                                        "tol": tol, "max_iter": args.max_iter})
    print(f"converged {frac:.0%} of {count}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="halfwave", description="Half-wave maps spin-pole solver.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, help="scenario JSON file")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--mode", choices=["first", "second"], default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--grid", type=int, default=None, help="number of grid points")
        return sp

    for name, help_ in [("init", "build initial data"), ("evolve", "run a full scenario"),
                        ("validate", "check the constraints"), ("field", "export m and eps"),
                        ("energy", "export the energy density"),
                        ("oracle", "compare with the pseudospectral PDE solver")]:
        sp = common(sub.add_parser(name, help=help_))
        if name in ("validate", "field", "energy", "oracle"):
            sp.add_argument("--data", default=None, help="initial-data JSON instead of the source")
    sp = common(sub.add_parser("compare", help="compare two field CSV files"), config=False)
    sp.add_argument("files", nargs=2)
    sp = common(sub.add_parser("stats", help="iteration convergence statistics"), config=False)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--max-iter", type=int, default=150)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "evolve":
            return run_scenario(args.config, out, args.seed, args.mode, args.tol, args.grid)
        if args.command == "compare":
            return cmd_compare(args, out)
        if args.command == "stats":
            return cmd_stats(args, out)
        scenario = parse_scenario(load_config(args.config), args.seed, args.mode,
                                  args.tol, args.grid)
        handler = {"init": cmd_init, "validate": cmd_validate, "field": cmd_field,
                   "energy": cmd_energy, "oracle": cmd_oracle}[args.command]
        return handler(args, scenario, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        _failure_report(out, exc)
        return EXIT_CONFIG
    except HWMError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        _failure_report(out, exc)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
