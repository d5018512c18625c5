"""Command-line front end.

    collapseprobe <command> --config FILE [--out DIR] [--threads N] [--seed S]

Each run writes ``<command>.csv`` and a ``<command>.json`` sidecar into the
output directory. Column layouts are documented in ``docs/formats.md``.
"""

import argparse
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import COMMANDS, parse_config, parse_text
from .errors import AmbiguityError, ConfigError, InvalidArgumentError, UnsupportedInputError
from .liouville import (
    SSEConfig,
    analytic_single_qubit,
    build_liouvillian,
    propagate,
    spectrum,
    sse_simulate,
)
from .metrology import (
    IsingExperiment,
    TwoQubitExperiment,
    cramer_rao_bound,
    liouvillian,
    optimize_t_theta,
    run_scan,
    table1,
)
from .model import (
    BlochState,
    DissipatorSpec,
    SingleQubitModel,
    bloch_ket,
    bloch_pure_state,
    bloch_vector,
)

SCHEMA_VERSION = 1

EXIT_CODES = {
    "config-invalid": 2,
    "invalid-argument": 3,
    "unsupported-input": 4,
    "ambiguous-result": 5,
    "io-error": 6,
    "internal-error": 1,
}


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.11e}"


def grid_values(spec):
    if spec["spacing"] == "log":
        return np.geomspace(spec["min"], spec["max"], spec["points"])
    return np.linspace(spec["min"], spec["max"], spec["points"])


def _probe(cfg):
    return BlochState(cfg["theta"], cfg["phi"])


def ising_experiment(cfg):
    sites = cfg.get("dissipated_sites")
    return IsingExperiment(
        n_sites=cfg["N"], h=cfg["h"], j=cfg["J"], h_p=cfg["h_p"], j_p=cfg["J_p"],
        beta=cfg["beta"], noise=cfg["noise"], rc_over_a=cfg["rc_over_a"],
        sites=tuple(sites) if sites else None,
    )


def two_qubit_experiment(cfg):
    return TwoQubitExperiment(cfg["omega0"], cfg["omega_p"], cfg["g"], cfg["beta"])


# each runner returns (header, rows, info) with info merged into the sidecar

def run_single_qubit_dynamics(cfg, u, threads):
    lam, w0 = cfg["lambda"], cfg["omega0"]
    liou = build_liouvillian(SingleQubitModel(w0, lam).hamiltonian(),
                             DissipatorSpec(((1, 1, 1.0),)), 1, lam)
    rho0 = bloch_pure_state(_probe(cfg))
    gap = spectrum(liou).gap
    header = [f"t[1/{u}]", "x[1]", "y[1]", "z[1]", "envelope[1]"]
    rows = []
    for t in grid_values(cfg["grid"]):
        x, y, z = bloch_vector(propagate(liou, rho0, t))
        rows.append([t, x, y, z, math.exp(-gap * t)])
    return header, rows, {"gap": gap}


def run_sse_check(cfg, u, threads):
    lam, w0 = cfg["lambda"], cfg["omega0"]
    model = SingleQubitModel(w0, lam)
    probe = _probe(cfg)
    sse = SSEConfig(dt=cfg["dt"], n_traj=cfg["n_traj"], seed=cfg["seed"])
    times = np.linspace(0, cfg["t_final"], cfg["samples"] + 1)[1:]
    res = sse_simulate(model, bloch_ket(probe), cfg["t_final"], sse, sample_times=times)
    exact = analytic_single_qubit(w0, lam, bloch_pure_state(probe), res.times)
    header = [f"t[1/{u}]"]
    for k in "xyz":
        header += [f"{k}_sse[1]", f"{k}_stderr[1]", f"{k}_master[1]"]
    rows = []
    for s, t in enumerate(res.times):
        ref = bloch_vector(exact[s])
        row = [t]
        for a in range(3):
            row += [res.bloch_mean[s, a], res.bloch_stderr[s, a], ref[a]]
        rows.append(row)
    return header, rows, {}


def run_two_qubit_qfi(cfg, u, threads):
    exp = two_qubit_experiment(cfg)
    t = cfg.get("t", 2 * math.pi / cfg["g"] if cfg["g"] > 0 else None)
    if t is None:
        raise InvalidArgumentError("set t explicitly when the coupling g is zero")
    scan = run_scan("lambda_scan", exp, grid_values(cfg["grid"]), probe=_probe(cfg), t=t,
                    threads=threads)
    header = [f"lambda[{u}]", f"G[1/{u}^2]", "Q[1]", f"crb[{u}^2]"]
    rows = [[r.lam, r.g_value, r.q_value, cramer_rao_bound(r.g_value)] for r in scan.records]
    return header, rows, {"t_opt": scan.t_used}


def run_optimize(cfg, u, threads):
    if cfg["table1"]:
        cells = table1(experiment=ising_experiment(cfg), probe=_probe(cfg), threads=threads)
        header = ["lambda[J]", "N[1]", "t_opt[1/J]", "t_opt_reference[1/J]", "G_max[1/J^2]",
                  "G_at_reference[1/J^2]", "ratio[1]"]
        rows = [[c.lam, c.n_sites, c.t_opt, c.t_reference, c.g_max, c.g_at_reference, c.ratio]
                for c in cells]
        return header, rows, {"t_opt": [c.t_opt for c in cells]}
    exp = ising_experiment(cfg) if cfg["model"] == "ising" else two_qubit_experiment(cfg)
    res = optimize_t_theta(exp, cfg["lambda"], tuple(cfg["t_window"]), phi=cfg["phi"])
    header = [f"lambda[{u}]", f"t_opt[1/{u}]", "theta_opt[rad]", f"G_max[1/{u}^2]",
              f"G_grid_max[1/{u}^2]", "iterations[1]", "converged[1]", "degenerate[1]"]
    rows = [[cfg["lambda"], res.t_opt, res.theta_opt, res.g_max, res.grid_max,
             res.n_iterations, res.converged, res.degenerate]]
    return header, rows, {"t_opt": res.t_opt}


def run_ising_scan(cfg, u, threads):
    base = ising_experiment(cfg)
    grid = grid_values(cfg["grid"])
    header, cols, t_used = [f"lambda[{u}]"], [grid], {}
    t = cfg.get("t")
    for hv in cfg["h_values"]:
        exp = replace(base, h=hv * base.j)
        scan = run_scan("lambda_scan", exp, grid, probe=_probe(cfg), t=t,
                        reoptimize=cfg["reoptimize"], threads=threads)
        if t is None and not cfg["reoptimize"]:
            t = scan.t_used  # one shared time so the h curves are comparable
        g = scan.g_values
        label = f"h/J={hv:g}"
        header += [f"G[{label}][1/{u}^2]", f"Q[{label}][1]", f"crb[{label}][{u}^2]"]
        cols += [g, grid**2 * g, [cramer_rao_bound(x) for x in g]]
        t_used[f"{hv:g}"] = scan.t_used
    return header, list(zip(*cols)), {"t_opt": t_used}


def run_h_scan(cfg, u, threads):
    scan = run_scan("h_scan", ising_experiment(cfg), grid_values(cfg["grid"]),
                    probe=_probe(cfg), lam=cfg["lambda"], t=cfg.get("t"), threads=threads)
    header = ["h/J[1]", f"G[1/{u}^2]", "Q[1]"]
    rows = [[x, r.g_value, r.q_value] for x, r in zip(scan.grid, scan.records)]
    return header, rows, {"t_opt": scan.t_used}


def run_size_scan(cfg, u, threads):
    scan = run_scan("size_scan", ising_experiment(cfg), cfg["sizes"], probe=_probe(cfg),
                    lam=cfg["lambda"], t=cfg.get("t"), threads=threads)
    header = ["N[1]", f"t[1/{u}]", f"G[1/{u}^2]", "Q[1]"]
    rows = [[int(n), t, r.g_value, r.q_value]
            for n, t, r in zip(scan.grid, scan.t_used, scan.records)]
    return header, rows, {"t_opt": list(scan.t_used)}


def run_delta_g(cfg, u, threads):
    scan = run_scan("delta_g_scan", ising_experiment(cfg), grid_values(cfg["grid"]),
                    probe=_probe(cfg), t=cfg.get("t"), threads=threads)
    header = [f"lambda[{u}]", f"G_correlated[1/{u}^2]", f"G_local[1/{u}^2]", "delta_G[1]"]
    rows = [[x, r.g_value, gl, d] for x, r, gl, d in
            zip(scan.grid, scan.records, scan.extra["g_local"], scan.extra["delta_g"])]
    return header, rows, {"t_opt": scan.t_used}


def run_gap(cfg, u, threads):
    lam = cfg["lambda"]
    if cfg["model"] == "single-qubit":
        liou = build_liouvillian(SingleQubitModel(cfg["omega0"], lam).hamiltonian(),
                                 DissipatorSpec(((1, 1, 1.0),)), 1, lam)
    elif cfg["model"] == "two-qubit":
        liou = liouvillian(two_qubit_experiment(cfg), lam)
    else:
        liou = liouvillian(ising_experiment(cfg), lam)
    spec = spectrum(liou)
    slow = 1 + int(np.argmin(spec.gammas[1:]))
    header = [f"lambda[{u}]", f"gap[{u}]", f"omega_slowest[{u}]", "null_modes[1]"]
    return header, [[lam, spec.gap, abs(spec.omegas[slow]), len(spec.null_modes())]], {}


RUNNERS = {
    "single-qubit-dynamics": run_single_qubit_dynamics,
    "sse-check": run_sse_check,
    "two-qubit-qfi": run_two_qubit_qfi,
    "optimize": run_optimize,
    "ising-scan": run_ising_scan,
    "h-scan": run_h_scan,
    "size-scan": run_size_scan,
    "delta-g": run_delta_g,
    "gap": run_gap,
}


def render_csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def execute(cfg, out_dir=".", threads=1):
    """Run ``cfg`` and write ``<command>.csv`` and ``<command>.json`` into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    units = cfg.units
    header, rows, info = RUNNERS[cfg.command](cfg, units, threads)
    wall = time.perf_counter() - start
    csv_path = out_dir / f"{cfg.command}.csv"
    json_path = out_dir / f"{cfg.command}.json"
    atomic_write(csv_path, render_csv(header, rows))
    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": cfg.resolved(),
        "defaults_applied": cfg.defaults_applied,
        "units": {"energy": units, "lambda": units, "time": f"1/{units}"},
        "t_opt": info.get("t_opt"),
        "extra": {k: v for k, v in info.items() if k != "t_opt"},
        "wall_clock_seconds": wall,
        "csv": csv_path.name,
    }
    atomic_write(json_path, json.dumps(_jsonable(sidecar), indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def build_parser():
    p = argparse.ArgumentParser(prog="collapseprobe", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="YAML or JSON config file (or a sidecar)")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--threads", type=int, default=1, help="workers for scan points")
    p.add_argument("--seed", type=int, default=None, help="RNG seed, overrides the config")
    p.add_argument("--table1", action="store_true",
                   help="optimize: reproduce the optimal-time table for the Ising chain")
    return p


def _category(exc):
    if isinstance(exc, ConfigError):
        return "config-invalid"
    if isinstance(exc, UnsupportedInputError):
        return "unsupported-input"
    if isinstance(exc, InvalidArgumentError):
        return "invalid-argument"
    if isinstance(exc, AmbiguityError):
        return "ambiguous-result"
    if isinstance(exc, OSError):
        return "io-error"
    return "internal-error"


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError(["--threads: must be >= 1"])
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError([f"cannot read config {args.config}: {exc.strerror}"]) from exc
        raw = parse_text(text) or {}
        if isinstance(raw, dict) and "schema_version" in raw:
            raw = dict(raw.get("config") or {})
        if not isinstance(raw, dict):
            raise ConfigError(["config must be a mapping of keys to values"])
        raw = dict(raw)
        raw.setdefault("command", args.command)
        if raw["command"] != args.command:
            raise ConfigError([f"command: config says {raw['command']!r}, "
                               f"command line says {args.command!r}"])
        if args.seed is not None and args.command == "sse-check":
            raw["seed"] = args.seed  # the only stochastic command
        if args.table1:
            raw["table1"] = True
            raw.setdefault("model", "ising")
        cfg = parse_config(raw)
        csv_path, _ = execute(cfg, args.out, args.threads)
    except Exception as exc:  # noqa: BLE001 - every failure maps to one error line
        cat = _category(exc)
        detail = " ".join(str(exc).split())
        print(f"error: {cat}: {detail}", file=sys.stderr)
        return EXIT_CODES[cat]
    print(csv_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
