"""Command line interface.

Examples::

    coldtof compare --mass-amu 6.941 --temp-k 2.5e-6 --format csv --out li.csv
    coldtof sweep --axis temperature --values 2.5e-6 1e-7 1e-9 --format json
    coldtof figure fig3 --out fig3.csv
    coldtof oracle --seed 7 --format json

Scenario flags may also come from a ``--config`` file holding ``key=value``
lines (``#`` starts a comment); flags on the command line win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import CloudSpecInput, TofError, to_si
from .sweep import emit, figure_preset, render, run_scenario, run_sweep, write_text

DEFAULTS = {
    "mass_amu": 85.4678,
    "temp_k": 2.5e-6,
    "sigma0_cm": 1e-5,
    "detector_z_cm": -30.0,
    "g": None,
    "points": 400,
    "variant": "derived",
    "seed": 0,
    "format": "csv",
    "out": None,
    "workers": 1,
}
_CASTS = {"mass_amu": float, "temp_k": float, "sigma0_cm": float, "detector_z_cm": float,
          "g": float, "points": int, "seed": int, "workers": int}


def read_config(path) -> dict:
    """Parse a key=value config file. Keys may use dashes or underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _CASTS.get(key, str)(value)
    return out


def _common(p: argparse.ArgumentParser):
    # defaults are None so that config values can be told apart from flags
    p.add_argument("--config", help="key=value file with default flag values")
    p.add_argument("--mass-amu", type=float, dest="mass_amu")
    p.add_argument("--temp-k", type=float, dest="temp_k")
    p.add_argument("--sigma0-cm", type=float, dest="sigma0_cm")
    p.add_argument("--detector-z-cm", type=float, dest="detector_z_cm")
    p.add_argument("--g", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--variant", choices=["derived", "paper"])
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--workers", type=int, help="processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coldtof", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"coldtof {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("classical", "classical arrival density on the output grid"),
        ("quantum", "quantum arrival density (selected variant) on the output grid"),
        ("compare", "all three densities, means and distances for one scenario"),
        ("mean", "cutoff and mean arrival times"),
        ("oracle", "Monte-Carlo and quadrature cross-checks, variant discrepancy report"),
    ):
        _common(sub.add_parser(name, help=help_))
    sp = sub.add_parser("sweep", help="scan mass, temperature or sigma0")
    _common(sp)
    sp.add_argument("--axis", required=True, choices=["mass", "temperature", "sigma0"])
    sp.add_argument("--values", required=True, nargs="+", type=float,
                    help="axis values in input units: amu, K or cm")
    fp = sub.add_parser("figure", help="named parameter scans (fig1 to fig4)")
    _common(fp)
    fp.add_argument("preset", choices=["fig1", "fig2", "fig3", "fig4"])
    return ap


def resolve(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        opts.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _spec(opts):
    return to_si(CloudSpecInput(opts["mass_amu"], opts["temp_k"], opts["sigma0_cm"],
                                opts["detector_z_cm"], opts["g"]))


def _grid_columns(result, columns):
    lines = [",".join(columns)]
    data = {"t_s": result.classical.times, "pi_classical": result.classical.values,
            "pi_quantum_derived": result.quantum_derived.values,
            "pi_quantum_paper": result.quantum_paper.values}
    for row in zip(*(data[c] for c in columns)):
        lines.append(",".join(format(float(x), ".17g") for x in row))
    return "\n".join(lines) + "\n"


def run_oracle(spec, seed: int, n_samples: int = 10**6, n_grid: int = 400) -> dict:
    from . import classical, packet, stats, thermal

    cut = stats.solve_cutoff(spec)
    samples = classical.sample_arrival_times(n_samples, seed, spec)
    ks = stats.ks_statistic(samples, lambda t: classical.classical_tof_cdf(t, spec))
    tau_c = classical.classical_mean_arrival(spec, cut.tc)
    times = np.linspace(stats.T_MIN, cut.tc, n_grid)

    t_star = spec.free_fall_time
    tt = np.linspace(0.05 * t_star, 1.5 * t_star, 50)[:, None]
    zz = packet.packet_center(tt, 0.0, spec) + packet.packet_width(tt, spec) * np.linspace(-5, 5, 50)[None, :]
    closed = packet.current(zz, tt, 0.0, spec)
    definition = packet.current_from_definition(zz, tt, 0.0, spec)
    mask = np.abs(closed) > 1e-12 * np.abs(closed).max()
    return {
        "version": __version__,
        "seed": seed,
        "spec": {"mass_kg": spec.mass, "temperature_K": spec.temperature, "sigma0_m": spec.sigma0,
                 "detector_z_m": spec.detector_z, "g_m_s2": spec.g},
        "tc": cut.tc,
        "monte_carlo": {
            "n": n_samples,
            "ks_statistic": ks,
            "mean_arrival": float(samples.times.mean()),
            "mean_arrival_quadrature": tau_c,
            "fraction_beyond_tc": float(np.mean(samples.times > cut.tc)),
        },
        "current_definition_max_relative": float(
            np.max(np.abs(closed - definition)[mask] / np.abs(closed)[mask])),
        "variant_discrepancy": thermal.variant_discrepancy(spec, times),
    }


def _dispatch(args, opts):
    fmt, out = opts["format"], opts["out"]
    if args.command == "figure":
        emit(figure_preset(args.preset, n=opts["points"], workers=opts["workers"]), fmt, out)
        return
    if args.command == "sweep":
        base = _spec(opts)
        factor = {"mass": base.consts.amu, "temperature": 1.0, "sigma0": 0.01}[args.axis]
        table = run_sweep(base, args.axis, [v * factor for v in args.values],
                          n=opts["points"], workers=opts["workers"])
        emit(table, fmt, out)
        return
    spec = _spec(opts)
    if args.command == "oracle":
        emit(run_oracle(spec, opts["seed"]), fmt, out)
        return
    result = run_scenario(spec, n=opts["points"])
    if args.command == "compare":
        emit(result, fmt, out)
    elif args.command == "mean":
        emit({
            "tc": result.cutoff.tc,
            "cutoff_iterations": result.cutoff.iterations,
            "tau_classical": result.tau_classical.tau,
            "tau_quantum_derived": result.tau_quantum["derived"].tau,
            "tau_quantum_paper": result.tau_quantum["paper"].tau,
        }, fmt, out)
    else:
        column = "pi_classical" if args.command == "classical" else f"pi_quantum_{opts['variant']}"
        if fmt == "csv":
            write_text(_grid_columns(result, ("t_s", column)), out)
        else:
            dist = {"classical": result.classical, "derived": result.quantum_derived,
                    "paper": result.quantum_paper}[
                "classical" if args.command == "classical" else opts["variant"]]
            write_text(render({
                "metadata": {"version": __version__, "kind": dist.kind,
                             "normalization": dist.normalization, "tc": result.cutoff.tc},
                "t_s": dist.times.tolist(), column: dist.values.tolist(),
            }, "json"), out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = resolve(args)
        _dispatch(args, opts)
    except (TofError, ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        sys.stderr.write(json.dumps(err) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
