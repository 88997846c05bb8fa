"""Scenario runs, parameter sweeps, figure presets and CSV/JSON emission."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classical import classical_tof_pdf
from .core import CloudSpec, CloudSpecInput, PhysicalConstants, TofError, to_si
from .quadrature import DEFAULT_ATOL, DEFAULT_RTOL, integrate
from .stats import (
    T_MIN, CutoffSolution, DistanceReport, MeanArrival, TofDistribution,
    breakpoints, l1_distance, mean_arrival, solve_cutoff,
)
from .thermal import CurrentVariant, quantum_tof_pdf

CSV_HEADER = ("t_s", "pi_classical", "pi_quantum_derived", "pi_quantum_paper")
AXES = ("mass", "temperature", "sigma0")

# Common isotope-averaged masses (amu). User inputs, not values read off the figures.
LI_AMU = 6.941
NA_AMU = 22.99
K_AMU = 39.0983
RB_AMU = 85.4678
BE_AMU = 9.01
HEAVY_AMU = 200.0

SIGMA0_CM = 1e-5
DETECTOR_Z_CM = -30.0


class EmitError(TofError, OSError):
    pass


def _density(kind: str, spec: CloudSpec):
    if kind == "classical":
        return lambda t: float(classical_tof_pdf(t, spec))
    variant = CurrentVariant.parse(kind)
    return lambda t: float(quantum_tof_pdf(t, spec, variant))


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    spec: CloudSpec
    cutoff: CutoffSolution
    tau_classical: MeanArrival
    tau_quantum: dict  # CurrentVariant value -> MeanArrival
    classical: TofDistribution
    quantum_derived: TofDistribution
    quantum_paper: TofDistribution
    distance: DistanceReport
    tolerances: dict
    version: str = __version__
    seed: int | None = None

    @property
    def distributions(self):
        return (self.classical, self.quantum_derived, self.quantum_paper)


def run_scenario(
    spec: CloudSpec,
    n: int = 400,
    t_max: float | None = None,
    tol_rel: float = DEFAULT_RTOL,
    tol_abs: float = DEFAULT_ATOL,
    seed: int | None = None,
) -> ScenarioResult:
    """Evaluate both arrival densities, their means and distance for one scenario.

    The grid (``n`` points uniform on [T_MIN, t_max or tc]) is for output
    only; means, normalisations and the L1 distance use adaptive quadrature.
    """
    if n < 16:
        raise ValueError("grid size n must be >= 16")
    try:
        cutoff = solve_cutoff(spec)
        tc = cutoff.tc
        t_hi = tc if t_max is None else float(t_max)
        times = np.linspace(T_MIN, t_hi, n)
        tol = {"tol_rel": tol_rel, "tol_abs": tol_abs}
        pts_tc = breakpoints(spec, T_MIN, tc)
        pts_grid = breakpoints(spec, T_MIN, t_hi)

        dists = {}
        for kind, values in (
            ("classical", classical_tof_pdf(times, spec)),
            ("derived", quantum_tof_pdf(times, spec, CurrentVariant.DERIVED)),
            ("paper", quantum_tof_pdf(times, spec, CurrentVariant.PAPER_LITERAL)),
        ):
            norm = integrate(_density(kind, spec), T_MIN, t_hi, points=pts_grid, **tol)
            dists[kind] = TofDistribution(kind, times, np.asarray(values, dtype=float), norm,
                                          {"t_min": T_MIN, "t_max": t_hi})

        tau_c = mean_arrival(_density("classical", spec), tc, points=pts_tc, **tol)
        tau_q = {v.value: mean_arrival(_density(v.value, spec), tc, points=pts_tc, **tol)
                 for v in CurrentVariant}

        pc, pq = dists["classical"].values, dists["derived"].values
        distance = DistanceReport(
            l1=l1_distance(_density("classical", spec), _density("derived", spec),
                           T_MIN, t_hi, points=pts_grid, **tol),
            sup_relative=float(np.max(np.abs(pq - pc)) / np.max(pc)) if np.max(pc) > 0 else float("inf"),
            t_min=T_MIN,
            t_max=t_hi,
            n_points=n,
        )
    except TofError as exc:
        raise type(exc)(f"{exc} [scenario: {spec}]") from exc
    return ScenarioResult(
        spec=spec, cutoff=cutoff, tau_classical=tau_c, tau_quantum=tau_q,
        classical=dists["classical"], quantum_derived=dists["derived"], quantum_paper=dists["paper"],
        distance=distance, tolerances=dict(tol), seed=seed,
    )


@dataclass(frozen=True)
class SweepRow:
    value: float
    tc: float | None = None
    tau_classical: float | None = None
    tau_quantum_derived: float | None = None
    tau_quantum_paper: float | None = None
    l1: float | None = None
    sup_relative: float | None = None
    error: str | None = None


@dataclass(frozen=True, eq=False)
class SweepTable:
    axis: str
    values: tuple
    rows: tuple
    base: CloudSpec
    label: str = ""
    results: tuple = field(default=(), repr=False)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


def _with_axis(base: CloudSpec, axis: str, value: float) -> CloudSpec:
    return dataclasses.replace(base, **{axis: float(value)})


def _row_task(args):
    base, axis, value, n, t_max, tol_rel, tol_abs = args
    try:
        spec = _with_axis(base, axis, value)
        return run_scenario(spec, n=n, t_max=t_max, tol_rel=tol_rel, tol_abs=tol_abs), None
    except (TofError, ArithmeticError, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _shared_t_max(base: CloudSpec, axis: str, values) -> float | None:
    cutoffs = []
    for v in values:
        try:
            cutoffs.append(solve_cutoff(_with_axis(base, axis, v)).tc)
        except (TofError, ArithmeticError, ValueError):
            continue
    return min(cutoffs) if cutoffs else None


def run_sweep(
    base: CloudSpec,
    axis: str,
    values,
    n: int = 400,
    workers: int = 1,
    tol_rel: float = DEFAULT_RTOL,
    tol_abs: float = DEFAULT_ATOL,
    label: str = "",
) -> SweepTable:
    """Run one scenario per value of ``axis`` (SI units), preserving input order.

    For a ``sigma0`` sweep all rows share one output grid ending at the
    smallest cutoff, so classical curves are directly comparable across rows.
    Rows that fail are reported with their error and no numbers.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    values = tuple(float(v) for v in values)
    if len(values) < 2:
        raise ValueError("a sweep needs at least two values")
    steps = np.diff(values)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("sweep values must be strictly monotone")

    t_max = _shared_t_max(base, axis, values) if axis == "sigma0" else None
    tasks = [(base, axis, v, n, t_max, tol_rel, tol_abs) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_row_task, tasks))
    else:
        outcomes = [_row_task(t) for t in tasks]

    rows = []
    for value, (res, err) in zip(values, outcomes):
        if res is None:
            rows.append(SweepRow(value=value, error=err))
            continue
        rows.append(SweepRow(
            value=value,
            tc=res.cutoff.tc,
            tau_classical=res.tau_classical.tau,
            tau_quantum_derived=res.tau_quantum["derived"].tau,
            tau_quantum_paper=res.tau_quantum["paper"].tau,
            l1=res.distance.l1,
            sup_relative=res.distance.sup_relative,
        ))
    return SweepTable(axis=axis, values=values, rows=tuple(rows), base=base, label=label,
                      results=tuple(res for res, _ in outcomes))


def _spec(mass_amu, temperature, sigma0_cm=SIGMA0_CM, consts: PhysicalConstants | None = None):
    inp = CloudSpecInput(mass_amu, temperature, sigma0_cm, DETECTOR_Z_CM)
    return to_si(inp) if consts is None else to_si(inp, consts)


FIG1_MASSES_AMU = (LI_AMU, NA_AMU, RB_AMU)
FIG2_TEMPERATURES = (2.5e-6, 1e-6, 2.5e-7, 1e-7, 1e-8, 1e-9)
FIG3_MASSES_AMU = (LI_AMU, NA_AMU, K_AMU, RB_AMU, HEAVY_AMU)
FIG4_SIGMA0_M = (1e-7, 2e-7, 4e-7)


def figure_preset(name: str, n: int = 400, workers: int = 1, values=None) -> list[SweepTable]:
    """Named parameter scans fig1 to fig4.

    Returns one table per curve family: one for fig1, fig2 and fig4, and two
    for fig3 (sigma0 = 1e-7 m and 2e-7 m). ``values`` overrides the default
    axis values, given in the axis' input units (amu for mass, K, m for
    sigma0).
    """
    kw = {"n": n, "workers": workers}
    if name == "fig1":
        masses = values or FIG1_MASSES_AMU
        base = _spec(RB_AMU, 2.5e-6)
        return [run_sweep(base, "mass", [m * base.consts.amu for m in masses], label="fig1", **kw)]
    if name == "fig2":
        return [run_sweep(_spec(RB_AMU, 2.5e-6), "temperature", values or FIG2_TEMPERATURES,
                          label="fig2", **kw)]
    if name == "fig3":
        masses = values or FIG3_MASSES_AMU
        tables = []
        for sigma0_cm in (1e-5, 2e-5):
            base = _spec(RB_AMU, 1.41e-6, sigma0_cm)
            tables.append(run_sweep(base, "mass", [m * base.consts.amu for m in masses],
                                    label=f"fig3 sigma0={sigma0_cm / 100:g} m", **kw))
        return tables
    if name == "fig4":
        return [run_sweep(_spec(BE_AMU, 3.0e-6), "sigma0", values or FIG4_SIGMA0_M, label="fig4", **kw)]
    raise ValueError(f"unknown figure preset {name!r}; expected fig1, fig2, fig3 or fig4")


# --- serialisation -------------------------------------------------------------

def _g17(x) -> str:
    return format(float(x), ".17g")


def _spec_dict(spec: CloudSpec) -> dict:
    inp = spec.to_input()
    return {
        "si": {"mass_kg": spec.mass, "temperature_K": spec.temperature, "sigma0_m": spec.sigma0,
               "detector_z_m": spec.detector_z, "g_m_s2": spec.g},
        "input_units": {"mass_amu": inp.mass_amu, "temperature_K": inp.temperature,
                        "sigma0_cm": inp.sigma0_cm, "detector_z_cm": inp.detector_z_cm, "g_m_s2": inp.g},
        "constants": dataclasses.asdict(spec.consts),
    }


def _spec_from_dict(d: dict) -> CloudSpec:
    si = d["si"]
    return CloudSpec(si["mass_kg"], si["temperature_K"], si["sigma0_m"], si["detector_z_m"],
                     si["g_m_s2"], PhysicalConstants(**d["constants"]))


def _dist_dict(dist: TofDistribution) -> dict:
    return {"kind": dist.kind, "normalization": dist.normalization, "metadata": dist.metadata,
            "times": dist.times.tolist(), "values": dist.values.tolist()}


def _dist_from_dict(d: dict) -> TofDistribution:
    return TofDistribution(d["kind"], np.array(d["times"], dtype=float), np.array(d["values"], dtype=float),
                           d["normalization"], d["metadata"])


def scenario_to_dict(result: ScenarioResult) -> dict:
    return {
        "metadata": {
            "version": result.version,
            "seed": result.seed,
            "spec": _spec_dict(result.spec),
            "default_variant": CurrentVariant.DERIVED.value,
            "variants": [v.value for v in CurrentVariant],
            "tolerances": result.tolerances,
            "cutoff": dataclasses.asdict(result.cutoff),
            "t_min": T_MIN,
        },
        "tau_classical": dataclasses.asdict(result.tau_classical),
        "tau_quantum": {k: dataclasses.asdict(v) for k, v in result.tau_quantum.items()},
        "distance": dataclasses.asdict(result.distance),
        "distributions": {d.kind: _dist_dict(d) for d in result.distributions},
    }


def scenario_from_dict(d: dict) -> ScenarioResult:
    meta = d["metadata"]
    dists = {k: _dist_from_dict(v) for k, v in d["distributions"].items()}
    return ScenarioResult(
        spec=_spec_from_dict(meta["spec"]),
        cutoff=CutoffSolution(**meta["cutoff"]),
        tau_classical=MeanArrival(**d["tau_classical"]),
        tau_quantum={k: MeanArrival(**v) for k, v in d["tau_quantum"].items()},
        classical=dists["classical"],
        quantum_derived=dists["derived"],
        quantum_paper=dists["paper"],
        distance=DistanceReport(**d["distance"]),
        tolerances=meta["tolerances"],
        version=meta["version"],
        seed=meta["seed"],
    )


SWEEP_COLUMNS = ("value", "tc", "tau_classical", "tau_quantum_derived", "tau_quantum_paper",
                 "l1", "sup_relative", "error")


def sweep_to_dict(table: SweepTable) -> dict:
    return {
        "metadata": {"version": __version__, "label": table.label, "axis": table.axis,
                     "base_spec": _spec_dict(table.base)},
        "rows": [dataclasses.asdict(r) for r in table.rows],
    }


def _scenario_csv(result: ScenarioResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in zip(result.classical.times, result.classical.values,
                   result.quantum_derived.values, result.quantum_paper.values):
        w.writerow([_g17(x) for x in row])
    return buf.getvalue()


def _sweep_csv(table: SweepTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("axis",) + SWEEP_COLUMNS)
    for r in table.rows:
        cells = [table.axis]
        for name in SWEEP_COLUMNS:
            x = getattr(r, name)
            cells.append("" if x is None else (x if isinstance(x, str) else _g17(x)))
        w.writerow(cells)
    return buf.getvalue()


def render(result, fmt: str) -> str:
    """Serialise a ScenarioResult, SweepTable (or list of them) or a plain dict."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    if isinstance(result, (list, tuple)):
        if fmt == "json":
            return json.dumps([json.loads(render(r, "json")) for r in result], indent=1) + "\n"
        return "".join(render(r, "csv") for r in result)
    if fmt == "json":
        if isinstance(result, ScenarioResult):
            payload = scenario_to_dict(result)
        elif isinstance(result, SweepTable):
            payload = sweep_to_dict(result)
        else:
            payload = result
        return json.dumps(payload, indent=1, allow_nan=True) + "\n"
    if isinstance(result, ScenarioResult):
        return _scenario_csv(result)
    if isinstance(result, SweepTable):
        return _sweep_csv(result)
    if isinstance(result, dict):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("key", "value"))
        for k, v in _flatten(result):
            w.writerow((k, _g17(v) if isinstance(v, float) else v))
        return buf.getvalue()
    raise TypeError(f"cannot render {type(result).__name__}")


def _flatten(d: dict, prefix: str = ""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        else:
            yield key, v


def emit(result, fmt: str, path=None) -> str:
    """Write ``result`` as CSV or JSON to ``path`` (stdout when None or '-')."""
    text = render(result, fmt)
    write_text(text, path)
    return text


def write_text(text: str, path=None):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror or exc}") from exc


def load_scenario_json(path) -> ScenarioResult:
    return scenario_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
