"""Command-line front end.

Subcommands:

* ``sweep``       core-count sweep of the scaling model, CSV on stdout.
* ``comm-sweep``  the same sweep with the communication power breakdown.
* ``et2``         apply one energy-time trade-off transform to an (E, t) point.
* ``simulate``    run the discrete-event simulator on a task-graph file.
* ``validate``    structural and CREW checks of a task-graph file.

Exit codes: 0 success, 1 usage error, 2 input or validation error,
3 internal error.  Sweep defaults (area 1e6, work 1, m from 1 to 16384 in
powers of two) emit the model's standard demonstration data with no flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import comm, et2, graphio, scaling, sim
from .errors import PluralError
from .graph import check_crew, validate_dag

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

SWEEP_COLUMNS = [
    "m",
    "core_area",
    "core_freq",
    "single_freq",
    "core_perf",
    "ensemble_perf",
    "compute_time",
    "single_time",
    "power",
    "single_power",
    "energy",
    "single_energy",
    "speedup",
    "energydown",
    "powerdown",
    "es",
    "es2",
    "perf_per_power",
]

COMM_COLUMNS = SWEEP_COLUMNS + [
    "sched_msg_energy",
    "sched_power",
    "mem_access_energy",
    "mem_power",
    "compute_power",
    "total_power",
    "perf_per_total_power",
]

REPORT_CSV_COLUMNS = [
    "m",
    "makespan",
    "total_instructions",
    "compute_energy",
    "sched_msg_energy_total",
    "mem_msg_energy_total",
    "avg_power",
    "sched_msg_count",
    "mem_access_count",
    "mem_conflict_stalls",
    "empirical_speedup",
    "mean_utilization",
]

PLOT_SCRIPT = """\
# gnuplot stub: save the sweep CSV next to this script and adjust `datafile`.
datafile = "{name}"
set datafile separator ","
set key outside autotitle columnhead
set logscale xy
plot for [i=2:*] datafile using 1:i with lines
"""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems via exception, not exit(2)."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return format(value, ".12g")


def parse_core_counts(text: str) -> list[int]:
    """Parse an m-range flag.

    Accepts a single count ("16"), a comma list ("1,4,16"), or a geometric
    range "start:stop:xFACTOR" ("1:16384:x2") inclusive of both ends.
    """
    text = text.strip()
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            if not step_s.startswith("x"):
                raise ValueError("step must look like x2")
            start, stop, factor = int(start_s), int(stop_s), int(step_s[1:])
            if start < 1 or stop < start or factor < 2:
                raise ValueError("need 1 <= start <= stop and factor >= 2")
            values = []
            m = start
            while m <= stop:
                values.append(m)
                m *= factor
            return values
        values = [int(part) for part in text.split(",")]
        if not values or any(m < 1 for m in values):
            raise ValueError("core counts must be positive")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("core counts must be strictly increasing")
        return values
    except ValueError as exc:
        raise _UsageError(f"bad m-range {text!r}: {exc}") from None


def _chip_from_args(args) -> scaling.ChipSpec:
    return scaling.ChipSpec(
        area=args.area,
        work=args.work,
        cpi=args.cpi,
        pollack_exponent=args.alpha,
        static_power_enabled=args.static_power,
    )


def _add_chip_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--area", type=float, default=1e6, help="total chip area A (default 1e6)")
    parser.add_argument("--work", type=float, default=1.0, help="workload size W in instructions (default 1)")
    parser.add_argument("--alpha", type=float, default=0.5, help="frequency-vs-area exponent (default 0.5)")
    parser.add_argument("--cpi", type=float, default=1.0, help="cycles per instruction (default 1)")
    parser.add_argument(
        "--static-power",
        action="store_true",
        help="add area-proportional static power to the power figures",
    )


def _write_plot_script(path: str, csv_name: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(PLOT_SCRIPT.format(name=csv_name))


def _emit_csv(columns: list[str], rows: list[dict], out) -> None:
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row[col]) for col in columns) + "\n")


def cmd_sweep(args, out) -> int:
    spec = _chip_from_args(args)
    rows = []
    for metrics in scaling.sweep(spec, parse_core_counts(args.m)):
        rows.append({col: getattr(metrics, col) for col in SWEEP_COLUMNS})
    _emit_csv(SWEEP_COLUMNS, rows, out)
    if args.plot_script:
        _write_plot_script(args.plot_script, "sweep.csv")
    return EXIT_OK


def cmd_comm_sweep(args, out) -> int:
    spec = _chip_from_args(args)
    rows = []
    for m in parse_core_counts(args.m):
        metrics = scaling.ensemble_metrics(spec, m)
        traffic = comm.comm_metrics(spec, m)
        row = {col: getattr(metrics, col) for col in SWEEP_COLUMNS}
        row.update({col: getattr(traffic, col) for col in COMM_COLUMNS[len(SWEEP_COLUMNS):]})
        rows.append(row)
    _emit_csv(COMM_COLUMNS, rows, out)
    if args.plot_script:
        _write_plot_script(args.plot_script, "comm-sweep.csv")
    return EXIT_OK


def _state_dict(state: et2.Et2State) -> dict:
    return {
        "energy": state.energy,
        "time": state.time,
        "theta": state.theta,
        "power": state.power,
    }


def _apply_transform(state: et2.Et2State, spec: str):
    name, _, arg = spec.partition(":")
    if not arg:
        raise _UsageError(f"transform {spec!r} needs an argument, e.g. stretch:2")
    try:
        if name == "stretch":
            return et2.stretch_time(state, float(arg))
        if name == "shrink":
            return et2.shrink_work(state, float(arg))
        if name == "iso-time":
            return et2.iso_time_energy(state, float(arg))
        if name == "iso-energy":
            return et2.iso_energy_time(state, float(arg))
        if name == "parallel":
            return et2.parallelize(state, int(arg))
        if name == "constrain":
            kind, _, value_s = arg.partition("=")
            if not value_s:
                raise _UsageError("constrain needs E0=, T0=, or P0=, e.g. constrain:P0=4")
            value = float(value_s)
            if kind == "E0":
                return et2.constrain(state, energy=value)
            if kind == "T0":
                return et2.constrain(state, time=value)
            if kind == "P0":
                return et2.constrain(state, power=value)
            raise _UsageError(f"unknown constraint {kind!r} (use E0, T0, or P0)")
    except ValueError as exc:
        if isinstance(exc, PluralError):
            raise
        raise _UsageError(f"bad transform argument in {spec!r}: {exc}") from None
    raise _UsageError(f"unknown transform {name!r}")


def cmd_et2(args, out) -> int:
    state = et2.make_state(args.e, args.t)
    result = _apply_transform(state, args.transform)
    if isinstance(result, et2.Et2ParallelResult):
        after = {
            "per_core": _state_dict(result.per_core),
            "ensemble": {
                "energy": result.ensemble_energy,
                "time": result.ensemble_time,
                "power": result.ensemble_power,
            },
        }
    else:
        after = _state_dict(result)
    doc = {"before": _state_dict(state), "transform": args.transform, "after": after}
    out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _outcomes_from_args(pairs: list[str]) -> dict[str, str]:
    outcomes = {}
    for pair in pairs:
        task, sep, succ = pair.partition("=")
        if not sep or not task or not succ:
            raise _UsageError(f"bad --outcome {pair!r}, expected TASK=SUCCESSOR")
        outcomes[task] = succ
    return outcomes


def _warn_crew(g) -> None:
    for violation in check_crew(g):
        sys.stderr.write(f"WARNING: CREW violation: {violation}\n")


def cmd_simulate(args, out) -> int:
    g = graphio.load(args.graph)
    _warn_crew(g)
    cfg = sim.SimConfig(
        chip=_chip_from_args(args),
        m=args.m,
        mem_access_stride=args.stride,
        prealloc_depth=args.prealloc_depth,
        comm_costs_enabled=args.comm_costs,
        seed=args.seed,
        conditional_outcomes=_outcomes_from_args(args.outcome),
    )
    report = sim.run(g, cfg, record_events=args.emit_events)
    if args.csv:
        row = sim.report_as_dict(report)
        row["mean_utilization"] = (
            sum(report.utilization) / len(report.utilization) if report.utilization else 0.0
        )
        _emit_csv(REPORT_CSV_COLUMNS, [row], out)
    else:
        doc = sim.report_as_dict(report, include_events=args.emit_events)
        if args.check_model:
            doc["model_check"] = asdict(sim.compare_to_model(report, cfg))
        out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_validate(args, out) -> int:
    g = graphio.load(args.graph)
    cycle = validate_dag(g)
    if cycle is not None:
        sys.stderr.write("cycle: " + " -> ".join(cycle) + "\n")
        return EXIT_INPUT
    violations = check_crew(g)
    for violation in violations:
        sys.stderr.write(f"WARNING: CREW violation: {violation}\n")
    out.write(
        f"ok: {len(g.tasks)} tasks, {len(g.edges)} edges, "
        f"{len(violations)} CREW violation(s)\n"
    )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="plural", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="scaling-model sweep over core counts (CSV)")
    _add_chip_flags(p)
    p.add_argument("--m", default="1:16384:x2", help="core counts: N, N,N,..., or start:stop:x2")
    p.add_argument("--plot-script", help="also write a gnuplot stub to this path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("comm-sweep", help="sweep with communication power breakdown (CSV)")
    _add_chip_flags(p)
    p.add_argument("--m", default="1:16384:x2", help="core counts: N, N,N,..., or start:stop:x2")
    p.add_argument("--plot-script", help="also write a gnuplot stub to this path")
    p.set_defaults(func=cmd_comm_sweep)

    p = sub.add_parser("et2", help="apply an energy-time trade-off transform")
    p.add_argument("--e", type=float, required=True, help="energy of the starting point")
    p.add_argument("--t", type=float, required=True, help="time of the starting point")
    p.add_argument(
        "transform",
        help="stretch:A | shrink:B | iso-time:B | iso-energy:B | parallel:M | "
        "constrain:{E0|T0|P0}=V",
    )
    p.set_defaults(func=cmd_et2)

    p = sub.add_parser("simulate", help="simulate a task-graph file")
    p.add_argument("graph", help="task-graph JSON file")
    _add_chip_flags(p)
    p.add_argument("--m", type=int, default=1, help="number of cores (default 1)")
    p.add_argument("--stride", type=int, default=5, help="instructions per memory access (default 5)")
    p.add_argument("--prealloc-depth", type=int, default=1, help="pre-allocation queue depth (default 1)")
    p.add_argument("--comm-costs", action="store_true", help="charge scheduler/memory message energy")
    p.add_argument("--seed", type=int, default=0, help="seed for conflict arbitration (default 0)")
    p.add_argument(
        "--outcome",
        action="append",
        default=[],
        metavar="TASK=SUCCESSOR",
        help="chosen successor of a conditional control task (repeatable)",
    )
    p.add_argument("--check-model", action="store_true", help="append deviations from the closed-form model")
    p.add_argument("--emit-events", action="store_true", help="include the event log in the report")
    p.add_argument("--csv", action="store_true", help="emit the report as one CSV row")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="check a task-graph file (structure, DAG, CREW)")
    p.add_argument("graph", help="task-graph JSON file")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, sys.stdout)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except PluralError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        sys.stderr.write(f"internal error: {exc!r}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
