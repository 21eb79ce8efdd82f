"""Command-line front end: run / sweep / validate with CSV and JSON output."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from .ghz import (MAX_QUBITS_EXACT, MAX_QUBITS_FAST, GhzDiagonalEnsemble,
                  build_binary_ensemble, build_bitflip_ensemble, build_werner,
                  canonical_label)
from .optics import DiscriminationMode, ModeKind
from .purify import StepKind, correction_for_outcome
from .schedule import Schedule, ScheduleTrace, run_schedule, sweep
from .validation import run_validation

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_VALIDATION = 4

TRACE_COLUMNS = ("round", "step", "fidelity", "keep_probability", "cumulative_yield")
SWEEP_COLUMNS = ("value", "initial_fidelity", "rounds", "final_fidelity",
                 "cumulative_yield", "converged")

_DEFAULT_CONFIG = {
    "n_qubits": 3,
    "initial": {"type": "werner", "x": 0.8},
    "schedule": ["P1", "P2"],
    "mode": "even-only",
    "theta": math.pi,
    "epsilon": 0.0,
    "engine": "fast",
    "seed": 1,
    "stop": {"threshold": 0.99},
}

_KNOWN_KEYS = set(_DEFAULT_CONFIG) | {"grid"}


class ConfigError(Exception):
    pass


def _fmt(value: float) -> str:
    return format(value, ".17g")


def load_config(path: str | None, overrides: dict) -> dict:
    config = dict(_DEFAULT_CONFIG)
    if path is not None:
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except OSError as err:
            raise ConfigError(f"cannot read config file: {err}")
        except json.JSONDecodeError as err:
            raise ConfigError(f"config is not valid JSON (line {err.lineno}): {err.msg}")
        if not isinstance(loaded, dict):
            raise ConfigError("config root must be a JSON object")
        unknown = set(loaded) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        config.update(loaded)
    config.update({k: v for k, v in overrides.items() if v is not None})
    return config


def build_initial(config: dict) -> GhzDiagonalEnsemble:
    n = config["n_qubits"]
    init = config["initial"]
    if not isinstance(init, dict) or "type" not in init:
        raise ConfigError("field 'initial' must be an object with a 'type'")
    kind = init["type"]
    try:
        if kind == "werner":
            return build_werner(float(init["x"]), n)
        if kind == "binary":
            rep = init.get("error_rep", "1" + "0" * (n - 1))
            sign = int(init.get("error_sign", 1))
            return build_binary_ensemble(float(init["F"]),
                                         canonical_label(rep, sign), n)
        if kind == "bitflip":
            return build_bitflip_ensemble([float(w) for w in init["weights"]], n)
    except (KeyError, ValueError) as err:
        raise ConfigError(f"field 'initial': {err}")
    raise ConfigError(f"initial.type must be werner|binary|bitflip, got {kind!r}")


def build_schedule(config: dict) -> Schedule:
    try:
        steps = tuple(StepKind(s) for s in config["schedule"])
    except ValueError as err:
        raise ConfigError(f"field 'schedule': {err}")
    try:
        mode = DiscriminationMode(ModeKind(config["mode"]),
                                  float(config["epsilon"]),
                                  float(config["theta"]))
    except ValueError as err:
        raise ConfigError(f"field 'mode'/'theta'/'epsilon': {err}")
    stop = config["stop"]
    if not isinstance(stop, dict) or set(stop) not in ({"rounds"}, {"threshold"}):
        raise ConfigError("field 'stop' must be {\"rounds\": k} or {\"threshold\": f}")
    try:
        return Schedule(steps, mode,
                        stop_rounds=stop.get("rounds"),
                        stop_threshold=stop.get("threshold"))
    except ValueError as err:
        raise ConfigError(f"field 'stop'/'schedule': {err}")


def _check_bounds(config: dict):
    n = config["n_qubits"]
    if not isinstance(n, int) or n < 2:
        raise ConfigError("n_qubits must be an integer >= 2")
    if config["engine"] not in ("fast", "exact"):
        raise ConfigError("engine must be 'fast' or 'exact'")
    limit = MAX_QUBITS_EXACT if config["engine"] == "exact" else MAX_QUBITS_FAST
    if n > limit:
        raise ConfigError(f"n_qubits={n} exceeds the {config['engine']}-engine "
                          f"bound of {limit}")


def _outdir(args) -> Path:
    path = Path(args.outdir or os.environ.get("GHZPURIFY_OUTDIR") or ".")
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_trace_csv(path: Path, trace: ScheduleTrace):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec in trace.rounds:
            writer.writerow([rec.round_index, rec.step, _fmt(rec.fidelity),
                             _fmt(rec.keep_probability), _fmt(rec.cumulative_yield)])


def write_summary_json(path: Path, config: dict, trace: ScheduleTrace):
    summary = {
        "config": config,
        "rounds": trace.n_rounds,
        "final_fidelity": trace.final_fidelity,
        "cumulative_yield": trace.cumulative_yield,
        "converged": trace.converged,
    }
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _common_flags(parser):
    parser.add_argument("--config", help="JSON scenario file")
    parser.add_argument("--outdir", help="output directory "
                        "(default: $GHZPURIFY_OUTDIR or cwd)")
    parser.add_argument("--n", type=int, dest="n_qubits")
    parser.add_argument("--schedule", help="comma-separated steps, e.g. P1,P2")
    parser.add_argument("--mode", choices=[m.value for m in ModeKind])
    parser.add_argument("--theta", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--engine", choices=["fast", "exact"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threshold", type=float)
    parser.add_argument("--rounds", type=int)
    parser.add_argument("--x", type=float, help="Werner parameter")
    parser.add_argument("--F", type=float, help="binary-ensemble fidelity")


def _overrides_from(args) -> dict:
    overrides = {k: getattr(args, k) for k in
                 ("n_qubits", "mode", "theta", "epsilon", "engine", "seed")}
    if args.schedule is not None:
        overrides["schedule"] = args.schedule.split(",")
    if args.threshold is not None:
        overrides["stop"] = {"threshold": args.threshold}
    elif args.rounds is not None:
        overrides["stop"] = {"rounds": args.rounds}
    if args.x is not None:
        overrides["initial"] = {"type": "werner", "x": args.x}
    elif args.F is not None:
        overrides["initial"] = {"type": "binary", "F": args.F}
    return overrides


def _parse_grid(text: str) -> list[float]:
    # Either "start:stop:step" or a comma-separated list.
    if ":" in text:
        start, stop, step = (float(p) for p in text.split(":"))
        values, v = [], start
        while v <= stop + 1e-12:
            values.append(round(v, 12))
            v += step
        return values
    return [float(p) for p in text.split(",")]


def cmd_run(args) -> int:
    config = load_config(args.config, _overrides_from(args))
    _check_bounds(config)
    initial = build_initial(config)
    sched = build_schedule(config)
    trace = run_schedule(initial, sched, config["engine"])
    outdir = _outdir(args)
    write_trace_csv(outdir / "trace.csv", trace)
    write_summary_json(outdir / "summary.json", config, trace)
    print(f"rounds={trace.n_rounds} final_fidelity={_fmt(trace.final_fidelity)} "
          f"cumulative_yield={_fmt(trace.cumulative_yield)} "
          f"converged={trace.converged}")
    return EXIT_OK if trace.converged else EXIT_NO_CONVERGENCE


def cmd_sweep(args) -> int:
    overrides = _overrides_from(args)
    if args.grid is not None:
        try:
            values = _parse_grid(args.grid)
        except ValueError:
            raise ConfigError(f"cannot parse grid {args.grid!r}")
        overrides["grid"] = {"param": args.param, "values": values}
    config = load_config(args.config, overrides)
    _check_bounds(config)
    grid = config.get("grid")
    if not isinstance(grid, dict) or not grid.get("values"):
        raise ConfigError("sweep needs a nonempty grid "
                          "({\"param\": \"x\"|\"F\", \"values\": [...]})")
    sched = build_schedule(config)
    try:
        rows = sweep(grid["param"], grid["values"], config["n_qubits"], sched,
                     config["engine"])
    except ValueError as err:
        raise ConfigError(str(err))
    outdir = _outdir(args)
    with open(outdir / "sweep.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.value), _fmt(row.initial_fidelity),
                             row.rounds, _fmt(row.final_fidelity),
                             _fmt(row.cumulative_yield), row.converged])
    for row in rows:
        print(f"value={row.value:g} initial={row.initial_fidelity:.6f} "
              f"rounds={row.rounds} final={row.final_fidelity:.6f} "
              f"converged={row.converged}")
    return EXIT_OK


def _corrupt_p2_correction(step: StepKind, outcome: str):
    if step is StepKind.P2 and outcome.count("1"):
        return (0,)  # wrong pattern: ignores which qubits the outcome flags
    return correction_for_outcome(step, outcome)


def cmd_validate(args) -> int:
    if args.n_max > MAX_QUBITS_EXACT:
        raise ConfigError(f"--n-max is bounded at {MAX_QUBITS_EXACT}")
    correction = _corrupt_p2_correction if args.inject_corrupt_p2 \
        else correction_for_outcome
    results = run_validation(args.n_max, args.seed, args.cases,
                             p2_correction=correction)
    failed = False
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        extra = f" ({res.detail})" if res.detail else ""
        print(f"{status} {res.name} max_deviation={res.max_deviation:.3e}{extra}")
        failed |= not res.passed
    return EXIT_VALIDATION if failed else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzpurify",
        description="Simulate QND-based purification of N-qubit GHZ ensembles")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one purification schedule")
    _common_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a schedule over a parameter grid")
    _common_flags(p_sweep)
    p_sweep.add_argument("--param", choices=["x", "F"], default="x")
    p_sweep.add_argument("--grid", help="start:stop:step or comma-separated values")
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the self-validation suite")
    p_val.add_argument("--n-max", type=int, default=4, dest="n_max")
    p_val.add_argument("--seed", type=int, default=7)
    p_val.add_argument("--cases", type=int, default=50)
    p_val.add_argument("--inject-corrupt-p2", action="store_true",
                       help=argparse.SUPPRESS)  # fault-injection test hook
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
