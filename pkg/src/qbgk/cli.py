"""Command-line drivers: solve, sweep, check, constants.

Outputs are plain CSV (17 significant digits, fixed column order) plus a
report.json mirroring every scalar, so downstream plotting never needs
binary formats.  Exit code 0 means converged with zero solution-set
violations; any failure names its stage on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .config import SolverConfig, parse_config
from .errors import QbgkError
from .fixed_point import LambdaViolationError, contraction_estimate, picard_solve
from .phase_grid import build_grid
from .theorem_check import boundary_constants, check_main_assumptions

_FMT = "%.17g"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _FMT % float(v)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _out_dir(config: SolverConfig) -> Path:
    d = Path(os.environ.get("QBGK_OUTPUT_DIR", config.output_dir))
    d.mkdir(parents=True, exist_ok=True)
    return d


def _load_config(path: str) -> SolverConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _fail(stage: str, message: str, code: int) -> int:
    print(f"FAILED at stage: {stage}: {message}", file=sys.stderr)
    return code


def _assumption_payload(report) -> dict:
    return {
        "all_passed": report.all_passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "margin": c.margin, "detail": c.detail}
            for c in report.checks
        ],
        "constants": dataclasses.asdict(report.constants),
    }


def run_check(config: SolverConfig) -> int:
    grid = build_grid(config.grid_spec())
    boundary = config.build_boundary(grid)
    report = check_main_assumptions(
        boundary, config.tau, config.statistics, grid=grid
    )
    payload = _assumption_payload(report)
    print(json.dumps(payload, indent=2))
    if not report.all_passed:
        failing = [c.name for c in report.checks if not c.passed]
        return _fail("assumptions", "failed: " + ", ".join(failing), 3)
    return 0


def run_constants(config: SolverConfig) -> int:
    grid = build_grid(config.grid_spec())
    boundary = config.build_boundary(grid)
    tc = boundary_constants(boundary, config.tau, config.statistics, grid=grid)
    print(json.dumps(dataclasses.asdict(tc), indent=2))
    return 0


def run_solve(config: SolverConfig) -> int:
    out = _out_dir(config)
    grid = build_grid(config.grid_spec())
    boundary = config.build_boundary(grid)

    assumptions = check_main_assumptions(
        boundary, config.tau, config.statistics, grid=grid
    )
    if not assumptions.all_passed:
        failing = [c.name for c in assumptions.checks if not c.passed]
        return _fail("assumptions", "failed: " + ", ".join(failing), 3)
    tc = assumptions.constants

    try:
        report = picard_solve(
            boundary, config.tau, grid, config.statistics,
            tol=config.tolerance, max_iters=config.max_iters,
            lambda_policy=config.lambda_policy, tc=tc,
        )
    except LambdaViolationError as exc:
        return _fail("solve", str(exc), 4)
    except QbgkError as exc:
        return _fail("solve", str(exc), 4)

    contraction = contraction_estimate(
        boundary, config.tau, grid, config.statistics,
        probe_count=config.probe_count, seed=config.seed, tc=tc,
    )

    prof = report.profiles
    _write_csv(
        out / "profiles.csv",
        ["x", "N", "P1", "P2", "P3", "E", "a", "c"],
        (
            (prof["x"][i], prof["N"][i], prof["P"][i][0], prof["P"][i][1],
             prof["P"][i][2], prof["E"][i], prof["a"][i], prof["c"][i])
            for i in range(prof["x"].size)
        ),
    )
    _write_csv(
        out / "convergence.csv",
        ["iteration", "distance", "margin_A", "margin_B", "margin_C"],
        (
            (i + 1, report.distance_history[i], *report.margin_history[i + 1])
            for i in range(len(report.distance_history))
        ),
    )
    summary = {
        "converged": report.converged,
        "iterations": report.iterations,
        "final_distance": report.final_distance,
        "contraction_estimate": contraction,
        "lambda_violations": [
            {"iteration": it, "condition": name, "margin": margin}
            for it, name, margin in report.lambda_violations
        ],
        "assumptions": _assumption_payload(assumptions),
        "tau": config.tau,
        "statistics": config.statistics.value,
        "seed": config.seed,
    }
    (out / "report.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )

    if not report.converged or report.lambda_violations:
        return _fail(
            "solve",
            f"converged={report.converged} violations={len(report.lambda_violations)}",
            4,
        )
    return 0


def run_sweep(config: SolverConfig, tau_list: list[float]) -> int:
    if not tau_list:
        return _fail("config", "sweep requires a non-empty tau list", 2)
    if any(t <= 0 for t in tau_list) or sorted(tau_list) != list(tau_list):
        return _fail("config", "tau list must be positive and ascending", 2)
    out = _out_dir(config)
    grid = build_grid(config.grid_spec())
    boundary = config.build_boundary(grid)

    rows = []
    for tau in tau_list:
        try:
            tc = boundary_constants(boundary, tau, config.statistics, grid=grid)
            contraction = contraction_estimate(
                boundary, tau, grid, config.statistics,
                probe_count=config.probe_count, seed=config.seed, tc=tc,
            )
            report = picard_solve(
                boundary, tau, grid, config.statistics,
                tol=config.tolerance, max_iters=config.max_iters,
                lambda_policy=config.lambda_policy, tc=tc,
            )
            transverse = float(
                np.max(np.abs(report.profiles["P"][:, 1]) + np.abs(report.profiles["P"][:, 2]))
            )
            rows.append((
                tau, contraction, report.converged, report.iterations,
                transverse, contraction * tau / (math.log(tau) + 1.0),
            ))
        except QbgkError as exc:
            print(f"tau={tau}: failed: {exc}", file=sys.stderr)
            rows.append((tau, math.nan, False, 0, math.nan, math.nan))
    _write_csv(
        out / "sweep.csv",
        ["tau", "contraction_estimate", "converged", "iterations",
         "max_transverse_momentum", "scaled_contraction"],
        rows,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qbgk",
        description="Stationary quantum BGK slab solver (bosons and fermions).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, hlp in (
        ("solve", "run the Picard solve and write profiles/convergence/report"),
        ("check", "verify the admissibility assumptions only"),
        ("constants", "print the boundary-data constants"),
        ("sweep", "run solves over a list of tau values"),
    ):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("config", help="path to TOML config file")
        if name == "sweep":
            p.add_argument("--tau", nargs="+", type=float, required=True,
                           help="ascending list of tau values")
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config)
    except FileNotFoundError as exc:
        return _fail("config", str(exc), 2)
    except QbgkError as exc:
        return _fail("config", str(exc), 2)

    try:
        if args.command == "solve":
            return run_solve(config)
        if args.command == "check":
            return run_check(config)
        if args.command == "constants":
            return run_constants(config)
        return run_sweep(config, list(args.tau))
    except QbgkError as exc:
        return _fail(args.command, str(exc), 4)


if __name__ == "__main__":
    sys.exit(main())
