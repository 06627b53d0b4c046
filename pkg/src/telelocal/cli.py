"""Command line entry point.

Every command produces a deterministic report (JSON by default, CSV on
request) made of named result rows. Rows that carry an expected value
and tolerance also carry a pass flag; the process exits 0 when all
flagged rows pass, 1 when any fails, 2 on usage errors.

Stochastic rows use a tolerance of four standard errors plus a small
absolute floor that absorbs double precision rounding when an estimator
has vanishing variance. Analytic rows use 1e-9.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bellcheck, classical, hardytoy, lhv, qcore, teleport

SCHEMA_VERSION = 1
ANALYTIC_TOL = 1e-9
STOCHASTIC_NSIGMA = 4.0
ABS_FLOOR = 1e-12
DEFAULT_SAMPLES = 1_000_000
DEFAULT_SEED = 42
DEFAULT_GRID = (0.0, 1.0, 0.01)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha: float | None
    samples: int
    seed: int
    grid: tuple[float, float, float] | None
    output_format: str
    output_path: str | None


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like LO:HI:STEP, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"grid must contain numbers: {text!r}") from exc
    if step <= 0 or hi < lo:
        raise UsageError("grid needs step > 0 and HI >= LO")
    return lo, hi, step


def _grid_points(grid: tuple[float, float, float]) -> np.ndarray:
    lo, hi, step = grid
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _row(name: str, value: float, *, stderr=None, expected=None, tolerance=None, samples=None) -> dict:
    row: dict = {"name": name, "value": float(value)}
    if stderr is not None:
        row["stderr"] = float(stderr)
    if samples is not None:
        row["samples"] = int(samples)
    if expected is not None:
        row["expected"] = float(expected)
        row["tolerance"] = float(tolerance)
        row["pass"] = bool(abs(row["value"] - row["expected"]) <= row["tolerance"])
    return row


def _mc_row(name: str, estimate, expected: float) -> dict:
    return _row(
        name,
        estimate.value,
        stderr=estimate.stderr,
        samples=estimate.samples,
        expected=expected,
        tolerance=STOCHASTIC_NSIGMA * estimate.stderr + ABS_FLOOR,
    )


def _child_seeds(seed: int, n: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n)]


def _report(command: str, cfg: RunConfig, rows: list[dict], reference: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": {
            "alpha": cfg.alpha,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "grid": list(cfg.grid) if cfg.grid else None,
        },
        "results": rows,
        "paper_reference": reference,
    }


def _scan_rows(cfg: RunConfig) -> list[dict]:
    setting = bellcheck.violation_setting()
    grid = _grid_points(cfg.grid if cfg.grid else DEFAULT_GRID)
    scan = bellcheck.threshold_scan(setting, grid)
    rows = [
        _row(
            "threshold_closed_form_root",
            scan.closed_form_root,
            expected=2**-0.5,
            tolerance=ANALYTIC_TOL,
        )
    ]
    if scan.closed_form_root is not None:
        above = grid[grid > scan.closed_form_root]
        expected_first = float(above[0]) if above.size else None
        if scan.first_violation is not None and expected_first is not None:
            rows.append(
                _row(
                    "threshold_first_grid_violation",
                    scan.first_violation,
                    expected=expected_first,
                    tolerance=ANALYTIC_TOL,
                )
            )
    return rows


def cmd_scan(cfg: RunConfig) -> dict:
    return _report(
        "scan",
        cfg,
        _scan_rows(cfg),
        "nonlocality threshold of the singlet-fraction family: violation for alpha above 1/sqrt(2)",
    )


def cmd_teleport(cfg: RunConfig) -> dict:
    alpha = 0.5 if cfg.alpha is None else cfg.alpha
    if not 0.0 <= alpha <= 1.0:
        raise UsageError("alpha must lie in [0, 1]")
    est = teleport.average_fidelity(qcore.werner_alpha(alpha), cfg.samples, cfg.seed)
    rows = [_mc_row("teleport_fidelity", est, (1 + alpha) / 2)]
    return _report(
        "teleport",
        cfg,
        rows,
        "average teleportation fidelity (1 + alpha)/2 on the singlet-fraction family",
    )


def cmd_lhv(cfg: RunConfig) -> dict:
    alpha = 0.5 if cfg.alpha is None else cfg.alpha
    if not 0.0 <= alpha <= 0.5:
        raise UsageError("the hidden variable model covers alpha in [0, 1/2]")
    setting = bellcheck.violation_setting()
    grouping = bellcheck.OutcomeGrouping()
    result = lhv.lhv_teleport_experiment(
        setting, grouping, lhv.LhvConfig(samples=cfg.samples, seed=cfg.seed), alpha=alpha
    )
    expected = bellcheck.closed_form_value(alpha, setting)
    rows = [
        _row(
            "lhv_ch_value",
            result.value,
            stderr=result.stderr,
            samples=cfg.samples,
            expected=expected,
            tolerance=STOCHASTIC_NSIGMA * result.stderr + ABS_FLOOR,
        ),
        _row(
            "lhv_ch_in_unit_interval",
            result.value,
            expected=min(max(result.value, 0.0), 1.0),
            tolerance=STOCHASTIC_NSIGMA * result.stderr + ABS_FLOOR,
        ),
    ]
    return _report(
        "lhv",
        cfg,
        rows,
        "hidden variable simulation of the teleportation test at the simulable fraction",
    )


def cmd_hardy(cfg: RunConfig) -> dict:
    report = hardytoy.exhaustive_verify()
    rows = [
        _row("hardy_successes", report.successes, expected=report.total, tolerance=0.0),
        _row("hardy_partition_ok", float(report.partition_ok), expected=1.0, tolerance=0.0),
        _row("hardy_message_map_ok", float(report.message_map_ok), expected=1.0, tolerance=0.0),
    ]
    return _report(
        "hardy",
        cfg,
        rows,
        "exact teleportation of one of four hidden values using a two-bit message",
    )


def cmd_gisin(cfg: RunConfig) -> dict:
    seeds = _child_seeds(cfg.seed, 2)
    analytic = classical.gisin_fidelity_analytic()
    rows = [
        _row("gisin_fidelity_analytic", analytic, expected=analytic, tolerance=ANALYTIC_TOL),
        _mc_row("gisin_fidelity_mc", classical.gisin_scheme_fidelity(cfg.samples, seeds[0]), analytic),
        _mc_row("z_scheme_fidelity", classical.z_scheme_fidelity(cfg.samples, seeds[1]), 2 / 3),
    ]
    return _report(
        "gisin",
        cfg,
        rows,
        "classical measure-and-prepare baselines: 2/3 for the z scheme, about 0.8724 for the tetrahedron scheme",
    )


def cmd_reproduce(cfg: RunConfig) -> dict:
    setting = bellcheck.violation_setting()
    grouping = bellcheck.OutcomeGrouping()
    seeds = _child_seeds(cfg.seed, 5)
    rows = [
        _row(
            "singlet_ch_value",
            bellcheck.teleport_ch_value(setting, grouping, qcore.singlet_projector()),
            expected=(1 - math.sqrt(2)) / 2,
            tolerance=ANALYTIC_TOL,
        )
    ]
    rows.extend(_scan_rows(cfg))
    rows.append(
        _mc_row(
            "teleport_fidelity_alpha_half",
            teleport.average_fidelity(qcore.werner_alpha(0.5), cfg.samples, seeds[0]),
            0.75,
        )
    )
    threshold = 2**-0.5
    rows.append(
        _mc_row(
            "teleport_fidelity_alpha_threshold",
            teleport.average_fidelity(qcore.werner_alpha(threshold), cfg.samples, seeds[1]),
            (1 + threshold) / 2,
        )
    )
    rows.append(_mc_row("z_scheme_fidelity", classical.z_scheme_fidelity(cfg.samples, seeds[2]), 2 / 3))
    analytic = classical.gisin_fidelity_analytic()
    rows.append(_row("gisin_fidelity_analytic", analytic, expected=analytic, tolerance=ANALYTIC_TOL))
    rows.append(_mc_row("gisin_fidelity_mc", classical.gisin_scheme_fidelity(cfg.samples, seeds[3]), analytic))

    toy = hardytoy.exhaustive_verify()
    rows.append(_row("hardy_successes", toy.successes, expected=toy.total, tolerance=0.0))

    result = lhv.lhv_teleport_experiment(
        setting, grouping, lhv.LhvConfig(samples=cfg.samples, seed=seeds[4])
    )
    rows.append(
        _row(
            "lhv_ch_value",
            result.value,
            stderr=result.stderr,
            samples=cfg.samples,
            expected=(2 - math.sqrt(2)) / 4,
            tolerance=STOCHASTIC_NSIGMA * result.stderr + ABS_FLOOR,
        )
    )
    oracle = bellcheck.probability_table(setting, grouping, qcore.werner_alpha(0.5)).joints
    deviation = np.abs(result.table.joints - oracle)
    worst = np.unravel_index(np.argmax(deviation), deviation.shape)
    cell_ok = deviation <= STOCHASTIC_NSIGMA * result.table.stderr + ABS_FLOOR
    worst_row = _row(
        "lhv_max_cell_deviation",
        float(deviation[worst]),
        stderr=float(result.table.stderr[worst]),
        samples=cfg.samples,
        expected=0.0,
        tolerance=float(STOCHASTIC_NSIGMA * result.table.stderr[worst] + ABS_FLOOR),
    )
    worst_row["pass"] = bool(cell_ok.all())
    rows.append(worst_row)
    return _report(
        "reproduce",
        cfg,
        rows,
        "headline checks: singlet CH value (1 - sqrt(2))/2, threshold 1/sqrt(2), "
        "fidelity (1 + alpha)/2, classical baselines 2/3 and 0.8724, exact toy protocol, "
        "hidden variable agreement at alpha = 1/2",
    )


_COMMANDS = {
    "reproduce": cmd_reproduce,
    "scan": cmd_scan,
    "lhv": cmd_lhv,
    "hardy": cmd_hardy,
    "gisin": cmd_gisin,
    "teleport": cmd_teleport,
}


def _emit_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _emit_csv(report: dict) -> str:
    lines = ["name,value,stderr,expected,tolerance,pass"]
    for row in report["results"]:
        cells = [
            row["name"],
            repr(row["value"]),
            repr(row["stderr"]) if "stderr" in row else "",
            repr(row["expected"]) if "expected" in row else "",
            repr(row["tolerance"]) if "tolerance" in row else "",
            "true" if row.get("pass") else ("false" if "pass" in row else ""),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _all_pass(report: dict) -> bool:
    return all(row["pass"] for row in report["results"] if "pass" in row)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telelocal",
        description="Teleportation statistics, Bell-type tests, and local hidden variable baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("reproduce", "run every headline check"),
        ("scan", "scan the CH value over the singlet fraction"),
        ("lhv", "hidden variable simulation of the teleportation test"),
        ("hardy", "verify the exact four-state toy protocol"),
        ("gisin", "classical measure-and-prepare baselines"),
        ("teleport", "Monte Carlo average teleportation fidelity"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--alpha", type=float, default=None, help="singlet fraction")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo samples")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
        p.add_argument("--grid", type=str, default=None, help="alpha grid LO:HI:STEP")
        p.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
        p.add_argument("--out", type=str, default=None, help="write the report to this path")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.samples < 1:
            raise UsageError("samples must be >= 1")
        cfg = RunConfig(
            command=args.command,
            alpha=args.alpha,
            samples=args.samples,
            seed=args.seed,
            grid=_parse_grid(args.grid) if args.grid else None,
            output_format=args.output_format,
            output_path=args.out,
        )
        report = _COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _emit_json(report) if cfg.output_format == "json" else _emit_csv(report)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0 if _all_pass(report) else 1


if __name__ == "__main__":
    raise SystemExit(main())
