"""Command-line interface: solve, fidelity, sweep, and compare.

Every command is a pure function of its inputs (config file, flags,
seed), so reruns produce byte-identical artifacts; the run manifest,
which carries the wall-clock timestamp, is the single exception.  The
manifest is written before any other output file so a crashed run can
never leave outputs without their provenance stamp.

Exit codes: 0 success, 2 input or configuration error, 3 numerical
failure (non-convergent solve).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, config_hash, load_config
from .fidelity import DEFAULT_SAMPLES, DEFAULT_SEED, audit_notes, run_fidelity_audit
from .metrics import MotorDataError, comparison_table, load_motor_records
from .motor import OperatingPoint, regime_check, reluctances_from_geometry
from .saturation import BhCurve, NonConvergenceError, solve_nonlinear
from .torque import TorqueCurve, torque_angle_sweep

logger = logging.getLogger("srmec.cli")

# Round-trip float serialization: 17 significant digits reproduce the
# exact binary value, keeping reruns byte-identical.
FLOAT_FORMAT = "{:.17g}"

MANIFEST_NAME = "manifest.json"
FIDELITY_CSV = "fidelity.csv"
FIDELITY_NOTES = "fidelity_notes.txt"
SUMMARY_CSV = "torque_summary.csv"
COMPARISON_CSV = "comparison.csv"
SOLVE_RECORD = "solve_record.txt"


def _fmt(value: float) -> str:
    return FLOAT_FORMAT.format(float(value))


@dataclass(frozen=True)
class RunManifest:
    """Provenance stamp for one command invocation."""

    tool_version: str
    config_hash: str
    timestamp: str
    command: str
    outputs: tuple[str, ...]

    def to_json(self) -> str:
        payload = {
            "tool_version": self.tool_version,
            "config_hash": self.config_hash,
            "timestamp": self.timestamp,
            "command": self.command,
            "outputs": list(self.outputs),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_manifest(out_dir: Path, command: str, digest: str, outputs: tuple[str, ...]) -> Path:
    """Write manifest.json first, before any listed output exists."""
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        tool_version=__version__,
        config_hash=digest,
        timestamp=datetime.now(timezone.utc).isoformat(),
        command=command,
        outputs=outputs,
    )
    path = out_dir / MANIFEST_NAME
    path.write_text(manifest.to_json(), encoding="utf-8", newline="\n")
    return path


def _write_text(out_dir: Path, name: str, text: str) -> None:
    (out_dir / name).write_text(text, encoding="utf-8", newline="\n")


def solve_record_text(config: RunConfig, current: float, angle_deg: float) -> str:
    """Flat key = value record of one saturating solve."""
    curve = BhCurve.default()
    point = OperatingPoint(phase_current=current, rotor_angle=angle_deg)
    solution = solve_nonlinear(
        config.geometry, config.materials, curve, point, config=config.solver
    )
    report = regime_check(reluctances_from_geometry(config.geometry, config.materials, angle_deg))
    lines = [
        f"current_a = {_fmt(current)}",
        f"rotor_angle_deg = {_fmt(angle_deg)}",
        f"iterations = {solution.iterations}",
        f"residual = {_fmt(solution.residual)}",
    ]
    for label, vector in (
        ("mesh_flux", solution.mesh_fluxes),
        ("coil_mesh_flux", solution.coil_mesh_fluxes),
        ("pm_mesh_flux", solution.pm_mesh_fluxes),
    ):
        lines.extend(f"{label}_{k + 1}_wb = {_fmt(vector[k])}" for k in range(len(vector)))
    for label, branches in (
        ("branch", solution.branches),
        ("coil_branch", solution.coil_branches),
        ("pm_branch", solution.pm_branches),
    ):
        lines.append(f"{label}_yoke_wb = {_fmt(branches.phi_sy)}")
        lines.append(f"{label}_pole_wb = {_fmt(branches.phi_sp)}")
        lines.append(f"{label}_gap_wb = {_fmt(branches.phi_g)}")
    for element, density in sorted((solution.flux_densities or {}).items()):
        lines.append(f"flux_density_{element}_t = {_fmt(density)}")
    for name, ratio in sorted(report.ratios.items()):
        lines.append(f"regime_{name} = {_fmt(ratio)}")
    lines.append(f"regime_all_pass = {str(report.all_pass).lower()}")
    return "\n".join(lines) + "\n"


def cmd_solve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    angle = args.angle if args.angle is not None else config.geometry.aligned_angle_deg
    if args.out is not None:
        write_manifest(args.out, "solve", config_hash(config), (SOLVE_RECORD,))
    record = solve_record_text(config, args.current, angle)
    if args.out is not None:
        _write_text(args.out, SOLVE_RECORD, record)
    sys.stdout.write(record)
    return 0


def fidelity_csv_text(rows) -> str:
    lines = ["equation,max_rel_dev,median_rel_dev,n_samples,seed"]
    lines.extend(
        f"{row.equation},{_fmt(row.max_rel_dev)},{_fmt(row.median_rel_dev)},"
        f"{row.n_samples},{row.seed}"
        for row in rows
    )
    return "\n".join(lines) + "\n"


def cmd_fidelity(args: argparse.Namespace) -> int:
    if args.samples < 1:
        raise ConfigError("--samples must be >= 1")
    config = load_config(args.config)
    write_manifest(args.out, "fidelity", config_hash(config), (FIDELITY_CSV, FIDELITY_NOTES))
    rows = run_fidelity_audit(n_samples=args.samples, seed=args.seed)
    notes = audit_notes(rows)
    _write_text(args.out, FIDELITY_CSV, fidelity_csv_text(rows))
    _write_text(args.out, FIDELITY_NOTES, notes)
    sys.stdout.write(notes)
    return 0


def torque_curve_csv_text(total: TorqueCurve, coil: TorqueCurve) -> str:
    lines = ["angle_deg,torque_nm,torque_coil_nm,torque_pm_nm"]
    for k in range(total.angles.size):
        torque = float(total.samples[k])
        coil_part = float(coil.samples[k])
        lines.append(
            f"{_fmt(total.angles[k])},{_fmt(torque)},{_fmt(coil_part)},{_fmt(torque - coil_part)}"
        )
    return "\n".join(lines) + "\n"


def _curve_file_name(current: float) -> str:
    return f"torque_curve_{current:g}A.csv"


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    curve = BhCurve.default()
    outputs = tuple(_curve_file_name(i) for i in config.sweep_currents) + (SUMMARY_CSV,)
    write_manifest(args.out, "sweep", config_hash(config), outputs)
    no_pm = replace(config.materials, pm_remanence=0.0, pm_coercivity=0.0)
    summary = ["current_a,mean_torque_nm,peak_torque_nm"]
    for current in config.sweep_currents:
        kwargs = dict(
            current_points=config.current_points,
            angle_step_deg=config.angle_step_deg,
            config=config.solver,
        )
        total = torque_angle_sweep(config.geometry, config.materials, curve, current, **kwargs)
        coil = torque_angle_sweep(config.geometry, no_pm, curve, current, **kwargs)
        _write_text(args.out, _curve_file_name(current), torque_curve_csv_text(total, coil))
        summary.append(
            f"{_fmt(current)},{_fmt(total.stroke_mean_torque)},{_fmt(total.peak_torque)}"
        )
        logger.info(
            "current %g A: stroke mean %.4f N*m, peak %.4f N*m",
            current,
            total.stroke_mean_torque,
            total.peak_torque,
        )
    _write_text(args.out, SUMMARY_CSV, "\n".join(summary) + "\n")
    sys.stdout.write("\n".join(summary) + "\n")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    records = load_motor_records(args.motors)
    table = comparison_table(records, baseline=args.baseline, full_precision=args.full_precision)
    write_manifest(args.out, "compare", "none", (COMPARISON_CSV,))
    _write_text(args.out, COMPARISON_CSV, table)
    sys.stdout.write(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srmec",
        description="Magnetic-circuit analysis toolkit for a hybrid-excited "
        "multi-tooth switched reluctance motor.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="saturating flux solve at one operating point")
    solve.add_argument("--config", type=Path, default=None, help="run configuration file")
    solve.add_argument("--current", type=float, default=8.0, help="phase current, A (default 8)")
    solve.add_argument(
        "--angle", type=float, default=None, help="rotor angle, deg (default: aligned position)"
    )
    solve.add_argument("--out", type=Path, default=None, help="also write the record here")
    solve.set_defaults(func=cmd_solve)

    fidelity = commands.add_parser(
        "fidelity", help="audit the closed-form flux expressions against the exact oracle"
    )
    fidelity.add_argument("--config", type=Path, default=None, help="run configuration file")
    fidelity.add_argument(
        "--samples", type=int, default=DEFAULT_SAMPLES, help="regime-valid samples per row"
    )
    fidelity.add_argument("--seed", type=int, default=DEFAULT_SEED, help="sampling seed")
    fidelity.add_argument(
        "--out", type=Path, default=Path("."), help="directory for report and notes"
    )
    fidelity.set_defaults(func=cmd_fidelity)

    sweep = commands.add_parser("sweep", help="torque-angle sweeps over the configured currents")
    sweep.add_argument("--config", type=Path, default=None, help="run configuration file")
    sweep.add_argument("--out", type=Path, default=Path("."), help="directory for the CSVs")
    sweep.set_defaults(func=cmd_sweep)

    compare = commands.add_parser("compare", help="torque-density comparison across motors")
    compare.add_argument(
        "--motors", type=Path, default=None, help="motors CSV (default: bundled records)"
    )
    compare.add_argument(
        "--baseline", type=str, default=None, help="baseline motor name (default: first row)"
    )
    compare.add_argument(
        "--full-precision", action="store_true", help="17-significant-digit output"
    )
    compare.add_argument("--out", type=Path, default=Path("."), help="directory for the CSV")
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, MotorDataError) as error:
        print(f"srmec: error: {error}", file=sys.stderr)
        return 2
    except NonConvergenceError as error:
        print(f"srmec: solve failed: {error}", file=sys.stderr)
        return 3
    except ValueError as error:
        print(f"srmec: error: {error}", file=sys.stderr)
        return 2
    except OSError as error:
        print(f"srmec: error: {error}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())
