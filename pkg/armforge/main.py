"""
armforge command-line tool

Usage:
    python -m armforge <command> [options]

Every command writes its result to stdout (JSON by default, CSV with
--format csv) and nothing else. Logs and error reports go to stderr.
Exit codes: 0 success, 1 domain/validation error, 2 usage error.
"""
import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from armforge import __version__, config
from armforge.arm_model import ArmSpec, Pose, default_arm, gruebler_dof, load_arm, mobility, validate_arm
from armforge.control_sim import (Rubric, SimConfig, default_scene, load_scene, run_cycle,
                                  run_session, score_run, trace_frame, trace_from_summary)
from armforge.economics import (annual_revenue, bom_frame, bom_total, budget_check,
                                category_totals, load_bom, unit_price)
from armforge.errors import ArmForgeError, ConfigurationError, ValidationError
from armforge.gripper import GearSpec, VacuumSpec, center_distance, pitch_diameter, vacuum_chain
from armforge.kinematics import (IkOptions, JointState, Workspace, base_interference,
                                 forward_kinematics, inverse_kinematics_report, reachable,
                                 target_annulus_contains, workspace_contains)
from armforge.sensors import (InfraredSpec, UltrasonicSpec, beam_width_at, compare_sensors,
                              distance_grid, run_ranging_experiment)
from armforge.structural import torque_chain
from armforge.trade_study import evaluate, load_matrix, load_qfd, qfd_scores, sensitivity

logger = logging.getLogger("armforge")

MAX_SEED = 2 ** 64 - 1


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    arm_config_path: Optional[Path] = None
    scene_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    seed: int = config.DEFAULT_SEED
    format: OutputFormat = OutputFormat.JSON

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Resolve and check every path before a command runs."""
        arm_path = _existing(getattr(args, "config", None), "arm config")
        scene_path = _existing(getattr(args, "scene", None), "scene")
        output_dir = getattr(args, "output_dir", None)
        return cls(
            arm_config_path=arm_path,
            scene_path=scene_path,
            output_dir=Path(output_dir) if output_dir else None,
            seed=getattr(args, "seed", config.DEFAULT_SEED),
            format=OutputFormat(getattr(args, "format", None) or "json"),
        )

    def arm(self) -> ArmSpec:
        return load_arm(self.arm_config_path) if self.arm_config_path else default_arm()


def _existing(name, what: str) -> Optional[Path]:
    if not name:
        return None
    path = config.resolve_path(name)
    if not path.exists():
        raise ConfigurationError(f"{what} file not found: {name}", path=str(name))
    return path


# ==================== Argument types ====================

def _floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _point(text: str) -> List[float]:
    values = _floats(text)
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got '{text}'")
    return values


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got '{text}'")
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


# ==================== Output ====================

def _clean(obj):
    """JSON-safe copy: Decimal and numpy scalars to float, non-finite to null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (Decimal, np.floating)):
        obj = float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _dumps(payload) -> str:
    return json.dumps(_clean(payload), indent=2)


def _emit(payload, fmt: OutputFormat, frame: Optional[pd.DataFrame] = None):
    if fmt == OutputFormat.CSV:
        if frame is None:
            frame = pd.json_normalize(_clean(payload)) if isinstance(payload, dict) else pd.DataFrame({"value": [payload]})
        sys.stdout.write(frame.to_csv(index=False))
    else:
        sys.stdout.write(_dumps(payload) + "\n")


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    os.replace(tmp, path)


# ==================== Commands ====================

def cmd_dof(args, run: RunConfig) -> int:
    if args.config:
        spec = run.arm()
        _emit(mobility(spec), run.format)
        return 0
    if args.links is None or args.full_joints is None:
        raise ValidationError("dof needs --links and --full-joints (or --config)")
    _emit(gruebler_dof(args.links, args.full_joints, args.half_joints), run.format)
    return 0


def cmd_validate(args, run: RunConfig) -> int:
    report = validate_arm(run.arm())
    _emit(report.to_dict(), run.format,
          pd.DataFrame([v.to_dict() for v in report.violations], columns=["path", "message"]))
    return 0 if report.is_valid else 1


def cmd_fk(args, run: RunConfig) -> int:
    spec = run.arm()
    q = JointState.for_arm(spec, args.angles if args.angles is not None else spec.home_angles())
    pose = forward_kinematics(spec, q)
    _emit({"angles": list(q.angles), **pose.to_dict(), "residual": 0.0, "iters": 0}, run.format)
    return 0


def cmd_ik(args, run: RunConfig) -> int:
    spec = run.arm()
    seed = JointState.for_arm(spec, args.seed_angles or spec.home_angles())
    opts = IkOptions(tol=args.tol, max_iters=args.max_iters, seed=run.seed)
    result = inverse_kinematics_report(spec, Pose(tuple(args.target)), seed, opts)
    pose = forward_kinematics(spec, result.q)
    _emit({**pose.to_dict(), **result.to_dict()}, run.format)
    return 0


def cmd_statics(args, run: RunConfig) -> int:
    spec = run.arm()
    q = JointState.for_arm(spec, args.angles if args.angles is not None else spec.home_angles())
    report = torque_chain(spec, q, args.payload)
    _emit(report.to_dict(), run.format, report.to_frame())
    return 0


def cmd_gripper(args, run: RunConfig) -> int:
    if args.gripper_command == "vacuum":
        spec = VacuumSpec.from_diameters(args.cup_d, args.syringe_d, args.travel, ambient_pressure=args.ambient)
        result = vacuum_chain(spec, physical=args.physical)
        _emit(result.to_dict(), run.format)
    else:
        g1, g2 = GearSpec(args.n1, args.p1), GearSpec(args.n2, args.p2)
        _emit({"pd1": pitch_diameter(g1), "pd2": pitch_diameter(g2),
               "center_distance": center_distance(g1, g2)}, run.format)
    return 0


def _sensor(args):
    if args.sensor == "infrared":
        return InfraredSpec() if args.sigma is None else InfraredSpec(noise_sigma=args.sigma)
    return UltrasonicSpec() if args.sigma is None else UltrasonicSpec(noise_sigma=args.sigma)


def cmd_sense(args, run: RunConfig) -> int:
    if args.sense_command == "sweep":
        distances = distance_grid(args.start, args.stop, args.step)
        table = run_ranging_experiment(_sensor(args), distances, args.material, seed=run.seed, trials=args.trials)
        _emit(table.to_dict(orient="records"), run.format, table)
    elif args.sense_command == "compare":
        distances = distance_grid(args.start, args.stop, args.step)
        table = compare_sensors(args.materials.split(","), distances, seed=run.seed, trials=args.trials)
        _emit(table.to_dict(orient="records"), run.format, table)
    else:
        spec = UltrasonicSpec()
        _emit({"range": args.range, "width": beam_width_at(spec, args.range),
               "half_angle": spec.beam_apex_half_angle}, run.format)
    return 0


def _sim_config(args) -> SimConfig:
    return SimConfig(estop_time=args.estop) if args.estop is not None else SimConfig()


def _simulate_one(arm_path: Optional[str], scene_path: Optional[str], seed: int, dt: float,
                  object_id: Optional[str], estop: Optional[float],
                  output_dir: Optional[str]) -> dict:
    """Run one cycle and optionally persist it. Top level so worker processes can import it."""
    spec = load_arm(arm_path) if arm_path else default_arm()
    scene = load_scene(scene_path) if scene_path else default_scene()
    sim = SimConfig(estop_time=estop) if estop is not None else SimConfig()
    trace = run_cycle(spec, scene.objects, scene.sort_map, dt=dt, seed=seed, sim=sim, object_id=object_id)
    summary = {"seed": seed, "dt": dt, **trace.summary()}
    if output_dir:
        out = Path(output_dir)
        frame = trace_frame(trace, [j.name for j in spec.joints])
        _write_atomic(out / f"trace_seed{seed}.csv", frame.to_csv(index=False))
        _write_atomic(out / f"summary_seed{seed}.json", _dumps(summary) + "\n")
    return summary


def cmd_simulate(args, run: RunConfig) -> int:
    arm_path = str(run.arm_config_path) if run.arm_config_path else None
    scene_path = str(run.scene_path) if run.scene_path else None
    out = str(run.output_dir) if run.output_dir else None

    if args.sweep:
        if not out:
            raise ValidationError("simulate --sweep needs --output-dir")
        seeds = [run.seed + i for i in range(args.sweep)]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [pool.submit(_simulate_one, arm_path, scene_path, s, args.dt, args.object, args.estop, out)
                       for s in seeds]
            summaries = [f.result() for f in futures]
        _emit(summaries, run.format, pd.json_normalize(_clean(summaries)))
        return 0

    if args.session:
        spec = run.arm()
        scene = load_scene(run.scene_path) if run.scene_path else default_scene()
        traces = run_session(spec, scene, dt=args.dt, seed=run.seed, sim=_sim_config(args))
        summaries = [t.summary() for t in traces]
        _emit(summaries, run.format, pd.json_normalize(_clean(summaries)))
        return 0

    if run.format == OutputFormat.CSV:
        spec = run.arm()
        scene = load_scene(run.scene_path) if run.scene_path else default_scene()
        trace = run_cycle(spec, scene.objects, scene.sort_map, dt=args.dt, seed=run.seed,
                          sim=_sim_config(args), object_id=args.object)
        sys.stdout.write(trace_frame(trace, [j.name for j in spec.joints]).to_csv(index=False))
        return 0

    summary = _simulate_one(arm_path, scene_path, run.seed, args.dt, args.object, args.estop, out)
    _emit(summary, run.format)
    return 0


def cmd_score(args, run: RunConfig) -> int:
    directory = Path(args.traces)
    if not directory.is_dir():
        raise ConfigurationError(f"trace directory not found: {args.traces}", path=args.traces)
    traces = []
    for path in sorted(directory.glob("*.json")):
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            for item in data if isinstance(data, list) else [data]:
                traces.append(trace_from_summary(item))
        except (ValueError, ConfigurationError) as e:
            raise ConfigurationError(f"cannot read trace summary {path.name}: {e}", path=str(path))
    if not traces:
        raise ConfigurationError(f"no trace summaries in {args.traces}", path=args.traces)

    total = bom_total(load_bom(args.bom))
    card = score_run(traces, Rubric(cycle_limit=args.cycle_limit, budget_usd=args.budget, bom_total=total))
    _emit(card.to_dict(), run.format)
    return 0


def _table_file(name: str) -> str:
    """Bundled tables can be named by key: materials or materials.json."""
    key = Path(name).stem
    if not Path(name).exists() and key in config.BUNDLED_TABLES:
        return config.BUNDLED_TABLES[key]
    return name


def cmd_matrix(args, run: RunConfig) -> int:
    if args.matrix_command == "qfd":
        data = load_qfd(args.file)
        result = qfd_scores(data["relationships"], data["importance"], data["functional_requirements"])
        frame = pd.DataFrame({"requirement": result.requirements, "score": result.scores})
        _emit(result.to_dict(), run.format, frame.sort_values("score", ascending=False, kind="stable"))
        return 0

    matrix = load_matrix(_table_file(args.file))
    if args.matrix_command == "sensitivity":
        report = sensitivity(matrix, args.criterion, args.delta)
        _emit(report.to_dict(), run.format)
        return 0

    result = evaluate(matrix)
    _emit(result.to_dict(), run.format, result.to_frame(matrix.criterion_names))
    return 0


def cmd_bom(args, run: RunConfig) -> int:
    items = load_bom(args.file)
    total = bom_total(items)
    check = budget_check(total, args.budget)
    price = unit_price(total, args.margin)
    payload = {
        "total": total,
        "passes": check.passes,
        "headroom": check.headroom,
        "unit_price": price,
        "annual_revenue": annual_revenue(price, args.units),
        "categories": {row["category"]: row["cost"] for row in category_totals(items).to_dict(orient="records")},
    }
    _emit(payload, run.format, bom_frame(items))
    return 0


def cmd_workspace(args, run: RunConfig) -> int:
    ws = Workspace(height=args.height) if args.height is not None else Workspace()
    payload = {"workspace": ws.to_dict()}
    if args.point is not None:
        payload.update({
            "point": args.point,
            "in_workspace": workspace_contains(ws, args.point),
            "in_annulus": target_annulus_contains(ws, args.point),
            "base_interference": base_interference(ws, args.point),
            "reachable": reachable(ws, args.point),
        })
    _emit(payload, run.format)
    return 0


# ==================== Parser ====================

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None,
                        help="output format (default json)")
    common.add_argument("--seed", type=_seed, default=config.DEFAULT_SEED,
                        help="random seed, 64-bit unsigned (default %(default)s)")
    common.add_argument("--version", action="version", version=f"armforge {__version__}")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    arm = argparse.ArgumentParser(add_help=False)
    arm.add_argument("--config", help="arm config JSON (default: bundled desk arm)")

    parser = argparse.ArgumentParser(prog="armforge", description="Pick-and-place arm design analysis",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("dof", parents=[common, arm], help="Gruebler mobility")
    p.add_argument("--links", type=int)
    p.add_argument("--full-joints", type=int)
    p.add_argument("--half-joints", type=int, default=0)
    p.set_defaults(handler=cmd_dof)

    p = sub.add_parser("validate", parents=[common, arm], help="check an arm config")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("fk", parents=[common, arm], help="forward kinematics")
    p.add_argument("--angles", type=_floats, help="comma-separated radians (use --angles=-1,2 for negatives)")
    p.set_defaults(handler=cmd_fk)

    p = sub.add_parser("ik", parents=[common, arm], help="inverse kinematics")
    p.add_argument("--target", type=_point, required=True, help="x,y,z in meters")
    p.add_argument("--seed-angles", type=_floats, help="starting angles (default: home pose)")
    p.add_argument("--tol", type=float, default=IkOptions.tol)
    p.add_argument("--max-iters", type=int, default=IkOptions.max_iters)
    p.set_defaults(handler=cmd_ik)

    p = sub.add_parser("statics", parents=[common, arm], help="torque chain and link stress")
    p.add_argument("--angles", type=_floats)
    p.add_argument("--payload", type=float, help="kg (default: payload_mass from the config)")
    p.set_defaults(handler=cmd_statics)

    p = sub.add_parser("gripper", parents=[common], help="gripper physics")
    gsub = p.add_subparsers(dest="gripper_command", metavar="kind", required=True)
    g = gsub.add_parser("vacuum", parents=[common])
    g.add_argument("--cup-d", type=float, default=0.030)
    g.add_argument("--syringe-d", type=float, default=0.020)
    g.add_argument("--travel", type=float, default=0.0476)
    g.add_argument("--ambient", type=float, default=config.ATMOSPHERIC_PRESSURE)
    g.add_argument("--physical", action="store_true", help="force from the pressure differential")
    g = gsub.add_parser("gears", parents=[common])
    g.add_argument("--n1", type=int, required=True)
    g.add_argument("--p1", type=float, required=True)
    g.add_argument("--n2", type=int, required=True)
    g.add_argument("--p2", type=float, required=True)
    p.set_defaults(handler=cmd_gripper)

    p = sub.add_parser("sense", parents=[common], help="simulated range sensing")
    ssub = p.add_subparsers(dest="sense_command", metavar="mode", required=True)
    for name in ("sweep", "compare"):
        s = ssub.add_parser(name, parents=[common])
        s.add_argument("--from", dest="start", type=float, default=0.1)
        s.add_argument("--to", dest="stop", type=float, default=1.0)
        s.add_argument("--step", type=float, default=0.05)
        s.add_argument("--trials", type=int, default=1 if name == "sweep" else 20)
        s.set_defaults(format_default="csv" if name == "sweep" else "json")
    s = ssub.choices["sweep"]
    s.add_argument("--material", default="wood")
    s.add_argument("--sensor", choices=["ultrasonic", "infrared"], default="ultrasonic")
    s.add_argument("--sigma", type=float)
    ssub.choices["compare"].add_argument("--materials", default="wood,metal,rubber")
    s = ssub.add_parser("beam", parents=[common])
    s.add_argument("--range", type=float, required=True)
    p.set_defaults(handler=cmd_sense)

    p = sub.add_parser("simulate", parents=[common, arm], help="pick-and-place cycle")
    p.add_argument("--scene", help="scene JSON (default: bundled scene)")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--object", help="object id (default: first in scene)")
    p.add_argument("--session", action="store_true", help="one cycle per scene object")
    p.add_argument("--estop", type=float, help="inject an emergency stop at this time (s)")
    p.add_argument("--sweep", type=int, default=0, help="run N seeds starting at --seed")
    p.add_argument("--workers", type=int, default=config.WORKERS)
    p.add_argument("--output-dir")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("score", parents=[common], help="score simulated runs")
    p.add_argument("--traces", required=True, help="directory of summary JSON files")
    p.add_argument("--bom", default=config.DEFAULT_BOM_FILE)
    p.add_argument("--budget", default=config.BUDGET_USD)
    p.add_argument("--cycle-limit", type=float, default=config.CYCLE_TIME_LIMIT)
    p.set_defaults(handler=cmd_score)

    p = sub.add_parser("matrix", parents=[common], help="decision matrices and QFD")
    msub = p.add_subparsers(dest="matrix_command", metavar="action", required=True)
    m = msub.add_parser("eval", parents=[common])
    m.add_argument("--file", required=True)
    m = msub.add_parser("sensitivity", parents=[common])
    m.add_argument("--file", required=True)
    m.add_argument("--criterion", required=True)
    m.add_argument("--delta", type=float)
    m = msub.add_parser("qfd", parents=[common])
    m.add_argument("--file", required=True)
    p.set_defaults(handler=cmd_matrix)

    p = sub.add_parser("bom", parents=[common], help="BOM cost and pricing")
    p.add_argument("--file", default=config.DEFAULT_BOM_FILE)
    p.add_argument("--budget", default=config.BUDGET_USD)
    p.add_argument("--margin", default=config.PROFIT_MARGIN)
    p.add_argument("--units", type=int, default=config.UNITS_PER_YEAR)
    p.set_defaults(handler=cmd_bom)

    p = sub.add_parser("workspace", parents=[common], help="workspace membership")
    p.add_argument("--point", type=_point)
    p.add_argument("--height", type=float, help="cylinder height in meters (default unbounded)")
    p.set_defaults(handler=cmd_workspace)

    return parser


_handler: Optional[logging.StreamHandler] = None


def _setup_logging():
    """One stderr handler on the package logger; re-pointed at the current sys.stderr on every call."""
    global _handler
    root = logging.getLogger("armforge")
    if _handler is None:
        _handler = logging.StreamHandler(sys.stderr)
        _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(_handler)
    else:
        _handler.stream = sys.stderr
    root.setLevel(getattr(logging, config.LOG_LEVEL, logging.WARNING))


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run one command; returns the process exit code."""
    _setup_logging()
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if not getattr(args, "handler", None):
        parser.print_usage(sys.stderr)
        return 2
    if args.format is None:
        args.format = getattr(args, "format_default", "json")

    try:
        run = RunConfig.from_args(args)
        return args.handler(args, run)
    except ArmForgeError as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(_dumps({"success": False, "error": e.to_dict()}) + "\n")
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
