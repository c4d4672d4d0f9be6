"""
Master Study Runner -- armforge design studies
Runs every design study for the desk arm in order:
  1. Mobility            (Gruebler count)
  2. Component selection (decision matrices + weight sensitivity)
  3. Statics             (torque chain at full extension)
  4. Vacuum gripper      (as-written and physical force)
  5. Range sensing       (ultrasonic vs infrared)
  6. Workspace           (reach radius, bin placement)
  7. Pick-and-place      (simulated session + rubric score)
  8. Economics           (BOM, budget, pricing)

Usage:
    python studies/run_all.py [--skip-simulation]

Results are saved to studies/study_logs/study_results.json
"""
import argparse
import json
import sys
import time
import traceback
from datetime import datetime
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

from armforge import config
from armforge.arm_model import default_arm, gruebler_dof, mobility
from armforge.control_sim import Rubric, default_scene, run_session, score_run
from armforge.economics import annual_revenue, bom_total, budget_check, load_bom, unit_price
from armforge.errors import ArmForgeError
from armforge.gripper import VacuumSpec, pressure_force, vacuum_chain
from armforge.kinematics import JointState, Workspace, reachable, target_annulus_contains
from armforge.sensors import UltrasonicSpec, beam_width_at, compare_sensors, distance_grid, echo_to_distance
from armforge.structural import torque_chain
from armforge.trade_study import bundled_tables, evaluate, sensitivity

LOGS_DIR = Path(__file__).parent / "study_logs"
RESULTS_PATH = LOGS_DIR / "study_results.json"

BANNER = """
+==========================================================+
|          armforge -- Desk Arm Design Studies             |
|  Mobility, statics, gripper, sensing, control, costs     |
+==========================================================+
"""

STUDY_COUNT = 8


def _run_study(step: int, name: str, study_fn, **kwargs) -> dict:
    """
    Run one study and tag its result with ``status``, ``elapsed_sec`` and any
    ``artifacts`` it wrote. Library errors keep their kind and details; anything
    else gets a traceback.
    """
    print(f"\n[{step}/{STUDY_COUNT}] {name}\n" + "-" * 60)
    t0 = time.perf_counter()
    try:
        result = dict(study_fn(**kwargs) or {})
        result["status"] = "ok"
    except ArmForgeError as e:
        print(f"[ERR] {name} FAILED ({e.kind}): {e.message}")
        result = {"status": "error", "error": e.to_dict()}
    except Exception as e:
        print(f"[ERR] {name} FAILED: {e}")
        traceback.print_exc()
        result = {"status": "error", "error": str(e)}
    result["elapsed_sec"] = round(time.perf_counter() - t0, 3)

    for path in result.get("artifacts", []):
        print(f"  wrote {path}")
    if result["status"] == "ok":
        print(f"✓  {name}: {result['elapsed_sec']:.2f}s")
    return result


# ==================== Studies ====================

def study_mobility() -> dict:
    arm = default_arm()
    dof = mobility(arm)
    print(f"  Links incl. ground: {len(arm.links)}   joints: {len(arm.joints)}   DOF: {dof}")
    return {"dof": dof, "formula_check": gruebler_dof(5, 4, 0)}


def study_component_selection() -> dict:
    results = {}
    for key, matrix in bundled_tables().items():
        ranked = evaluate(matrix)
        winner = ranked.winner
        flips = {}
        for name in matrix.criterion_names:
            report = sensitivity(matrix, name)
            if not report.stable:
                flips[name] = {"delta": report.flip_delta, "new_winner": report.new_winner}
        print(f"  {matrix.title:<40} {winner:<32} {ranked.total(winner):.3f}")
        results[key] = {"title": matrix.title, "winner": winner,
                        "total": round(ranked.total(winner), 3), "flips": flips}
    return results


def study_statics() -> dict:
    arm = default_arm()
    report = torque_chain(arm, JointState((0.0, 0.0, 0.0, 0.0)))
    for load in report.per_joint:
        print(f"  {load.joint:<10} static {load.static_torque:.3f} N*m   design {load.design_torque:.3f}"
              f"   stall {load.available_torque:.3f}   SF {load.safety_factor:.2f}")
    worst_link = max(report.per_link, key=lambda l: l.bending_stress_exact)
    return {
        "shoulder_static": report.joint("shoulder").static_torque,
        "shoulder_design": report.joint("shoulder").design_torque,
        "shoulder_safety": report.joint("shoulder").safety_factor,
        "max_stress_link": worst_link.link,
        "max_stress_pa": worst_link.bending_stress_exact,
        "links_pass": all(l.passes for l in report.per_link),
    }


def study_gripper() -> dict:
    spec = VacuumSpec.from_diameters(0.030, 0.020, 0.0476)
    as_written = vacuum_chain(spec)
    physical = vacuum_chain(spec, physical=True)
    printed_force = pressure_force(32524.13, spec.cup_area)
    print(f"  P2 {as_written.p2:.1f} Pa   force as written {as_written.force:.2f} N   "
          f"physical {physical.force:.2f} N")
    print(f"  force from the printed P2: {printed_force:.2f} N")
    return {
        "v1": as_written.v1,
        "vf": as_written.vf,
        "p2": as_written.p2,
        "force_as_written": as_written.force,
        "force_physical": physical.force,
        "payload_as_written": as_written.payload_capacity,
        "payload_physical": physical.payload_capacity,
        "force_from_printed_p2": printed_force,
    }


def study_sensing(seed: int = config.DEFAULT_SEED) -> dict:
    table = compare_sensors(["wood", "metal", "rubber"], distance_grid(0.1, 1.0, 0.05), seed=seed)
    print(table.to_string(index=False))
    LOGS_DIR.mkdir(parents=True, exist_ok=True)
    csv_path = LOGS_DIR / "sensor_comparison.csv"
    table.to_csv(csv_path, index=False)
    return {
        "echo_2941us_m": echo_to_distance(2.941e-3),
        "beam_width_10ft_in": beam_width_at(UltrasonicSpec(), 120 * config.INCH) / config.INCH,
        "comparison": table.to_dict(orient="records"),
        "artifacts": [str(csv_path)],
    }


def study_workspace() -> dict:
    ws = Workspace()
    scene = default_scene()
    bins_ok = {color: target_annulus_contains(ws, pose.position) for color, pose in scene.sort_map.items()}
    objects_ok = {obj.id: reachable(ws, obj.position) for obj in scene.objects}
    print(f"  Reach radius {ws.reach_radius:.4f} m ({ws.reach_radius / config.INCH:.2f} in)")
    return {"reach_radius_m": ws.reach_radius, "bins_in_annulus": bins_ok, "objects_reachable": objects_ok}


def study_pick_and_place(seed: int = config.DEFAULT_SEED) -> dict:
    arm = default_arm()
    traces = run_session(arm, default_scene(), seed=seed)
    card = score_run(traces, Rubric(bom_total=bom_total(load_bom())))
    for t in traces:
        status = "✓" if t.succeeded else "[ERR]"
        print(f"  {status} {t.object_id:<12} -> {str(t.placed_bin):<6} {t.cycle_time:.3f}s  "
              f"error {t.placement_error * 1000:.1f} mm")
    return {"runs": [t.summary() for t in traces], "score": card.to_dict()}


def study_economics() -> dict:
    total = bom_total(load_bom())
    check = budget_check(total)
    price = unit_price(total)
    print(f"  BOM {total} USD   headroom {check.headroom}   unit price {price}")
    return {
        "bom_total": str(total),
        "within_budget": check.passes,
        "headroom": str(check.headroom),
        "unit_price": str(price),
        "annual_revenue": str(annual_revenue(price)),
    }


def _fmt(value, pattern: str) -> str:
    return pattern.format(value) if isinstance(value, (int, float)) else "N/A"


def main(argv=None) -> dict:
    parser = argparse.ArgumentParser(description="Run every armforge design study")
    parser.add_argument("--skip-simulation", action="store_true", help="skip the pick-and-place session")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    args = parser.parse_args(argv)

    print(BANNER)
    print(f"  Started at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

    summary = {
        "mobility": _run_study(1, "Mobility", study_mobility),
        "component_selection": _run_study(2, "Component selection", study_component_selection),
        "statics": _run_study(3, "Statics at full extension", study_statics),
        "gripper": _run_study(4, "Vacuum gripper", study_gripper),
        "sensing": _run_study(5, "Range sensing", study_sensing, seed=args.seed),
        "workspace": _run_study(6, "Workspace", study_workspace),
    }
    if args.skip_simulation:
        print("  [SKP]  Pick-and-place session skipped.")
        summary["pick_and_place"] = {"status": "skipped"}
    else:
        summary["pick_and_place"] = _run_study(7, "Pick-and-place session", study_pick_and_place, seed=args.seed)
    summary["economics"] = _run_study(8, "Economics", study_economics)

    # -- Summary table ---------------------------------------------------------
    print("\n" + "=" * 60 + "\n  STUDY SUMMARY\n" + "=" * 60)
    score = summary["pick_and_place"].get("score", {})
    rows = [
        ("Mobility (DOF)", _fmt(summary["mobility"].get("dof"), "{}")),
        ("Shoulder safety factor", _fmt(summary["statics"].get("shoulder_safety"), "{:.2f}")),
        ("Vacuum force as written (N)", _fmt(summary["gripper"].get("force_as_written"), "{:.2f}")),
        ("Reach radius (m)", _fmt(summary["workspace"].get("reach_radius_m"), "{:.4f}")),
        ("Rubric total", _fmt(score.get("total"), "{:.2f}")
         if summary["pick_and_place"]["status"] != "skipped" else "skipped"),
        ("Unit price (USD)", summary["economics"].get("unit_price", "N/A")),
    ]
    col_w = 32
    print(f"\n  {'Study':<{col_w}} {'Result':<20}")
    print("  " + "-" * 52)
    for name, value in rows:
        print(f"  {name:<{col_w}} {value:<20}")

    LOGS_DIR.mkdir(parents=True, exist_ok=True)
    with open(RESULTS_PATH, "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, default=str)
    print(f"\n  Full results -> {RESULTS_PATH}")

    timings = {k: v["elapsed_sec"] for k, v in summary.items() if "elapsed_sec" in v}
    print(f"\n  Study time {sum(timings.values()):.2f}s, slowest: {max(timings, key=timings.get)}")
    failed = [k for k, v in summary.items() if v["status"] == "error"]
    print("\n" + "=" * 60)
    print("  ALL STUDIES COMPLETE" if not failed else f"  STUDIES WITH ERRORS: {', '.join(failed)}")
    print("=" * 60 + "\n")
    return summary


if __name__ == "__main__":
    main()
