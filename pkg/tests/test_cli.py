import json
import math

import pytest

from armforge import __version__
from armforge.main import _dumps, build_parser, dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dof_prints_four(capsys):
    code, out, _ = run(capsys, "dof", "--links", "5", "--full-joints", "4", "--half-joints", "0")
    assert code == 0
    assert out.strip() == "4"


def test_dof_from_config(capsys):
    code, out, _ = run(capsys, "dof", "--config", "arm.json")
    assert (code, out.strip()) == (0, "4")


def test_no_arguments_is_a_usage_error(capsys):
    code, out, err = run(capsys)
    assert code == 2
    assert out == ""
    assert "usage" in err


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "teleport")
    assert code == 2
    assert "usage" in err


def test_version(capsys):
    code, out, _ = run(capsys, "fk", "--version")
    assert code == 0
    assert __version__ in out


def test_unreachable_target_reports_error_json(capsys):
    code, out, err = run(capsys, "ik", "--target", "99,0,0")
    assert code == 1
    assert out == ""
    payload = json.loads(err)
    assert payload["success"] is False
    assert payload["error"]["kind"] == "Unreachable"


def test_missing_config_is_an_error(capsys):
    code, _, err = run(capsys, "fk", "--config", "does_not_exist.json")
    assert code == 1
    assert json.loads(err)["error"]["kind"] == "ConfigurationError"


def test_seed_must_be_unsigned(capsys):
    code, _, _ = run(capsys, "sense", "sweep", "--seed", "-3")
    assert code == 2


def test_fk_json(capsys):
    code, out, _ = run(capsys, "fk", "--angles=0,0,0,0")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) >= {"position", "orientation", "residual", "iters"}
    assert payload["position"] == pytest.approx([0.6096, 0.0, 0.09], abs=1e-9)


def test_ik_json(capsys):
    code, out, _ = run(capsys, "ik", "--target", "0.1,0.3,0.05")
    assert code == 0
    payload = json.loads(out)
    assert payload["residual"] <= 1e-4
    assert payload["position"] == pytest.approx([0.1, 0.3, 0.05], abs=1e-4)


def test_fk_out_of_limits(capsys):
    code, _, err = run(capsys, "fk", "--angles=0,0,3,0")
    assert code == 1
    assert json.loads(err)["error"]["kind"] == "ContractViolation"


@pytest.mark.parametrize("argv,joint", [
    (("ik", "--target", "0.1,0.3,0.05", "--seed-angles=0,2.0,0,0"), "shoulder"),
    (("statics", "--angles=0,0,0,-1.5"), "wrist"),
    (("fk", "--angles=-0.2,0,0,0"), "base_yaw"),
])
def test_user_angles_are_checked_against_limits(capsys, argv, joint):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    error = json.loads(err)["error"]
    assert error["kind"] == "ContractViolation"
    assert error["joint"] == joint


def test_user_angles_need_one_per_joint(capsys):
    code, _, err = run(capsys, "statics", "--angles=0,0")
    assert code == 1
    error = json.loads(err)["error"]
    assert (error["kind"], error["expected"], error["got"]) == ("ContractViolation", 4, 2)


def test_statics_csv(capsys):
    code, out, _ = run(capsys, "statics", "--angles=0,0,0,0", "--payload", "0.011", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "joint,static_torque,design_torque,available_torque,safety_factor"
    assert len(lines) == 5


def _reject_constant(name):
    raise AssertionError(f"non-JSON constant {name} in output")


def test_statics_json_is_strict(capsys):
    code, out, _ = run(capsys, "statics")
    assert code == 0
    payload = json.loads(out, parse_constant=_reject_constant)
    base, shoulder = payload["per_joint"][:2]
    assert base["joint"] == "base_yaw"
    assert base["static_torque"] >= shoulder["static_torque"] - 1e-12


def test_infinite_values_become_null():
    assert json.loads(_dumps({"safety_factor": math.inf, "margin": [1.0, -math.inf]})) == {
        "safety_factor": None, "margin": [1.0, None]}


def test_gripper_vacuum(capsys):
    code, out, _ = run(capsys, "gripper", "vacuum", "--cup-d", "0.030", "--syringe-d", "0.020", "--travel", "0.0476")
    assert code == 0
    payload = json.loads(out)
    assert payload["mode"] == "as_written"
    assert payload["payload_capacity"] == pytest.approx(payload["force"] / 9.81)


def test_gripper_gears(capsys):
    code, out, _ = run(capsys, "gripper", "gears", "--n1", "18", "--p1", "0.005", "--n2", "18", "--p2", "0.005")
    assert code == 0
    assert json.loads(out) == pytest.approx({"pd1": 0.0045, "pd2": 0.0045, "center_distance": 0.0045})


def test_gripper_gears_domain_error(capsys):
    code, _, err = run(capsys, "gripper", "gears", "--n1", "2", "--p1", "0.005", "--n2", "18", "--p2", "0.005")
    assert code == 1
    assert json.loads(err)["error"]["kind"] == "DomainError"


def test_sense_sweep_is_csv_and_reproducible(capsys):
    argv = ("sense", "sweep", "--from", "0.1", "--to", "1.0", "--step", "0.05", "--material", "wood", "--seed", "7")
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0
    assert first == second
    lines = first.strip().splitlines()
    assert lines[0] == "actual,measured,detected"
    assert len(lines) == 20


def test_sense_beam(capsys):
    code, out, _ = run(capsys, "sense", "beam", "--range", "3.048")
    assert code == 0
    assert json.loads(out)["width"] == pytest.approx(0.9652, rel=1e-3)


def test_matrix_eval_bundled_table(capsys):
    code, out, _ = run(capsys, "matrix", "eval", "--file", "gripper.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ranking"][0] == "2-Finger"


def test_matrix_eval_csv(capsys):
    code, out, _ = run(capsys, "matrix", "eval", "--file", "sensors", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("1,PixyCam,")


def test_matrix_sensitivity(capsys):
    code, out, _ = run(capsys, "matrix", "sensitivity", "--file", "materials", "--criterion", "Density")
    assert code == 0
    payload = json.loads(out)
    assert payload["flip_delta"] == pytest.approx(0.02)
    assert payload["new_winner"] == "Balsa Wood"


def test_matrix_qfd(capsys):
    code, out, _ = run(capsys, "matrix", "qfd", "--file", "qfd_example.json")
    assert code == 0
    assert json.loads(out)["ranking"][0] == "Motor type"


def test_bom(capsys):
    code, out, _ = run(capsys, "bom", "--budget", "250")
    assert code == 0
    payload = json.loads(out)
    assert payload["total"] == 199.25
    assert payload["passes"] is True
    assert payload["headroom"] == 50.75
    assert payload["unit_price"] == 259.03


def test_workspace_point(capsys):
    code, out, _ = run(capsys, "workspace", "--point", "0,0.33,0")
    assert code == 0
    payload = json.loads(out)
    assert payload["in_annulus"] and payload["reachable"]
    assert payload["workspace"]["reach_radius"] == pytest.approx(0.43105, rel=1e-4)


def test_validate_default_arm(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_score_from_summaries(tmp_path, capsys):
    summaries = [
        {"cycle_time": 2.0, "placement_error": 0.002, "succeeded": True, "fault": None},
        {"cycle_time": 3.0, "placement_error": None, "succeeded": False,
         "fault": {"kind": "Stall", "state": "Transit", "message": "stalled"}},
    ]
    for i, summary in enumerate(summaries):
        (tmp_path / f"summary_seed{i}.json").write_text(json.dumps(summary), encoding="utf-8")
    code, out, _ = run(capsys, "score", "--traces", str(tmp_path))
    assert code == 0
    card = json.loads(out)
    assert card["subscores"]["task"] == pytest.approx(5.0)
    assert card["subscores"]["stability"] == pytest.approx(5.0)
    assert card["subscores"]["budget"] == pytest.approx(10.0)


def test_score_needs_a_directory(tmp_path, capsys):
    code, _, err = run(capsys, "score", "--traces", str(tmp_path / "none"))
    assert code == 1
    assert json.loads(err)["error"]["kind"] == "ConfigurationError"


@pytest.mark.parametrize("content", [
    "{not json",
    '{"succeeded": true}',
    '{"cycle_time": "fast", "succeeded": true}',
    "[1, 2]",
])
def test_score_reports_unreadable_summaries(tmp_path, capsys, content):
    bad = tmp_path / "summary_seed0.json"
    bad.write_text(content, encoding="utf-8")
    code, out, err = run(capsys, "score", "--traces", str(tmp_path))
    assert code == 1
    assert out == ""
    error = json.loads(err)["error"]
    assert error["kind"] == "ConfigurationError"
    assert error["path"] == str(bad)


def test_every_subcommand_is_registered():
    parser = build_parser()
    choices = parser._subparsers._group_actions[0].choices
    assert {"dof", "fk", "ik", "statics", "gripper", "sense", "simulate",
            "score", "matrix", "bom", "workspace"} <= set(choices)


@pytest.mark.slow
def test_simulate_writes_trace_and_summary(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--seed", "7", "--dt", "0.001", "--output-dir", str(tmp_path))
    assert code == 0
    summary = json.loads(out)
    assert summary["succeeded"] is True
    assert (tmp_path / "trace_seed7.csv").read_text(encoding="utf-8").startswith("t,state,")
    assert json.loads((tmp_path / "summary_seed7.json").read_text(encoding="utf-8")) == summary


@pytest.mark.slow
def test_simulate_sweep(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--sweep", "2", "--workers", "2", "--seed", "3",
                       "--output-dir", str(tmp_path))
    assert code == 0
    assert [s["seed"] for s in json.loads(out)] == [3, 4]
    assert sorted(p.name for p in tmp_path.glob("*.json")) == ["summary_seed3.json", "summary_seed4.json"]
    assert not list(tmp_path.glob("*.tmp"))
