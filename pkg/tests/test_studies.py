import json

import pytest

from armforge.errors import DomainError
from studies import run_all


def test_mobility_study():
    assert run_all.study_mobility() == {"dof": 4, "formula_check": 4}


def test_component_selection_study():
    result = run_all.study_component_selection()
    assert result["gripper"]["winner"] == "2-Finger"
    assert result["materials"]["flips"]["Density"] == {"delta": pytest.approx(0.02), "new_winner": "Balsa Wood"}


def test_gripper_study():
    result = run_all.study_gripper()
    assert result["force_from_printed_p2"] == pytest.approx(22.98, abs=0.1)
    assert result["force_physical"] > 0


def test_runner_catches_failures(capsys):
    def broken():
        raise RuntimeError("boom")

    result = run_all._run_study(1, "broken", broken)
    assert result["status"] == "error"
    assert result["error"] == "boom"
    assert result["elapsed_sec"] >= 0
    assert "[ERR] broken FAILED" in capsys.readouterr().out


def test_runner_keeps_library_error_details(capsys):
    def out_of_range():
        raise DomainError("payload cannot be negative", payload=-1.0)

    result = run_all._run_study(3, "statics", out_of_range)
    assert result["error"] == {"kind": "DomainError", "message": "payload cannot be negative", "payload": -1.0}
    assert "[ERR] statics FAILED (DomainError)" in capsys.readouterr().out


def test_runner_reports_artifacts_and_timing(tmp_path, capsys):
    written = tmp_path / "table.csv"

    def study():
        written.write_text("a\n", encoding="utf-8")
        return {"rows": 1, "artifacts": [str(written)]}

    result = run_all._run_study(5, "table", study)
    assert result["status"] == "ok"
    assert result["rows"] == 1
    assert isinstance(result["elapsed_sec"], float)
    out = capsys.readouterr().out
    assert "[5/8] table" in out
    assert f"wrote {written}" in out


def test_main_writes_results(tmp_path, monkeypatch):
    monkeypatch.setattr(run_all, "LOGS_DIR", tmp_path)
    monkeypatch.setattr(run_all, "RESULTS_PATH", tmp_path / "study_results.json")
    summary = run_all.main(["--skip-simulation"])
    assert summary["pick_and_place"] == {"status": "skipped"}
    assert all(v["status"] == "ok" for k, v in summary.items() if k != "pick_and_place")
    saved = json.loads((tmp_path / "study_results.json").read_text(encoding="utf-8"))
    assert saved["economics"]["unit_price"] == "259.03"
    assert saved["mobility"]["dof"] == 4
    assert saved["sensing"]["artifacts"] == [str(tmp_path / "sensor_comparison.csv")]
    assert (tmp_path / "sensor_comparison.csv").read_text(encoding="utf-8").startswith("sensor,")
