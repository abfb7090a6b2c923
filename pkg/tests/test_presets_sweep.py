"""Presets not exercised by the acceptance criteria still complete cleanly."""

import math

import pytest

from skinwave.presets import get_preset
from skinwave.runner import format_report, run_preset


@pytest.mark.parametrize("name", ["fig1d", "fig3", "fig5b", "fig5c", "sm-meet"])
def test_preset_completes_with_finite_report(name, tmp_path):
    report = run_preset(name, out_dir=tmp_path / name, heatmap=False)
    assert report.classification in ("stuck", "reflected", "no_contact")
    for fit in (report.v_in_fit, report.v_ref_fit):
        if fit is not None:
            assert math.isfinite(fit.slope) and math.isfinite(fit.intercept)
    if report.max_oracle_deviation is not None:
        assert math.isfinite(report.max_oracle_deviation)
    assert set(report.manifest) == {"density.csv", "trajectory.csv", "oracle.csv"}
    text = format_report(report)
    assert f"experiment: {name}" in text


def test_fig3_reports_velocity_fits(tmp_path):
    report = run_preset("fig3", out_dir=tmp_path / "fig3", heatmap=False)
    assert report.classification == "reflected"
    assert report.v_in_fit is not None and report.v_ref_fit is not None


def test_sm_meet_reports_snapshots(tmp_path):
    cfg = get_preset("sm-meet")
    assert cfg.snapshot_times == (460.0, 500.0, 540.0)
    report = run_preset("sm-meet", out_dir=tmp_path / "meet", heatmap=False)
    assert len(report.notes) == 3
    assert all(note.startswith("snapshot t=") for note in report.notes)
