"""Tests for Prometheus instrumentation."""

import pandas as pd
import pytest

from quantum_witness.experiment.analysis import AnalysisResult
from quantum_witness.utils.metrics import (
    MetricsTimer,
    get_metrics,
    optimizer_duration_seconds,
    registry,
    track_analysis,
    write_metrics,
)


def sample(name: str, labels: dict[str, str] | None = None) -> float:
    return registry.get_sample_value(name, labels or {}) or 0.0


class TestTrackAnalysis:
    def test_success_is_counted(self):
        labels = {"command": "unit_ok", "status": "success"}
        before = sample("quantum_witness_analysis_runs_total", labels)

        @track_analysis("unit_ok")
        def run() -> int:
            return 7

        assert run() == 7
        assert sample("quantum_witness_analysis_runs_total", labels) == before + 1
        assert sample("quantum_witness_analysis_duration_seconds_count", {"command": "unit_ok"}) >= 1
        assert sample("quantum_witness_active_analyses") == 0

    def test_failure_is_counted_and_reraised(self):
        @track_analysis("unit_fail")
        def run() -> None:
            raise ValueError("boom")

        with pytest.raises(ValueError, match="boom"):
            run()
        assert sample("quantum_witness_analysis_runs_total", {"command": "unit_fail", "status": "error"}) == 1
        assert sample("quantum_witness_errors_total", {"error_type": "ValueError", "component": "unit_fail"}) == 1
        assert sample("quantum_witness_active_analyses") == 0

    def test_failed_verdicts_have_their_own_status(self):
        @track_analysis("unit_verdict")
        def run() -> AnalysisResult:
            return AnalysisResult(command="unit_verdict", frame=pd.DataFrame(), failures=[{"check": "x"}])

        assert not run().passed
        labels = {"command": "unit_verdict", "status": "verdict_failed"}
        assert sample("quantum_witness_analysis_runs_total", labels) == 1
        assert sample("quantum_witness_analysis_runs_total", {"command": "unit_verdict", "status": "success"}) == 0


class TestExport:
    def test_timer_records_duration(self):
        with MetricsTimer(optimizer_duration_seconds, {"objective": "unit_timer"}):
            pass
        assert sample("quantum_witness_optimizer_duration_seconds_count", {"objective": "unit_timer"}) == 1

    def test_exposition_text(self):
        text = get_metrics().decode()
        assert "quantum_witness_analysis_runs_total" in text
        assert "quantum_witness_resample_draws_total" in text

    def test_write_metrics(self, tmp_path):
        path = tmp_path / "metrics.prom"
        write_metrics(path)
        assert b"quantum_witness_analysis_runs_total" in path.read_bytes()
