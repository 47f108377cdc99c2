"""Tests for structured logging."""

import json

import numpy as np

from quantum_witness.utils.logger import bind_run_context, configure_logging, get_logger, numpy_to_builtin


class TestNumpyProcessor:
    def test_scalars_and_arrays(self):
        event = numpy_to_builtin(None, "info", {"purity": np.float64(0.5), "f": np.array([0.25, 0.75])})
        assert type(event["purity"]) is float
        assert event["f"] == [0.25, 0.75]

    def test_large_arrays_are_summarized(self):
        event = numpy_to_builtin(None, "info", {"counts": np.zeros((2, 2, 2, 2, 2))})
        assert event["counts"] == "array(2, 2, 2, 2, 2)"


class TestConfigureLogging:
    def test_json_lines_on_stderr(self, capsys):
        configure_logging(level="INFO", json_logs=True)
        bind_run_context(command="chsh", seed=7)
        get_logger("tests").info("resample_completed", p_value=np.float64(0.001))
        captured = capsys.readouterr()
        assert captured.out == ""
        line = json.loads(captured.err.strip().splitlines()[-1])
        assert line["event"] == "resample_completed"
        assert line["command"] == "chsh"
        assert line["seed"] == 7
        assert line["p_value"] == 0.001
        assert line["app"] == "quantum-witness"

    def test_level_filters(self, capsys):
        configure_logging(level="WARNING", json_logs=True)
        get_logger("tests").info("hidden_event")
        assert "hidden_event" not in capsys.readouterr().err
