"""Tests for the experiment workflows behind the CLI."""

from __future__ import annotations

from pathlib import Path

import pytest

from hyper_qec.core.enums import ErrorKind
from hyper_qec.core.errors import NormalizationError
from hyper_qec.experiments import (
    CodeExperiment,
    CompileExperiment,
    RunReport,
    SuperdenseExperiment,
    VerifyAppendixExperiment,
)
from hyper_qec.storage.files import read_matrix_file


class TestRunReport:
    def test_payload_excludes_timing_and_outputs(self) -> None:
        report = RunReport("qec", {"a": 1}, {"rows": 4}, True, wall_time=3.0, outputs={"x": "y"})
        assert "wall_time" not in report.payload()
        assert "outputs" not in report.payload()
        assert report.as_dict()["wall_time"] == 3.0

    def test_equal_payloads_for_equal_runs(self) -> None:
        a = CodeExperiment().execute({"alpha": 0.6, "beta": 0.8}).report
        b = CodeExperiment().execute({"alpha": 0.6, "beta": 0.8}).report
        assert a is not None and b is not None
        assert a.payload() == b.payload()


class TestVerifyAppendixExperiment:
    def test_emits_block(self, tmp_path: Path) -> None:
        path = tmp_path / "block.json"
        result = VerifyAppendixExperiment().execute({"emit_block": path})
        assert result.success
        assert result.report is not None
        assert result.report.outputs["active_block"] == str(path)
        mf = read_matrix_file(path)
        assert mf.mode_count == 6
        assert set(mf.metadata["spectator_phases"]) == {"H_A", "H↺_A1", "H↻_A1"}


class TestCodeExperiment:
    def test_default_sweeps_every_error(self) -> None:
        result = CodeExperiment().execute({})
        assert result.success
        assert result.report is not None
        assert [r["error"] for r in result.report.distributions["rows"]] == [e.value for e in ErrorKind]
        assert result.message == "4/4 rows match the syndrome table"

    def test_single_error(self) -> None:
        result = CodeExperiment().execute({"errors": ["XA"], "alpha": 0.6, "beta": 0.8j})
        assert result.report is not None
        row = result.report.distributions["rows"][0]
        assert row["syndrome"] == "Phi-"
        assert row["recovery"] == "X"

    def test_unnormalized(self) -> None:
        with pytest.raises(NormalizationError):
            CodeExperiment().execute({"alpha": 1, "beta": 1})

    def test_sampling_records_seed(self) -> None:
        result = CodeExperiment().execute({"sample": True, "seed": 11})
        assert result.success
        assert result.report is not None
        assert result.report.seed == 11


class TestSuperdenseExperiment:
    def test_all_messages(self) -> None:
        result = SuperdenseExperiment().execute({})
        assert result.success
        assert result.message == "4/4 messages decoded"


class TestCompileExperiment:
    def test_missing_input(self) -> None:
        ok, msg = CompileExperiment().validate_context({})
        assert not ok
        assert "input" in msg

    def test_negative_tolerance(self) -> None:
        result = CompileExperiment().execute({"input": "x.json", "unit_tolerance": -1})
        assert not result.success
        assert result.report is None
