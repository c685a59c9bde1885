"""Tests for the Markdown report renderer."""

from __future__ import annotations

from pathlib import Path

import pytest

from hyper_qec.experiments import RunReport
from hyper_qec.render.renderer import ReportRenderer, format_number


def _report(**overrides: object) -> dict:
    base = RunReport(
        command="optimize",
        config={"cycles": 2, "seed": 7, "search_space": "reduced"},
        metrics={"fidelity": 0.99999999, "success_probability": 0.0097427, "plateaus": 1},
        passed=True,
        seed=7,
        distributions={
            "per_cycle": [
                {"fidelity": 0.9999999, "success_probability": 0.0074},
                {"fidelity": 0.99999999, "success_probability": 0.0097427},
            ],
            "singular_values": [1.0, 1.0, 0.5],
        },
        outputs={"distribution": "out/distribution.csv"},
        wall_time=1.25,
    ).as_dict()
    base.update(overrides)
    return base


class TestFormatNumber:
    def test_float(self) -> None:
        assert format_number(0.1 + 0.2) == "0.3"

    def test_bool_and_none(self) -> None:
        assert format_number(True) == "True"
        assert format_number(None) == "None"

    def test_list(self) -> None:
        assert format_number([0.5, 1]) == "0.5, 1"


class TestReportRenderer:
    def test_optimize_report(self) -> None:
        md = ReportRenderer().render_markdown(_report())
        assert md.startswith("# hqec optimize report")
        assert "- Seed: 7" in md
        assert "PASS" in md
        assert "| success_probability | 0.0097427 |" in md
        assert "| 2 | 0.99999999 | 0.0097427 |" in md
        assert "1, 1, 0.5" in md
        assert "`out/distribution.csv`" in md
        assert '"search_space": "reduced"' in md

    def test_case_rows(self) -> None:
        rows = [
            {"error": "I", "syndrome": "Phi+", "fidelity": 1.0},
            {"error": "XA", "syndrome": "Phi-", "fidelity": 1.0},
        ]
        md = ReportRenderer().render_markdown(
            _report(command="qec", seed=None, distributions={"rows": rows}, passed=False)
        )
        assert "FAIL" in md
        assert "Seed" not in md
        assert "| error | syndrome | fidelity |" in md
        assert "| XA | Phi- | 1 | " in md

    def test_non_ascii_config(self) -> None:
        md = ReportRenderer().render_markdown(
            _report(resolved={"mode_order": {"V↻_A1": 4}}, config={"label": "Φ⁺"})
        )
        assert '{"V↻_A1": 4}' in md
        assert '"label": "Φ⁺"' in md

    def test_missing_template(self, tmp_path: Path) -> None:
        with pytest.raises(RuntimeError, match="template not found"):
            ReportRenderer(templates_dir=tmp_path).render_markdown(_report())
