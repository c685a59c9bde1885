from __future__ import annotations

from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, TemplateNotFound

from ..core.logging_config import get_logger

logger = get_logger(__name__)

REPORT_TEMPLATE = "run_report.md.j2"


def format_number(value: Any) -> str:
    """Ten significant digits for floats; everything else as-is."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return format(value, ".10g")
    if isinstance(value, list):
        return ", ".join(format_number(v) for v in value)
    return str(value)


class ReportRenderer:
    """Renders run reports to Markdown with Jinja2."""

    def __init__(self, templates_dir: Path | None = None):
        if templates_dir is None:
            templates_dir = Path(__file__).parent / "templates"
        self.env = Environment(
            loader=FileSystemLoader(str(templates_dir)),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self.env.filters["num"] = format_number
        self.env.policies["json.dumps_kwargs"] = {"sort_keys": True, "ensure_ascii": False}

    def render_markdown(self, report: dict[str, Any]) -> str:
        """Render a RunReport dictionary (``RunReport.as_dict()``).

        Raises:
            RuntimeError: template missing or rendering failed
        """
        try:
            template = self.env.get_template(REPORT_TEMPLATE)
            logger.debug("Rendering Markdown report", extra={"command": report.get("command")})
            return template.render(**report)
        except TemplateNotFound as e:
            logger.error("Markdown template not found", extra={"error": str(e)})
            raise RuntimeError(
                f"Markdown template not found: {e}. "
                f"Ensure hyper_qec/render/templates/{REPORT_TEMPLATE} exists."
            ) from e
        except Exception as e:
            logger.error("Failed to render Markdown report", extra={"error": str(e)})
            raise RuntimeError(f"Failed to render Markdown report: {e}") from e
