from __future__ import annotations

from pathlib import Path
from typing import Any

import typer

from .. import __version__
from ..core.enums import ErrorKind, OutputFormat, SearchSpace
from ..core.errors import (
    AssetError,
    ConfigError,
    DimensionError,
    HyperQecError,
    NormalizationError,
)
from ..core.logging_config import get_logger, setup_logging
from ..experiments import (
    BaseExperiment,
    CodeExperiment,
    CompileExperiment,
    ExperimentResult,
    OptimizeExperiment,
    RunReport,
    SuperdenseExperiment,
    VerifyAppendixExperiment,
)
from ..interferometer.dilation import COMPILE_UNIT_TOLERANCE
from ..protocol import MESSAGES
from ..render.renderer import ReportRenderer
from ..storage.files import atomic_write_text, dumps_json
from . import output as cli_output

app = typer.Typer(help="Hyperentanglement-assisted code: gate search, verification and compilation")

logger = get_logger(__name__)

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

# Bad input files and bad parameter values are usage errors.
USAGE_ERRORS = (AssetError, ConfigError, DimensionError, NormalizationError)


@app.callback()
def callback(
    json_logs: bool = typer.Option(False, "--json-logs", help="Output logs in JSON format"),
    log_level: str = typer.Option("INFO", "--log-level", help="Logging level (DEBUG, INFO, WARNING, ERROR)"),
) -> None:
    """Configure global CLI options."""
    setup_logging(json_output=json_logs, log_level=log_level)
    logger.debug("CLI initialized", extra={"json_logs": json_logs, "log_level": log_level})


@app.command()
def version() -> None:
    """Print version."""
    typer.echo(__version__)


def _parse_amplitude(raw: str, name: str) -> complex:
    try:
        return complex(raw.replace(" ", ""))
    except ValueError:
        raise typer.BadParameter(f"'{raw}' is not a number (use e.g. 0.6, 0.8j, 0.6+0.8j)", param_hint=name) from None


def _run(experiment: BaseExperiment, context: dict[str, Any]) -> ExperimentResult:
    """Execute an experiment, mapping library errors onto exit codes."""
    logger.info("Starting command", extra={"command": experiment.name})
    try:
        result = experiment.execute(context)
    except USAGE_ERRORS as e:
        cli_output.error(str(e))
        raise typer.Exit(code=EXIT_USAGE) from e
    except HyperQecError as e:
        cli_output.error(f"{experiment.name} failed: {e}")
        raise typer.Exit(code=EXIT_CHECK_FAILED) from e
    except Exception as e:
        logger.exception("Unexpected error", extra={"command": experiment.name})
        cli_output.error(f"Unexpected error during {experiment.name}: {e}")
        raise typer.Exit(code=EXIT_CHECK_FAILED) from e
    logger.info(
        "Command finished", extra={"command": experiment.name, "success": result.success}
    )
    return result


def _render(report: RunReport, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.MD:
        return ReportRenderer().render_markdown(report.as_dict())
    return dumps_json(report.as_dict())


def _emit(report: RunReport, fmt: OutputFormat, out: Path | None) -> None:
    if out is None:
        return
    report.outputs["report"] = str(out)
    atomic_write_text(out, _render(report, fmt))
    cli_output.success(f"Report written to {out}")


def _finish(result: ExperimentResult) -> None:
    if result.report is not None:
        for note in result.report.notes:
            cli_output.warning(note)
    if result.success:
        cli_output.success(result.message)
        return
    cli_output.error(result.message)
    raise typer.Exit(code=EXIT_CHECK_FAILED)


def _print_metrics(report: RunReport, names: list[str]) -> None:
    for name in names:
        value = report.metrics.get(name)
        if isinstance(value, float):
            cli_output.metric(name, value)
        elif value is not None:
            cli_output.plain(f"  {name:<22} {value}")


@app.command("verify-appendix")
def verify_appendix_cmd(
    matrix: Path | None = typer.Option(None, "--matrix", help="Matrix file to verify (default: bundled appendix matrix)"),  # noqa: B008
    emit_block: Path | None = typer.Option(None, "--emit-block", help="Write the active 6x6 block as a matrix file"),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", help="Write the run report to this path"),  # noqa: B008
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False, help="Report format: json or md"),  # noqa: B008
) -> None:
    """Re-evaluate the published 9x9 matrix: fidelity, success probability, mode roles.

    Exits 0 only when P is within 1e-4 of 0.00974276 and F >= 1 - 1e-6.
    """
    result = _run(VerifyAppendixExperiment(), {"matrix": matrix, "emit_block": emit_block})
    report = result.report
    assert report is not None
    _print_metrics(report, ["fidelity", "success_probability", "knill_ratio"])
    cli_output.plain(
        "  singular values        "
        + ", ".join(f"{s:.6f}" for s in report.distributions["singular_values"])
    )
    cli_output.plain(f"  mode order             {report.resolved['mode_order']}")
    cli_output.plain(f"  scheme                 {report.resolved['scheme']}")
    if emit_block:
        cli_output.success(f"Active block written to {emit_block}")
    _emit(report, fmt, out)
    _finish(result)


@app.command()
def optimize(
    config: Path | None = typer.Option(None, "--config", help="YAML optimization config (flags override it)"),  # noqa: B008
    cycles: int | None = typer.Option(None, "--cycles", min=1, help="Number of independent starts"),  # noqa: B008
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),  # noqa: B008
    space: SearchSpace | None = typer.Option(None, "--space", case_sensitive=False, help="reduced (6x6) or full (up to 9x9)"),  # noqa: B008
    fidelity_threshold: float | None = typer.Option(None, "--fidelity-threshold", min=0.0, max=1.0, help="Feasibility threshold on F"),  # noqa: B008
    workers: int | None = typer.Option(None, "--workers", min=1, help="Worker processes (default: HQEC_WORKERS)"),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", help="Output directory for distribution.csv, best_matrix.json and the report"),  # noqa: B008
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False, help="Report format: json or md"),  # noqa: B008
) -> None:
    """Search for the gate with the highest success probability at fixed fidelity."""
    context = {
        "config": config,
        "out": out,
        "workers": workers,
        "overrides": {
            "cycles": cycles,
            "seed": seed,
            "search_space": space,
            "fidelity_threshold": fidelity_threshold,
        },
    }
    if config is not None and not config.exists():
        cli_output.error(f"Config file not found: {config}")
        raise typer.Exit(code=EXIT_USAGE)
    result = _run(OptimizeExperiment(), context)
    report = result.report
    assert report is not None
    _print_metrics(
        report, ["fidelity", "success_probability", "usable_cycles", "cycles", "plateaus"]
    )
    if out is not None:
        _emit(report, fmt, out / f"report.{fmt.value}")
    _finish(result)


@app.command("compile")
def compile_cmd(
    input_path: Path = typer.Option(..., "--in", help="Matrix file to compile"),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", help="Write the netlist to this path"),  # noqa: B008
    unit_tolerance: float = typer.Option(
        COMPILE_UNIT_TOLERANCE,
        "--unit-tolerance",
        min=0.0,
        help="Singular values of the rescaled matrix this close to 1 count as 1",
    ),  # noqa: B008
    report_path: Path | None = typer.Option(None, "--report", help="Write the run report to this path"),  # noqa: B008
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False, help="Report format: json or md"),  # noqa: B008
) -> None:
    """Dilate a matrix to a unitary and decompose it into beamsplitters and phase shifters."""
    result = _run(
        CompileExperiment(),
        {"input": input_path, "out": out, "unit_tolerance": unit_tolerance},
    )
    report = result.report
    if report is not None:
        _print_metrics(
            report,
            ["mode_count", "extra_modes", "beamsplitters", "phase_shifters", "roundtrip_error"],
        )
        if out is not None:
            cli_output.success(f"Netlist written to {out}")
        _emit(report, fmt, report_path)
    _finish(result)


@app.command()
def qec(
    error: ErrorKind = typer.Option(ErrorKind.I, "--error", case_sensitive=False, help="Channel error: I, XA, XA1 or XAXA1"),  # noqa: B008
    alpha: str = typer.Option("1", "--alpha", help="Amplitude of |H>"),  # noqa: B008
    beta: str = typer.Option("0", "--beta", help="Amplitude of |V>"),  # noqa: B008
    all_errors: bool = typer.Option(False, "--all", help="Run every error and compare with the syndrome table"),  # noqa: B008
    sample: bool = typer.Option(False, "--sample", help="Draw the analysis outcomes by the Born rule"),  # noqa: B008
    seed: int | None = typer.Option(None, "--seed", help="Seed for --sample"),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", help="Write the run report to this path"),  # noqa: B008
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False, help="Report format: json or md"),  # noqa: B008
) -> None:
    """Encode |psi> = alpha|H> + beta|V>, apply a polarization flip, decode and recover."""
    context = {
        "errors": list(ErrorKind) if all_errors else [error],
        "alpha": _parse_amplitude(alpha, "--alpha"),
        "beta": _parse_amplitude(beta, "--beta"),
        "sample": sample,
        "seed": seed,
    }
    result = _run(CodeExperiment(), context)
    report = result.report
    assert report is not None
    cli_output.table(
        ["error", "syndrome", "recovery", "fidelity", "table"],
        [
            (
                r["error"],
                r["syndrome"],
                r["recovery"],
                f"{r['fidelity']:.15f}",
                "ok" if r["matches_table"] else f"expected {r['expected_syndrome']}/{r['expected_recovery']}",
            )
            for r in report.distributions["rows"]
        ],
    )
    _emit(report, fmt, out)
    _finish(result)


@app.command()
def sdc(
    message: str = typer.Option("00", "--message", help="Two classical bits: 00, 01, 10 or 11"),  # noqa: B008
    all_messages: bool = typer.Option(False, "--all", help="Send all four messages"),  # noqa: B008
    sample: bool = typer.Option(False, "--sample", help="Draw the analysis outcomes by the Born rule"),  # noqa: B008
    seed: int | None = typer.Option(None, "--seed", help="Seed for --sample"),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", help="Write the run report to this path"),  # noqa: B008
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, "--format", case_sensitive=False, help="Report format: json or md"),  # noqa: B008
) -> None:
    """Superdense coding over the shared hyperentangled pair."""
    if not all_messages and message not in MESSAGES:
        raise typer.BadParameter(f"must be one of {', '.join(MESSAGES)}", param_hint="--message")
    context = {
        "messages": list(MESSAGES) if all_messages else [message],
        "sample": sample,
        "seed": seed,
    }
    result = _run(SuperdenseExperiment(), context)
    report = result.report
    assert report is not None
    cli_output.table(
        ["sent", "analysis", "decoded"],
        [(r["message"], r["syndrome"], r["decoded"]) for r in report.distributions["rows"]],
    )
    _emit(report, fmt, out)
    _finish(result)
