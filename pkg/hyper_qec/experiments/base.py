from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

from .. import __version__


@dataclass
class RunReport:
    """Everything a command produced, in a form that serializes to JSON.

    ``payload()`` drops the timing field; two runs with the same echoed
    config must agree on it exactly.
    """

    command: str
    config: dict[str, Any]
    metrics: dict[str, Any]
    passed: bool
    seed: int | None = None
    resolved: dict[str, Any] = field(default_factory=dict)
    distributions: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__

    def payload(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "passed": self.passed,
            "config": self.config,
            "metrics": self.metrics,
            "resolved": self.resolved,
            "distributions": self.distributions,
            "notes": list(self.notes),
        }

    def as_dict(self) -> dict[str, Any]:
        return {**self.payload(), "outputs": dict(self.outputs), "wall_time": self.wall_time}


@dataclass
class ExperimentResult:
    """Outcome of one experiment run."""

    success: bool
    message: str
    report: RunReport | None = None
    data: dict[str, Any] = field(default_factory=dict)


class BaseExperiment(ABC):
    """A reproducible multi-step workflow behind one CLI command."""

    name: str = "experiment"

    @abstractmethod
    def execute(self, context: dict[str, Any]) -> ExperimentResult:
        """Run the workflow.

        Args:
            context: Command inputs. Keys depend on the experiment; common
                ones are ``seed``, ``out`` (output path) and ``config``.

        Returns:
            ExperimentResult whose ``success`` decides the exit code and
            whose ``report`` is what gets written or printed.

        Raises:
            HyperQecError: invalid inputs or unreadable assets. Numerical
                shortfalls (a gate that misses its targets, a failed
                optimizer cycle) are reported, not raised.
        """

    def validate_context(self, context: dict[str, Any]) -> tuple[bool, str]:
        return True, ""
