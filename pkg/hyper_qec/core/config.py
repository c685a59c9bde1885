"""Runtime settings read from HQEC_* environment variables.

Lookup order for every key: process environment, then a ``.env`` file in the
working directory, then the same two sources for any alias.
"""

from __future__ import annotations

import os
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

DEFAULT_ASSET = Path(__file__).resolve().parent.parent / "data" / "appendix_matrix.json"
DEFAULT_LOG_DIR = "logs"


@dataclass(frozen=True)
class Settings:
    workers: int
    log_dir: str
    appendix_asset: Path


def _read_env_file(path: Path | None = None) -> dict[str, str]:
    """Parse KEY=value lines; blank lines, comments and quotes are tolerated."""
    env_path = path or Path.cwd() / ".env"
    try:
        text = env_path.read_text(encoding="utf-8")
    except OSError:
        # Missing or unreadable .env falls back to the environment alone
        return {}
    values: dict[str, str] = {}
    for raw in text.splitlines():
        entry = raw.strip()
        if entry.startswith("#") or "=" not in entry:
            continue
        key, _, value = entry.partition("=")
        values[key.strip()] = value.strip().strip("\"'")
    return values


def _lookup(names: Sequence[str], env_file: Mapping[str, str]) -> str | None:
    for name in names:
        value = os.getenv(name) or env_file.get(name)
        if value:
            return value
    return None


def _parse_workers(raw: str | None) -> int:
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def get_settings() -> Settings:
    env_file = _read_env_file()
    asset = _lookup(["HQEC_APPENDIX_ASSET"], env_file)
    return Settings(
        workers=_parse_workers(_lookup(["HQEC_WORKERS", "HQEC_THREADS"], env_file)),
        log_dir=_lookup(["HQEC_LOG_DIR"], env_file) or DEFAULT_LOG_DIR,
        appendix_asset=Path(asset) if asset else DEFAULT_ASSET,
    )
