"""On-disk formats for matrices, netlists, distributions and run reports.

Formats:
    - Matrix files: JSON object with ``mode_count``, row-major ``entries`` as
      ``[real, imag]`` pairs and a ``metadata`` block (label, source, checksum).
    - Netlists: JSON object listing interferometer elements in application
      order, angles in radians.
    - Distributions: CSV with ``cycle_rank,fidelity,success_probability``.
    - Reports: JSON with sorted keys.

Usage:
    from hyper_qec.storage.files import MatrixFile, read_matrix_file, write_matrix_file

    mf = MatrixFile.from_matrix(block, label="active block", source="verify-appendix")
    write_matrix_file(Path("block.json"), mf)
    again = read_matrix_file(Path("block.json"))

Architecture Notes:
    - Every write goes to a temporary file in the target directory and is then
      renamed over the destination, so readers never see a partial file.
    - Floats are written with their shortest round-trip representation in
      JSON and with 17 significant digits in CSV; both reload bit-exactly.
    - The checksum is the SHA-256 of the compact JSON encoding of
      ``entries``; a mismatch on read is an AssetError.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..core.errors import AssetError
from ..core.logging_config import get_logger

logger = get_logger(__name__)

dataclass_kwargs = {"slots": True}

MATRIX_FORMAT = "hyper-qec/matrix"
NETLIST_FORMAT = "hyper-qec/netlist"
FORMAT_VERSION = 1
DISTRIBUTION_HEADER = ("cycle_rank", "fidelity", "success_probability")


def atomic_write_text(path: Path, content: str) -> None:
    """Write ``content`` to ``path`` via a temporary file and an atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def dumps_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path: Path, payload: Any) -> None:
    atomic_write_text(path, dumps_json(payload))
    logger.debug("Wrote JSON file", extra={"path": str(path)})


def read_json(path: Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise AssetError(f"file not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise AssetError(f"cannot read {path}: {e}") from e


def entries_checksum(entries: Sequence[Sequence[float]]) -> str:
    compact = json.dumps([[float(re), float(im)] for re, im in entries], separators=(",", ":"))
    return "sha256:" + hashlib.sha256(compact.encode("utf-8")).hexdigest()


@dataclass(**dataclass_kwargs)
class MatrixFile:
    mode_count: int
    entries: list[list[float]]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode_count < 0:
            raise AssetError("mode_count must be non-negative")
        if len(self.entries) != self.mode_count**2:
            raise AssetError(
                f"expected {self.mode_count**2} entries for mode_count {self.mode_count}, "
                f"got {len(self.entries)}"
            )
        for pair in self.entries:
            if len(pair) != 2 or not all(math.isfinite(float(x)) for x in pair):
                raise AssetError(f"entries must be finite [real, imag] pairs, got {pair!r}")

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, **metadata: Any) -> MatrixFile:
        arr = np.asarray(matrix, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise AssetError(f"matrix must be square, got shape {arr.shape}")
        entries = [[float(z.real), float(z.imag)] for z in arr.reshape(-1)]
        meta = {k: v for k, v in metadata.items() if v is not None}
        meta["checksum"] = entries_checksum(entries)
        return cls(arr.shape[0], entries, meta)

    @property
    def matrix(self) -> np.ndarray:
        flat = np.array([complex(re, im) for re, im in self.entries], dtype=complex)
        return flat.reshape(self.mode_count, self.mode_count)

    @property
    def label(self) -> str:
        return str(self.metadata.get("label", ""))

    @property
    def checksum(self) -> str:
        return entries_checksum(self.entries)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": MATRIX_FORMAT,
            "version": FORMAT_VERSION,
            "mode_count": self.mode_count,
            "entries": self.entries,
            "metadata": {**self.metadata, "checksum": self.checksum},
        }

    @classmethod
    def from_dict(cls, data: Any, source: str = "<memory>") -> MatrixFile:
        if not isinstance(data, dict) or data.get("format") != MATRIX_FORMAT:
            raise AssetError(f"{source} is not a {MATRIX_FORMAT} file")
        try:
            mf = cls(
                int(data["mode_count"]),
                [[float(re), float(im)] for re, im in data["entries"]],
                dict(data.get("metadata") or {}),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise AssetError(f"{source} is malformed: {e}") from e
        expected = mf.metadata.get("checksum")
        if expected is not None and expected != mf.checksum:
            raise AssetError(
                f"{source} checksum mismatch: file says {expected}, entries hash to {mf.checksum}"
            )
        return mf


def read_matrix_file(path: Path) -> MatrixFile:
    mf = MatrixFile.from_dict(read_json(path), source=str(path))
    logger.debug("Loaded matrix file", extra={"path": str(path), "mode_count": mf.mode_count})
    return mf


def write_matrix_file(path: Path, mf: MatrixFile) -> None:
    write_json(path, mf.to_dict())


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def distribution_csv(rows: Iterable[tuple[float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DISTRIBUTION_HEADER)
    for rank, (fidelity, probability) in enumerate(rows, start=1):
        writer.writerow([rank, format_float(fidelity), format_float(probability)])
    return buf.getvalue()


def write_distribution_csv(path: Path, rows: Iterable[tuple[float, float]]) -> None:
    atomic_write_text(path, distribution_csv(rows))
    logger.debug("Wrote distribution CSV", extra={"path": str(path)})


def read_distribution_csv(path: Path) -> list[tuple[float, float]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise AssetError(f"cannot read {path}: {e}") from e
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != DISTRIBUTION_HEADER:
        raise AssetError(f"{path} has an unexpected header {header!r}")
    return [(float(f), float(p)) for _, f, p in reader]


def write_netlist_file(path: Path, netlist: dict[str, Any]) -> None:
    write_json(path, {"format": NETLIST_FORMAT, "version": FORMAT_VERSION, **netlist})


def read_netlist_file(path: Path) -> dict[str, Any]:
    data = read_json(path)
    if not isinstance(data, dict) or data.get("format") != NETLIST_FORMAT:
        raise AssetError(f"{path} is not a {NETLIST_FORMAT} file")
    for key in ("mode_count", "elements"):
        if key not in data:
            raise AssetError(f"{path} is missing '{key}'")
    return data
