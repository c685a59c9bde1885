"""Console output helpers shared by every ``hqec`` command.

User-facing feedback goes through these functions; diagnostic detail goes
to the structured logger instead.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import typer


def success(message: str, *, prefix: bool = True) -> None:
    """Green line with a check mark, e.g. ``✅ 4/4 rows match``."""
    typer.secho(f"✅ {message}" if prefix else message, fg=typer.colors.GREEN)


def error(message: str, *, prefix: bool = True, err: bool = True) -> None:
    """Red line with a cross, written to stderr unless ``err=False``."""
    typer.secho(f"❌ {message}" if prefix else message, fg=typer.colors.RED, err=err)


def warning(message: str, *, prefix: bool = True) -> None:
    typer.secho(f"⚠️  {message}" if prefix else message, fg=typer.colors.YELLOW)


def plain(message: str) -> None:
    typer.echo(message)


def metric(name: str, value: float, *, digits: int = 12) -> None:
    """Aligned ``name: value`` line; 12 digits keep 1 − F visible near F = 1."""
    typer.echo(f"  {name:<22} {value:.{digits}g}")


def table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    """Fixed-width text table; columns size to their widest cell."""
    body = [[str(c) for c in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in body]) for i, h in enumerate(headers)]
    typer.echo("  ".join(h.ljust(w) for h, w in zip(headers, widths, strict=True)))
    typer.echo("  ".join("-" * w for w in widths))
    for row in body:
        typer.echo("  ".join(c.ljust(w) for c, w in zip(row, widths, strict=True)))
