"""
Serialization utilities for interfem

This module provides the text formats of the campaign artifacts: CSV tables
with deterministic float formatting, structured key-value reports with
embedded CSV blocks, and safe file I/O that raises SerializationError.
"""

import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from ..exceptions import SerializationError

PathLike = Union[str, Path]


def format_float(value: Any, digits: int = 12) -> str:
    """
    Format a number deterministically for CSV output.

    Integers are written without exponent; non-finite values as ``inf``,
    ``-inf`` or ``nan``.
    """
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    number = float(value)
    if math.isnan(number):
        return "nan"
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    return f"{number:.{digits}e}"


def format_exact(value: float) -> str:
    """Format a float with 17 significant digits (full round-trip precision)."""
    return f"{float(value):.17g}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render a CSV table."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def key_value_text(items: Mapping[str, Any], blocks: Optional[Mapping[str, str]] = None) -> str:
    """
    Render a structured report: ``key: value`` lines followed by named CSV blocks.

    Args:
        items: Scalar entries in insertion order
        blocks: Mapping of block name to CSV text

    Returns:
        The report text
    """
    lines = []
    for key, value in items.items():
        if isinstance(value, float) or isinstance(value, np.floating):
            value = format_float(value)
        lines.append(f"{key}: {value}")
    for name, body in (blocks or {}).items():
        lines.append("")
        lines.append(f"[{name}]")
        lines.append(body.rstrip("\n"))
    return "\n".join(lines) + "\n"


def write_text(path: PathLike, text: str) -> Path:
    """
    Write text to a file, creating parent directories.

    Raises:
        SerializationError: If the file cannot be written
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    except OSError as e:
        raise SerializationError(f"Failed to write {target}: {e}", error_code="IO_WRITE")
    return target


def read_text(path: PathLike) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        SerializationError: If the file cannot be read or decoded
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise SerializationError(f"Failed to read {path}: {e}", error_code="IO_READ")

