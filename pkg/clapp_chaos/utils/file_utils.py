"""
File Utilities.

Directory, CSV and manifest helpers for analysis outputs.

Example:
    >>> ensure_directory("output")
    >>> write_csv("output/eigs.csv", ["index", "real", "imag"], rows)
    >>> get_file_checksum("output/eigs.csv")
"""

import csv
import hashlib
import json
import os
from typing import Any, Iterable, Sequence

from clapp_chaos.utils.units import format_quantity


def ensure_directory(path: str) -> None:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        path: Path to the directory
    """
    os.makedirs(path, exist_ok=True)


def format_cell(value: Any) -> str:
    """CSV text of one value; floats at 17 significant digits, None empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_quantity(value)
    if hasattr(value, "dtype"):
        return format_cell(value.item())
    return str(value)


def write_csv(
    filepath: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> int:
    """
    Write a CSV file with a one-line header and LF line endings.

    Args:
        filepath: Destination path; parent directories are created
        header: Column names
        rows: Row values, formatted with format_cell

    Returns:
        Number of data rows written
    """
    parent = os.path.dirname(filepath)
    if parent:
        ensure_directory(parent)

    count = 0
    with open(filepath, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
            count += 1
    return count


def get_file_checksum(filepath: str, algorithm: str = "sha256") -> str:
    """
    Calculate checksum of a file.

    Args:
        filepath: Path to the file
        algorithm: Hash algorithm ('md5', 'sha1', 'sha256')

    Returns:
        Hexadecimal checksum string
    """
    hash_func = getattr(hashlib, algorithm)()

    with open(filepath, "rb") as f:
        for chunk in iter(lambda: f.read(8192), b""):
            hash_func.update(chunk)

    return hash_func.hexdigest()


def save_manifest(
    filepath: str,
    data: dict,
    indent: int = 2,
) -> None:
    """
    Save a run manifest in JSON format.

    Args:
        filepath: Path to the manifest file
        data: Dictionary to save
        indent: JSON indentation level
    """
    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=indent, default=str)
