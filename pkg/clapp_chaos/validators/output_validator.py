"""
Output Validator.

Re-parses written CSV outputs: every row must have as many cells as the
header, and every numeric column must hold finite doubles.

Example:
    >>> validator = OutputValidator()
    >>> result = validator.validate_csv("output/sweep.csv", label_columns=["classification"])
    >>> print(result.summary())
"""

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Iterable, Optional


@dataclass
class ValidationResult:
    """
    Result of validating one CSV output.

    Attributes:
        path: File that was checked
        is_valid: Whether all checks passed
        row_count: Data rows read (header excluded)
        columns: Header column names
        missing_counts: Column -> number of empty cells
        errors: Validation error messages
        warnings: Validation warning messages
        timestamp: When validation was performed
    """
    path: str = ""
    is_valid: bool = True
    row_count: int = 0
    columns: list[str] = field(default_factory=list)
    missing_counts: dict[str, int] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    timestamp: datetime = field(default_factory=datetime.now)

    def add_error(self, message: str) -> None:
        """Add an error message and mark as invalid."""
        self.errors.append(message)
        self.is_valid = False

    def add_warning(self, message: str) -> None:
        """Add a warning message."""
        self.warnings.append(message)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "path": self.path,
            "is_valid": self.is_valid,
            "row_count": self.row_count,
            "columns": self.columns,
            "missing_counts": self.missing_counts,
            "errors": self.errors,
            "warnings": self.warnings,
            "timestamp": self.timestamp.isoformat(),
        }

    def summary(self) -> str:
        """Generate a human-readable summary."""
        lines = []
        lines.append("=" * 60)
        lines.append(f"OUTPUT VALIDATION: {self.path}")
        lines.append("=" * 60)
        lines.append(f"Status: {'PASSED' if self.is_valid else 'FAILED'}")
        lines.append(f"Rows: {self.row_count:,}")
        lines.append(f"Columns: {', '.join(self.columns)}")

        missing = {col: n for col, n in self.missing_counts.items() if n > 0}
        if missing:
            lines.append("\nMissing Values:")
            for col, count in sorted(missing.items()):
                lines.append(f"  {col}: {count:,}")

        if self.errors:
            lines.append("\nErrors:")
            for err in self.errors:
                lines.append(f"  - {err}")

        if self.warnings:
            lines.append("\nWarnings:")
            for warn in self.warnings:
                lines.append(f"  - {warn}")

        lines.append("=" * 60)
        return "\n".join(lines)


class OutputValidator:
    """
    Validator for CSV files written by the analysis runner.

    Checks performed:
    - Header present and without duplicate names
    - Cell count of every row equals the header length
    - Numeric cells parse as finite doubles
    - Empty numeric cells only where allowed

    Example:
        >>> validator = OutputValidator(max_errors=5)
        >>> result = validator.validate_csv("output/eigs.csv")
        >>> if not result.is_valid:
        ...     for error in result.errors:
        ...         print(f"ERROR: {error}")
    """

    def __init__(self, max_errors: int = 20):
        """
        Initialize the validator.

        Args:
            max_errors: Stop reporting after this many errors per file
        """
        self.max_errors = max_errors

    def validate_csv(
        self,
        filepath: str,
        label_columns: Iterable[str] = (),
        allow_missing: bool = False,
        expected_columns: Optional[list[str]] = None,
    ) -> ValidationResult:
        """
        Re-parse a CSV output and check its shape and values.

        Args:
            filepath: CSV file to check
            label_columns: Columns holding text labels rather than numbers
            allow_missing: Accept empty numeric cells (reported as warnings)
            expected_columns: Exact header the file must carry, if given

        Returns:
            ValidationResult
        """
        result = ValidationResult(path=filepath)
        labels = set(label_columns)

        try:
            with open(filepath, newline="", encoding="utf-8") as f:
                rows = list(csv.reader(f))
        except OSError as e:
            result.add_error(f"cannot read file: {e.strerror or e}")
            return result

        if not rows:
            result.add_error("file is empty (no header)")
            return result

        header = rows[0]
        result.columns = header
        result.missing_counts = {col: 0 for col in header}
        if len(set(header)) != len(header):
            result.add_error(f"duplicate column names in header: {header}")
        if expected_columns is not None and header != expected_columns:
            result.add_error(f"header {header} does not match expected {expected_columns}")

        for line_no, row in enumerate(rows[1:], start=2):
            result.row_count += 1
            if len(result.errors) >= self.max_errors:
                continue
            if len(row) != len(header):
                result.add_error(f"line {line_no}: {len(row)} cells, header has {len(header)}")
                continue
            for col, cell in zip(header, row):
                if col in labels:
                    continue
                self._check_numeric(result, line_no, col, cell, allow_missing)

        if len(result.errors) >= self.max_errors:
            result.add_warning(f"stopped reporting after {self.max_errors} errors")
        missing_total = sum(result.missing_counts.values())
        if missing_total:
            result.add_warning(f"{missing_total} empty numeric cells")
        return result

    @staticmethod
    def _check_numeric(
        result: ValidationResult,
        line_no: int,
        col: str,
        cell: str,
        allow_missing: bool,
    ) -> None:
        if cell == "":
            result.missing_counts[col] += 1
            if not allow_missing:
                result.add_error(f"line {line_no}: empty value in column {col!r}")
            return
        try:
            value = float(cell)
        except ValueError:
            result.add_error(f"line {line_no}: {col}={cell!r} is not a number")
            return
        if not math.isfinite(value):
            result.add_error(f"line {line_no}: {col}={cell!r} is not finite")
