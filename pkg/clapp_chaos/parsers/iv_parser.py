"""
I-V Characteristic Parser.

Reads two-column `v_be,i_dc` CSV files (one header line, SI units, UTF-8,
LF or CRLF line endings) into IvSample lists for the exponential fit.

Example:
    >>> parser = IvCsvParser()
    >>> samples = parser.parse_file("bfu730f_iv.csv")
    >>> len(samples)
    50
"""

import csv
import io
import logging
import math
from pathlib import Path

from clapp_chaos.core.base import IvSample
from clapp_chaos.core.exceptions import InputError

logger = logging.getLogger(__name__)

IV_COLUMNS = ("v_be", "i_dc")


class IvCsvParser:
    """
    Parser for two-column I-V CSV files.

    Attributes:
        require_header_names: Reject files whose header is not v_be,i_dc
    """

    def __init__(self, require_header_names: bool = True):
        self.require_header_names = require_header_names

    def parse_file(self, filepath: str) -> list[IvSample]:
        """
        Parse an I-V CSV file.

        Raises:
            InputError: File unreadable or malformed
        """
        try:
            text = Path(filepath).read_text(encoding="utf-8-sig")
        except OSError as e:
            raise InputError(f"cannot read I-V file {filepath}: {e.strerror or e}") from e
        return self.parse(text, source=str(filepath))

    def parse(self, text: str, source: str = "<text>") -> list[IvSample]:
        """
        Parse I-V CSV text.

        Args:
            text: CSV content including the header line
            source: Name used in error messages

        Returns:
            Samples in file order

        Raises:
            InputError: Missing header, wrong column count or non-numeric cell
        """
        text = text.lstrip("\ufeff")
        rows = [
            (line_no, row)
            for line_no, row in enumerate(csv.reader(io.StringIO(text, newline="")), start=1)
            if any(cell.strip() for cell in row)
        ]
        if not rows:
            raise InputError(f"{source}: empty I-V file")

        header = [cell.strip().lower() for cell in rows[0][1]]
        if len(header) != 2:
            raise InputError(f"{source}: line 1: expected 2 columns, got {len(header)}")
        if self.require_header_names and tuple(header) != IV_COLUMNS:
            raise InputError(
                f"{source}: line 1: expected header {','.join(IV_COLUMNS)}, got {','.join(header)}"
            )

        samples = []
        for line_no, row in rows[1:]:
            if len(row) != 2:
                raise InputError(f"{source}: line {line_no}: expected 2 columns, got {len(row)}")
            try:
                v_be, i_dc = (float(cell) for cell in row)
            except ValueError:
                raise InputError(
                    f"{source}: line {line_no}: non-numeric value in {row!r}"
                ) from None
            if not (math.isfinite(v_be) and math.isfinite(i_dc)):
                raise InputError(f"{source}: line {line_no}: non-finite value in {row!r}")
            samples.append(IvSample(v_be=v_be, i_dc=i_dc))

        logger.debug("read %d I-V samples from %s", len(samples), source)
        return samples
