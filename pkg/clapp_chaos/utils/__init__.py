"""
Utilities Module.

File handling and SI quantity helpers.
"""

from clapp_chaos.utils.file_utils import (
    ensure_directory,
    format_cell,
    get_file_checksum,
    save_manifest,
    write_csv,
)
from clapp_chaos.utils.units import SI_PREFIXES, format_quantity, parse_quantity

__all__ = [
    "ensure_directory",
    "format_cell",
    "get_file_checksum",
    "save_manifest",
    "write_csv",
    "SI_PREFIXES",
    "format_quantity",
    "parse_quantity",
]
