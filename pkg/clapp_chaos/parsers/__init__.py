"""
Parsers Module.

Text input formats:
    - config_parser: key = value run configuration
    - iv_parser: two-column I-V CSV
"""

from clapp_chaos.parsers.config_parser import (
    ConfigParser,
    apply_overrides,
    parse_config,
    resolve_config,
)
from clapp_chaos.parsers.iv_parser import IvCsvParser

__all__ = [
    "ConfigParser",
    "apply_overrides",
    "parse_config",
    "resolve_config",
    "IvCsvParser",
]
