"""
Configuration Module.

Run configuration with the published operating point as defaults.
"""

from clapp_chaos.config.settings import (
    CONFIG_KINDS,
    RunConfig,
    format_value,
    get_published_config,
    parse_value,
    unknown_key_message,
)

__all__ = [
    "CONFIG_KINDS",
    "RunConfig",
    "format_value",
    "get_published_config",
    "parse_value",
    "unknown_key_message",
]
