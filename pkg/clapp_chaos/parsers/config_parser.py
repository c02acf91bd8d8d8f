"""
Run Configuration Parser.

Parses the line-based configuration format:

    # chaotic operating point
    v_cc = 12
    c3   = 0.1p      # SI suffixes p n u m k M G
    beta = 100

One `key = value` per line; `#` starts a comment; blank lines are ignored.
Keys not given keep their defaults from the published operating point.

Example:
    >>> parser = ConfigParser()
    >>> config = parser.parse_file("chaos.cfg")
    >>> config = apply_overrides(config, ["r_e=10", "beta=150"])
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional

from clapp_chaos.config.settings import RunConfig, parse_value, unknown_key_message
from clapp_chaos.core.exceptions import ConfigError, InputError

logger = logging.getLogger(__name__)

BETA_PROVENANCE_WARNING = (
    "beta not set: using %.6g; the published operating point does not state the "
    "transistor current gain"
)


class ConfigParser:
    """
    Parser for key = value run configurations.

    Attributes:
        base: Configuration supplying values for keys not in the text
        explicit_keys: Keys set by the most recent parse

    Example:
        >>> parser = ConfigParser()
        >>> config = parser.parse("r_e = 10\\nbeta = 120\\n")
        >>> parser.explicit_keys
        ['r_e', 'beta']
    """

    def __init__(self, base: Optional[RunConfig] = None):
        self.base = base or RunConfig()
        self.explicit_keys: list[str] = []

    def parse_file(self, filepath: str, warn_missing_beta: bool = True) -> RunConfig:
        """
        Parse a configuration file.

        Raises:
            InputError: File missing or unreadable
            ConfigError: Syntax, unknown key, or invalid value
        """
        path = Path(filepath)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read config {filepath}: {e.strerror or e}") from e
        return self.parse(text, warn_missing_beta=warn_missing_beta)

    def parse(self, text: str, warn_missing_beta: bool = True) -> RunConfig:
        """
        Parse configuration text.

        Args:
            text: Configuration text
            warn_missing_beta: Log the beta provenance warning when the text
                does not set beta

        Returns:
            RunConfig with every invariant checked

        Raises:
            ConfigError: Carries the line number and key of the first problem
        """
        values = {}
        lines = {}
        for line_no, key, raw in self._entries(text):
            if key in values:
                raise ConfigError(
                    f"duplicate key {key!r} (first set on line {lines[key]})",
                    line=line_no,
                    key=key,
                )
            try:
                values[key] = parse_value(key, raw)
            except ConfigError as e:
                raise ConfigError(str(e), line=line_no, key=key) from None
            lines[key] = line_no

        self.explicit_keys = list(values)
        config = replace(self.base, **values)
        _check(config, lines)
        if warn_missing_beta and "beta" not in values:
            logger.warning(BETA_PROVENANCE_WARNING, config.beta)
        return config

    @staticmethod
    def _entries(text: str) -> Iterable[tuple[int, str, str]]:
        """(line number, key, raw value) for each non-blank line."""
        for line_no, line in enumerate(text.lstrip("\ufeff").splitlines(), start=1):
            content = line.split("#", 1)[0].strip()
            if not content:
                continue
            if "=" not in content:
                raise ConfigError(f"expected 'key = value', got {content!r}", line=line_no)
            key, raw = content.split("=", 1)
            key = key.strip()
            if not key:
                raise ConfigError("missing key before '='", line=line_no)
            if not raw.strip():
                raise ConfigError(f"{key}: missing value", line=line_no, key=key)
            yield line_no, key, raw.strip()


def _check(config: RunConfig, lines: dict[str, int]) -> None:
    try:
        config.check()
    except ConfigError as e:
        if e.key in lines:
            raise ConfigError(str(e), line=lines[e.key], key=e.key) from None
        raise


def parse_config(text: str) -> RunConfig:
    """Parse configuration text over the published defaults."""
    return ConfigParser().parse(text)


def apply_overrides(config: RunConfig, overrides: Iterable[str]) -> RunConfig:
    """
    Apply `key=value` overrides on top of a configuration.

    Raises:
        ConfigError: Malformed override, unknown key, or invalid value
    """
    values = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        if key not in RunConfig.keys():
            raise ConfigError(unknown_key_message(key), key=key)
        values[key] = parse_value(key, raw)
    updated = replace(config, **values)
    updated.check()
    return updated


def resolve_config(
    config_path: Optional[str] = None,
    overrides: Iterable[str] = (),
) -> RunConfig:
    """
    Build the run configuration: defaults, then the config file, then overrides.

    Logs the beta provenance warning when neither source sets beta.
    """
    overrides = list(overrides)
    parser = ConfigParser()
    if config_path:
        config = parser.parse_file(config_path, warn_missing_beta=False)
    else:
        config = RunConfig()
    config = apply_overrides(config, overrides)

    override_keys = {item.split("=", 1)[0].strip() for item in overrides}
    if "beta" not in parser.explicit_keys and "beta" not in override_keys:
        logger.warning(BETA_PROVENANCE_WARNING, config.beta)
    return config
