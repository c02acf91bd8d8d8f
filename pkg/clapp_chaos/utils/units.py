"""
SI Quantity Utilities.

Parses and formats scalar quantities written with an optional SI prefix
suffix, as used in configuration files:

    2p      -> 2e-12
    0.753n  -> 7.53e-10
    5k      -> 5000.0

Example:
    >>> parse_quantity("47.1p")
    4.71e-11
    >>> format_quantity(0.5)
    '0.5'
"""

from decimal import Decimal, InvalidOperation

from clapp_chaos.core.exceptions import InputError

# SI prefix suffix to power of ten
SI_PREFIXES = {
    "p": -12,
    "n": -9,
    "u": -6,
    "m": -3,
    "k": 3,
    "M": 6,
    "G": 9,
}


def parse_quantity(text: str) -> float:
    """
    Parse a number with an optional SI prefix suffix.

    The suffix is applied in decimal before rounding to float, so "0.753n"
    gives exactly float("0.753e-9").

    Raises:
        InputError: Text is not a number
    """
    raw = text.strip()
    if not raw:
        raise InputError("empty value")
    try:
        return float(raw)
    except ValueError:
        pass

    suffix = raw[-1]
    if suffix not in SI_PREFIXES:
        raise InputError(f"not a number: {raw!r}")
    try:
        mantissa = Decimal(raw[:-1].strip())
    except InvalidOperation:
        raise InputError(f"not a number: {raw!r}") from None
    if not mantissa.is_finite():
        raise InputError(f"not a number: {raw!r}")
    return float(mantissa.scaleb(SI_PREFIXES[suffix]))


def format_quantity(value: float) -> str:
    """Text that parses back to exactly the same double (17 significant digits)."""
    return f"{value:.17g}"
