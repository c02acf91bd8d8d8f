"""
Validators Module.

Checks on written analysis outputs.
"""

from clapp_chaos.validators.output_validator import OutputValidator, ValidationResult

__all__ = [
    "OutputValidator",
    "ValidationResult",
]
