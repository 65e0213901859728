"""Exception types shared across the simulator.

Every error carries a short machine-readable ``category`` so the command
line tool can report failures in a greppable one-line form.
"""


class RotorError(Exception):
    """Base class for all simulator errors."""

    category = "error"


class InvalidParameterError(RotorError):
    category = "invalid-parameter"


class DegenerateStateError(RotorError):
    category = "degenerate-state"


class ParameterOverflowError(RotorError):
    category = "parameter-overflow"


class AliasingError(RotorError):
    category = "aliasing"


class FitDomainError(RotorError):
    category = "fit-domain"


class BoundaryError(RotorError):
    """A map step landed exactly between two attractors."""

    category = "boundary"


class OutOfDomainError(RotorError):
    category = "out-of-domain"


class ConfigError(RotorError):
    category = "invalid-config"


class UnwritablePathError(RotorError):
    category = "unwritable-path"


class TableFormatError(RotorError):
    category = "table-format"
