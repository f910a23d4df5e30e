"""Exception types shared across the package.

Plain ``ValueError`` is raised for mathematical domain violations
(non-positive energies, negative redundancy, ...); the classes below
cover structural problems with configurations and data files.
"""


class VmmDseError(Exception):
    """Base class for package-specific errors."""


class ConfigurationError(VmmDseError):
    """Inputs are structurally inconsistent (dimension or schema mismatch)."""


class IngestionError(VmmDseError):
    """A characterization file failed validation."""


class InsufficientDataError(VmmDseError):
    """Too few records survive filtering to fit a model."""


class InfeasibleError(VmmDseError):
    """No design point satisfies the requested constraint."""


class OutOfRangeError(VmmDseError):
    """A query lies outside the characterized grid (no extrapolation)."""
