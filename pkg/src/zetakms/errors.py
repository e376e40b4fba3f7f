"""Exception taxonomy shared by all modules.

The CLI maps these onto process exit codes: capacity problems exit 3, bad
parameters/usage exit 64, failed certificates exit 2.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WorkbenchError, ValueError):
    """Parameter outside the mathematical domain (e.g. series abscissa violated)."""


class CapacityError(WorkbenchError):
    """Requested truncation exceeds a configured memory/enumeration cap."""


class BasisMismatchError(WorkbenchError):
    """Operands live on different truncated bases."""


class TruncationError(WorkbenchError):
    """Clipped mass above the configured threshold in strict mode."""


class TruncationWarning(UserWarning):
    """Clipped mass above the configured threshold (non-strict mode)."""


class ResolutionError(WorkbenchError):
    """Boundary data not resolved deeply enough to evaluate a cocycle."""


class FitQualityError(WorkbenchError):
    """Asymptotic fit rejected (R^2 below threshold or non-converged traces)."""
