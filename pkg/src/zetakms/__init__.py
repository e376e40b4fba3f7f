"""Numerical workbench for zeta-function quantum statistical mechanics.

Finite truncations of three operator systems built on the arithmetic of the
integers and on tree boundaries: the Bost-Connes style multiplication
semigroup with its Gibbs and KMS structure, the supersymmetric squarefree
gas, and the Patterson-Sullivan crossed product of a free-group boundary,
together with spectral zeta functions, twisted-commutator certificates, and
spectral-action asymptotics.

Kernels (sieves, divisor convolution, compensated summation) run on a
compiled Cython backend when the extension built, with a bit-identical pure
Python fallback; set ``ZETAKMS_PURE_PYTHON=1`` to force the fallback.
"""

from zetakms._backend import BACKEND
from zetakms.errors import (BasisMismatchError, CapacityError, DomainError,
                            FitQualityError, ResolutionError,
                            TruncationError, TruncationWarning,
                            WorkbenchError)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BasisMismatchError",
    "CapacityError",
    "DomainError",
    "FitQualityError",
    "ResolutionError",
    "TruncationError",
    "TruncationWarning",
    "WorkbenchError",
    "__version__",
]
