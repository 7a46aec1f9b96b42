"""gibbscut: exact minimization of energies over finite ordered label sets.

Pipeline: expand a label function into a multilinear Boolean polynomial
(exact rational coefficients), verify submodularity / graph representability,
then minimize exactly by max-flow min-cut, block decomposition, or brute
force.  See the README for the file formats and the CLI.
"""

from .errors import (
    CapExceededError,
    EncodeError,
    GibbsCutError,
    MsfmError,
    NotRepresentableError,
    PolynomialError,
    VerificationError,
)
from .poly import Polynomial, make_polynomial

__version__ = "0.1.0"

__all__ = [
    "Polynomial",
    "make_polynomial",
    "GibbsCutError",
    "PolynomialError",
    "EncodeError",
    "CapExceededError",
    "NotRepresentableError",
    "MsfmError",
    "VerificationError",
    "__version__",
]
