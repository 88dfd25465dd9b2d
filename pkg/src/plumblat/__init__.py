"""Lattice link homology of arrow-decorated plumbing trees.

Subpackages follow the computation: :mod:`plumbing` (graphs and Spin^c),
:mod:`lattice_complex` (the complex), :mod:`homology_engine` (homology and
H-function), :mod:`alexander`, :mod:`presentation` and :mod:`resolution`.
"""

from .errors import (
    ComparisonMismatchError,
    InexactResolutionError,
    InsufficientBoxError,
    NotAComplexError,
    NotLSpaceError,
    ParseError,
    PlumblatError,
    SingularFormError,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComparisonMismatchError",
    "InexactResolutionError",
    "InsufficientBoxError",
    "NotAComplexError",
    "NotLSpaceError",
    "ParseError",
    "PlumblatError",
    "SingularFormError",
    "__version__",
]
