"""Desk-scale numerics for ideal compressible two-fluid MHD.

Subpackages cover the equation of state and entropy-like variables, the
symmetric form of the governing equations and its secondary symmetrizer,
characteristic wave speeds, Rankine-Hugoniot jump analysis with discontinuity
classification, shock admissibility and sheet-stability criteria, and
numerical verification of the conserved energy integrals of the linearized
system.
"""

from .eos import (
    ConvergenceError,
    EosParams,
    InadmissibleStateError,
    STATE_VECTOR_COMPONENTS,
    State,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "EosParams",
    "InadmissibleStateError",
    "STATE_VECTOR_COMPONENTS",
    "State",
    "__version__",
]
