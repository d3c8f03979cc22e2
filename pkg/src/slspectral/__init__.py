"""Sturm-Liouville spectral solver via transmutation-kernel approximation.

Builds uniform-in-frequency closed-form approximations of the two normalized
solutions of (p v')' - q v + lambda r v = 0 and extracts real, negative and
complex eigenvalues from the characteristic determinant of the boundary
conditions.  An independent adaptive-IVP oracle cross-checks results.
"""

from .errors import InputError, NumericalError, SLSpectralError
from .oracle import oracle_char, oracle_eigenvalues
from .pipeline import SearchOptions, SolverOptions, build_solver, find_spectrum, solve
from .problem import BoundaryConditions, SLProblem
from .spectrum import CharFunction, EigenvalueRecord, Spectrum

__all__ = [
    "SLSpectralError",
    "InputError",
    "NumericalError",
    "SLProblem",
    "BoundaryConditions",
    "SolverOptions",
    "SearchOptions",
    "build_solver",
    "find_spectrum",
    "solve",
    "CharFunction",
    "EigenvalueRecord",
    "Spectrum",
    "oracle_char",
    "oracle_eigenvalues",
]

__version__ = "0.1.0"
