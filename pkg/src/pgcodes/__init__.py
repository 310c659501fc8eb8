"""Codes of points and subspaces of PG(n, q) over F_p, their weight gaps, and linear blocking sets."""

from .blocking import PointSet, certify, desarguesian_spread, linear_blocking_set
from .codes import Code, Codeword, build_code, dual, hull
from .errors import BudgetExceeded, ParameterError
from .galois import make_field
from .geometry import ProjectiveSpace, projective_space
from .spectrum import SearchConfig, full_spectrum, gap_check, min_weight
from .theorems import theorem_suite, verify

__all__ = [
    "BudgetExceeded", "Code", "Codeword", "ParameterError", "PointSet", "ProjectiveSpace",
    "SearchConfig", "build_code", "certify", "desarguesian_spread", "dual", "full_spectrum",
    "gap_check", "hull", "linear_blocking_set", "make_field", "min_weight", "projective_space",
    "theorem_suite", "verify",
]
