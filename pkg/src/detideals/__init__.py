"""Exact computation with determinantal and Pfaffian ideals.

Polynomials live in ``exact_poly``; the straightening law and membership
tests in ``straightening``; degenerations and oracle circuits in
``degeneration`` and ``oracle_compose``; skew-symmetric analogues in
``pfaffian``; identity testing in ``pit``; proof-system certificates in
``ips``.  ``python -m detideals`` is the command-line front end.
"""
from .errors import BudgetExceeded, ContractViolation, DetIdealsError, InputError
from .exact_poly import EpsScalar, Poly, VarId, parse_poly
from .straightening import is_in_det_ideal, min_width, straighten

__all__ = [
    "BudgetExceeded", "ContractViolation", "DetIdealsError", "EpsScalar", "InputError", "Poly", "VarId",
    "is_in_det_ideal", "min_width", "parse_poly", "straighten",
]
__version__ = "0.1.0"
