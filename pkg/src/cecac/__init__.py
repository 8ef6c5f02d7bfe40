"""Exact solvers for committee elections with candidate attribute constraints."""
from .constraints import (
    Constraint,
    ParseError,
    combine,
    normalize_simple,
    parse_constraint,
    render,
    to_nnf_formula,
)
from .model import (
    Candidate,
    Instance,
    NotApplicable,
    Solution,
    check_solution,
    classify_instance,
    induced_assignment,
    validate_instance,
)

__all__ = [
    "Candidate",
    "Constraint",
    "Instance",
    "NotApplicable",
    "ParseError",
    "Solution",
    "check_solution",
    "classify_instance",
    "combine",
    "induced_assignment",
    "normalize_simple",
    "parse_constraint",
    "render",
    "to_nnf_formula",
    "validate_instance",
]

__version__ = "0.1.0"
