"""Exact computation with rational- and polynomial-recursive sequences.

Subpackages and modules
-----------------------
algebra      fields, sparse polynomials, rational functions, Groebner bases
circuits     arithmetic circuits and extended-system fusion
recsys       systems, initial conditions, numeric and symbolic evaluation
flatten      field chains, subfield membership, simple-recursion extraction
zeroness     finite-field zeroness, prefix heuristic, Skolem search
qbf          QBF parsing and the reduction to polyrec zeroness
io           JSON formats
"""
from importlib.resources import files as _files

from .algebra import QQ, GF2, Field, PolyRing, RationalFunction, parse_expr
from .errors import (
    BoundExceeded,
    DivisionByZeroEvent,
    FieldMismatch,
    ParseError,
    RatrecError,
    ResourceLimit,
)
from .recsys import (
    Numeric,
    PRecurrence,
    RecSystem,
    SimpleRecursion,
    Symbolic,
    SymbolicCustom,
    apply_step_homomorphism,
    degree_profile,
    evaluate,
    from_precursive,
    simple_evaluate,
    symbolic_evaluate,
)
from .flatten import chain_report, stabilization_bound, subfield_membership, transcendence_degree
from .zeroness import counterexample_system, prefix_zero_check, skolem_search, zeroness_finite_field
from .qbf import brute_force_qbf, check_validity_via_sequence, compile_qbf, parse_qbf

__all__ = [
    "QQ",
    "GF2",
    "Field",
    "PolyRing",
    "RationalFunction",
    "parse_expr",
    "BoundExceeded",
    "DivisionByZeroEvent",
    "FieldMismatch",
    "ParseError",
    "RatrecError",
    "ResourceLimit",
    "Numeric",
    "PRecurrence",
    "RecSystem",
    "SimpleRecursion",
    "Symbolic",
    "SymbolicCustom",
    "apply_step_homomorphism",
    "degree_profile",
    "evaluate",
    "from_precursive",
    "simple_evaluate",
    "symbolic_evaluate",
    "chain_report",
    "stabilization_bound",
    "subfield_membership",
    "transcendence_degree",
    "counterexample_system",
    "prefix_zero_check",
    "skolem_search",
    "zeroness_finite_field",
    "brute_force_qbf",
    "check_validity_via_sequence",
    "compile_qbf",
    "parse_qbf",
    "data_path",
]

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a bundled example input (``catalan.json``, ``qbf_true.qbf``, ...)."""
    return _files("ratrec") / "data" / name
