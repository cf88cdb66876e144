"""Exact algebra: fields, sparse polynomials, rational functions, GCD, Groebner bases."""
from .fields import Field, GF2, ModInt, QQ, Scalar, is_prime
from .gcd import poly_gcd, poly_lcm
from .groebner import buchberger, is_groebner_basis, normal_form
from .orders import BlockElimination, BlockOrder, GradedLex, GradedRevLex, Lex, MonomialOrder
from .parse import identifiers, parse_expr, parse_poly
from .polynomial import Monomial, PolyRing, Polynomial, poly_ring
from .rational import RationalFunction, partial_derivative, rf_arith, substitute

__all__ = [
    "Field", "GF2", "ModInt", "QQ", "Scalar", "is_prime",
    "poly_gcd", "poly_lcm",
    "buchberger", "is_groebner_basis", "normal_form",
    "BlockElimination", "BlockOrder", "GradedLex", "GradedRevLex", "Lex", "MonomialOrder",
    "identifiers", "parse_expr", "parse_poly",
    "Monomial", "PolyRing", "Polynomial", "poly_ring",
    "RationalFunction", "partial_derivative", "rf_arith", "substitute",
]
