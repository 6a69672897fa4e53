"""Exact polynomial arithmetic: sparse multivariate, parametric univariate,
rational functions, gcds, resultants and the polynomial text grammar."""

from multistat.polycore.gcd import poly_gcd, poly_lcm
from multistat.polycore.multipoly import MultiPoly, StructuralError, common_ring, poly_arith
from multistat.polycore.parsing import (
    PolynomialSyntaxError,
    UnknownIdentifierError,
    natural_key,
    parse_polynomial,
)
from multistat.polycore.ratfunc import RationalFunction, clear_denominators, substitute, substitute_parts
from multistat.polycore.resultants import (
    DomainError,
    degree_one_subresultant,
    discriminant,
    resultant,
    subresultant_prs,
    sylvester_resultant,
)
from multistat.polycore.unipoly import UniPoly, squarefree_part, univariate_gcd

__all__ = [
    "DomainError",
    "MultiPoly",
    "PolynomialSyntaxError",
    "RationalFunction",
    "StructuralError",
    "UniPoly",
    "UnknownIdentifierError",
    "clear_denominators",
    "common_ring",
    "degree_one_subresultant",
    "discriminant",
    "natural_key",
    "parse_polynomial",
    "poly_arith",
    "poly_gcd",
    "poly_lcm",
    "resultant",
    "squarefree_part",
    "subresultant_prs",
    "substitute",
    "substitute_parts",
    "sylvester_resultant",
    "univariate_gcd",
]
