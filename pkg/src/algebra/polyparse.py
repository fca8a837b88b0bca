"""Parsing polynomial strings into GradedPoly, via sympy."""
from functools import lru_cache
from tokenize import TokenError
from typing import Dict, Iterable, List, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, implicit_multiplication, parse_expr, standard_transformations

from ..errors import CoefficientError, PolynomialError
from .exactnum import Coefficient
from .gradedring import GradedPoly, VariableTable

_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication)


@lru_cache(maxsize=64)
def _symbols(table: VariableTable) -> Dict[str, sympy.Symbol]:
    return {name: sympy.Symbol(name) for name in table.names}


def from_sympy(expr: sympy.Expr, table: VariableTable) -> GradedPoly:
    syms = _symbols(table)
    extra = {str(s) for s in expr.free_symbols} - set(syms)
    if extra:
        raise PolynomialError(f"Unknown variables {sorted(extra)} (known: {', '.join(table.names)})")
    gens = [syms[n] for n in table.names]
    try:
        poly = sympy.Poly(sympy.expand(expr), *gens, domain="QQ")
    except sympy.PolynomialError as e:
        raise PolynomialError(f"Not a polynomial in {table.names}: {expr}") from e
    terms = {}
    for mono, c in poly.terms():
        try:
            terms[tuple(int(e) for e in mono)] = Coefficient.from_fraction(int(c.p), int(c.q))
        except CoefficientError as e:
            raise PolynomialError(f"Coefficient {c} of {expr} is not in Z[1/6]") from e
    return GradedPoly(table, terms)


def parse_poly(text: Union[str, int], table: VariableTable) -> GradedPoly:
    """Parse '1/8*lambda1^3*H - H^4/8' style text on the given table."""
    text = str(text).strip()
    if not text:
        raise PolynomialError("Empty polynomial text")
    try:
        expr = parse_expr(text, local_dict=dict(_symbols(table)), transformations=_TRANSFORMS, evaluate=True)
    except (SyntaxError, TypeError, sympy.SympifyError, TokenError) as e:
        raise PolynomialError(f"Cannot parse polynomial '{text}': {e}") from e
    return from_sympy(sympy.sympify(expr), table)


def parse_many(texts: Iterable[str], table: VariableTable) -> List[GradedPoly]:
    return [parse_poly(t, table) for t in texts]


def to_sympy(p: GradedPoly) -> sympy.Expr:
    syms = _symbols(p.table)
    gens = [syms[n] for n in p.table.names]
    expr = sympy.Integer(0)
    for mono, c in p.terms:
        term = c.to_sympy()
        for g, e in zip(gens, mono):
            if e:
                term *= g ** e
        expr += term
    return expr
