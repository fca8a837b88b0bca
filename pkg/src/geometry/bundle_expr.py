"""Text syntax for bundle expressions.

    E{c1,c2}            atom of rank 2 with Chern classes c1, c2
    L{-2*s}             line bundle with the given first Chern class
    A + B               direct sum
    dual(A), det(A)     dual, determinant
    sym4(A), sym<4>(A)  symmetric power
    tensorL(A, L{s})    A tensored by a rank-1 bundle (det(B), or a bare degree-1 class)
"""
import re
from typing import List

from arpeggio import EOF, NoMatch, ParserPython, Terminal, ZeroOrMore
from arpeggio import RegExMatch as _

from ..errors import UsageError
from .chern import Atom, BundleExpr, Det, Dual, Line, Sum, Sym, TensorLine


def ident(): return _(r"[A-Za-z][A-Za-z0-9_]*")
def line_class(): return _(r"[^{}]+")
def poly_text(): return _(r"[^(),{}]+")
def sym_op(): return _(r"sym<?\d+>?")
def atom(): return ident, "{", ident, ZeroOrMore(",", ident), "}"
def line(): return "L", "{", line_class, "}"
def dual(): return "dual", "(", expr, ")"
def det(): return "det", "(", expr, ")"
def sym(): return sym_op, "(", expr, ")"
def tensor(): return "tensorL", "(", expr, ",", [line, det, dual, atom, poly_text], ")"
def group(): return "(", expr, ")"
def term(): return [line, dual, det, sym, tensor, atom, group]
def expr(): return term, ZeroOrMore("+", term)
def bundle(): return expr, EOF


_parser = None


def _get_parser() -> ParserPython:
    global _parser
    if _parser is None:
        _parser = ParserPython(bundle)
    return _parser


def _build(node) -> list:
    if isinstance(node, Terminal):
        rule = node.rule_name
        if rule in ("ident", "line_class", "poly_text"):
            return [node.value.strip()]
        if rule == "sym_op":
            return [int(re.search(r"\d+", node.value).group())]
        return []
    inner = [x for child in node for x in _build(child)]
    rule = node.rule_name
    if rule == "atom":
        return [Atom(inner[0], inner[1:])]
    if rule == "line":
        return [Line(inner[0])]
    if rule == "dual":
        return [Dual(inner[0])]
    if rule == "det":
        return [Det(inner[0])]
    if rule == "sym":
        return [Sym(inner[1], inner[0])]
    if rule == "tensor":
        return [TensorLine(inner[0], inner[1])]
    if rule == "expr":
        return [inner[0] if len(inner) == 1 else Sum(*inner)]
    return inner


def parse_bundle(text: str) -> BundleExpr:
    """Parse the bundle expression syntax above."""
    try:
        tree = _get_parser().parse(text)
    except NoMatch as e:
        raise UsageError(f"Cannot parse bundle expression '{text}': {e}") from e
    built: List[BundleExpr] = _build(tree)
    if len(built) != 1:
        raise UsageError(f"Bundle expression '{text}' did not reduce to one bundle")
    return built[0]
