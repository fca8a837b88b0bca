"""Chern classes of bundle expressions by the splitting principle.

A bundle expression is a tree over atoms (a named bundle with Chern classes
c1..cr, or a line bundle given by a degree-1 class) combined with direct sum,
dual, determinant, tensoring by a line and symmetric powers.  Every node has a
list of formal roots, linear forms in the atoms' roots; the total Chern class
is prod(1 + root), rewritten in the atoms' classes.
"""
import re
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..algebra.gradedring import GradedPoly, VariableTable
from ..algebra.polyparse import parse_poly
from ..errors import ChernError, PolynomialError
from ..utils.logging_config import get_logger
from .symmetric import reduce_symmetric

logger = get_logger(__name__)

DEFAULT_TRUNCATION = 16


class BundleExpr:
    """Base node; subclasses implement rank, base variables and roots."""

    def rank(self) -> int:
        raise NotImplementedError

    def atoms(self) -> List["Atom"]:
        return []

    def line_variables(self) -> List[str]:
        return []

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        raise NotImplementedError

    # builders

    def __add__(self, other: "BundleExpr") -> "BundleExpr":
        return Sum(self, other)

    def dual(self) -> "BundleExpr":
        return Dual(self)

    def det(self) -> "BundleExpr":
        return Det(self)

    def sym(self, n: int) -> "BundleExpr":
        return Sym(self, n)

    def tensor_line(self, line: Union["BundleExpr", str, GradedPoly]) -> "BundleExpr":
        return TensorLine(self, line)


class Atom(BundleExpr):
    """A bundle of rank len(classes) whose i-th Chern class is the variable classes[i-1]."""

    def __init__(self, name: str, classes: Sequence[str]):
        if not classes:
            raise ChernError(f"Atom {name} needs at least one Chern class")
        self.name = name
        self.classes = tuple(classes)

    def rank(self) -> int:
        return len(self.classes)

    def atoms(self) -> List["Atom"]:
        return [self]

    def root_names(self) -> List[str]:
        if self.rank() == 1:
            return [self.classes[0]]
        return [f"{self.name}_root{i + 1}" for i in range(self.rank())]

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        return [GradedPoly.var(ctx.table, n) for n in self.root_names()]

    def __repr__(self) -> str:
        return f"{self.name}{{{','.join(self.classes)}}}"


class Line(BundleExpr):
    """Line bundle with first Chern class a degree-1 polynomial (text or GradedPoly)."""

    def __init__(self, cls: Union[str, GradedPoly]):
        self.cls = cls

    def rank(self) -> int:
        return 1

    def line_variables(self) -> List[str]:
        if isinstance(self.cls, GradedPoly):
            return list(self.cls.variables_used())
        return _identifiers(self.cls)

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        return [ctx.line_class(self.cls)]

    def __repr__(self) -> str:
        return f"L{{{self.cls}}}"


class Sum(BundleExpr):
    def __init__(self, *parts: BundleExpr):
        self.parts = parts

    def rank(self) -> int:
        return sum(p.rank() for p in self.parts)

    def atoms(self) -> List[Atom]:
        return [a for p in self.parts for a in p.atoms()]

    def line_variables(self) -> List[str]:
        return [v for p in self.parts for v in p.line_variables()]

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        return [r for p in self.parts for r in p.roots(ctx)]

    def __repr__(self) -> str:
        return " + ".join(repr(p) for p in self.parts)


class _Unary(BundleExpr):
    def __init__(self, inner: BundleExpr):
        self.inner = inner

    def atoms(self) -> List[Atom]:
        return self.inner.atoms()

    def line_variables(self) -> List[str]:
        return self.inner.line_variables()


class Dual(_Unary):
    def rank(self) -> int:
        return self.inner.rank()

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        return [-r for r in self.inner.roots(ctx)]

    def __repr__(self) -> str:
        return f"dual({self.inner!r})"


class Det(_Unary):
    def rank(self) -> int:
        return 1

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        total = GradedPoly.zero(ctx.table)
        for r in self.inner.roots(ctx):
            total = total + r
        return [total]

    def __repr__(self) -> str:
        return f"det({self.inner!r})"


class Sym(_Unary):
    """n-th symmetric power: roots are the sums over multisets of n roots."""

    def __init__(self, inner: BundleExpr, n: int):
        super().__init__(inner)
        if n < 0:
            raise ChernError(f"Symmetric power must be non-negative, got {n}")
        self.n = n

    def rank(self) -> int:
        r = self.inner.rank()
        return comb(self.n + r - 1, r - 1) if r else (1 if self.n == 0 else 0)

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        base = self.inner.roots(ctx)
        out = []
        for choice in combinations_with_replacement(base, self.n):
            total = GradedPoly.zero(ctx.table)
            for r in choice:
                total = total + r
            out.append(total)
        return out

    def __repr__(self) -> str:
        return f"sym{self.n}({self.inner!r})"


class TensorLine(_Unary):
    """inner tensored by a line: every root shifted by the line's class."""

    def __init__(self, inner: BundleExpr, line: Union[BundleExpr, str, GradedPoly]):
        super().__init__(inner)
        if not isinstance(line, BundleExpr):
            line = Line(line)
        if line.rank() != 1:
            raise ChernError(f"tensorL needs a line bundle, got rank {line.rank()}: {line!r}")
        self.line = line

    def rank(self) -> int:
        return self.inner.rank()

    def atoms(self) -> List[Atom]:
        return self.inner.atoms() + self.line.atoms()

    def line_variables(self) -> List[str]:
        return self.inner.line_variables() + self.line.line_variables()

    def roots(self, ctx: "_RootContext") -> List[GradedPoly]:
        (shift,) = self.line.roots(ctx)
        return [r + shift for r in self.inner.roots(ctx)]

    def __repr__(self) -> str:
        return f"tensorL({self.inner!r}, {self.line!r})"


def _identifiers(text: str) -> List[str]:
    return re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text)


class _RootContext:
    """Work table holding the base classes plus the roots of every atom of rank >= 2."""

    def __init__(self, expr: BundleExpr, base: VariableTable):
        self.base = base
        self.atoms: Dict[str, Atom] = {}
        for a in expr.atoms():
            known = self.atoms.get(a.name)
            if known is not None and known.classes != a.classes:
                raise ChernError(f"Atom {a.name} used with two class lists: {known!r} and {a!r}")
            self.atoms[a.name] = a
        extra = []
        for a in self.atoms.values():
            if a.rank() > 1:
                extra.extend((n, 1) for n in a.root_names())
        self.table = base.extend(extra)

    def line_class(self, cls: Union[str, GradedPoly]) -> GradedPoly:
        p = parse_poly(cls, self.table) if isinstance(cls, str) else cls.rename(self.table)
        if not p.is_zero() and p.weighted_degree() != 1:
            raise ChernError(f"Line class {cls} is not of degree 1")
        return p


def base_table(expr: BundleExpr) -> VariableTable:
    """Atom classes (c_i of degree i) and line variables (degree 1), in order of appearance."""
    seen: Dict[str, int] = {}
    for a in expr.atoms():
        for i, c in enumerate(a.classes):
            deg = i + 1 if a.rank() > 1 else 1
            if seen.setdefault(c, deg) != deg:
                raise ChernError(f"Class {c} used with degrees {seen[c]} and {deg}")
    for v in expr.line_variables():
        if seen.setdefault(v, 1) != 1:
            raise ChernError(f"Line variable {v} clashes with a class of degree {seen[v]}")
    return VariableTable(list(seen.items()))


class TotalChernClass:
    """c_0 = 1, c_1, ..., c_N on a base table; piece i is homogeneous of degree i."""

    def __init__(self, table: VariableTable, pieces: Sequence[GradedPoly], truncation: Optional[int] = None):
        self.table = table
        self.truncation = len(pieces) - 1 if truncation is None else truncation
        pieces = list(pieces)[: self.truncation + 1]
        while len(pieces) < self.truncation + 1:
            pieces.append(GradedPoly.zero(table))
        self.pieces: List[GradedPoly] = [p if p.table == table else p.rename(table) for p in pieces]
        for i, p in enumerate(self.pieces):
            if not p.is_zero() and p.weighted_degree() != i:
                raise ChernError(f"Piece {i} of a total class has degree {p.weighted_degree()}: {p}")

    @classmethod
    def from_poly(cls, p: GradedPoly, truncation: int) -> "TotalChernClass":
        return cls(p.table, [p.homogeneous_part(i) for i in range(truncation + 1)], truncation)

    @classmethod
    def one(cls, table: VariableTable, truncation: int) -> "TotalChernClass":
        return cls(table, [GradedPoly.constant(table, 1)], truncation)

    def c(self, i: int) -> GradedPoly:
        if i > self.truncation:
            raise ChernError(f"c_{i} requested from a class truncated at {self.truncation}")
        return self.pieces[i]

    __getitem__ = c

    def top(self, rank: int) -> GradedPoly:
        return self.c(rank)

    def as_poly(self) -> GradedPoly:
        total = GradedPoly.zero(self.table)
        for p in self.pieces:
            total = total + p
        return total

    def rename(self, table: VariableTable) -> "TotalChernClass":
        return TotalChernClass(table, [p.rename(table) for p in self.pieces], self.truncation)

    def __mul__(self, other: "TotalChernClass") -> "TotalChernClass":
        n = min(self.truncation, other.truncation)
        if other.table != self.table:
            other = other.rename(self.table)
        pieces = []
        for k in range(n + 1):
            acc = GradedPoly.zero(self.table)
            for i in range(k + 1):
                acc = acc + self.pieces[i] * other.pieces[k - i]
            pieces.append(acc)
        return TotalChernClass(self.table, pieces, n)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TotalChernClass) and self.truncation == other.truncation
                and self.pieces == other.pieces)

    def inverse(self, truncation: Optional[int] = None) -> "TotalChernClass":
        """Power-series inverse (the Segre class); needs constant term 1."""
        n = self.truncation if truncation is None else truncation
        if n > self.truncation:
            raise ChernError(f"Cannot invert up to {n}: class is truncated at {self.truncation}")
        if self.pieces[0] != 1:
            raise ChernError(f"Only classes with constant term 1 are invertible, got {self.pieces[0]}")
        inv = [GradedPoly.constant(self.table, 1)]
        for k in range(1, n + 1):
            acc = GradedPoly.zero(self.table)
            for i in range(1, k + 1):
                acc = acc + self.pieces[i] * inv[k - i]
            inv.append(-acc)
        return TotalChernClass(self.table, inv, n)

    def __repr__(self) -> str:
        shown = " + ".join(f"[{p}]" for p in self.pieces if not p.is_zero())
        return f"TotalChernClass(<= {self.truncation}: {shown})"


def segre(c: TotalChernClass, truncation: Optional[int] = None) -> TotalChernClass:
    return c.inverse(truncation)


def _expand_roots(roots: Sequence[GradedPoly], table: VariableTable, truncation: int) -> GradedPoly:
    acc = GradedPoly.constant(table, 1)
    for r in roots:
        acc = acc + (acc.truncate(truncation - 1) * r)
    return acc.truncate(truncation)


def total_class(expr: BundleExpr, truncation: int = DEFAULT_TRUNCATION,
                table: Optional[VariableTable] = None) -> TotalChernClass:
    """prod(1 + root) over the roots of expr, truncated, in the atoms' classes."""
    base = table if table is not None else base_table(expr)
    try:
        ctx = _RootContext(expr, base)
        roots = expr.roots(ctx)
    except PolynomialError as e:
        raise ChernError(f"Cannot build roots of {expr!r}: {e}") from e
    logger.debug(f"Expanding {len(roots)} roots of {expr!r} up to degree {truncation}")
    poly = _expand_roots(roots, ctx.table, truncation)
    for atom in ctx.atoms.values():
        if atom.rank() < 2:
            continue
        poly = reduce_symmetric(poly, atom.root_names(), atom.classes, ctx.table)
    try:
        poly = poly.rename(base)
    except PolynomialError as e:
        raise ChernError(f"Root symbols survived the reduction of {expr!r}: {e}") from e
    return TotalChernClass.from_poly(poly, truncation)


def chern_class(expr: BundleExpr, degree: int, table: Optional[VariableTable] = None) -> GradedPoly:
    return total_class(expr, degree, table).c(degree)


def quotient_class(b: TotalChernClass, a: TotalChernClass, degree: int) -> GradedPoly:
    """Degree-d piece of B * A^-1, the class of C in 0 -> A -> B -> C -> 0."""
    if b.truncation < degree or a.truncation < degree:
        raise ChernError(f"Quotient in degree {degree} needs both classes truncated at >= {degree} "
                         f"(got {b.truncation} and {a.truncation})")
    if a.table != b.table:
        a = a.rename(b.table)
    inv = a.inverse(degree)
    acc = GradedPoly.zero(b.table)
    for i in range(degree + 1):
        acc = acc + b.pieces[i] * inv.pieces[degree - i]
    return acc


def rank_check(c: TotalChernClass, expr: BundleExpr) -> Tuple[bool, List[int]]:
    """Pieces above the rank must vanish; returns (ok, offending degrees)."""
    bad = [i for i in range(expr.rank() + 1, c.truncation + 1) if not c.pieces[i].is_zero()]
    return not bad, bad
