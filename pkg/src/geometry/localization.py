"""Torus-equivariant classes on projective spaces of representations.

Conventions: a coordinate of weight w_i gives the fixed point e_i with
h|_i = -w_i and tangent Euler class prod_{j != i} (w_j - w_i).  Characters
are degree-1 polynomials in torus variables (t0, t1 or u1, u2, u3).
"""
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from ..algebra.gradedring import GradedPoly, VariableTable
from ..algebra.polyparse import from_sympy, to_sympy
from ..errors import LocalizationError, PolynomialError
from ..utils.logging_config import get_logger
from .symmetric import is_symmetric, reduce_symmetric

logger = get_logger(__name__)

TorusWeight = GradedPoly


def torus_weight(p: GradedPoly) -> TorusWeight:
    """Check that p is a linear form with integer coefficients."""
    if not p.is_zero() and p.weighted_degree() != 1:
        raise LocalizationError(f"Torus weight {p} is not a linear form")
    for _, c in p.terms:
        if c.exp2 > 0 or c.exp3 > 0:
            raise LocalizationError(f"Torus weight {p} has a non-integral coefficient")
    return p


def character_class(weights: Sequence[TorusWeight], twist: Optional[GradedPoly] = None,
                    table: Optional[VariableTable] = None) -> GradedPoly:
    """prod(w + twist): the class of the linear locus where coordinates of these weights vanish."""
    if table is None:
        if weights:
            table = weights[0].table
        elif twist is not None:
            table = twist.table
        else:
            raise LocalizationError("character_class needs a table when there are no weights")
    acc = GradedPoly.constant(table, 1)
    shift = twist.rename(table) if twist is not None else GradedPoly.zero(table)
    if not shift.is_zero() and shift.weighted_degree() != 1:
        raise LocalizationError(f"Twist {twist} must have degree 1")
    for w in weights:
        acc = acc * (w.rename(table) + shift)
    return acc


def monomial_exponents(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    """Exponent vectors of degree-`degree` monomials in nvars variables, lex descending."""
    out = [e for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree]
    return sorted(out, reverse=True)


def dot(exps: Sequence[int], chars: Sequence[GradedPoly]) -> GradedPoly:
    acc = GradedPoly.zero(chars[0].table)
    for e, ch in zip(exps, chars):
        if e:
            acc = acc + ch.scale(e)
    return acc


class FixedPoint:
    __slots__ = ("index", "label", "hyperplane", "euler")

    def __init__(self, index: int, label, hyperplane: GradedPoly, euler: GradedPoly):
        self.index = index
        self.label = label
        self.hyperplane = hyperplane
        self.euler = euler

    def __repr__(self) -> str:
        return f"FixedPoint({self.label}: h={self.hyperplane}, e={self.euler})"


class ProjectiveRep:
    """P(V) for a torus representation V given by its coordinate weights."""

    def __init__(self, weights: Sequence[TorusWeight], hyperplane: str = "h", labels: Optional[Sequence] = None):
        if not weights:
            raise LocalizationError("A projective representation needs at least one coordinate")
        self.table = weights[0].table
        self.weights = [torus_weight(w.rename(self.table)) for w in weights]
        self.hyperplane = hyperplane
        self.labels = list(labels) if labels is not None else list(range(len(weights)))
        if len(self.labels) != len(self.weights):
            raise LocalizationError("One label per coordinate is required")
        self._points: Dict[int, FixedPoint] = {}

    @classmethod
    def of_forms(cls, chars: Sequence[GradedPoly], degree: int, twist: Optional[GradedPoly] = None,
                 hyperplane: str = "h") -> "ProjectiveRep":
        """Forms of the given degree with A.f(x) = f(A^-1 x) (times a character twist):
        the coefficient of x^a has weight -a.chars (+ twist)."""
        exps = monomial_exponents(len(chars), degree)
        weights = []
        for e in exps:
            w = -dot(e, chars)
            if twist is not None:
                w = w + twist.rename(w.table)
            weights.append(w)
        return cls(weights, hyperplane, labels=exps)

    @property
    def dim(self) -> int:
        return len(self.weights) - 1

    def __len__(self) -> int:
        return len(self.weights)

    def index_of(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LocalizationError(f"No coordinate labelled {label}") from None

    def fixed_point(self, i: int) -> FixedPoint:
        pt = self._points.get(i)
        if pt is not None:
            return pt
        wi = self.weights[i]
        clashes = [self.labels[j] for j, w in enumerate(self.weights) if j != i and w == wi]
        if clashes:
            raise LocalizationError(f"Weight {wi} of {self.labels[i]} repeats at {clashes}: "
                                    f"the fixed point is not isolated")
        euler = GradedPoly.constant(self.table, 1)
        for j, wj in enumerate(self.weights):
            if j != i:
                euler = euler * (wj - wi)
        pt = FixedPoint(i, self.labels[i], -wi, euler)
        self._points[i] = pt
        return pt

    def fixed_points(self) -> List[FixedPoint]:
        return [self.fixed_point(i) for i in range(len(self.weights))]


def fixed_points(rep: ProjectiveRep) -> List[FixedPoint]:
    return rep.fixed_points()


def localized_integral(rep: ProjectiveRep, restrictions: Sequence[GradedPoly]) -> GradedPoly:
    """sum_i class|_i / e_i, required to be a polynomial."""
    if len(restrictions) != len(rep):
        raise LocalizationError(f"Need {len(rep)} restrictions, got {len(restrictions)}")
    total = sympy.Integer(0)
    for pt, r in zip(rep.fixed_points(), restrictions):
        total += to_sympy(r.rename(rep.table)) / to_sympy(pt.euler)
    num, den = sympy.fraction(sympy.cancel(sympy.together(total)))
    if den.free_symbols:
        raise LocalizationError(f"Localized integral is not a polynomial: denominator {den}")
    try:
        return from_sympy(num / den, rep.table)
    except PolynomialError as e:
        raise LocalizationError(f"Localized integral leaves Z[1/6]: {e}") from e


def localize_pushforward(source: ProjectiveRep, target: ProjectiveRep,
                         point_map: Callable[[object], object],
                         pullback_degree: Optional[int] = None) -> List[GradedPoly]:
    """Restrictions of f_*(1) at the target fixed points.

    point_map sends a source coordinate label to the label of its image fixed
    point.  With pullback_degree k the map is checked against f^*h = k*h.
    """
    if source.table != target.table:
        raise LocalizationError("Source and target must use the same torus variables")
    fibres: Dict[int, List[FixedPoint]] = {}
    for pt in source.fixed_points():
        image = point_map(pt.label)
        if image is None:
            raise LocalizationError(f"Fixed point {pt.label} has no fixed image")
        j = target.index_of(image)
        if pullback_degree is not None:
            expected = pt.hyperplane.scale(pullback_degree)
            if target.fixed_point(j).hyperplane != expected:
                raise LocalizationError(f"{pt.label} -> {image} is not equivariant: "
                                        f"h|={target.fixed_point(j).hyperplane}, expected {expected}")
        fibres.setdefault(j, []).append(pt)
    out = []
    for j in range(len(target)):
        tp = target.fixed_point(j)
        pts = fibres.get(j, [])
        if not pts:
            out.append(GradedPoly.zero(target.table))
            continue
        try:
            acc = GradedPoly.zero(target.table)
            for pt in pts:
                acc = acc + tp.euler.exact_divide(pt.euler)
        except PolynomialError:
            expr = sum((to_sympy(tp.euler) / to_sympy(pt.euler) for pt in pts), sympy.Integer(0))
            num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
            if den.free_symbols:
                raise LocalizationError(f"Pushforward restriction at {tp.label} is not a polynomial") from None
            acc = from_sympy(num / den, target.table)
        out.append(acc)
    return out


def interpolate_class(values: Sequence[GradedPoly], nodes: Sequence[GradedPoly], var: str,
                      table: VariableTable) -> GradedPoly:
    """The polynomial p in `var` of degree < len(nodes) with p(node_k) = values[k].

    Newton divided differences with exact division by the node differences;
    the result is back-substituted at every node.
    """
    if len(values) != len(nodes) or not nodes:
        raise LocalizationError("interpolate_class needs one value per node")
    values = [v.rename(table) for v in values]
    nodes = [n.rename(table) for n in nodes]
    n = len(nodes)
    coeffs = list(values)
    try:
        for level in range(1, n):
            for k in range(n - 1, level - 1, -1):
                diff = nodes[k] - nodes[k - level]
                if diff.is_zero():
                    raise LocalizationError(f"Nodes {k - level} and {k} coincide")
                coeffs[k] = (coeffs[k] - coeffs[k - 1]).exact_divide(diff)
    except PolynomialError as e:
        raise LocalizationError(f"Interpolation is inconsistent (non-exact divided difference): {e}") from e
    x = GradedPoly.var(table, var)
    result = coeffs[n - 1]
    for k in range(n - 2, -1, -1):
        result = coeffs[k] + result * (x - nodes[k])
    for node, value in zip(nodes, values):
        back = result.evaluate({var: node}, table)
        if back != value:
            raise LocalizationError(f"Interpolated class fails at node {node}: {back} != {value}")
    return result


def coefficients_in(p: GradedPoly, var: str, target: VariableTable) -> Dict[int, GradedPoly]:
    """p as sum_k p_k * var^k; the p_k live on target (which lacks var)."""
    i = p.table.index(var)
    out: Dict[int, Dict] = {}
    for mono, c in p._terms.items():
        k = mono[i]
        rest = tuple(e for j, e in enumerate(mono) if j != i)
        out.setdefault(k, {})[rest] = c
    stripped = VariableTable([(nm, d) for nm, d in p.table if nm != var])
    return {k: GradedPoly(stripped, terms).rename(target) for k, terms in sorted(out.items())}


def weyl_reduce(p: GradedPoly, chars: Sequence[str], classes: Sequence[str], target: VariableTable) -> GradedPoly:
    """Assert symmetry in the characters, then rewrite through their elementary classes."""
    if not is_symmetric(p, chars):
        raise LocalizationError(f"Class is not Weyl-invariant in {list(chars)}: {p}")
    return reduce_symmetric(p, chars, classes, target)


def signed_classes(p: GradedPoly, classes: Sequence[str], lambdas: Sequence[str],
                   target: VariableTable) -> GradedPoly:
    """Substitute c_i = (-1)^i lambda_i."""
    images: Mapping[str, GradedPoly] = {
        c: GradedPoly.var(target, lam).scale((-1) ** (i + 1)) for i, (c, lam) in enumerate(zip(classes, lambdas))}
    return p.evaluate(images, target)
