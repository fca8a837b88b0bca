"""Finite group actions on presentations, Reynolds averaging and invariant-ideal certificates."""
from typing import Dict, List, Optional, Sequence

import sympy

from ..algebra.exactnum import Coefficient, six_split
from ..algebra.gradedring import GradedPoly, VariableTable
from ..errors import InvariantError
from ..ideals.engine import member
from ..ideals.slices import IdealSlices
from ..utils.logging_config import get_logger

logger = get_logger(__name__)


class GroupAction:
    """A finite group of integer matrices acting linearly on the named variables.

    Element g sends variable x_i to sum_j g[i, j] x_j.  The group is the closure
    of the given generators under multiplication.
    """

    def __init__(self, variables: Sequence[str], generators: Sequence[sympy.Matrix], name: str = ""):
        self.variables = list(variables)
        self.name = name
        n = len(self.variables)
        gens = [sympy.Matrix(g) for g in generators]
        for g in gens:
            if g.shape != (n, n):
                raise InvariantError(f"Generator of shape {g.shape} does not act on {n} variables")
            if abs(g.det()) != 1:
                raise InvariantError(f"Generator {g.tolist()} is not invertible over the integers")
        identity = sympy.eye(n)
        elements = [identity]
        seen = {self._key(identity)}
        frontier = [identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = a * g
                    k = self._key(b)
                    if k not in seen:
                        seen.add(k)
                        elements.append(b)
                        nxt.append(b)
            frontier = nxt
            if len(elements) > 10000:
                raise InvariantError("Group closure exceeds 10000 elements; is it finite?")
        self.elements: List[sympy.Matrix] = elements
        m, _, _ = six_split(len(elements))
        if m != 1:
            raise InvariantError(f"Group order {len(elements)} is not invertible in Z[1/6]")

    @staticmethod
    def _key(mat: sympy.Matrix):
        return tuple(int(x) for x in mat)

    @classmethod
    def permutations_of(cls, variables: Sequence[str], name: str = "") -> "GroupAction":
        """The full symmetric group permuting the variables."""
        n = len(variables)
        gens = []
        if n > 1:
            gens.append(sympy.Matrix(n, n, lambda i, j: 1 if j == (i + 1) % n else 0))
            gens.append(sympy.Matrix(n, n, lambda i, j: 1 if (i, j) in ((0, 1), (1, 0)) or (i == j and i > 1) else 0))
        return cls(variables, gens, name or f"S{n}")

    @classmethod
    def swap(cls, a: str, b: str, name: str = "C2") -> "GroupAction":
        return cls([a, b], [sympy.Matrix([[0, 1], [1, 0]])], name)

    @property
    def order(self) -> int:
        return len(self.elements)

    def act(self, g: sympy.Matrix, p: GradedPoly) -> GradedPoly:
        table = p.table
        images: Dict[str, GradedPoly] = {}
        for i, name in enumerate(self.variables):
            img = GradedPoly.zero(table)
            for j, other in enumerate(self.variables):
                c = int(g[i, j])
                if c:
                    img = img + GradedPoly.var(table, other).scale(c)
            images[name] = img
        return p.evaluate(images, table)

    def orbit(self, p: GradedPoly) -> List[GradedPoly]:
        return [self.act(g, p) for g in self.elements]

    def is_invariant(self, p: GradedPoly) -> bool:
        return all(q == p for q in self.orbit(p))


def reynolds(p: GradedPoly, group: GroupAction) -> GradedPoly:
    """(1/|G|) sum_g g.p"""
    total = GradedPoly.zero(p.table)
    for q in group.orbit(p):
        total = total + q
    return total.scale(Coefficient(group.order).inverse())


def is_stable(gens: Sequence[GradedPoly], group: GroupAction, table: Optional[VariableTable] = None) -> bool:
    """Every translate of every generator lies in the ideal."""
    table = table or (gens[0].table if gens else None)
    if table is None:
        return True
    slices = IdealSlices(gens, table)
    for g in slices.gens:
        for q in group.orbit(g):
            if not slices.slice(q.degree()).contains(q):
                return False
    return True


def invariant_ideal_generators_check(ideal_gens: Sequence[GradedPoly], claimed: Sequence[GradedPoly],
                                     group: GroupAction, degree_bound: int,
                                     table: Optional[VariableTable] = None) -> bool:
    """Do the claimed invariants generate I^G up to degree_bound?

    I^G in degree e is the Reynolds image of I_e.  If R(v) = sum a_i g_i with
    invariant g_i then R(v) = sum R(a_i) g_i, so membership of R(v) in the
    full-ring ideal of the claimed generators already certifies generation
    over the invariant ring.
    """
    gens = [g for g in ideal_gens if not g.is_zero()]
    table = table or (gens[0].table if gens else (claimed[0].table if claimed else None))
    if table is None:
        return True
    for c in claimed:
        if not group.is_invariant(c.rename(table)):
            raise InvariantError(f"Claimed generator {c} is not invariant under {group.name or 'the group'}")
    if not is_stable(gens, group, table):
        raise InvariantError(f"The ideal is not stable under {group.name or 'the group'}")
    ideal = IdealSlices(gens, table)
    for c in claimed:
        c = c.rename(table)
        if not c.is_zero() and not ideal.slice(c.degree()).contains(c):
            logger.info(f"Claimed generator {c} is not in the ideal")
            return False
    invariants = IdealSlices(claimed, table)
    for e in range(1, degree_bound + 1):
        for v in ideal.slice(e).hermite_form():
            rv = reynolds(v, group)
            if rv.is_zero():
                continue
            if not member(rv, invariants.gens, table=table, slices=invariants, cofactors=False):
                logger.info(f"Invariant {rv} of degree {e} is not generated by the claimed invariants")
                return False
    return True



def invariant_in_quotient(p: GradedPoly, ideal_gens: Sequence[GradedPoly], group: GroupAction,
                          table: Optional[VariableTable] = None) -> bool:
    """Is the class of p in R/I fixed by the group?  I must be stable; then this is p - R(p) in I."""
    table = table or p.table
    p = p.rename(table)
    if not is_stable(ideal_gens, group, table):
        raise InvariantError(f"The ideal is not stable under {group.name or 'the group'}")
    diff = p - reynolds(p, group)
    if diff.is_zero():
        return True
    return IdealSlices(ideal_gens, table).slice(diff.degree()).contains(diff)
