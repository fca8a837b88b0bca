"""Degree slices of homogeneous ideals.

The degree-d slice of (g_1, ..., g_k) is the Z[1/6]-span of all m*g_i with
deg(m*g_i) = d, kept as a Lattice over the monomial basis of degree d.
"""
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..algebra.exactnum import Coefficient, common_scale
from ..algebra.gradedring import GradedPoly, Monomial, VariableTable
from ..errors import PolynomialError
from ..utils.logging_config import get_logger
from .lattice import Lattice, Vector

logger = get_logger(__name__)


class MonomialBasis:
    """Monomials of one weighted degree with their column positions."""

    __slots__ = ("table", "degree", "monos", "index")

    def __init__(self, table: VariableTable, degree: int):
        self.table = table
        self.degree = degree
        self.monos: List[Monomial] = table.monomials(degree)
        self.index: Dict[Monomial, int] = {m: i for i, m in enumerate(self.monos)}

    def __len__(self) -> int:
        return len(self.monos)

    def to_vector(self, p: GradedPoly, offset: int = 0, shift: Optional[Monomial] = None) -> Tuple[Vector, Coefficient]:
        """Integer vector of u*p (shifted by a monomial) and the unit u used."""
        e2, e3 = common_scale(p._terms.values())
        vec: Vector = {}
        idx = self.index
        for m, c in p._terms.items():
            if shift is not None:
                m = tuple(a + b for a, b in zip(m, shift))
            try:
                col = idx[m]
            except KeyError:
                raise PolynomialError(f"Term of {p} does not have degree {self.degree}") from None
            vec[col + offset] = c.scaled_int(e2, e3)
        return vec, Coefficient.make(1, -e2, -e3)

    def to_poly(self, vec: Vector, offset: int = 0, scale: Optional[Coefficient] = None) -> GradedPoly:
        """Polynomial with the given integer coefficients (divided by scale when given)."""
        inv = scale.inverse() if scale is not None else None
        terms = {}
        for col, v in vec.items():
            k = col - offset
            if 0 <= k < len(self.monos):
                c = Coefficient(v)
                terms[self.monos[k]] = c * inv if inv is not None else c
        return GradedPoly._wrap(self.table, {m: c for m, c in terms.items() if c})


@lru_cache(maxsize=512)
def monomial_basis(table: VariableTable, degree: int) -> MonomialBasis:
    return MonomialBasis(table, degree)


class DegreeSlice:
    """The degree-d piece of an ideal: monomial basis plus HNF lattice."""

    def __init__(self, degree: int, basis: MonomialBasis, lattice: Lattice):
        self.degree = degree
        self.basis = basis
        self.lattice = lattice

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def hermite_form(self) -> List[GradedPoly]:
        """Canonical HNF rows as polynomials (pivot positive and 6-free, entries above pivots reduced)."""
        out = []
        for _, row in self.lattice.hermite_rows():
            out.append(GradedPoly._wrap(self.basis.table, {self.basis.monos[k]: c for k, c in row.items()}))
        return out

    def contains(self, p: GradedPoly) -> bool:
        if p.is_zero():
            return True
        vec, _ = self.basis.to_vector(p)
        return self.lattice.contains(vec)


def _generator_rows(gens: Sequence[GradedPoly], degrees: Sequence[int], basis: MonomialBasis):
    table = basis.table
    for i, (g, dg) in enumerate(zip(gens, degrees)):
        if dg > basis.degree:
            continue
        for m in table.monomials(basis.degree - dg):
            vec, _ = basis.to_vector(g, shift=m)
            yield vec, (i, m)


def build_slice(gens: Sequence[GradedPoly], table: VariableTable, degree: int, track: bool = False) -> DegreeSlice:
    basis = monomial_basis(table, degree)
    lattice = Lattice(len(basis), track=track)
    degrees = [g.degree() for g in gens]
    for vec, key in _generator_rows(gens, degrees, basis):
        lattice.add(vec, key)
    logger.debug(f"Slice degree {degree}: {len(basis)} monomials, rank {lattice.rank}, {len(gens)} generators")
    return DegreeSlice(degree, basis, lattice)


def _build_remote(args):
    gens, table, degree, track = args
    return degree, build_slice(gens, table, degree, track).lattice


class IdealSlices:
    """Lazily built degree slices of the ideal generated by `gens`."""

    def __init__(self, gens: Iterable[GradedPoly], table: VariableTable, track: bool = False):
        self.table = table
        self.track = track
        clean = []
        for g in gens:
            if g.table != table:
                g = g.rename(table)
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise PolynomialError(f"Ideal generator {g} is not homogeneous")
            clean.append(g)
        self.gens: List[GradedPoly] = clean
        self.scales: List[Coefficient] = []
        for g in clean:
            e2, e3 = common_scale(g._terms.values())
            self.scales.append(Coefficient.make(1, -e2, -e3))
        self._cache: Dict[int, DegreeSlice] = {}

    def slice(self, degree: int) -> DegreeSlice:
        sl = self._cache.get(degree)
        if sl is None:
            sl = build_slice(self.gens, self.table, degree, self.track)
            self._cache[degree] = sl
        return sl

    def prefetch(self, degrees: Iterable[int], workers: int = 1):
        """Build several slices, in a process pool when workers > 1."""
        todo = sorted({d for d in degrees if d not in self._cache})
        if not todo:
            return
        if workers <= 1 or len(todo) == 1:
            for d in todo:
                self.slice(d)
            return
        logger.info(f"Building {len(todo)} slices with {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for d, lattice in pool.map(_build_remote, [(self.gens, self.table, d, self.track) for d in todo]):
                self._cache[d] = DegreeSlice(d, monomial_basis(self.table, d), lattice)

    def cofactors_from(self, combination) -> List[GradedPoly]:
        """Cofactor polynomials from a {(generator index, monomial): coefficient} combination."""
        acc: List[Dict[Monomial, Coefficient]] = [dict() for _ in self.gens]
        for (i, m), c in combination.items():
            c = c * self.scales[i]
            prev = acc[i].get(m)
            s = c if prev is None else prev + c
            if s:
                acc[i][m] = s
            elif m in acc[i]:
                del acc[i][m]
        return [GradedPoly._wrap(self.table, terms) for terms in acc]
