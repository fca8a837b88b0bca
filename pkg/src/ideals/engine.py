"""Graded ideal arithmetic over Z[1/6] by degreewise Hermite normal form.

Every question here is asked one degree at a time: membership, equality,
kernels of ring maps, cofactor splitting and bounded non-zero-divisor
certificates all reduce to echelon computations in a single graded piece.
"""
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..algebra.gradedring import GradedPoly, Monomial, RingMap, RingPresentation, VariableTable, substitute
from ..errors import IdealError, PolynomialError
from ..utils.logging_config import get_logger
from .lattice import Lattice, kernel_rows
from .slices import IdealSlices, monomial_basis

logger = get_logger(__name__)


class MembershipResult:
    """member() outcome: cofactors when p is in the ideal, the HNF residual otherwise."""

    def __init__(self, is_member: bool, degree: int, cofactors: Optional[List[GradedPoly]] = None,
                 residual: Optional[GradedPoly] = None):
        self.is_member = is_member
        self.degree = degree
        self.cofactors = cofactors
        self.residual = residual

    def __bool__(self) -> bool:
        return self.is_member

    def to_json(self) -> dict:
        out = {"member": self.is_member, "degree": self.degree}
        if self.cofactors is not None:
            out["cofactors"] = [c.to_str() for c in self.cofactors]
        if self.residual is not None:
            out["residual"] = self.residual.to_str()
        return out


def member(p: GradedPoly, gens: Sequence[GradedPoly], up_to: Optional[int] = None,
           table: Optional[VariableTable] = None, slices: Optional[IdealSlices] = None,
           cofactors: bool = True) -> MembershipResult:
    """Is p in the ideal generated by gens?  With cofactors p == sum(a_i * g_i)."""
    table = table or p.table
    if p.table != table:
        p = p.rename(table)
    d = p.weighted_degree()
    if d == "inhomogeneous":
        raise PolynomialError(f"member() needs a homogeneous polynomial, got {p}")
    if up_to is not None and d > up_to:
        raise PolynomialError(f"Degree {d} of {p} exceeds the bound {up_to}")
    if slices is None:
        slices = IdealSlices(gens, table, track=cofactors)
    if p.is_zero():
        zero = [GradedPoly.zero(table) for _ in slices.gens]
        return MembershipResult(True, 0, zero if cofactors else None)
    sl = slices.slice(d)
    vec, unit = sl.basis.to_vector(p)
    red = sl.lattice.reduce(vec)
    if not red.is_zero:
        residual = sl.basis.to_poly(red.residual, scale=red.scale * unit)
        return MembershipResult(False, d, residual=residual)
    cof = None
    if cofactors and slices.track:
        comb = sl.lattice.combination(red)
        cof = [c.scale(unit.inverse()) for c in slices.cofactors_from(comb)]
    return MembershipResult(True, d, cof)


class IdealComparison:
    def __init__(self, missing_from_second: List[GradedPoly], missing_from_first: List[GradedPoly]):
        self.missing_from_second = missing_from_second
        self.missing_from_first = missing_from_first

    @property
    def equal(self) -> bool:
        return not self.missing_from_second and not self.missing_from_first

    def __bool__(self) -> bool:
        return self.equal


def included(I_gens: Iterable[GradedPoly], J: IdealSlices) -> List[GradedPoly]:
    """Generators of I that are not members of J (each checked at its own degree)."""
    missing = []
    for g in I_gens:
        if g.table != J.table:
            g = g.rename(J.table)
        if g.is_zero():
            continue
        if not J.slice(g.degree()).contains(g):
            missing.append(g)
    return missing


def compare_ideals(I_gens: Sequence[GradedPoly], J_gens: Sequence[GradedPoly],
                   table: Optional[VariableTable] = None, workers: int = 1) -> IdealComparison:
    gens = [g for g in list(I_gens) + list(J_gens) if not g.is_zero()]
    if table is None:
        if not gens:
            return IdealComparison([], [])
        table = gens[0].table
    return compare_slices(IdealSlices(I_gens, table), IdealSlices(J_gens, table), workers)


def compare_slices(I: IdealSlices, J: IdealSlices, workers: int = 1) -> IdealComparison:
    """Two-way inclusion between ideals whose slices may already be partly built."""
    J.prefetch({g.degree() for g in I.gens}, workers)
    I.prefetch({g.degree() for g in J.gens}, workers)
    return IdealComparison(included(I.gens, J), included(J.gens, I))


def ideal_equal(I_gens: Sequence[GradedPoly], J_gens: Sequence[GradedPoly],
                table: Optional[VariableTable] = None, workers: int = 1) -> bool:
    """Two-way membership of generators, each at its own degree."""
    return compare_ideals(I_gens, J_gens, table, workers).equal


# ring maps


class _ImageCache:
    """Images of source monomials under a ring map, built multiplicatively."""

    def __init__(self, m: RingMap):
        self.map = m
        self.table = m.source.table
        n = len(self.table)
        self.cache: Dict[Monomial, GradedPoly] = {(0,) * n: GradedPoly.constant(m.target.table, 1)}

    def image(self, mono: Monomial) -> GradedPoly:
        got = self.cache.get(mono)
        if got is not None:
            return got
        i = next(k for k, e in enumerate(mono) if e)
        rest = tuple(e - 1 if k == i else e for k, e in enumerate(mono))
        img = self.image(rest) * self.map.images[i]
        self.cache[mono] = img
        return img


def _map_lattice(m: RingMap, degree: int, target_slices: IdealSlices, images: _ImageCache,
                 target_factor: Optional[GradedPoly] = None) -> Tuple[Lattice, int]:
    """Lattice on [target degree-d monomials | source monomials] whose rows are (image | e_source)
    plus the target ideal rows; kernel vectors are the rows pivoting in the source block."""
    src = monomial_basis(m.source.table, degree)
    tdeg = degree + (target_factor.degree() if target_factor is not None else 0)
    tgt = monomial_basis(m.target.table, tdeg)
    split = len(tgt)
    lattice = Lattice(split + len(src))
    for vec, _ in target_slices.slice(tdeg).lattice.basis():
        lattice.add(vec)
    for j, mono in enumerate(src.monos):
        img = images.image(mono)
        if target_factor is not None:
            img = img * target_factor
        if img.is_zero():
            lattice.add({split + j: 1})
            continue
        vec, unit = tgt.to_vector(img)
        vec[split + j] = unit.scaled_int(0, 0)
        lattice.add(vec)
    return lattice, split


def solve_preimage(target: GradedPoly, m: RingMap, target_slices: Optional[IdealSlices] = None,
                   images: Optional[_ImageCache] = None) -> Optional[GradedPoly]:
    """A polynomial w on m's source with m(w) == target modulo the target relations, or None.

    The preimage is the canonical one left by the echelon form (Euclidean
    remainders in the source block), so repeated calls agree.
    """
    if target.table != m.target.table:
        target = target.rename(m.target.table)
    if target.is_zero():
        return GradedPoly.zero(m.source.table)
    d = target.degree()
    if target_slices is None:
        target_slices = IdealSlices(m.target.relations, m.target.table)
    if images is None:
        images = _ImageCache(m)
    lattice, split = _map_lattice(m, d, target_slices, images)
    tgt = monomial_basis(m.target.table, d)
    vec, unit = tgt.to_vector(target)
    first = lattice.reduce(vec, stop_col=split)
    if any(k < split for k in first.residual):
        return None
    # first.residual == (0 | -first.scale * unit * w); reduce the source block canonically
    second = lattice.reduce(first.residual, euclid=True)
    src = monomial_basis(m.source.table, d)
    w_neg = src.to_poly(second.residual, offset=split)
    return -(w_neg.scale((second.scale * first.scale * unit).inverse()))


def prune_generators(gens: Iterable[GradedPoly], table: VariableTable) -> List[GradedPoly]:
    """A minimal sublist: no generator lies in the ideal of the other lower-or-equal-degree ones."""
    cands = []
    for g in gens:
        if g.table != table:
            g = g.rename(table)
        if g.is_zero():
            continue
        cands.append(g.canonical_form())
    cands.sort(key=lambda g: g.degree())
    kept: List[GradedPoly] = []
    for d in sorted({g.degree() for g in cands}):
        lower = [g for g in kept if g.degree() < d]
        current = [g for g in cands if g.degree() == d]
        basis = monomial_basis(table, d)
        lattice = IdealSlices(lower, table).slice(d).lattice.copy()
        chosen = []
        for g in current:
            vec, _ = basis.to_vector(g)
            if lattice.contains(vec):
                continue
            lattice.add(vec)
            chosen.append(g)
        if len(chosen) > 1:
            changed = True
            while changed:
                changed = False
                for g in list(chosen):
                    others = [h for h in chosen if h is not g]
                    if IdealSlices(lower + others, table).slice(d).contains(g):
                        chosen.remove(g)
                        changed = True
                        break
        kept.extend(chosen)
    return kept


def _kernel_degreewise(m: RingMap, degree_bound: int) -> List[GradedPoly]:
    target_slices = IdealSlices(m.target.relations, m.target.table)
    images = _ImageCache(m)
    table = m.source.table
    found: List[GradedPoly] = []
    for e in range(1, degree_bound + 1):
        src = monomial_basis(table, e)
        if not len(src):
            continue
        lattice, split = _map_lattice(m, e, target_slices, images)
        rows = kernel_rows(lattice, split)
        if not rows:
            continue
        current = IdealSlices(found, table).slice(e).lattice.copy()
        for vec in rows:
            if current.contains(vec):
                continue
            current.add(vec)
            found.append(src.to_poly(vec).canonical_form())
        logger.debug(f"Kernel degree {e}: {len(rows)} basis vectors, {len(found)} generators so far")
    return found


def surjectivity_witnesses(m: RingMap) -> Dict[str, Optional[GradedPoly]]:
    target_slices = IdealSlices(m.target.relations, m.target.table)
    images = _ImageCache(m)
    out = {}
    for name in m.target.table.names:
        out[name] = solve_preimage(GradedPoly.var(m.target.table, name), m, target_slices, images)
    return out


def kernel_from_witnesses(m: RingMap, witnesses: Dict[str, GradedPoly]) -> List[GradedPoly]:
    """Generators {x - psi(m(x))} + {psi(q)} where psi sends target generators to their witnesses."""
    psi = RingMap(m.target.free(), m.source.free(), witnesses)
    gens = []
    for name, img in zip(m.source.table.names, m.images):
        gens.append(GradedPoly.var(m.source.table, name) - substitute(img, psi))
    for q in m.target.relations:
        gens.append(substitute(q, psi))
    return gens


def kernel(m: RingMap, degree_bound: int, method: str = "auto") -> List[GradedPoly]:
    """Minimal homogeneous generators of ker(m followed by the target quotient).

    'auto' uses preimages of the target generators when they all exist (exact in
    every degree) and otherwise the degreewise computation up to degree_bound.
    """
    if method not in ("auto", "witness", "degreewise"):
        raise ValueError(f"Unknown kernel method '{method}'")
    if method != "degreewise":
        witnesses = surjectivity_witnesses(m)
        if all(w is not None for w in witnesses.values()):
            gens = kernel_from_witnesses(m, witnesses)
            return prune_generators(gens, m.source.table)
        if method == "witness":
            missing = [n for n, w in witnesses.items() if w is None]
            raise IdealError(f"No preimage for target generators {missing}")
        logger.info("Ring map is not surjective; computing its kernel degree by degree")
    return prune_generators(_kernel_degreewise(m, degree_bound), m.source.table)


def cofactor_split(p: GradedPoly, q_gens: Sequence[GradedPoly], c: GradedPoly,
                   table: Optional[VariableTable] = None) -> GradedPoly:
    """g with p + g*c in (q_gens); requires p in (q_gens, c)."""
    table = table or p.table
    gens = list(q_gens) + [c]
    slices = IdealSlices(gens, table, track=True)
    res = member(p, gens, table=table, slices=slices)
    if not res:
        raise IdealError(f"{p} is not in the ideal generated by the closed relations and {c}; "
                         f"residual {res.residual}", residual=res.residual)
    if c.is_zero():
        return GradedPoly.zero(table)
    return -res.cofactors[-1]


class NzdResult:
    def __init__(self, ok: bool, bound: int, degree: Optional[int] = None,
                 annihilator: Optional[GradedPoly] = None):
        self.ok = ok
        self.bound = bound
        self.degree = degree
        self.annihilator = annihilator

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"non_zero_divisor": self.ok, "bound": self.bound}
        if not self.ok:
            out["degree"] = self.degree
            out["annihilator"] = self.annihilator.to_str() if self.annihilator is not None else None
        return out


def nzd_check(c: GradedPoly, pres: RingPresentation, degree_bound: int) -> NzdResult:
    """Is multiplication by c injective from degree e to e+deg(c) for all e <= degree_bound?"""
    table = pres.table
    if c.table != table:
        c = c.rename(table)
    relations = IdealSlices(pres.relations, table)
    if c.is_zero():
        return NzdResult(False, degree_bound, 0, GradedPoly.constant(table, 1))
    mult = RingMap(pres.free(), pres, pres.gens())
    images = _ImageCache(mult)
    for e in range(0, degree_bound + 1):
        src = monomial_basis(table, e)
        if not len(src):
            continue
        lattice, split = _map_lattice(mult, e, relations, images, target_factor=c)
        for vec in kernel_rows(lattice, split):
            x = src.to_poly(vec)
            if not relations.slice(e).contains(x):
                logger.warning(f"{c} annihilates {x} in degree {e} of {pres.name or table}")
                return NzdResult(False, degree_bound, e, x)
    return NzdResult(True, degree_bound)


def map_well_defined(m: RingMap) -> List[GradedPoly]:
    """Source relations whose images leave the target ideal (empty when m is well defined)."""
    target = IdealSlices(m.target.relations, m.target.table)
    bad = []
    for r in m.source.relations:
        image = substitute(r, m)
        if not image.is_zero() and not target.slice(image.degree()).contains(image):
            bad.append(r)
    return bad
