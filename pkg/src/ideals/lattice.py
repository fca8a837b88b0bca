"""Incremental Hermite normal form over the Euclidean domain Z[1/6].

A row is stored exactly as an integer vector with a common 2/3 exponent,
value = vec * 2**(-e2) * 3**(-e3), with no factor 2 or 3 common to all
entries of vec.  The basis is kept reduced after every insertion:

  - each basis row has a positive 6-free pivot p_c at its first column c;
  - every entry of a basis row in another pivot column d is an integer
    in [0, p_d).

This is the canonical Hermite form of the lattice, so row sizes stay
bounded by the form itself instead of growing with the insertion history.

Optional provenance: every basis row remembers which input rows it came
from, as a {key: Coefficient} combination, so memberships come with
cofactors.
"""
from bisect import bisect_left, insort
from math import gcd
from typing import Dict, Hashable, Iterable, List, Optional, Tuple

from ..algebra.exactnum import ONE, ZERO, Coefficient, xgcd

Vector = Dict[int, int]
Provenance = Dict[Hashable, Coefficient]


def _normalize(vec: Vector, e2: int, e3: int) -> Tuple[Vector, int, int]:
    """Move the 2/3 content of vec into the exponents, keeping the value."""
    if not vec:
        return vec, 0, 0
    g = gcd(*vec.values())
    if g % 2 == 0:
        v2 = (g & -g).bit_length() - 1
        g >>= v2
        e2 -= v2
    else:
        v2 = 0
    v3 = 0
    while g % 3 == 0:
        g //= 3
        v3 += 1
    if v2 or v3:
        u = (1 << v2) * 3 ** v3
        vec = {k: x // u for k, x in vec.items()}
        e3 -= v3
    return vec, e2, e3


def _pow6(a: int, b: int) -> int:
    return (1 << a) * 3 ** b


def _combine_prov(alpha: Coefficient, p: Optional[Provenance], beta: Coefficient,
                  q: Optional[Provenance]) -> Optional[Provenance]:
    if p is None or q is None:
        return None
    out: Provenance = {}
    if alpha:
        for k, x in p.items():
            out[k] = alpha * x
    if beta:
        for k, y in q.items():
            s = out.get(k, ZERO) + beta * y
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


class _Row:
    __slots__ = ("vec", "e2", "e3", "prov")

    def __init__(self, vec: Vector, e2: int = 0, e3: int = 0, prov: Optional[Provenance] = None):
        self.vec, self.e2, self.e3 = _normalize(vec, e2, e3)
        self.prov = prov

    @property
    def lead(self) -> int:
        return min(self.vec)

    def entry(self, col: int) -> Coefficient:
        x = self.vec.get(col)
        return ZERO if x is None else Coefficient.make(x, self.e2, self.e3)

    def combine(self, alpha: Coefficient, beta: Coefficient, other: "_Row") -> "_Row":
        """alpha*self + beta*other, exactly."""
        terms = []
        if alpha:
            terms.append((alpha, self))
        if beta:
            terms.append((beta, other))
        if not terms:
            return _Row({}, 0, 0, {} if self.prov is not None else None)
        # alpha*self has value (alpha.n * vec) * 2**-(alpha.e2 + e2) * 3**-(alpha.e3 + e3)
        E2 = max(c.exp2 + r.e2 for c, r in terms)
        E3 = max(c.exp3 + r.e3 for c, r in terms)
        out: Vector = {}
        for c, r in terms:
            f = c.numerator * _pow6(E2 - c.exp2 - r.e2, E3 - c.exp3 - r.e3)
            for k, x in r.vec.items():
                s = out.get(k, 0) + f * x
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return _Row(out, E2, E3, _combine_prov(alpha, self.prov, beta, other.prov))

    def scaled(self, u: Coefficient) -> "_Row":
        """self times the unit u."""
        prov = None if self.prov is None else {k: v * u for k, v in self.prov.items()}
        vec = dict(self.vec) if u.numerator == 1 else {k: -x for k, x in self.vec.items()}
        return _Row(vec, self.e2 + u.exp2, self.e3 + u.exp3, prov)

    def copy(self) -> "_Row":
        other = object.__new__(_Row)
        other.vec, other.e2, other.e3 = dict(self.vec), self.e2, self.e3
        other.prov = dict(self.prov) if self.prov is not None else None
        return other


class Reduction:
    """Outcome of reducing a vector: scale*v - sum(comb[c] * basis_row[c]) == residual."""

    __slots__ = ("residual", "scale", "comb")

    def __init__(self, residual: Vector, scale: Coefficient, comb: Dict[int, Coefficient]):
        self.residual = residual
        self.scale = scale
        self.comb = comb

    @property
    def is_zero(self) -> bool:
        return not self.residual


class Lattice:
    """Z[1/6]-submodule of Z[1/6]^ncols kept in reduced Hermite form."""

    def __init__(self, ncols: int, track: bool = False):
        self.ncols = ncols
        self.track = track
        self.rows: Dict[int, _Row] = {}
        self._pivots: List[int] = []
        self._p: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[int]:
        return list(self._pivots)

    def pivot(self, col: int) -> int:
        """The positive 6-free pivot entry of the row at col."""
        return self._p[col]

    def basis(self) -> List[Tuple[Vector, Optional[Provenance]]]:
        """Integral unit multiples of the basis rows, with matching provenance."""
        out = []
        for c in self._pivots:
            row = self.rows[c]
            prov = row.prov
            if prov is not None:
                u = Coefficient.make(1, -row.e2, -row.e3)
                prov = {k: v * u for k, v in prov.items()}
            out.append((dict(row.vec), prov))
        return out

    def copy(self) -> "Lattice":
        other = Lattice(self.ncols, self.track)
        other.rows = {c: row.copy() for c, row in self.rows.items()}
        other._pivots = list(self._pivots)
        other._p = dict(self._p)
        return other

    # reduced form upkeep

    def _subtract_to_residue(self, row: _Row, d: int) -> _Row:
        """row with its entry in pivot column d brought into [0, p_d)."""
        x = row.entry(d)
        if not x:
            return row
        p = self._p[d]
        r = x.residue(p)
        if x == Coefficient(r):
            return row
        t = (x - Coefficient(r)).try_divide(Coefficient(p))
        return row.combine(ONE, -t, self.rows[d])

    def _reduce_tail(self, row: _Row, start: int) -> _Row:
        """Reduce the entries of row in pivot columns >= start."""
        for d in self._pivots[bisect_left(self._pivots, start):]:
            if d in row.vec:
                row = self._subtract_to_residue(row, d)
        return row

    def _install(self, c: int, row: _Row):
        """Place a row with positive 6-free lead at column c and restore the reduced form."""
        row = self._reduce_tail(row, c + 1)
        if c not in self.rows:
            insort(self._pivots, c)
        self.rows[c] = row
        self._p[c] = row.entry(c).numerator
        for upper in self._pivots[:bisect_left(self._pivots, c)]:
            u = self.rows[upper]
            if c in u.vec:
                self.rows[upper] = self._reduce_tail(u, c)

    # insertion

    def add(self, vec: Vector, key: Hashable = None, prov: Optional[Provenance] = None) -> bool:
        """Insert a row; returns True when the rank grew."""
        vec = {k: v for k, v in vec.items() if v}
        if not vec:
            return False
        if self.track and prov is None:
            prov = {key: ONE}
        elif not self.track:
            prov = None
        w = _Row(vec, 0, 0, prov)
        while w.vec:
            c = w.lead
            x = w.entry(c)
            m = x.numerator
            # w * unit has lead m, the 6-free part of x with its sign
            w_m = w.scaled(Coefficient.make(1, -x.exp2, -x.exp3))
            if c not in self.rows:
                self._install(c, w_m if m > 0 else w_m.scaled(Coefficient(-1)))
                return True
            p = self._p[c]
            piv = self.rows[c]
            if m % p == 0:
                w = w_m.combine(ONE, Coefficient(-(m // p)), piv)
                continue
            s, y, g = xgcd(m, p)
            # [s, y; p/g, -m/g] is unimodular
            new_piv = w_m.combine(Coefficient(s), Coefficient(y), piv)
            w = w_m.combine(Coefficient(p // g), Coefficient(-(m // g)), piv)
            self._install(c, new_piv)
        return False

    def extend(self, vectors: Iterable[Tuple[Vector, Hashable]]) -> int:
        grown = 0
        for vec, key in vectors:
            grown += self.add(vec, key)
        return grown

    # reduction

    def reduce(self, vec: Vector, stop_col: Optional[int] = None, euclid: bool = False) -> Reduction:
        """Reduce vec against the basis.

        Without euclid the reduction stops at the first column whose entry the
        pivot does not divide (or that has no pivot): the residual is then a
        non-membership certificate.  With euclid every pivot column is reduced
        to its remainder in [0, p), giving a canonical representative.
        Columns >= stop_col are left alone.
        """
        w = _Row({k: v for k, v in vec.items() if v}, 0, 0)
        comb: Dict[int, Coefficient] = {}
        col = -1
        while True:
            later = [k for k in w.vec if k > col]
            if not later:
                break
            c = min(later)
            if stop_col is not None and c >= stop_col:
                break
            if c not in self.rows:
                if euclid:
                    col = c
                    continue
                break
            x = w.entry(c)
            p = self._p[c]
            t = x.try_divide(Coefficient(p))
            col = c
            if t is None:
                if not euclid:
                    break
                t = (x - Coefficient(x.residue(p))).try_divide(Coefficient(p))
                if not t:
                    continue
            w = w.combine(ONE, -t, self.rows[c])
            comb[c] = comb.get(c, ZERO) + t
        # w's value is v - sum(comb * rows); its integer vector is that times 2**e2 * 3**e3
        scale = Coefficient.make(1, -w.e2, -w.e3)
        return Reduction(w.vec, scale, {c: t * scale for c, t in comb.items()})

    def contains(self, vec: Vector) -> bool:
        return self.reduce(vec).is_zero

    def combination(self, red: Reduction) -> Provenance:
        """Express (vec - residual/scale) through the tracked input keys."""
        if not self.track:
            raise ValueError("Lattice was built without provenance tracking")
        inv = red.scale.inverse()
        out: Provenance = {}
        for c, coeff in red.comb.items():
            for key, v in self.rows[c].prov.items():
                s = out.get(key, ZERO) + coeff * v * inv
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return out

    # canonical form

    def hermite_rows(self) -> List[Tuple[int, Dict[int, Coefficient]]]:
        """Rows with positive 6-free pivots and entries above pivots reduced."""
        out = []
        for c in self._pivots:
            row = self.rows[c]
            out.append((c, {k: Coefficient.make(v, row.e2, row.e3) for k, v in row.vec.items()}))
        return out


def kernel_rows(lattice: Lattice, split: int) -> List[Vector]:
    """Basis rows whose pivot lies at or after column `split`, shifted to start at 0."""
    out = []
    for c in lattice.pivots():
        if c >= split:
            out.append({k - split: v for k, v in lattice.rows[c].vec.items()})
    return out


def describe(vec: Vector) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(vec.items())) + "}"
