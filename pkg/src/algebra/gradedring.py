"""Weighted-graded polynomials over Z[1/6], ring presentations and ring maps.

Monomial order: weighted degree first, then reverse lexicographic in table
position.  Terms of a GradedPoly are kept leading term first.
"""
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import PolynomialError
from .exactnum import ONE, ZERO, Coefficient

Monomial = Tuple[int, ...]
INHOMOGENEOUS = "inhomogeneous"


class VariableTable:
    """Ordered (name, degree) list; order defines the monomial order and serialization."""

    __slots__ = ("names", "degrees", "_index", "_key")

    def __init__(self, variables: Iterable[Tuple[str, int]]):
        variables = list(variables)
        names = tuple(name for name, _ in variables)
        degrees = tuple(int(deg) for _, deg in variables)
        if len(set(names)) != len(names):
            raise PolynomialError(f"Duplicate variable names in {names}")
        for name, deg in zip(names, degrees):
            if deg <= 0:
                raise PolynomialError(f"Variable {name} must have positive degree, got {deg}")
        self.names = names
        self.degrees = degrees
        self._index = {name: i for i, name in enumerate(names)}
        self._key = tuple(zip(names, degrees))

    @classmethod
    def of(cls, layout: str) -> "VariableTable":
        """Build from 'name:deg,name:deg' (degree defaults to 1)."""
        variables = []
        for item in layout.split(","):
            item = item.strip()
            if not item:
                continue
            if ":" in item:
                name, deg = item.split(":", 1)
                variables.append((name.strip(), int(deg)))
            else:
                variables.append((item, 1))
        return cls(variables)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[Tuple[str, int]]:
        return iter(self._key)

    def __eq__(self, other) -> bool:
        return isinstance(other, VariableTable) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return "VariableTable(" + ", ".join(f"{n}:{d}" for n, d in self._key) + ")"

    def __reduce__(self):
        return (VariableTable, (list(self._key),))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolynomialError(f"Unknown variable '{name}' (known: {', '.join(self.names)})") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * w for e, w in zip(mono, self.degrees))

    def monomials(self, degree: int) -> List[Monomial]:
        """All monomials of the given weighted degree, leading (largest) first."""
        return list(_monomials(self.degrees, degree))

    def extend(self, variables: Iterable[Tuple[str, int]]) -> "VariableTable":
        return VariableTable(list(self._key) + list(variables))

    def to_json(self) -> List[dict]:
        return [{"name": n, "degree": d} for n, d in self._key]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "VariableTable":
        return cls((item["name"], int(item["degree"])) for item in data)


def order_key(mono: Monomial, degrees: Sequence[int]) -> Tuple:
    """Ascending sort key for the canonical order (weighted degree, then revlex)."""
    return (sum(e * w for e, w in zip(mono, degrees)), tuple(-e for e in reversed(mono)))


@lru_cache(maxsize=None)
def _monomials(degrees: Tuple[int, ...], degree: int) -> Tuple[Monomial, ...]:
    out: List[Monomial] = []

    def walk(i: int, remaining: int, acc: List[int]):
        if i == len(degrees):
            if remaining == 0:
                out.append(tuple(acc))
            return
        w = degrees[i]
        for e in range(remaining // w + 1):
            acc.append(e)
            walk(i + 1, remaining - e * w, acc)
            acc.pop()

    if degree >= 0:
        walk(0, degree, [])
    out.sort(key=lambda m: order_key(m, degrees), reverse=True)
    return tuple(out)


def _add_into(acc: Dict[Monomial, Coefficient], mono: Monomial, c: Coefficient):
    prev = acc.get(mono)
    if prev is None:
        acc[mono] = c
    else:
        s = prev + c
        if s:
            acc[mono] = s
        else:
            del acc[mono]


class GradedPoly:
    """Immutable polynomial over Z[1/6] on a VariableTable."""

    __slots__ = ("table", "_terms", "_sorted")

    def __init__(self, table: VariableTable, terms: Optional[Mapping[Monomial, object]] = None):
        self.table = table
        clean: Dict[Monomial, Coefficient] = {}
        if terms:
            n = len(table)
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise PolynomialError(f"Monomial {mono} does not fit {table}")
                c = Coefficient(c)
                if c:
                    _add_into(clean, mono, c)
        self._terms = clean
        self._sorted = None

    @classmethod
    def _wrap(cls, table: VariableTable, terms: Dict[Monomial, Coefficient]) -> "GradedPoly":
        p = object.__new__(cls)
        p.table = table
        p._terms = terms
        p._sorted = None
        return p

    def __reduce__(self):
        return (_rebuild_poly, (self.table, tuple(self._terms.items())))

    # constructors

    @classmethod
    def zero(cls, table: VariableTable) -> "GradedPoly":
        return cls._wrap(table, {})

    @classmethod
    def constant(cls, table: VariableTable, c=1) -> "GradedPoly":
        c = Coefficient(c)
        return cls._wrap(table, {(0,) * len(table): c} if c else {})

    @classmethod
    def var(cls, table: VariableTable, name: str) -> "GradedPoly":
        i = table.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(table)))
        return cls._wrap(table, {mono: ONE})

    @classmethod
    def monomial(cls, table: VariableTable, mono: Monomial, c=1) -> "GradedPoly":
        return cls(table, {tuple(mono): c})

    # inspection

    @property
    def terms(self) -> List[Tuple[Monomial, Coefficient]]:
        """Terms sorted leading first by the canonical order."""
        if self._sorted is None:
            degs = self.table.degrees
            self._sorted = sorted(self._terms.items(), key=lambda t: order_key(t[0], degs), reverse=True)
        return self._sorted

    def term_dict(self) -> Dict[Monomial, Coefficient]:
        return dict(self._terms)

    def coefficient(self, mono: Union[Monomial, Mapping[str, int]]) -> Coefficient:
        if isinstance(mono, Mapping):
            exps = [0] * len(self.table)
            for name, e in mono.items():
                exps[self.table.index(name)] = e
            mono = tuple(exps)
        return self._terms.get(tuple(mono), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def leading_term(self) -> Tuple[Monomial, Coefficient]:
        if not self._terms:
            raise PolynomialError("Zero polynomial has no leading term")
        return self.terms[0]

    def variables_used(self) -> List[str]:
        used = set()
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(i)
        return [self.table.names[i] for i in sorted(used)]

    def weighted_degree(self) -> Union[int, str]:
        """Common degree of all terms, or 'inhomogeneous'.  The zero polynomial has degree 0."""
        degs = {self.table.monomial_degree(m) for m in self._terms}
        if not degs:
            return 0
        if len(degs) > 1:
            return INHOMOGENEOUS
        return degs.pop()

    def max_degree(self) -> int:
        return max((self.table.monomial_degree(m) for m in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        return self.weighted_degree() != INHOMOGENEOUS

    def degree(self) -> int:
        """Weighted degree of a homogeneous polynomial; raises otherwise."""
        d = self.weighted_degree()
        if d == INHOMOGENEOUS:
            raise PolynomialError(f"Polynomial {self} is not homogeneous")
        return d

    def homogeneous_part(self, degree: int) -> "GradedPoly":
        tab = self.table
        return GradedPoly._wrap(tab, {m: c for m, c in self._terms.items() if tab.monomial_degree(m) == degree})

    def canonical_form(self) -> "GradedPoly":
        return GradedPoly._wrap(self.table, dict(self.terms))

    # arithmetic

    def _check(self, other: "GradedPoly"):
        if other.table != self.table:
            raise PolynomialError(f"Polynomials live on different tables: {self.table} vs {other.table}")

    def _lift(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            self._check(other)
            return other
        return GradedPoly.constant(self.table, other)

    def __add__(self, other) -> "GradedPoly":
        other = self._lift(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            _add_into(acc, m, c)
        return GradedPoly._wrap(self.table, acc)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return GradedPoly._wrap(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "GradedPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "GradedPoly":
        return self._lift(other) - self

    def scale(self, c) -> "GradedPoly":
        c = Coefficient(c)
        if not c:
            return GradedPoly.zero(self.table)
        return GradedPoly._wrap(self.table, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "GradedPoly":
        if not isinstance(other, GradedPoly):
            return self.scale(other)
        self._check(other)
        acc: Dict[Monomial, Coefficient] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                _add_into(acc, mono, c1 * c2)
        return GradedPoly._wrap(self.table, acc)

    def __rmul__(self, other) -> "GradedPoly":
        return self.scale(other)

    def __pow__(self, k: int) -> "GradedPoly":
        if k < 0:
            raise PolynomialError("Negative powers are not polynomials")
        result = GradedPoly.constant(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, mono: Monomial, c=1) -> "GradedPoly":
        """self * c * x^mono."""
        c = Coefficient(c)
        if not c:
            return GradedPoly.zero(self.table)
        return GradedPoly._wrap(
            self.table, {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self._terms.items()})

    def truncate(self, max_degree: int) -> "GradedPoly":
        tab = self.table
        return GradedPoly._wrap(tab, {m: c for m, c in self._terms.items() if tab.monomial_degree(m) <= max_degree})

    def exact_divide(self, divisor: "GradedPoly") -> "GradedPoly":
        """Quotient q with self == q * divisor, by division on leading terms.

        Raises PolynomialError if the division leaves a remainder or needs a
        coefficient outside Z[1/6].
        """
        self._check(divisor)
        if divisor.is_zero():
            raise PolynomialError("Division by the zero polynomial")
        lead_m, lead_c = divisor.leading_term()
        rest = dict(self._terms)
        quotient: Dict[Monomial, Coefficient] = {}
        degs = self.table.degrees
        while rest:
            m = max(rest, key=lambda mono: order_key(mono, degs))
            c = rest[m]
            qm = tuple(a - b for a, b in zip(m, lead_m))
            if min(qm) < 0:
                raise PolynomialError(f"{divisor} does not divide {self}")
            qc = c.try_divide(lead_c)
            if qc is None:
                raise PolynomialError(f"Quotient of {self} by {divisor} leaves Z[1/6]")
            quotient[qm] = qc
            for dm, dc in divisor._terms.items():
                _add_into(rest, tuple(a + b for a, b in zip(dm, qm)), -(dc * qc))
        return GradedPoly._wrap(self.table, quotient)

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPoly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, int):
            return self._terms == (GradedPoly.constant(self.table, other)._terms)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.table, frozenset(self._terms.items())))

    # variable handling

    def rename(self, table: VariableTable, mapping: Optional[Mapping[str, str]] = None) -> "GradedPoly":
        """Same polynomial on another table, matching variables by name (optionally renamed)."""
        mapping = mapping or {}
        positions = []
        for i, name in enumerate(self.table.names):
            positions.append(table.index(mapping.get(name, name)) if name in table or name in mapping else None)
        acc: Dict[Monomial, Coefficient] = {}
        n = len(table)
        for mono, c in self._terms.items():
            exps = [0] * n
            for i, e in enumerate(mono):
                if e:
                    if positions[i] is None:
                        raise PolynomialError(f"Variable '{self.table.names[i]}' absent from {table}")
                    exps[positions[i]] += e
            _add_into(acc, tuple(exps), c)
        return GradedPoly._wrap(table, acc)

    def set_zero(self, names: Iterable[str]) -> "GradedPoly":
        idx = [self.table.index(n) for n in names]
        return GradedPoly._wrap(
            self.table, {m: c for m, c in self._terms.items() if all(m[i] == 0 for i in idx)})

    def evaluate(self, images: Mapping[str, "GradedPoly"], target: VariableTable) -> "GradedPoly":
        """Substitute images for variables; variables without an image must exist in target."""
        powers: List[List[GradedPoly]] = []
        for name in self.table.names:
            if name in images:
                img = images[name]
                if img.table != target:
                    img = img.rename(target)
            elif name in target:
                img = GradedPoly.var(target, name)
            else:
                img = None
            powers.append([GradedPoly.constant(target, 1), img] if img is not None else [None])
        acc: Dict[Monomial, Coefficient] = {}
        for mono, c in self._terms.items():
            term = None
            for i, e in enumerate(mono):
                if not e:
                    continue
                pw = powers[i]
                if pw[0] is None:
                    raise PolynomialError(f"Variable '{self.table.names[i]}' has no image")
                while len(pw) <= e:
                    pw.append(pw[-1] * pw[1])
                term = pw[e] if term is None else term * pw[e]
            if term is None:
                _add_into(acc, (0,) * len(target), c)
            else:
                for m, v in term._terms.items():
                    _add_into(acc, m, v * c)
        return GradedPoly._wrap(target, acc)

    # printing

    def to_str(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            factors = []
            for name, e in zip(self.table.names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            sign = "-" if c.sign() < 0 else "+"
            mag = -c if c.sign() < 0 else c
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"GradedPoly({self.to_str()})"

    def to_json(self) -> List[dict]:
        return [{"coeff": str(c), "mono": {n: e for n, e in zip(self.table.names, m) if e}} for m, c in self.terms]

    @classmethod
    def from_json(cls, table: VariableTable, data: Sequence[Mapping]) -> "GradedPoly":
        acc: Dict[Monomial, Coefficient] = {}
        for item in data:
            exps = [0] * len(table)
            for name, e in item.get("mono", {}).items():
                exps[table.index(name)] += int(e)
            c = Coefficient.parse(str(item["coeff"]))
            if c:
                _add_into(acc, tuple(exps), c)
        return cls._wrap(table, acc)


def _rebuild_poly(table: VariableTable, items) -> GradedPoly:
    return GradedPoly._wrap(table, dict(items))


def weighted_degree(p: GradedPoly) -> Union[int, str]:
    return p.weighted_degree()


class RingPresentation:
    """Graded Z[1/6]-algebra: variables plus homogeneous relations of positive degree."""

    def __init__(self, table: VariableTable, relations: Iterable[GradedPoly] = (), name: str = ""):
        self.table = table
        self.name = name
        rels = []
        for r in relations:
            if r.table != table:
                r = r.rename(table)
            if r.is_zero():
                continue
            d = r.weighted_degree()
            if d == INHOMOGENEOUS or d <= 0:
                raise PolynomialError(f"Relation {r} of {name or table} must be homogeneous of positive degree")
            rels.append(r.canonical_form())
        self.relations: Tuple[GradedPoly, ...] = tuple(rels)

    def var(self, name: str) -> GradedPoly:
        return GradedPoly.var(self.table, name)

    def gens(self) -> List[GradedPoly]:
        return [GradedPoly.var(self.table, n) for n in self.table.names]

    def free(self) -> "RingPresentation":
        return RingPresentation(self.table, (), name=self.name)

    def with_relations(self, relations: Iterable[GradedPoly]) -> "RingPresentation":
        return RingPresentation(self.table, relations, name=self.name)

    def max_relation_degree(self) -> int:
        return max((r.degree() for r in self.relations), default=0)

    def __repr__(self) -> str:
        return f"RingPresentation({self.name or '?'}: {self.table}, {len(self.relations)} relations)"

    def to_json(self) -> dict:
        return {"name": self.name, "vars": self.table.to_json(), "relations": [r.to_json() for r in self.relations]}

    @classmethod
    def from_json(cls, data: Mapping) -> "RingPresentation":
        table = VariableTable.from_json(data["vars"])
        rels = [GradedPoly.from_json(table, r) for r in data.get("relations", [])]
        return cls(table, rels, name=data.get("name", ""))


class RingMap:
    """Homomorphism given by the image of each source generator."""

    def __init__(self, source: RingPresentation, target: RingPresentation,
                 images: Union[Sequence[GradedPoly], Mapping[str, GradedPoly]]):
        self.source = source
        self.target = target
        if isinstance(images, Mapping):
            missing = [n for n in source.table.names if n not in images]
            if missing:
                raise PolynomialError(f"Ring map lacks images for {missing}")
            images = [images[n] for n in source.table.names]
        images = list(images)
        if len(images) != len(source.table):
            raise PolynomialError("Ring map needs one image per source variable")
        checked = []
        for (name, deg), img in zip(source.table, images):
            if img.table != target.table:
                img = img.rename(target.table)
            d = img.weighted_degree()
            if not img.is_zero() and d != deg:
                raise PolynomialError(f"Image of {name} (degree {deg}) has degree {d}: {img}")
            checked.append(img)
        self.images: Tuple[GradedPoly, ...] = tuple(checked)

    def image_of(self, name: str) -> GradedPoly:
        return self.images[self.source.table.index(name)]

    def as_dict(self) -> Dict[str, GradedPoly]:
        return dict(zip(self.source.table.names, self.images))

    def __call__(self, p: GradedPoly) -> GradedPoly:
        return substitute(p, self)

    def compose(self, after: "RingMap") -> "RingMap":
        """after ∘ self."""
        return RingMap(self.source, after.target, [substitute(img, after) for img in self.images])

    def is_well_defined(self) -> bool:
        """Every source relation maps into the target ideal."""
        from ..ideals.engine import map_well_defined

        return not map_well_defined(self)

    @classmethod
    def identity(cls, pres: RingPresentation) -> "RingMap":
        return cls(pres, pres, pres.gens())

    def to_json(self) -> dict:
        return {"images": {n: img.to_json() for n, img in zip(self.source.table.names, self.images)}}


def substitute(p: GradedPoly, m: RingMap) -> GradedPoly:
    """Image of p under m, on m's target table."""
    if p.table != m.source.table:
        for name in p.variables_used():
            if name not in m.source.table:
                raise PolynomialError(f"Variable '{name}' of {p} is absent from the map's source")
        p = p.rename(m.source.table)
    return p.evaluate(m.as_dict(), m.target.table)
