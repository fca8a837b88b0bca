"""Rewriting symmetric polynomials in elementary symmetric classes.

Reduction by leading terms: the lex-largest root exponent (a1 >= a2 >= ... >= ar)
of a symmetric polynomial is the leading exponent of e1^(a1-a2) ... er^ar,
so subtracting coefficient times that product strictly lowers it.
"""
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, Sequence, Tuple

from ..algebra.gradedring import GradedPoly, Monomial, VariableTable
from ..errors import ChernError, PolynomialError

Exps = Tuple[int, ...]


def _convolve(a: Dict[Exps, int], b: Dict[Exps, int]) -> Dict[Exps, int]:
    out: Dict[Exps, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


@lru_cache(maxsize=None)
def elementary_exps(r: int, k: int) -> Dict[Exps, int]:
    """e_k in r roots as {exponent tuple: coefficient}."""
    out = {}
    for idx in combinations(range(r), k):
        out[tuple(1 if i in idx else 0 for i in range(r))] = 1
    return out


@lru_cache(maxsize=4096)
def elementary_product(r: int, powers: Tuple[int, ...]) -> Dict[Exps, int]:
    """prod_k e_k^powers[k-1] expanded in r roots."""
    if not any(powers):
        return {(0,) * r: 1}
    k = max(i for i, p in enumerate(powers) if p)
    rest = list(powers)
    rest[k] -= 1
    return _convolve(elementary_product(r, tuple(rest)), elementary_exps(r, k + 1))


def elementary(table: VariableTable, roots: Sequence[str], k: int) -> GradedPoly:
    """e_k of the named roots as a polynomial on table."""
    idx = [table.index(n) for n in roots]
    terms = {}
    for e, c in elementary_exps(len(roots), k).items():
        mono = [0] * len(table)
        for i, x in zip(idx, e):
            mono[i] = x
        terms[tuple(mono)] = c
    return GradedPoly(table, terms)


def is_symmetric(p: GradedPoly, roots: Sequence[str]) -> bool:
    """Invariance under every permutation of the named variables."""
    idx = [p.table.index(n) for n in roots]
    for perm in permutations(idx):
        if list(perm) == idx:
            continue
        moved = {}
        for mono, c in p._terms.items():
            new = list(mono)
            for src, dst in zip(idx, perm):
                new[dst] = mono[src]
            moved[tuple(new)] = c
        if moved != p._terms:
            return False
    return True


def reduce_symmetric(p: GradedPoly, roots: Sequence[str], classes: Sequence[str],
                     target: VariableTable) -> GradedPoly:
    """Express p, symmetric in `roots`, through classes[k-1] = e_k(roots) on the target table.

    Variables of p other than the roots keep their names and must exist in target.
    """
    r = len(roots)
    if len(classes) != r:
        raise ChernError(f"{r} roots need {r} classes, got {list(classes)}")
    table = p.table
    root_idx = [table.index(n) for n in roots]
    rest_idx = [i for i in range(len(table)) if i not in root_idx]
    try:
        rest_pos = [target.index(table.names[i]) for i in rest_idx]
        class_pos = [target.index(c) for c in classes]
    except PolynomialError as e:
        raise ChernError(f"Target table {target} cannot hold the reduction: {e}") from e

    def rest_mono(mono: Monomial) -> Monomial:
        out = [0] * len(target)
        for i, pos in zip(rest_idx, rest_pos):
            out[pos] = mono[i]
        return tuple(out)

    # work[root exponents][target monomial] = coefficient
    work: Dict[Exps, Dict[Monomial, object]] = {}
    for mono, c in p._terms.items():
        key = tuple(mono[i] for i in root_idx)
        bucket = work.setdefault(key, {})
        m = rest_mono(mono)
        bucket[m] = bucket[m] + c if m in bucket else c

    result: Dict[Monomial, object] = {}
    while work:
        lead = max(work)
        coeff = {m: c for m, c in work.pop(lead).items() if c}
        if not coeff:
            continue
        if any(lead[i] < lead[i + 1] for i in range(r - 1)):
            raise ChernError(f"Polynomial is not symmetric in {list(roots)}: "
                             f"leading root exponent {lead} of {p}")
        powers = tuple(lead[i] - (lead[i + 1] if i + 1 < r else 0) for i in range(r))
        for m, c in coeff.items():
            out = list(m)
            for pos, k in zip(class_pos, powers):
                out[pos] += k
            out = tuple(out)
            s = result.get(out, 0) + c
            if s:
                result[out] = s
            else:
                result.pop(out, None)
        for e, k in elementary_product(r, powers).items():
            if e == lead:
                continue
            bucket = work.setdefault(e, {})
            for m, c in coeff.items():
                s = bucket.get(m, 0) - c * k
                if s:
                    bucket[m] = s
                else:
                    bucket.pop(m, None)
            if not bucket:
                del work[e]
    return GradedPoly(target, result)
