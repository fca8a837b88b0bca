import random

import pytest

from src.algebra.gradedring import GradedPoly, VariableTable
from src.algebra.polyparse import parse_poly
from src.errors import LocalizationError
from src.geometry.localization import (ProjectiveRep, character_class, coefficients_in, interpolate_class,
                                       localize_pushforward, localized_integral)
from tests.helpers import cases

U = VariableTable.of("u1:1,u2:1,u3:1,h:1")


def P(text, table=U):
    return parse_poly(text, table)


def test_integrals_over_the_projective_line():
    line = ProjectiveRep([P("u1"), P("u2")])
    assert localized_integral(line, [P("-u1"), P("-u2")]) == GradedPoly.constant(U, 1)
    assert localized_integral(line, [P("u1^2"), P("u2^2")]) == P("-u1 - u2")
    assert localized_integral(line, [P("1"), P("1")]).is_zero()


def test_non_polynomial_integral_is_rejected():
    line = ProjectiveRep([P("u1"), P("u2")])
    with pytest.raises(LocalizationError):
        localized_integral(line, [P("1"), P("0")])


def test_repeated_weights_are_not_isolated():
    rep = ProjectiveRep([P("u1"), P("u1"), P("u2")])
    with pytest.raises(LocalizationError):
        rep.fixed_points()


def test_character_class():
    assert character_class([P("u1"), P("u2")]) == P("u1*u2")
    assert character_class([P("u1"), P("u2")], twist=P("u3")) == P("(u1 + u3)*(u2 + u3)")


def test_pushforward_of_the_squaring_map():
    ab = VariableTable.of("a:1,b:1")
    chars = [parse_poly("a", ab), parse_poly("b", ab)]
    source = ProjectiveRep.of_forms(chars, 1)
    target = ProjectiveRep.of_forms(chars, 2)
    pushed = localize_pushforward(source, target, lambda e: tuple(2 * x for x in e), pullback_degree=2)
    assert pushed == [parse_poly("2*a - 2*b", ab), GradedPoly.zero(ab), parse_poly("2*b - 2*a", ab)]


def test_interpolation_in_the_hyperplane_class():
    nodes = [P("u1"), P("u2"), P("u3")]
    values = [P(f"{n}^2 + u1*{n}") for n in ("u1", "u2", "u3")]
    assert interpolate_class(values, nodes, "h", U) == P("h^2 + u1*h")
    with pytest.raises(LocalizationError):
        interpolate_class(values, [P("u1"), P("u1"), P("u3")], "h", U)


def test_coefficients_in_the_hyperplane_class():
    target = VariableTable.of("u1:1,u2:1,u3:1")
    coeffs = coefficients_in(P("h^2 + u1*h + u1*u2"), "h", target)
    assert coeffs == {0: parse_poly("u1*u2", target), 1: parse_poly("u1", target), 2: parse_poly("1", target)}


def _random_weight(rng):
    return GradedPoly(U, {(1, 0, 0, 0): rng.randint(-5, 5), (0, 1, 0, 0): rng.randint(-5, 5),
                          (0, 0, 1, 0): rng.randint(-5, 5)})


def test_character_class_is_multiplicative():
    rng = random.Random(41)
    for _ in range(cases(1000)):
        first = [_random_weight(rng) for _ in range(rng.randint(0, 4))]
        second = [_random_weight(rng) for _ in range(rng.randint(0, 4))]
        twist = _random_weight(rng)
        assert character_class(first + second, table=U) == (character_class(first, table=U)
                                                            * character_class(second, table=U))
        assert character_class(first + second, twist=twist, table=U) == (
            character_class(first, twist=twist, table=U) * character_class(second, twist=twist, table=U))
