import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ncs4.algebra import ABS_W2, ABS_Z2, ONE_MINUS_T2, T, W, WS, Z, ZS, ChartPoint
from ncs4.derivations import (
    Derivation, DeltaRule, apply, apply_local, bracket, parse_derivation, partial,
)
from ncs4.localization import DELTA, LocalElement, invert
from ncs4.scalars import GaussianRational
from ncs4.verify import GENERATOR_RELATIONS, relation_defect

from conftest import elements

I = GaussianRational(0, 1)
ALL = [partial(i, n) for i in (1, 2, 3) for n in range(4)] + [partial(4)]
derivations = st.sampled_from(ALL)


def test_generator_values():
    assert apply(partial(1), Z) == (Z * ONE_MINUS_T2).scale(I)
    assert apply(partial(1), ZS) == (ZS * ONE_MINUS_T2).scale(-I)
    assert apply(partial(1), W).is_zero
    assert apply(partial(2), WS) == (WS * ONE_MINUS_T2).scale(-I)
    assert apply(partial(3), Z) == Z * ABS_W2
    assert apply(partial(3), W) == -(W * ABS_Z2)
    assert apply(partial(4), Z) == Z * T
    assert apply(partial(4), T) == T * T - 1
    assert apply(partial(3, 2), Z) == Z * ABS_W2 * T * T


def test_d4_kills_nothing_central_by_accident():
    assert apply(partial(4), ABS_Z2) == (ABS_Z2 * T).scale(2)
    assert apply(partial(1), ABS_Z2).is_zero


def test_d4_of_inverse_one_minus_t2():
    x = LocalElement(1, (0, 0, 1, 0))
    assert apply_local(partial(4), x) == LocalElement(T, (0, 0, 1, 0)) * -2


@pytest.mark.parametrize("name", list(GENERATOR_RELATIONS))
@pytest.mark.parametrize("d", ALL, ids=str)
def test_relations_are_preserved(d, name):
    assert relation_defect(d, GENERATOR_RELATIONS[name]).is_zero


@given(derivations, elements(3, 3), elements(3, 3))
def test_leibniz(d, a, b):
    assert apply(d, a * b) == apply(d, a) * b + a * apply(d, b)


@given(derivations, elements(4))
def test_hermitian(d, a):
    assert apply(d, a.star()) == apply(d, a).star()


@given(derivations, derivations, elements(3, 3))
def test_bracket_is_commutator(d1, d2, a):
    assert apply(bracket(d1, d2), a) == apply(d1, apply(d2, a)) - apply(d2, apply(d1, a))


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 3])
def test_tower_rule(i, n):
    want = (n + 2) * partial(i, n + 1)
    if n:
        want = want - n * partial(i, n - 1)
    assert bracket(partial(4), partial(i, n)) == want
    assert bracket(partial(i, n), partial(4)) == -1 * want


def test_horizontal_derivations_commute():
    assert bracket(partial(1, 2), partial(3, 1)) == Derivation()


@given(derivations, st.builds(lambda a, b: LocalElement(a, b),
                              elements(2, 3),
                              st.tuples(*[st.integers(0, 2)] * 4)),
       st.builds(lambda a, b: LocalElement(a, b), elements(2, 3),
                 st.tuples(*[st.integers(0, 2)] * 4)))
def test_quotient_rule(d, x, y):
    assert apply_local(d, x * y) == apply_local(d, x) * y + x * apply_local(d, y)


def test_d4_of_inverse_one_minus_t2():
    x = invert(LocalElement(ONE_MINUS_T2))
    d = apply_local(partial(4), x)
    assert d == LocalElement(T) * x * (-2)
    # classically d4 = -cos(psi) d/dpsi and 1/(1-T^2) = sec(psi)^2
    psi, h = 0.4, 1e-5
    f = lambda s: 1 / math.cos(s) ** 2
    fd = -math.cos(psi) * (f(psi + h) - f(psi - h)) / (2 * h)
    assert abs(d.classical_eval(ChartPoint(1.0, 2.0, 0.7, psi)).real - fd) < 1e-8


def test_delta_rule():
    alpha = LocalElement(T * T - 1) * Fraction(1, 2)
    rule = DeltaRule(alpha)
    assert apply_local(partial(4), DELTA, rule) == alpha * DELTA * 2
    assert apply_local(partial(1), DELTA, rule).is_zero
    assert apply_local(partial(4), DELTA ** -2, rule) == alpha * DELTA ** -2 * -4
    with pytest.raises(ValueError):
        apply_local(partial(4), DELTA)


def test_parse_names():
    assert parse_derivation("d3@2") == partial(3, 2)
    assert parse_derivation("d4") == partial(4)
    for bad in ("d5", "d4@1", "x"):
        with pytest.raises(ValueError):
            parse_derivation(bad)


def test_linear_combinations():
    d = partial(1) + 3 * partial(4)
    assert d.d4_coefficient == 3
    assert apply(d, W) == (W * T).scale(3)
