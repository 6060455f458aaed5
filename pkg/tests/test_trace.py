import math
from fractions import Fraction

import pytest
from hypothesis import given

from ncs4.algebra import ABS_W2, ABS_Z2, ONE_EL, T, W, Z, ZS, AlgebraElement, commutator
from ncs4.curvature import compute
from ncs4.geometry import Perturbation, UnsupportedDelta
from ncs4.localization import LocalElement
from ncs4.scalars import QScalar
from ncs4.trace import (
    AlphaBoundaryNonzero, DivergentIntegral, TraceValue, alpha_at, euler_characteristic,
    quadrature_oracle, tau, tau_basis, tau_delta, tau_delta_loc,
)

from conftest import DELTA_SET, central_elements, elements, formal

POLY_DELTAS = [None] + DELTA_SET[1:]


def test_volume():
    assert tau(ONE_EL).pi2_rational() == Fraction(8, 3)
    assert tau_basis(0, 0) == Fraction(8, 3)


def test_sphere_relation_under_trace():
    assert tau(ABS_Z2) + tau(ABS_W2) + tau(T * T) == tau(ONE_EL)
    assert tau(ABS_Z2) == tau(ABS_W2)


def test_odd_and_noncentral_vanish():
    for a in (T, Z, W * ZS, Z * ZS * W, T * T * T):
        assert tau(a).is_zero


@pytest.mark.parametrize("d", POLY_DELTAS, ids=str)
@given(a=elements(3, 3), b=elements(3, 3))
def test_commutators_have_zero_trace(d, a, b):
    assert tau_delta(commutator(a, b), d).is_zero


@pytest.mark.parametrize("d", POLY_DELTAS, ids=str)
@given(a=elements(4))
def test_reality(d, a):
    assert tau_delta(a.star(), d) == tau_delta(a, d).conjugate()


def test_q_dependence_survives():
    a = ABS_Z2.scale(QScalar.q(2))
    assert tau(a).coeff == QScalar.q(2) * tau_basis(1, 0)


@pytest.mark.parametrize("j, l", [(0, 0), (1, 0), (0, 2), (2, 1), (3, 3)])
def test_tau_against_quadrature(j, l):
    a = ABS_Z2 ** j * ABS_W2 ** l
    assert float(tau(a)) == pytest.approx(quadrature_oracle(a, tol=1e-11), rel=1e-9, abs=1e-12)


@given(central_elements())
def test_localized_trace_extends_tau(a):
    assert tau_delta_loc(a) == tau(a)


def test_localized_trace_examples():
    assert tau_delta_loc(LocalElement(1, (0, 0, 1, 0))).pi2_rational() == 4
    assert tau_delta_loc(LocalElement(ABS_Z2 * ABS_W2, (1, 1, 0, 0))) == tau(ONE_EL)
    for den in [(0, 0, 2, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 3, 0)]:
        with pytest.raises(DivergentIntegral):
            tau_delta_loc(LocalElement(1, den))


@pytest.mark.parametrize("num, den", [(ONE_EL, (0, 0, 0, 1)), (T * T, (0, 0, 0, 2)),
                                      (ABS_Z2 * 3, (0, 0, 1, 1)), (ONE_EL, (0, 0, 0, 3))])
def test_localized_trace_against_quadrature(num, den):
    x = LocalElement(num, den)
    exact = tau_delta_loc(x)
    assert exact.evaluate().real == pytest.approx(quadrature_oracle(x, tol=1e-11), rel=1e-9)


def test_pi_cubed_part():
    # int_{-1}^{1} (1-t^2)/(1+t^2) dt = pi - 2
    v = tau_delta_loc(LocalElement(1, (0, 0, 0, 1)))
    assert v.pi3 == QScalar({0: 2})
    assert v.coeff == QScalar({0: -4})


def test_weighted_trace_matches_polynomial_trace(pert):
    for a in (ONE_EL, ABS_Z2, T * T * ABS_W2):
        assert tau_delta_loc(a, pert) == tau_delta(a, pert)


def test_formal_delta_needs_localized_trace():
    with pytest.raises(UnsupportedDelta):
        tau_delta(ONE_EL, formal(1))


def test_trace_value_arithmetic():
    a = TraceValue(QScalar({0: 1}), QScalar({1: 2}))
    assert (a + a - a) == a
    assert (-a).scale(-1) == a
    assert TraceValue.zero().is_zero
    with pytest.raises(ValueError):
        a.pi2_rational()
    assert a.to_json()["text"] == str(a)


def test_alpha_at_poles():
    assert alpha_at(Perturbation.one_plus_t2(3), 1) == 0
    assert alpha_at(Perturbation.explicit(1, 1, 0), -1) == -1
    assert alpha_at(formal(5), 1) == 0


def test_euler_characteristic(pert):
    assert euler_characteristic(pert) == 2


@pytest.mark.parametrize("lam", [1, -3, Fraction(2, 7)])
def test_euler_characteristic_formal(lam):
    res = euler_characteristic(formal(lam), full=True)
    assert res.chi == res.antiderivative_chi == 2


def test_euler_characteristic_rejects_nonzero_alpha():
    with pytest.raises(AlphaBoundaryNonzero) as info:
        euler_characteristic(Perturbation.explicit(1, 1, 0))
    assert (info.value.at_plus, info.value.at_minus) == (1, -1)


def test_round_sphere_integrand_trace():
    _, _, g = compute(Perturbation.explicit())
    assert tau_delta_loc(g.value).pi2_rational() == 64


def test_euler_characteristic_by_quadrature():
    p = Perturbation.one_plus_t2(1)
    _, _, g = compute(p)
    v = quadrature_oracle(g.value, p, tol=1e-9) / (32 * math.pi ** 2)
    assert v == pytest.approx(2, abs=1e-8)


def test_quadrature_rejects_formal_delta():
    with pytest.raises(UnsupportedDelta):
        quadrature_oracle(ONE_EL, formal(1))


def test_noncentral_quadrature_is_small():
    # tau(Z) = 0; the four-angle integral of the real part agrees
    a = AlgebraElement({(1, 0, 0, 0, 0): 1})
    assert abs(quadrature_oracle(a, tol=1e-6)) < 1e-6
