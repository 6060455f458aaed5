import math
import random

import pytest
from hypothesis import given

from ncs4.algebra import (
    ABS_W2, ABS_Z2, ONE_EL, ONE_MINUS_T2, ONE_PLUS_T2, T, W, WS, X1, X2, X3, X4, X5, Z, ZS,
    AlgebraElement, CentralFactor, ChartPoint, MultiIndex, NotCentral, NotDivisible,
    basis_product, center_decompose, classical_eval, commutator, from_center, is_central,
    iter_basis, random_element, try_divide_central,
)
from ncs4.linalg import exact_rank, multiplication_rank, specialize
from ncs4.scalars import QScalar

from conftest import central_elements, elements

q = QScalar.q(1)


def test_wz_relation_from_basis_product():
    assert basis_product((0, 0, 1, 0, 0), (1, 0, 0, 0, 0)) == AlgebraElement({(1, 0, 1, 0, 0): q})


def test_t_squared_reduces_to_three_terms():
    assert basis_product((0, 0, 0, 0, 1), (0, 0, 0, 0, 1)) == AlgebraElement(
        {(0, 0, 0, 0, 0): 1, (1, 1, 0, 0, 0): -1, (0, 0, 1, 1, 0): -1})


@pytest.mark.parametrize("idx", [(0, 0, 0, 0, 0), (2, 1, 0, 3, 1), (0, 4, 1, 1, 0)])
def test_unit_basis_product(idx):
    assert basis_product((0, 0, 0, 0, 0), idx) == AlgebraElement.basis(idx)


def test_basis_product_matches_word_expansion():
    # Z^j Zs^k W^l Ws^m T^e built generator by generator
    rng = random.Random(3)
    gens = [Z, ZS, W, WS, T]
    for _ in range(40):
        i1 = [rng.randint(0, 2) for _ in range(4)] + [rng.randint(0, 1)]
        i2 = [rng.randint(0, 2) for _ in range(4)] + [rng.randint(0, 1)]
        word = ONE_EL
        for idx in (i1, i2):
            for g, p in zip(gens, idx):
                word = word * g ** p
        assert basis_product(i1, i2) == word


def test_square_of_sum():
    s = (Z + W) * (Z + W)
    assert s == AlgebraElement({(2, 0, 0, 0, 0): 1, (1, 0, 1, 0, 0): 1 + q, (0, 0, 2, 0, 0): 1})


def test_z_times_zstar_is_abs_z2():
    assert Z * ZS == ABS_Z2 == AlgebraElement.basis((1, 1, 0, 0, 0))


def test_star_examples():
    assert Z.star() == ZS
    assert (Z * W).star() == AlgebraElement({(0, 1, 0, 1, 0): q})


@given(elements(3), elements(3), elements(3))
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements(4))
def test_unitality(a):
    assert ONE_EL * a == a * ONE_EL == a


@given(elements(3), elements(3))
def test_star_is_involutive_antihomomorphism(a, b):
    assert (a * b).star() == b.star() * a.star()
    assert a.star().star() == a


def test_sphere_relation():
    assert X1 * X1 + X2 * X2 + X3 * X3 + X4 * X4 + X5 * X5 == ONE_EL


def test_commutation_relations():
    assert commutator(X1, X2).is_zero and commutator(X3, X4).is_zero
    for g in (Z, ZS, W, WS):
        assert commutator(T, g).is_zero
    # ZW - WZ = ZW - qZW
    assert commutator(Z, W) == (1 - q) * (Z * W)


def test_centrality_examples():
    assert is_central(T)
    assert not is_central(Z)
    assert is_central(ABS_Z2 * ABS_W2 * T)


@given(elements(3))
def test_centrality_matches_commutators(a):
    assert is_central(a) == all(commutator(a, g).is_zero for g in (Z, W, ZS, WS))


def test_center_decompose_examples():
    assert center_decompose(ABS_Z2) == {(1, 0, 0): QScalar({0: 1})}
    assert center_decompose(T * T) == {(0, 0, 0): QScalar({0: 1}), (1, 0, 0): QScalar({0: -1}),
                                       (0, 1, 0): QScalar({0: -1})}
    with pytest.raises(NotCentral):
        center_decompose(Z)


@given(central_elements())
def test_center_round_trip(a):
    assert from_center(center_decompose(a)) == a


def test_division_examples():
    assert try_divide_central(ABS_Z2 * T, CentralFactor.ABS_Z2) == T
    assert try_divide_central(ONE_MINUS_T2, CentralFactor.ONE_MINUS_T2) == ONE_EL
    with pytest.raises(NotDivisible):
        try_divide_central(Z, CentralFactor.ABS_W2)
    with pytest.raises(NotDivisible):
        try_divide_central(T, CentralFactor.ONE_PLUS_T2)


@pytest.mark.parametrize("d", list(CentralFactor))
@given(a=elements(3))
def test_division_inverts_multiplication(d, a):
    assert try_divide_central(d.element * a, d) == a


def test_one_plus_t2_is_two_minus_squares():
    assert ONE_PLUS_T2 == ONE_EL + T * T


@pytest.mark.parametrize("d", list(CentralFactor))
def test_regularity_rank(d):
    rank, dim = multiplication_rank(d, 6)
    assert rank == dim == 336


def test_exact_rank_detects_dependence():
    rows = [specialize(Z), specialize(W), specialize(Z + W), specialize(Z - W * 3)]
    assert exact_rank(rows) == 2


def test_iter_basis_counts():
    # sum over eps of C(D - eps + 4, 4)
    assert len(list(iter_basis(6))) == math.comb(10, 4) + math.comb(9, 4)


def test_classical_eval_examples():
    p = ChartPoint(0.1, 0.2, math.pi / 4, 0.0)
    assert classical_eval(ONE_EL, p) == 1.0
    assert classical_eval(ABS_Z2, ChartPoint(0.5, 0.5, math.pi / 4, 1e-300)) == pytest.approx(0.5)
    assert classical_eval(T, ChartPoint(1, 1, 1, math.pi / 6)) == pytest.approx(0.5)


def test_chart_point_is_open():
    with pytest.raises(ValueError):
        ChartPoint(0.0, 1.0, 1.0, 0.0)


def test_classical_limit_is_homomorphism():
    rng = random.Random(11)
    for _ in range(30):
        a, b = random_element(rng, 3, 4), random_element(rng, 3, 4)
        p = ChartPoint.random(rng)
        assert classical_eval(a * b, p) == pytest.approx(
            classical_eval(a, p) * classical_eval(b, p), rel=1e-10, abs=1e-10)


@given(elements(4))
def test_json_round_trip(a):
    assert AlgebraElement.from_json(a.to_json()) == a


def test_multi_index_validation():
    with pytest.raises(ValueError):
        AlgebraElement.basis((0, 0, 0, 0, 2))
    assert MultiIndex(1, 0, 0, 0, 0) + MultiIndex(0, 1, 0, 0, 1) == MultiIndex(1, 1, 0, 0, 1)
