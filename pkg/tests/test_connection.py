from fractions import Fraction

import pytest

from ncs4.algebra import ABS_W2, ABS_Z2, ONE_MINUS_T2, T
from ncs4.connection import (
    closed_form_connection, koszul_rhs, metric_defects, nabla_apply, projector_connection,
    solve_connection, torsion, torsion_defects,
)
from ncs4.derivations import partial
from ncs4.geometry import E, Metric, ModuleVec, Perturbation, embed, phi_map
from ncs4.localization import LocalElement

from conftest import formal


@pytest.fixture(scope="module")
def table1():
    return solve_connection(Metric())


def test_koszul_matches_closed_form(pert):
    assert solve_connection(Metric(pert)).mismatches(closed_form_connection(pert)) == []


@pytest.mark.parametrize("p", [Perturbation.explicit(3, 1, 0), Perturbation.explicit(1, -1, 2),
                               formal(1), formal(Fraction(-1, 3))], ids=str)
def test_koszul_matches_closed_form_more(p):
    assert solve_connection(Metric(p)).mismatches(closed_form_connection(p)) == []


def test_sample_entries(table1):
    L = LocalElement
    assert table1[(1, 2)].is_zero
    assert table1[(1, 3)] == E(1) * L(ABS_W2)
    assert table1[(1, 4)] == E(1) * L(T)
    assert table1[(4, 1)] == E(1) * L(T * 3)
    assert table1[(4, 4)] == E(4) * L(T)
    assert table1[(1, 1)] == ModuleVec([0, 0, -L(ONE_MINUS_T2), -L(T * ABS_Z2 * ONE_MINUS_T2)])


def test_metric_compatible(pert):
    h = Metric(pert)
    assert metric_defects(solve_connection(h), h) == []


def test_metric_compatible_formal():
    p = formal(2)
    h = Metric(p)
    assert metric_defects(solve_connection(h), h) == []


def test_torsion_free(pert):
    assert torsion_defects(solve_connection(Metric(pert))) == []


def test_torsion_free_with_general_alpha():
    p = Perturbation.explicit()
    al = [LocalElement(ABS_Z2 * T), LocalElement(ABS_W2 - 2), LocalElement(T * Fraction(1, 3)),
          LocalElement(T * T)]
    assert torsion_defects(closed_form_connection(p, al)) == []


def test_torsion_detects_a_wrong_table(table1):
    bad = closed_form_connection(Perturbation.explicit())
    bad.gamma[(4, 1)] = bad.gamma[(1, 4)]
    assert not torsion(bad, partial(1), partial(4)).is_zero
    assert torsion(table1, partial(1), partial(4)).is_zero


def test_metric_defect_detects_a_wrong_table():
    h = Metric()
    bad = closed_form_connection(h.delta)
    bad.gamma[(4, 4)] = E(4) * LocalElement(T * 2)
    assert metric_defects(bad, h)


def test_koszul_rhs_is_hermitian(pert):
    h = Metric(pert)
    for a in range(1, 5):
        for b in range(1, 5):
            for c in range(1, 5):
                assert koszul_rhs(h, a, b, c).is_hermitian()


def test_projector_coincidence(table1):
    for a in range(1, 5):
        for b in range(1, 5):
            assert projector_connection(partial(a), embed(E(b))) == embed(table1[(a, b)])


def test_projector_coincidence_tower(table1):
    d = partial(3, 2)
    for b in range(1, 5):
        assert projector_connection(d, embed(E(b))) == embed(nabla_apply(table1, d, E(b)))


def test_tower_rule_for_nabla(table1):
    u = E(2) * LocalElement(T)
    got = nabla_apply(table1, partial(1, 2), u)
    want = nabla_apply(table1, partial(1), u) * LocalElement(T * T)
    assert got == want


def test_nabla_leibniz(table1):
    f = LocalElement(ABS_Z2 * T + 1)
    d = partial(4)
    assert nabla_apply(table1, d, E(3) * f) == table1[(4, 3)] * f + E(3) * Metric().delta.derive(d, f)


def test_nabla_of_anchor_image(table1):
    # nabla_{d_a} phi(d_b) - nabla_{d_b} phi(d_a) = phi([d_a, d_b])
    got = nabla_apply(table1, partial(4), phi_map(partial(2))) \
        - nabla_apply(table1, partial(2), phi_map(partial(4)))
    assert got == phi_map(partial(2, 1)) * 2
