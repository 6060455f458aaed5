import math
import random
from fractions import Fraction

import pytest

from ncs4.algebra import ABS_W2, ABS_Z2, ONE_MINUS_T2, T, ChartPoint
from ncs4.connection import closed_form_connection, solve_connection
from ncs4.curvature import (
    ClosedFormMismatch, component_mismatches, contractions, curvature_op, gcb_closed_form,
    gcb_integrand, lowered_components, ricci_scalar,
)
from ncs4.geometry import E, Metric, ModuleVec, Perturbation
from ncs4.localization import LocalElement

from conftest import formal


def _curvature(p):
    h = Metric(p)
    return lowered_components(solve_connection(h), h)


@pytest.fixture(scope="module")
def ct1():
    return _curvature(Perturbation.explicit())


def expected_operators(p):
    L = LocalElement
    at = p.alpha + L(T)
    a = L(1) - at * at
    b = L(1) + p.alpha_prime()
    zsq, wsq, omt = L(ABS_Z2), L(ABS_W2), L(ONE_MINUS_T2)
    return {
        (1, 2, 1): -E(2) * (a * zsq * omt), (1, 2, 2): E(1) * (a * wsq * omt),
        (1, 3, 1): -E(3) * (a * zsq * omt), (1, 3, 3): E(1) * (a * zsq * wsq),
        (1, 4, 1): -E(4) * (b * zsq * omt * omt), (1, 4, 4): E(1) * (b * omt),
        (2, 3, 2): -E(3) * (a * wsq * omt), (2, 3, 3): E(2) * (a * zsq * wsq),
        (2, 4, 2): -E(4) * (b * wsq * omt * omt), (2, 4, 4): E(2) * (b * omt),
        (3, 4, 3): -E(4) * (b * zsq * wsq * omt), (3, 4, 4): E(3) * (b * omt),
    }


@pytest.mark.parametrize("p", [Perturbation.explicit(), Perturbation.one_plus_t2(1),
                               Perturbation.one_plus_t2(2), Perturbation.explicit(2, 1, 0),
                               formal(1)], ids=str)
def test_operator_values(p):
    t = solve_connection(Metric(p))
    want = expected_operators(p)
    for i in range(1, 5):
        for j in range(i + 1, 5):
            for b in range(1, 5):
                assert curvature_op(t, i, j, b) == want.get((i, j, b), ModuleVec()), (i, j, b)


def test_operator_antisymmetry(ct1):
    for (p, q, b), r in ct1.operators.items():
        assert ct1.operators[(q, p, b)] == -r
    assert curvature_op(solve_connection(Metric()), 2, 2, 1).is_zero


def test_components(pert):
    assert component_mismatches(_curvature(pert), pert) == []


def test_components_formal():
    p = formal(Fraction(1, 2))
    assert component_mismatches(_curvature(p), p) == []


def test_lowered_symmetries(ct1):
    for (a, b, p, q), v in ct1.lowered.items():
        assert ct1[(b, a, p, q)] == -v
        assert ct1[(a, b, q, p)] == -v
        assert ct1[(p, q, a, b)] == v


def test_component_count(ct1):
    # six independent pairs, each in four index orders
    assert len(ct1.nonzero()) == 24


def test_round_sphere_is_einstein(ct1):
    h = Metric()
    ric, _, s = ricci_scalar(ct1)
    for a in range(4):
        for b in range(4):
            assert ric[a][b] == (h.entry(a + 1) * 3 if a == b else 0)
    assert s == 12


def test_round_sphere_contractions(ct1):
    assert contractions(ct1) == (LocalElement(24), LocalElement(36), LocalElement(144))


def test_integrand(pert):
    g = gcb_integrand(_curvature(pert))
    assert g.value == g.closed_form == gcb_closed_form(pert)


def test_integrand_formal():
    p = formal(3)
    assert gcb_integrand(_curvature(p)).value == gcb_closed_form(p)


def test_integrand_of_round_sphere_is_constant(ct1):
    assert gcb_integrand(ct1).value == 24


def test_wrong_connection_is_caught():
    h = Metric()
    t = closed_form_connection(h.delta)
    t.gamma[(4, 4)] = E(4) * LocalElement(T * 2)
    ct = lowered_components(t, h)
    with pytest.raises(ClosedFormMismatch):
        gcb_integrand(ct)


# ---------------------------------------------------------------------------
# classical oracle: finite differences on the chart metric
#   ds^2 = delta(sin psi) (cos^2 phi cos^2 psi dx1^2 + sin^2 phi cos^2 psi dx2^2
#                          + cos^2 psi dphi^2 + dpsi^2)

def _d(f, x, i, h=1e-3):
    # five-point stencil in coordinate i
    def at(s):
        y = list(x)
        y[i] += s
        return f(y)
    return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h)


def _fd_invariants(phi, psi, delta):
    def g(x):
        c2 = math.cos(x[3]) ** 2
        d = delta(math.sin(x[3]))
        return [d * math.cos(x[2]) ** 2 * c2, d * math.sin(x[2]) ** 2 * c2, d * c2, d]

    def dg(x):
        # dg[c][a] = d_c g_aa (only phi and psi matter)
        out = [[0.0] * 4 for _ in range(4)]
        for c in (2, 3):
            col = [_d(lambda y, a=a: g(y)[a], x, c, 1e-4) for a in range(4)]
            out[c] = col
        return out

    def gamma(x):
        gx, d = g(x), dg(x)
        out = [[[0.0] * 4 for _ in range(4)] for _ in range(4)]
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    v = 0.0
                    if a == c:
                        v += d[b][a]
                    if a == b:
                        v += d[c][a]
                    if b == c:
                        v -= d[a][b]
                    out[a][b][c] = v / (2 * gx[a])
        return out

    x = [0.3, 0.7, phi, psi]
    gx = g(x)
    G = gamma(x)
    dG = [[[[0.0] * 4 for _ in range(4)] for _ in range(4)] for _ in range(4)]
    for c in (2, 3):
        for a in range(4):
            for b in range(4):
                for e in range(4):
                    dG[c][a][b][e] = _d(lambda y: gamma(y)[a][b][e], x, c)
    # R^a_{bcd}
    R = [[[[0.0] * 4 for _ in range(4)] for _ in range(4)] for _ in range(4)]
    for a in range(4):
        for b in range(4):
            for c in range(4):
                for d in range(4):
                    v = dG[c][a][d][b] - dG[d][a][c][b]
                    for e in range(4):
                        v += G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b]
                    R[a][b][c][d] = v
    riem2 = sum(R[a][b][c][d] ** 2 * gx[a] / (gx[b] * gx[c] * gx[d])
                for a in range(4) for b in range(4) for c in range(4) for d in range(4))
    ric = [[sum(R[a][b][a][d] for a in range(4)) for d in range(4)] for b in range(4)]
    ric2 = sum(ric[b][d] ** 2 / (gx[b] * gx[d]) for b in range(4) for d in range(4))
    s = sum(ric[b][b] / gx[b] for b in range(4))
    return riem2, ric2, s * s


def _points(n, seed):
    rng = random.Random(seed)
    return [ChartPoint(0.3, 0.7, rng.uniform(0.2, 1.35), rng.uniform(-1.2, 1.2)) for _ in range(n)]


def test_finite_difference_round_sphere(ct1):
    exact = contractions(ct1)
    for p in _points(4, 1):
        fd = _fd_invariants(p.phi, p.psi, lambda t: 1.0)
        for e, f, want in zip(exact, fd, (24, 36, 144)):
            assert e.classical_eval(p).real == pytest.approx(want, rel=1e-12)
            assert f == pytest.approx(want, rel=1e-6)


@pytest.mark.parametrize("c, pw, r", [(1, 0, 1), (1, 0, 2), (2, 1, 0), (Fraction(1, 2), 0, -1)])
def test_finite_difference_perturbed(c, pw, r):
    p = Perturbation.explicit(c, pw, r)
    exact = contractions(_curvature(p))

    def delta(t):
        return float(c) * (1 - t * t) ** pw * (1 + t * t) ** r

    for pt in _points(3, 7):
        fd = _fd_invariants(pt.phi, pt.psi, delta)
        got = [e.classical_eval(pt).real for e in exact]
        for g_, f in zip(got, fd):
            assert g_ == pytest.approx(f, rel=1e-6, abs=1e-6)
        gcb_fd = fd[0] - 4 * fd[1] + fd[2]
        assert gcb_closed_form(p).classical_eval(pt).real == pytest.approx(gcb_fd, rel=1e-6)
