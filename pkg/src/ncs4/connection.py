"""Levi-Civita connection of the perturbed metric: Koszul solver, closed-form table,
projector-induced connection and the metric / torsion predicates."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .algebra import ABS_W2, ABS_Z2, ONE_MINUS_T2, T
from .derivations import Derivation, bracket, partial
from .geometry import (
    PROJECTOR, Ambient5, E, Metric, ModuleVec, Perturbation, phi_map, projector_apply,
)
from .localization import LOC_ZERO, LocalElement, NotAUnit

__all__ = [
    "ConnectionTable", "NotInvertibleMetric", "koszul_rhs", "solve_connection",
    "closed_form_connection", "nabla_apply", "check_metric_compatibility",
    "check_torsion_free", "projector_connection", "COMPATIBILITY_DERIVATIONS",
    "TORSION_DERIVATIONS",
]


_HALF = Fraction(1, 2)


class NotInvertibleMetric(ArithmeticError):
    pass


@dataclass
class ConnectionTable:
    """``gamma[(a, b)] = nabla_{d_a} E_b`` for a, b in 1..4."""

    gamma: Dict[Tuple[int, int], ModuleVec]
    perturbation: Perturbation

    def __getitem__(self, ab):
        return self.gamma[ab]

    def equals(self, other: "ConnectionTable") -> bool:
        return all(self.gamma[ab] == other.gamma[ab] for ab in self.gamma)

    def mismatches(self, other: "ConnectionTable"):
        return [ab for ab in sorted(self.gamma) if self.gamma[ab] != other.gamma[ab]]

    def to_json(self):
        return {f"{a}{b}": v.to_json() for (a, b), v in sorted(self.gamma.items())}


def _h(h: Metric, a: int, b: int) -> LocalElement:
    return h.entry(a) if a == b else LOC_ZERO


def koszul_rhs(h: Metric, a: int, b: int, c: int) -> LocalElement:
    """Right-hand side ``K`` of ``2 h(nabla_a E_b, E_c) = K``."""
    d = {i: partial(i) for i in (1, 2, 3, 4)}
    der = h.delta.derive
    out = der(d[a], _h(h, b, c)) + der(d[b], _h(h, a, c)) - der(d[c], _h(h, a, b))
    out = out - h(E(a), phi_map(bracket(d[b], d[c])))
    out = out + h(E(b), phi_map(bracket(d[c], d[a])))
    out = out + h(E(c), phi_map(bracket(d[a], d[b])))
    return out


def solve_connection(h: Metric) -> ConnectionTable:
    """Solve the Koszul system in the E-basis.

    With a diagonal hermitian central metric, ``h(U, E_c) = (U^c)^* h_cc``, so
    ``U^c = h_cc^{-1} (K_c / 2)^*``.
    """
    try:
        inverse = [h.inverse_entry(c) for c in range(1, 5)]
    except NotAUnit as exc:
        raise NotInvertibleMetric(str(exc)) from exc
    gamma = {}
    for a in range(1, 5):
        for b in range(1, 5):
            comps = [inverse[c - 1] * (koszul_rhs(h, a, b, c) * _HALF).star() for c in range(1, 5)]
            gamma[(a, b)] = ModuleVec(comps)
    return ConnectionTable(gamma, h.delta)


def closed_form_connection(p: Perturbation,
                           general_alpha: Optional[Sequence] = None) -> ConnectionTable:
    """The explicit 16-entry table with hermitian ``alpha_1..alpha_4``.

    Without ``general_alpha`` the perturbation's axial family is used:
    ``alpha_1 = alpha_2 = alpha_3 = 0`` and ``alpha_4 = p.alpha``.
    """
    if general_alpha is None:
        al = [LOC_ZERO, LOC_ZERO, LOC_ZERO, p.alpha]
    else:
        al = [LocalElement.lift(x) for x in general_alpha]
    a1, a2, a3, a4 = al
    L = LocalElement
    one = L(1)
    zsq, wsq, omt, t = L(ABS_Z2), L(ABS_W2), L(ONE_MINUS_T2), L(T)
    izsq = L(1, (1, 0, 0, 0))
    iwsq = L(1, (0, 1, 0, 0))
    iomt = L(1, (0, 0, 1, 0))
    at = a4 + t
    a3t = a4 + t * 3

    def vec(*comps):
        return ModuleVec(comps)

    g = {}
    g[(1, 1)] = vec(a1, -a2 * zsq * iwsq, -(a3 * iwsq + one) * omt, -at * zsq * omt)
    g[(1, 2)] = g[(2, 1)] = vec(a2, a1, 0, 0)
    g[(1, 3)] = g[(3, 1)] = vec(a3 + wsq, 0, a1, 0)
    g[(1, 4)] = vec(at, 0, 0, a1)
    g[(4, 1)] = vec(a3t, 0, 0, a1)
    g[(2, 2)] = vec(-a1 * wsq * izsq, a2, -(a3 * izsq - one) * omt, -at * wsq * omt)
    g[(2, 3)] = g[(3, 2)] = vec(0, a3 - zsq, a2, 0)
    g[(2, 4)] = vec(0, at, 0, a2)
    g[(4, 2)] = vec(0, a3t, 0, a2)
    g[(3, 3)] = vec(-a1 * wsq * iomt, -a2 * zsq * iomt, a3 + wsq - zsq, -at * zsq * wsq)
    g[(3, 4)] = vec(0, 0, at, a3)
    g[(4, 3)] = vec(0, 0, a3t, a3)
    g[(4, 4)] = vec(-a1 * izsq * iomt, -a2 * iwsq * iomt, -a3 * izsq * iwsq, at)
    return ConnectionTable(g, p)


def _nabla_basis(t: ConnectionTable, b, c: int) -> ModuleVec:
    """``nabla_{b} E_c`` for a basis derivation, via the tower rule."""
    if b.kind == 4:
        return t.gamma[(4, c)]
    base = t.gamma[(b.kind, c)]
    return base * LocalElement(T ** b.n) if b.n else base


def nabla_apply(t: ConnectionTable, d: Derivation, u: ModuleVec) -> ModuleVec:
    """``nabla_d (sum_c E_c f_c) = sum_c (nabla_d E_c) f_c + E_c d(f_c)``."""
    out = ModuleVec()
    pert = t.perturbation
    for b, coeff in d.terms.items():
        single = Derivation({b: 1})
        part = ModuleVec()
        for c in range(1, 5):
            f = u.comps[c - 1]
            if f.is_zero:
                continue
            part = part + _nabla_basis(t, b, c) * f
            df = pert.derive(single, f)
            if not df.is_zero:
                part = part + E(c) * df
        out = out + (part * coeff if coeff != 1 else part)
    return out


COMPATIBILITY_DERIVATIONS = (partial(1), partial(2), partial(3), partial(4),
                             partial(1, 1), partial(3, 1))
TORSION_DERIVATIONS = (partial(1), partial(2), partial(3), partial(4),
                       partial(1, 1), partial(2, 1), partial(3, 1))


def metric_defects(t: ConnectionTable, h: Metric, derivations=COMPATIBILITY_DERIVATIONS):
    """(d, a, b) triples where ``d h(E_a,E_b) != h(nabla_d E_a, E_b) + h(E_a, nabla_d E_b)``."""
    bad = []
    for d in derivations:
        nab = {a: nabla_apply(t, d, E(a)) for a in range(1, 5)}
        for a in range(1, 5):
            for b in range(a, 5):
                lhs = h.delta.derive(d, _h(h, a, b))
                rhs = h(nab[a], E(b)) + h(E(a), nab[b])
                if lhs != rhs:
                    bad.append((str(d), a, b))
    return bad


def check_metric_compatibility(t: ConnectionTable, h: Metric) -> bool:
    return not metric_defects(t, h)


def torsion(t: ConnectionTable, d1: Derivation, d2: Derivation) -> ModuleVec:
    return (nabla_apply(t, d1, phi_map(d2)) - nabla_apply(t, d2, phi_map(d1))
            - phi_map(bracket(d1, d2)))


def torsion_defects(t: ConnectionTable, derivations=TORSION_DERIVATIONS):
    bad = []
    for i, d1 in enumerate(derivations):
        for d2 in derivations[i + 1:]:
            if not torsion(t, d1, d2).is_zero:
                bad.append((str(d1), str(d2)))
    return bad


def check_torsion_free(t: ConnectionTable) -> bool:
    return not torsion_defects(t)


def projector_connection(d: Derivation, u: Ambient5, p: Optional[Perturbation] = None) -> Ambient5:
    """``P(e_i d(U^i))``: differentiate components, then project."""
    derive = p.derive if p is not None else Perturbation.explicit().derive
    du = Ambient5([derive(d, c) for c in u.comps])
    return projector_apply(PROJECTOR, du)
