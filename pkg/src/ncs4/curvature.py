"""Riemann curvature of the Levi-Civita connection, its contractions and the
Gauss-Chern-Bonnet integrand ``R^{abcd} R_{abcd} - 4 Ric_{ab} Ric^{ab} + S^2``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .algebra import ABS_W2, ABS_Z2, ONE_MINUS_T2, T
from .connection import ConnectionTable, NotInvertibleMetric, nabla_apply
from .derivations import bracket, partial
from .geometry import E, Metric, ModuleVec
from .localization import LOC_ZERO, LocalElement, NotAUnit, invert

__all__ = [
    "ClosedFormMismatch", "CurvatureTensor", "GcbIntegrand", "curvature_op",
    "lowered_components", "ricci_scalar", "gcb_integrand", "gcb_closed_form",
    "closed_form_components", "contractions",
]

Index4 = Tuple[int, int, int, int]


class ClosedFormMismatch(AssertionError):
    pass


def curvature_op(t: ConnectionTable, p: int, q: int, b: int) -> ModuleVec:
    """``R(d_p, d_q) E_b``."""
    if p == q:
        return ModuleVec()
    dp, dq = partial(p), partial(q)
    out = nabla_apply(t, dp, nabla_apply(t, dq, E(b))) \
        - nabla_apply(t, dq, nabla_apply(t, dp, E(b)))
    br = bracket(dp, dq)
    if br.terms:
        out = out - nabla_apply(t, br, E(b))
    return out


@dataclass
class CurvatureTensor:
    """Nonzero ``R_{abpq} = h(E_a, R(d_p, d_q) E_b)`` and the diagonal inverse metric."""

    lowered: Dict[Index4, LocalElement]
    inverse_metric: List[LocalElement]
    metric: Metric
    operators: Dict[Tuple[int, int, int], ModuleVec] = field(default_factory=dict)

    def __getitem__(self, abpq: Index4) -> LocalElement:
        return self.lowered.get(tuple(abpq), LOC_ZERO)

    def nonzero(self):
        return sorted(self.lowered)

    def to_json(self):
        return {"".join(map(str, k)): v.to_json() for k, v in sorted(self.lowered.items())}


def lowered_components(t: ConnectionTable, h: Metric) -> CurvatureTensor:
    try:
        inv = [h.inverse_entry(a) for a in range(1, 5)]
    except NotAUnit as exc:
        raise NotInvertibleMetric(str(exc)) from exc
    ops = {}
    for p in range(1, 5):
        for q in range(p + 1, 5):
            for b in range(1, 5):
                r = curvature_op(t, p, q, b)
                ops[(p, q, b)] = r
                ops[(q, p, b)] = -r
    low = {}
    for (p, q, b), r in ops.items():
        if r.is_zero:
            continue
        for a in range(1, 5):
            # h is diagonal, so only the E_a component of R survives
            comp = r.comps[a - 1]
            if not comp.is_zero:
                low[(a, b, p, q)] = h.entry(a) * comp
    return CurvatureTensor(low, inv, h, ops)


def ricci_scalar(ct: CurvatureTensor):
    """``Ric_{ab} = h^{pp} R_{apbp}``, ``Ric^{ab} = h^{aa} h^{bb} Ric_{ab}``, ``S = h^{aa} Ric_{aa}``."""
    inv = ct.inverse_metric
    ric = [[LOC_ZERO] * 4 for _ in range(4)]
    for (a, p, b, p2), v in ct.lowered.items():
        if p == p2:
            ric[a - 1][b - 1] = ric[a - 1][b - 1] + inv[p - 1] * v
    ric_up = [[inv[a] * inv[b] * ric[a][b] if not ric[a][b].is_zero else LOC_ZERO
               for b in range(4)] for a in range(4)]
    s = LOC_ZERO
    for a in range(4):
        if not ric[a][a].is_zero:
            s = s + inv[a] * ric[a][a]
    return ric, ric_up, s


def contractions(ct: CurvatureTensor):
    """``(|Riem|^2, |Ric|^2, S^2)`` with all indices raised by the inverse metric."""
    inv = ct.inverse_metric
    riem2 = LOC_ZERO
    for (a, b, c, d), v in ct.lowered.items():
        riem2 = riem2 + inv[a - 1] * inv[b - 1] * inv[c - 1] * inv[d - 1] * v * v
    ric, ric_up, s = ricci_scalar(ct)
    ric2 = LOC_ZERO
    for a in range(4):
        for b in range(4):
            if not ric[a][b].is_zero:
                ric2 = ric2 + ric[a][b] * ric_up[a][b]
    return riem2, ric2, s * s


@dataclass
class GcbIntegrand:
    value: LocalElement
    closed_form: LocalElement
    riem2: LocalElement
    ric2: LocalElement
    s2: LocalElement

    def to_json(self):
        return self.value.to_json()


def _alpha_parts(pert):
    one = LocalElement(1)
    at = pert.alpha + LocalElement(T)
    return one - at * at, one + pert.alpha_prime()


def gcb_closed_form(pert) -> LocalElement:
    """``24 (1 - (alpha+T)^2) (1 + alpha') (1-T^2)^{-1} delta^{-2}``."""
    a, b = _alpha_parts(pert)
    inv_delta = invert(pert.value)
    return a * b * LocalElement(24, (0, 0, 1, 0)) * inv_delta * inv_delta


def gcb_integrand(ct: CurvatureTensor, check: bool = True) -> GcbIntegrand:
    riem2, ric2, s2 = contractions(ct)
    value = riem2 - ric2 * 4 + s2
    closed = gcb_closed_form(ct.metric.delta)
    if check and value != closed:
        raise ClosedFormMismatch(f"integrand {value} differs from {closed}")
    return GcbIntegrand(value, closed, riem2, ric2, s2)


def closed_form_components(pert) -> Dict[Index4, LocalElement]:
    """The six independent components ``R_{abab}``, before index symmetries."""
    a, b = _alpha_parts(pert)
    d = pert.value
    zsq, wsq, omt = LocalElement(ABS_Z2), LocalElement(ABS_W2), LocalElement(ONE_MINUS_T2)
    return {
        (1, 2, 1, 2): d * a * zsq * wsq * omt ** 3,
        (1, 3, 1, 3): d * a * zsq * zsq * wsq * omt ** 2,
        (1, 4, 1, 4): d * b * zsq * omt ** 3,
        (2, 3, 2, 3): d * a * zsq * wsq * wsq * omt ** 2,
        (2, 4, 2, 4): d * b * wsq * omt ** 3,
        (3, 4, 3, 4): d * b * zsq * wsq * omt ** 2,
    }


def expected_components(pert) -> Dict[Index4, LocalElement]:
    """The six components closed under ``R_{abpq} = -R_{bapq} = -R_{abqp}``."""
    out = {}
    for (a, b, p, q), v in closed_form_components(pert).items():
        out[(a, b, p, q)] = v
        out[(b, a, q, p)] = v
        out[(b, a, p, q)] = -v
        out[(a, b, q, p)] = -v
    return out


def component_mismatches(ct: CurvatureTensor, pert=None) -> List[Index4]:
    pert = pert or ct.metric.delta
    want = expected_components(pert)
    bad = []
    for idx in sorted(set(want) | set(ct.lowered)):
        if ct[idx] != want.get(idx, LOC_ZERO):
            bad.append(idx)
    return bad


def compute(pert, table: Optional[ConnectionTable] = None):
    """Full pipeline for one perturbation: connection, curvature, integrand."""
    from .connection import solve_connection
    h = Metric(pert)
    table = table or solve_connection(h)
    ct = lowered_components(table, h)
    return table, ct, gcb_integrand(ct)
