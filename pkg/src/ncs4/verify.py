"""Batch verification suites behind ``ncs4 verify``.

Every check returns a ``Check`` with status ``pass``, ``fail`` or ``skip``.
Randomized checks draw from ``random.Random(seed)`` so reports are
reproducible.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from . import algebra as alg
from .algebra import (
    ABS_W2, ABS_Z2, ONE_EL, T, W, WS, X1, X2, X3, X4, X5, Z, ZS, AlgebraElement,
    CentralFactor, ChartPoint, classical_eval, commutator, is_central, random_element,
)
from .connection import (
    check_metric_compatibility, check_torsion_free, closed_form_connection, koszul_rhs,
    projector_connection, solve_connection,
)
from .curvature import (
    ClosedFormMismatch, component_mismatches, contractions, gcb_integrand,
    lowered_components,
)
from .derivations import Derivation, apply, bracket, partial
from .geometry import (
    E, E_AMBIENT, PROJECTOR, Metric, ModuleVec, Perturbation, ambient_basis,
    ambient_to_basis, embed, phi_map, projector_apply,
)
from .linalg import embedding_rank, multiplication_rank
from .localization import LocalElement
from .scalars import QScalar
from .trace import (
    AlphaBoundaryNonzero, DivergentIntegral, euler_characteristic, quadrature_oracle, tau,
    tau_delta, tau_delta_loc,
)

__all__ = ["Check", "Report", "SUITES", "run_suite", "GENERATOR_RELATIONS", "relation_defect"]


@dataclass
class Check:
    id: str
    ref: str
    status: str
    detail: str = ""

    def to_json(self):
        return {"id": self.id, "ref": self.ref, "status": self.status, "detail": self.detail}

    def line(self) -> str:
        return f"{self.id}: {self.status}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class Report:
    suite: str
    delta: str
    seed: int
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self):
        return {"suite": self.suite, "delta": self.delta, "seed": self.seed,
                "ok": self.ok, "exit_code": self.exit_code,
                "checks": [c.to_json() for c in self.checks]}


def _check(cid: str, ref: str, fn: Callable[[], Tuple[bool, str]]) -> Check:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash inside a check is reported, not raised
        return Check(cid, ref, "fail", f"{type(exc).__name__}: {exc}")
    return Check(cid, ref, "pass" if ok else "fail", detail)


def _first_failure(items, pred) -> Tuple[bool, str]:
    n = 0
    for x in items:
        n += 1
        if not pred(x):
            return False, f"counterexample: {x}"
    return True, f"{n} cases"


# ---------------------------------------------------------------------------
# algebra

def _algebra_checks(pert: Perturbation, rng: random.Random) -> List[Check]:
    def assoc():
        triples = [tuple(random_element(rng, 2, 3) for _ in range(3)) for _ in range(20)]
        return _first_failure(triples, lambda t: (t[0] * t[1]) * t[2] == t[0] * (t[1] * t[2]))

    def star_anti():
        pairs = [(random_element(rng, 3, 4), random_element(rng, 3, 4)) for _ in range(30)]
        return _first_failure(pairs, lambda p: (p[0] * p[1]).star() == p[1].star() * p[0].star()
                              and p[0].star().star() == p[0])

    def sphere():
        s = X1 * X1 + X2 * X2 + X3 * X3 + X4 * X4 + X5 * X5
        return s == ONE_EL, str(s)

    def commutation():
        zero = [commutator(X1, X2), commutator(X3, X4)] + [commutator(T, g) for g in (Z, ZS, W, WS)]
        return all(c.is_zero for c in zero), "[X1,X2], [X3,X4], [T,g]"

    def centrality():
        els = [random_element(rng, 3, 3) for _ in range(30)] + [ABS_Z2 * ABS_W2 * T, Z * ZS * T]
        return _first_failure(els, lambda a: is_central(a) == all(
            commutator(a, g).is_zero for g in (Z, W, ZS, WS)))

    def regularity():
        out = []
        for d in CentralFactor:
            r, n = multiplication_rank(d, 6)
            out.append(f"{d.name} {r}/{n}")
            if r != n:
                return False, ", ".join(out)
        return True, ", ".join(out)

    def classical():
        for _ in range(20):
            a, b = random_element(rng, 3, 3), random_element(rng, 3, 3)
            p = ChartPoint.random(rng)
            lhs = classical_eval(a * b, p)
            rhs = classical_eval(a, p) * classical_eval(b, p)
            if abs(lhs - rhs) > 1e-10 * max(1.0, abs(rhs)):
                return False, f"{lhs} != {rhs}"
        return True, "20 points, q = 1"

    return [
        _check("associativity", "basis product", assoc),
        _check("star-antihomomorphism", "adjoint on the basis", star_anti),
        _check("sphere-relation", "defining relations", sphere),
        _check("commutation", "defining relations", commutation),
        _check("centrality-oracle", "center of the algebra", centrality),
        _check("regularity", "no zero divisors among |Z|^2, |W|^2, 1-T^2, 1+T^2", regularity),
        _check("classical-limit", "chart homomorphism at q = 1", classical),
    ]


# ---------------------------------------------------------------------------
# derivations

# Words over generators; each relation is a list of (coefficient, word).
_Q = QScalar.q(1)
_QBAR = QScalar.q(-1)
GENERATOR_RELATIONS = {
    "WZ-qZW": [(1, "W Z"), (-_Q, "Z W")],
    "WsZ-qbarZWs": [(1, "Ws Z"), (-_QBAR, "Z Ws")],
    "sphere": [(1, "Z Zs"), (1, "W Ws"), (1, "T T"), (-1, "")],
    "[T,Z]": [(1, "T Z"), (-1, "Z T")],
    "[T,W]": [(1, "T W"), (-1, "W T")],
    "[W,Ws]": [(1, "W Ws"), (-1, "Ws W")],
    "[Z,Zs]": [(1, "Z Zs"), (-1, "Zs Z")],
}
_GEN = {"Z": Z, "Zs": ZS, "W": W, "Ws": WS, "T": T}


def relation_defect(d: Derivation, relation) -> AlgebraElement:
    """``d`` applied to a relation through the Leibniz rule on the unreduced words."""
    out = AlgebraElement.zero()
    for coeff, word in relation:
        gens = [_GEN[g] for g in word.split()]
        for pos in range(len(gens)):
            term = ONE_EL
            for i, g in enumerate(gens):
                term = term * (apply(d, g) if i == pos else g)
            out = out + term.scale(coeff)
    return out


_DERIVATION_SAMPLE = [partial(i, n) for i in (1, 2, 3) for n in range(4)] + [partial(4)]
_BRACKET_SAMPLE = [partial(1), partial(2), partial(3), partial(4), partial(1, 1), partial(3, 2)]


def _derivation_checks(pert: Perturbation, rng: random.Random) -> List[Check]:
    def well_defined():
        bad = [(str(d), name) for d in _DERIVATION_SAMPLE
               for name, rel in GENERATOR_RELATIONS.items() if not relation_defect(d, rel).is_zero]
        return not bad, f"{len(_DERIVATION_SAMPLE)} derivations x 7 relations" if not bad else str(bad)

    def leibniz():
        cases = [(rng.choice(_DERIVATION_SAMPLE), random_element(rng, 3, 3),
                  random_element(rng, 3, 3)) for _ in range(30)]
        return _first_failure(cases, lambda c: apply(c[0], c[1] * c[2])
                              == apply(c[0], c[1]) * c[2] + c[1] * apply(c[0], c[2]))

    def hermitian():
        cases = [(rng.choice(_DERIVATION_SAMPLE), random_element(rng, 4, 4)) for _ in range(30)]
        return _first_failure(cases, lambda c: apply(c[0], c[1].star()) == apply(c[0], c[1]).star())

    def bracket_consistency():
        cases = []
        for d1 in _BRACKET_SAMPLE:
            for d2 in _BRACKET_SAMPLE:
                cases.append((d1, d2, random_element(rng, 3, 3)))
        return _first_failure(cases, lambda c: apply(bracket(c[0], c[1]), c[2])
                              == apply(c[0], apply(c[1], c[2])) - apply(c[1], apply(c[0], c[2])))

    def delta_rule():
        lhs = pert.derive(partial(4), pert.value)
        return lhs == pert.alpha * pert.value * 2, f"d4 delta = 2 alpha delta for delta = {pert}"

    return [
        _check("well-defined", "derivations respect the defining relations", well_defined),
        _check("leibniz", "derivation property", leibniz),
        _check("hermitian", "hermitian derivations", hermitian),
        _check("bracket-consistency", "tower Lie algebra", bracket_consistency),
        _check("delta-rule", "perturbation derivative", delta_rule),
    ]


# ---------------------------------------------------------------------------
# module

def _module_checks(pert: Perturbation, rng: random.Random) -> List[Check]:
    h1 = Metric()
    h = Metric(pert)

    def metric_table():
        bad = []
        for a in range(1, 5):
            for b in range(1, 5):
                want = h1.entry(a) if a == b else LocalElement()
                if h1(E(a), E(b)) != want:
                    bad.append((a, b))
        return not bad, "16 entries" if not bad else str(bad)

    def ambient_agrees():
        # h(u, v) = delta * ambient_h(embed u, embed v)
        from .geometry import ambient_h
        ok = True
        for _ in range(5):
            u = ModuleVec([LocalElement(random_element(rng, 1, 2)) for _ in range(4)])
            v = ModuleVec([LocalElement(random_element(rng, 1, 2)) for _ in range(4)])
            ok = ok and h(u, v) == pert.value * ambient_h(embed(u), embed(v))
            ok = ok and h(u, v).star() == h(v, u)
        return ok, "5 random pairs, hermitian form"

    def projector():
        return PROJECTOR.squared_equals_self(), "P^2 = P"

    def normal():
        bad = [a for a, ea in enumerate(E_AMBIENT, 1)
               if sum((LocalElement(x) * c for x, c in zip((X1, X2, X3, X4, X5), ea.comps)),
                      LocalElement()) != LocalElement()]
        return not bad, "sum_i X^i E_a^i = 0"

    def p_e5():
        return projector_apply(PROJECTOR, ambient_basis(5)) == -E_AMBIENT[3], "P(e5) = -E4"

    def round_trip():
        for _ in range(5):
            v = ModuleVec([LocalElement(random_element(rng, 2, 2)) for _ in range(4)])
            if ambient_to_basis(embed(v)) != v:
                return False, str(v)
        return True, "5 random vectors"

    def freeness():
        r, n = embedding_rank(2)
        return r == n, f"rank {r}/{n} on degree <= 2 coefficients"

    def units():
        try:
            inv = [h.inverse_entry(a) for a in range(1, 5)]
        except Exception as exc:
            return False, str(exc)
        return all(i * h.entry(a) == LocalElement(1) for a, i in enumerate(inv, 1)), "h^aa h_aa = 1"

    def real_calculus():
        for n in range(3):
            for m in range(3):
                for a in range(1, 5):
                    for b in range(1, 5):
                        x = h(E(a) * LocalElement(T ** n), E(b) * LocalElement(T ** m))
                        if not x.is_hermitian():
                            return False, f"h(E{a}T^{n}, E{b}T^{m})"
        return True, "n, m <= 2"

    def anchor():
        ok = phi_map(partial(3, 2)) == E(3) * LocalElement(T * T) and phi_map(partial(4)) == E(4)
        return ok, "phi(D3(2)) = E3 T^2, phi(d4) = E4"

    return [
        _check("metric-table", "metric on the module basis", metric_table),
        _check("metric-ambient", "restriction of the ambient metric", ambient_agrees),
        _check("projector-idempotent", "P^2 = P", projector),
        _check("normal-orthogonal", "tangent vectors are orthogonal to X", normal),
        _check("projector-e5", "local trivialization", p_e5),
        _check("basis-round-trip", "local trivialization", round_trip),
        _check("freeness", "free module of rank 4", freeness),
        _check("metric-invertible", "non-degenerate metric", units),
        _check("real-metric-calculus", "hermitian metric on the anchor image", real_calculus),
        _check("anchor-map", "anchor map", anchor),
    ]


# ---------------------------------------------------------------------------
# connection

def _connection_checks(pert: Perturbation, rng: random.Random) -> List[Check]:
    h = Metric(pert)
    state = {}

    def table():
        if "t" not in state:
            state["t"] = solve_connection(h)
        return state["t"]

    def unique():
        bad = table().mismatches(closed_form_connection(pert))
        return not bad, "Koszul = closed form" if not bad else f"mismatch at {bad}"

    def compat():
        return check_metric_compatibility(table(), h), "d1..d4, D1(1), D3(1)"

    def torsion():
        return check_torsion_free(table()), "d1..d4, D1(1), D2(1), D3(1)"

    def koszul_hermitian():
        bad = [(a, b, c) for a in range(1, 5) for b in range(1, 5) for c in range(1, 5)
               if not koszul_rhs(h, a, b, c).is_hermitian()]
        return not bad, "64 triples" if not bad else str(bad)

    def coincide():
        t1 = solve_connection(Metric())
        bad = [(a, b) for a in range(1, 5) for b in range(1, 5)
               if projector_connection(partial(a), embed(E(b))) != embed(t1[(a, b)])]
        return not bad, "16 pairs at delta = 1" if not bad else str(bad)

    def general_alpha():
        # hermitian central alphas; torsion only depends on the shape of the table
        al = [LocalElement(ABS_Z2 * T), LocalElement(ABS_W2 - 2), LocalElement(T * Fraction(1, 3)),
              pert.alpha]
        return check_torsion_free(closed_form_connection(pert, al)), "alpha_1..alpha_3 nonzero"

    return [
        _check("levi-civita-unique", "unique Levi-Civita connection", unique),
        _check("metric-compatible", "pseudo-Riemannian calculus", compat),
        _check("torsion-free", "pseudo-Riemannian calculus", torsion),
        _check("koszul-hermitian", "real connection calculus", koszul_hermitian),
        _check("projector-coincidence", "projected connection equals Levi-Civita", coincide),
        _check("torsion-general-alpha", "closed-form table with general alpha", general_alpha),
    ]


# ---------------------------------------------------------------------------
# curvature

def _curvature_checks(pert: Perturbation, rng: random.Random, tolerance: float) -> List[Check]:
    h = Metric(pert)
    state = {}

    def ct():
        if "ct" not in state:
            state["ct"] = lowered_components(solve_connection(h), h)
        return state["ct"]

    def components():
        bad = component_mismatches(ct(), pert)
        return not bad, "six components, all others vanish" if not bad else str(bad)

    def antisym():
        ops = ct().operators
        bad = [k for k in ops if ops[k] != -ops[(k[1], k[0], k[2])]]
        return not bad, "R(p,q) = -R(q,p)"

    def integrand():
        try:
            gcb_integrand(ct())
        except ClosedFormMismatch as exc:
            return False, str(exc)
        return True, "24 (1-(alpha+T)^2)(1+alpha')(1-T^2)^-1 delta^-2"

    def classical():
        c1 = lowered_components(solve_connection(Metric()), Metric())
        vals = contractions(c1)
        for _ in range(20):
            p = ChartPoint.random(rng)
            got = [v.classical_eval(p).real for v in vals]
            if any(abs(g - w) > tolerance for g, w in zip(got, (24, 36, 144))):
                return False, f"{got} at {p}"
        return True, "|Riem|^2 = 24, |Ric|^2 = 36, S^2 = 144 at 20 points"

    return [
        _check("curvature-components", "nonzero curvature components", components),
        _check("curvature-antisymmetric", "curvature operator", antisym),
        _check("gcb-integrand", "Gauss-Chern-Bonnet integrand", integrand),
        _check("classical-values", "unit round sphere at q = 1", classical),
    ]


# ---------------------------------------------------------------------------
# trace

def _trace_checks(pert: Perturbation, rng: random.Random, tolerance: float,
                  numeric: bool) -> List[Check]:
    try:
        pert.polynomial()
        poly = True
    except ValueError:
        poly = False

    def commutators():
        if not poly:
            return None
        pairs = [(random_element(rng, 4, 4), random_element(rng, 4, 4)) for _ in range(50)]
        return _first_failure(pairs, lambda p: tau_delta(commutator(*p), pert).is_zero)

    def reality():
        if not poly:
            return None
        els = [random_element(rng, 4, 4) for _ in range(50)]
        return _first_failure(els, lambda a: tau_delta(a.star(), pert) == tau_delta(a, pert).conjugate())

    def kills_noncentral():
        idxs = [i for i in alg.iter_basis(4) if not (i.j == i.k and i.l == i.m)]
        return _first_failure(idxs, lambda i: tau_delta(AlgebraElement.basis(i), pert if poly else None).is_zero)

    def normalization():
        ok = tau(ABS_Z2) + tau(ABS_W2) + tau(T * T) == tau(ONE_EL)
        return ok and tau(ONE_EL).pi2_rational() == Fraction(8, 3), "tau(1) = 8 pi^2 / 3"

    def oracle():
        worst = 0.0
        for j in range(5):
            for l in range(5 - j):
                a = ABS_Z2 ** j * ABS_W2 ** l
                worst = max(worst, abs(float(tau(a)) - quadrature_oracle(a, tol=1e-11)))
        return worst <= 1e-8, f"max deviation {worst:.2e}"

    def divergence():
        try:
            tau_delta_loc(LocalElement(1, (0, 0, 2, 0)))
        except DivergentIntegral:
            return tau_delta_loc(LocalElement(1, (0, 0, 1, 0))).pi2_rational() == 4, \
                "(1-T^2)^-1 -> 4 pi^2, (1-T^2)^-2 diverges"
        return False, "(1-T^2)^-2 did not diverge"

    def chi():
        try:
            value = euler_characteristic(pert)
        except AlphaBoundaryNonzero as exc:
            return False, str(exc)
        return value == 2, f"chi = {value}"

    def chi_numeric():
        if pert.formal:
            return None
        g = gcb_integrand(lowered_components(solve_connection(Metric(pert)), Metric(pert)))
        v = quadrature_oracle(g.value, pert, tol=1e-9) / (32 * math.pi ** 2)
        return abs(v - 2) <= max(tolerance, 1e-6), f"quadrature chi = {v:.12f}"

    out = []
    for cid, ref, fn in [
        ("trace-commutator", "tau_delta([a, b]) = 0", commutators),
        ("trace-reality", "tau_delta(a*) = conj tau_delta(a)", reality),
        ("trace-noncentral", "non-central basis elements have zero trace", kills_noncentral),
        ("trace-normalization", "volume of the sphere", normalization),
        ("trace-divergence", "localized trace convergence", divergence),
        ("tau-quadrature", "closed-form trace against quadrature", oracle),
        ("euler-characteristic", "Gauss-Chern-Bonnet theorem", chi),
    ] + ([("euler-quadrature", "Gauss-Chern-Bonnet theorem", chi_numeric)] if numeric else []):
        try:
            res = fn()
        except Exception as exc:
            out.append(Check(cid, ref, "fail", f"{type(exc).__name__}: {exc}"))
            continue
        if res is None:
            out.append(Check(cid, ref, "skip", f"not applicable for delta = {pert}"))
        else:
            out.append(Check(cid, ref, "pass" if res[0] else "fail", res[1]))
    return out


SUITES = ("algebra", "derivations", "module", "connection", "curvature", "trace")


def run_suite(suite: str, pert: Optional[Perturbation] = None, seed: int = 0,
              tolerance: float = 1e-9, numeric: bool = False) -> Report:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    pert = pert or Perturbation.explicit()
    report = Report(suite, str(pert), seed)
    for name in (SUITES if suite == "all" else (suite,)):
        rng = random.Random(f"{seed}:{name}")
        if name == "algebra":
            checks = _algebra_checks(pert, rng)
        elif name == "derivations":
            checks = _derivation_checks(pert, rng)
        elif name == "module":
            checks = _module_checks(pert, rng)
        elif name == "connection":
            checks = _connection_checks(pert, rng)
        elif name == "curvature":
            checks = _curvature_checks(pert, rng, tolerance)
        else:
            checks = _trace_checks(pert, rng, tolerance, numeric)
        for c in checks:
            c.id = f"{name}/{c.id}" if suite == "all" else c.id
        report.checks.extend(checks)
    return report

