"""Traces on the sphere and on the localized center.

``tau`` integrates the chart image of an element against the round volume
form.  On monomials the integral factors into a Beta integral in ``phi`` and
a Wallis integral in ``psi``, which gives the exact closed form used here.

``tau_delta_loc`` works on central fractions.  After ``s = cos^2 phi`` and
``t = sin psi`` the integrand becomes ``P(s, t) / (s^a (1-s)^b (1-t^2)^c
(1+t^2)^e)`` against ``2 pi^2 ds (1-t^2) dt``.  Factors that survive
cancellation at ``s in {0, 1}`` or ``t = +-1`` make the integral diverge.
What remains is a polynomial in ``s`` over a power of ``1+t^2``, and
``int dt / (1+t^2)^m`` over [-1, 1] is rational plus rational times pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .algebra import (
    AlgebraElement, ChartPoint, NotCentral, center_decompose, is_central,
)
from .geometry import Perturbation, UnsupportedDelta
from .localization import LocalElement
from .scalars import GaussianRational, QScalar

__all__ = [
    "TraceValue", "DivergentIntegral", "ConvergenceFailure", "AlphaBoundaryNonzero",
    "tau", "tau_basis", "tau_delta", "tau_delta_loc", "euler_characteristic",
    "quadrature_oracle", "alpha_at", "EulerResult",
]

_ZERO = GaussianRational(0)


class DivergentIntegral(ArithmeticError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass


class AlphaBoundaryNonzero(ValueError):
    def __init__(self, at_plus, at_minus):
        super().__init__(f"alpha(1) = {at_plus}, alpha(-1) = {at_minus}; both must vanish")
        self.at_plus = at_plus
        self.at_minus = at_minus


@dataclass(frozen=True)
class TraceValue:
    """``coeff * pi^2 + pi3 * pi^3`` with Laurent-in-q coefficients."""

    coeff: QScalar
    pi3: QScalar = QScalar()

    @staticmethod
    def zero() -> "TraceValue":
        return TraceValue(QScalar())

    def __add__(self, other: "TraceValue") -> "TraceValue":
        return TraceValue(self.coeff + other.coeff, self.pi3 + other.pi3)

    def __sub__(self, other: "TraceValue") -> "TraceValue":
        return TraceValue(self.coeff - other.coeff, self.pi3 - other.pi3)

    def __neg__(self):
        return TraceValue(-self.coeff, -self.pi3)

    def scale(self, c) -> "TraceValue":
        return TraceValue(self.coeff * c, self.pi3 * c)

    def conjugate(self) -> "TraceValue":
        return TraceValue(self.coeff.conjugate(), self.pi3.conjugate())

    @property
    def is_zero(self) -> bool:
        return not self.coeff and not self.pi3

    def __eq__(self, other):
        if not isinstance(other, TraceValue):
            return NotImplemented
        return self.coeff == other.coeff and self.pi3 == other.pi3

    def __hash__(self):
        return hash((self.coeff, self.pi3))

    def pi2_rational(self) -> Fraction:
        """The value divided by pi^2, when it is a real rational."""
        if self.pi3 or not self.coeff.is_constant():
            raise ValueError(f"{self} is not a rational multiple of pi^2")
        c = self.coeff.constant()
        if not c.is_real():
            raise ValueError(f"{self} is not real")
        return c.re

    def evaluate(self, q_value: complex = 1.0) -> complex:
        return (self.coeff.evaluate(q_value) * math.pi ** 2
                + self.pi3.evaluate(q_value) * math.pi ** 3)

    def __float__(self):
        v = self.evaluate(1.0)
        if abs(v.imag) > 1e-12 * max(1.0, abs(v.real)):
            raise ValueError(f"{self} is not real")
        return v.real

    def __str__(self):
        parts = []
        if self.coeff:
            parts.append(f"({self.coeff})*pi^2")
        if self.pi3:
            parts.append(f"({self.pi3})*pi^3")
        return " + ".join(parts) or "0"

    def to_json(self):
        return {"pi2": self.coeff.to_json(), "pi3": self.pi3.to_json(), "text": str(self)}


# ---------------------------------------------------------------------------
# tau on the polynomial algebra

@lru_cache(maxsize=None)
def tau_basis(j: int, l: int) -> Fraction:
    """``tau((|Z|^2)^j (|W|^2)^l) / pi^2``."""
    m = j + l
    beta = Fraction(math.factorial(j) * math.factorial(l), 2 * math.factorial(m + 1))
    wallis = Fraction(2 ** (2 * m + 3) * math.factorial(m + 1) ** 2, math.factorial(2 * m + 3))
    return 4 * beta * wallis


def tau(a: AlgebraElement) -> TraceValue:
    out = QScalar()
    for (j, k, l, m, e, n), c in a._t.items():
        if j == k and l == m and e == 0:
            out = out + QScalar._raw({n: c * tau_basis(j, l)})
    return TraceValue(out)


def _delta_polynomial(pert: Optional[Perturbation]) -> Optional[AlgebraElement]:
    if pert is None:
        return None
    try:
        return pert.polynomial()
    except ValueError as exc:
        raise UnsupportedDelta(f"delta = {pert} is not a polynomial; use tau_delta_loc") from exc


def tau_delta(a: AlgebraElement, pert: Optional[Perturbation] = None) -> TraceValue:
    """``tau(delta a delta)`` for a polynomial perturbation."""
    d = _delta_polynomial(pert)
    return tau(a if d is None else d * a * d)


# ---------------------------------------------------------------------------
# exact integration over (s, t)

Poly = Dict[Tuple[int, int], GaussianRational]  # (power of s, power of t) -> coefficient


def _padd(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for k, c in q.items():
        v = out.get(k, _ZERO) + (c if sign > 0 else -c)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            k = (a1 + a2, b1 + b2)
            v = out.get(k, _ZERO) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _ppow(p: Poly, k: int) -> Poly:
    out: Poly = {(0, 0): GaussianRational(1)}
    for _ in range(k):
        out = _pmul(out, p)
    return out


_ONE = GaussianRational(1)
_S: Poly = {(1, 0): _ONE}
_ONE_MINUS_S: Poly = {(0, 0): _ONE, (1, 0): -_ONE}
_ONE_MINUS_T2: Poly = {(0, 0): _ONE, (0, 2): -_ONE}
_ZSQ = _pmul(_S, _ONE_MINUS_T2)
_WSQ = _pmul(_ONE_MINUS_S, _ONE_MINUS_T2)


def _div_linear(p: Poly, var: int, root: int) -> Optional[Poly]:
    """``p / (x - root)`` for x = s (var 0) or t (var 1), or None if not exact."""
    other = 1 - var
    cols: Dict[int, Dict[int, GaussianRational]] = {}
    for k, c in p.items():
        cols.setdefault(k[other], {})[k[var]] = c
    out: Poly = {}
    for o, col in cols.items():
        deg = max(col)
        carry = _ZERO
        quot = {}
        for d in range(deg, -1, -1):
            carry = col.get(d, _ZERO) + carry * root
            if d:
                quot[d - 1] = carry
        if carry:
            return None
        for d, c in quot.items():
            if c:
                out[(d, o) if var == 0 else (o, d)] = c
    return out


def _cancel(p: Poly, var: int, root: int, power: int) -> Tuple[Poly, int]:
    """Divide out ``(x - root)`` up to ``power`` times; return what is left."""
    while power and p:
        x = _div_linear(p, var, root)
        if x is None:
            break
        p = x
        power -= 1
    return p, power


def _central_poly_by_q(num: AlgebraElement) -> Dict[int, Poly]:
    """Chart image of a central element, split by power of q."""
    out: Dict[int, Poly] = {}
    for (i1, i2, e), coeff in center_decompose(num).items():
        mono = _pmul(_ppow(_ZSQ, i1), _ppow(_WSQ, i2))
        if e:
            mono = _pmul(mono, {(0, 1): _ONE})
        for n, c in coeff.items():
            out[n] = _padd(out.get(n, {}), {k: v * c for k, v in mono.items()})
    return {n: p for n, p in out.items() if p}


@lru_cache(maxsize=None)
def _j_integral(m: int) -> Tuple[Fraction, Fraction]:
    """``int_{-1}^{1} dt / (1+t^2)^m`` as (rational part, coefficient of pi)."""
    if m == 0:
        return Fraction(2), Fraction(0)
    if m == 1:
        return Fraction(0), Fraction(1, 2)
    r, p = _j_integral(m - 1)
    k = m - 1
    head = Fraction(1, k * 2 ** k)
    f = Fraction(2 * k - 1, 2 * k)
    return head + f * r, f * p


def _integrate_t(coeffs: Dict[int, GaussianRational], e: int):
    """``int_{-1}^{1} sum c_j t^j / (1+t^2)^e dt`` as (rational, pi) parts."""
    # peel off (1+t^2): Q = (1+t^2) Q1 + (a + b t); odd remainders integrate to 0
    poly = [coeffs.get(j, _ZERO) for j in range(max(coeffs, default=0) + 1)]
    rat, pi = _ZERO, _ZERO
    level = e
    while any(poly):
        if level == 0:
            for j, c in enumerate(poly):
                if c and j % 2 == 0:
                    rat = rat + c * Fraction(2, j + 1)
            break
        # divide by t^2 + 1
        q = [_ZERO] * max(len(poly) - 2, 0)
        rem = list(poly)
        for d in range(len(poly) - 1, 1, -1):
            c = rem[d]
            if c:
                q[d - 2] = c
                rem[d] = _ZERO
                rem[d - 2] = rem[d - 2] - c
        a0 = rem[0] if rem else _ZERO
        if a0:
            jr, jp = _j_integral(level)
            rat = rat + a0 * jr
            pi = pi + a0 * jp
        poly = q
        level -= 1
    return rat, pi


def _integrate(p: Poly, e: int):
    """``int_0^1 ds int_{-1}^1 dt p(s, t) / (1+t^2)^e`` as (rational, pi) parts."""
    tcoef: Dict[int, GaussianRational] = {}
    for (i, j), c in p.items():
        tcoef[j] = tcoef.get(j, _ZERO) + c * Fraction(1, i + 1)
    return _integrate_t({j: c for j, c in tcoef.items() if c}, e)


def _loc_integrand(a, pert: Optional[Perturbation]) -> LocalElement:
    a = LocalElement.lift(a)
    if pert is not None:
        a = pert.value * a * pert.value
    if a.delta_pow:
        raise UnsupportedDelta(
            f"integrand carries Delta^{a.delta_pow} after weighting by delta^2")
    if not is_central(a.num):
        raise NotCentral("tau_delta_loc is defined on the localized center only")
    return a


def tau_delta_loc(a, pert: Optional[Perturbation] = None) -> TraceValue:
    """Exact ``tau(delta a delta)`` on central fractions, or ``DivergentIntegral``."""
    x = _loc_integrand(a, pert)
    if x.is_zero:
        return TraceValue.zero()
    da, db, dc, de = x.den
    ct = da + db + dc - 1  # measure supplies one power of (1 - t^2)
    coeff2: Dict[int, GaussianRational] = {}
    coeff3: Dict[int, GaussianRational] = {}
    for n, p in _central_poly_by_q(x.num).items():
        rs, rt = da, db
        if ct < 0:
            p = _pmul(p, _ppow(_ONE_MINUS_T2, -ct))
        c_minus = c_plus = max(ct, 0)
        p, rs = _cancel(p, 0, 0, rs)
        p, rt = _cancel(p, 0, 1, rt)
        p, c_minus = _cancel(p, 1, 1, c_minus)
        p, c_plus = _cancel(p, 1, -1, c_plus)
        if rs or rt or c_minus or c_plus:
            raise DivergentIntegral(
                f"integrand {x} is singular on the chart boundary "
                f"(s^{rs} (1-s)^{rt} (1-t)^{c_minus} (1+t)^{c_plus} left in the denominator)")
        # (x - root) = -(root - x) for the (1 - s), (1 - t) divisions
        sign = (-1) ** (db + max(ct, 0))
        rat, pi = _integrate(p, de)
        # 4 pi^2 (angles) * 1/2 (ds) -> 2 pi^2
        coeff2[n] = rat * (2 * sign)
        coeff3[n] = pi * (2 * sign)
    return TraceValue(QScalar(coeff2), QScalar(coeff3))


# ---------------------------------------------------------------------------
# alpha at the poles and the Euler characteristic

def _value_at_t(x: LocalElement, t: int) -> Fraction:
    """Exact value of a central fraction at ``sin psi = t``; must not depend on s."""
    x = LocalElement.lift(x)
    if x.is_zero:
        return Fraction(0)
    if x.delta_pow:
        raise UnsupportedDelta("alpha cannot carry Delta")
    polys = _central_poly_by_q(x.num)
    if set(polys) - {0}:
        raise UnsupportedDelta(f"{x} depends on q")
    p = polys.get(0, {})
    da, db, dc, de = x.den
    den = _pmul(_pmul(_ppow(_ZSQ, da), _ppow(_WSQ, db)),
                _pmul(_ppow(_ONE_MINUS_T2, dc), _ppow({(0, 0): _ONE, (0, 2): _ONE}, de)))
    num_t = _eval_t(p, t)
    den_t = _eval_t(den, t)
    if any(k[0] for k in num_t) or any(k[0] for k in den_t):
        # s may still cancel; compare as polynomials in s
        return _ratio_in_s(num_t, den_t, x)
    n0 = num_t.get((0, 0), _ZERO)
    d0 = den_t.get((0, 0), _ZERO)
    if not d0:
        if not n0:
            raise UnsupportedDelta(f"{x} is indeterminate at t = {t}")
        raise UnsupportedDelta(f"{x} has a pole at t = {t}")
    v = n0 / d0
    if not v.is_real():
        raise UnsupportedDelta(f"{x} is not real at t = {t}")
    return v.re


def _eval_t(p: Poly, t: int) -> Poly:
    out: Poly = {}
    for (i, j), c in p.items():
        v = out.get((i, 0), _ZERO) + c * (t ** j)
        if v:
            out[(i, 0)] = v
        else:
            out.pop((i, 0), None)
    return out


def _ratio_in_s(num: Poly, den: Poly, x) -> Fraction:
    if not den:
        raise UnsupportedDelta(f"{x} has a pole on the chart boundary")
    # num = v * den identically in s
    top = max(den)
    v = num.get(top, _ZERO) / den[top]
    if _padd(num, {k: c * v for k, c in den.items()}, -1):
        raise UnsupportedDelta(f"{x} is not a function of T alone")
    if not v.is_real():
        raise UnsupportedDelta(f"{x} is not real")
    return v.re


def alpha_at(pert: Perturbation, t: int) -> Fraction:
    return _value_at_t(pert.alpha, t)


@dataclass
class EulerResult:
    chi: Fraction
    alpha_at_1: Fraction
    alpha_at_minus1: Fraction
    integrand: LocalElement
    trace: TraceValue
    antiderivative_chi: Fraction


def _antiderivative_chi(a1: Fraction, am1: Fraction) -> Fraction:
    def f(t, a):
        x = a + t
        return x - x ** 3 / 3
    # (24 / 32 pi^2) (F(1) - F(-1)) * 4 pi^2 * 1/2
    return Fraction(24, 32) * (f(1, a1) - f(-1, am1)) * 2


def euler_characteristic(pert: Perturbation, full: bool = False):
    """Exact ``tau_loc(GCB integrand) / 32 pi^2``.

    The integrand comes from the full connection / curvature pipeline and is
    traced exactly; the result must agree with the antiderivative evaluation
    from ``alpha(+-1)``.
    """
    from .curvature import ClosedFormMismatch, compute

    a1, am1 = alpha_at(pert, 1), alpha_at(pert, -1)
    if a1 or am1:
        raise AlphaBoundaryNonzero(a1, am1)
    _, _, g = compute(pert)
    tr = tau_delta_loc(g.value, pert)
    value = tr.scale(Fraction(1, 32))
    if value.pi3 or not value.coeff.is_constant() or not value.coeff.constant().is_real():
        raise ClosedFormMismatch(f"traced integrand {tr} is not a rational multiple of pi^2")
    chi = value.coeff.constant().re
    anti = _antiderivative_chi(a1, am1)
    if chi != anti:
        raise ClosedFormMismatch(f"traced chi {chi} differs from antiderivative value {anti}")
    if full:
        return EulerResult(chi, a1, am1, g.value, tr, anti)
    return chi


# ---------------------------------------------------------------------------
# numeric oracle

def quadrature_oracle(a, pert: Optional[Perturbation] = None, tol: float = 1e-10,
                      q_value: complex = 1.0, delta_value: Optional[float] = None,
                      part: str = "real") -> float:
    """Adaptive quadrature of the chart integral of ``delta a delta``.

    Central integrands reduce to a double integral over (phi, psi) times 4 pi^2;
    others are integrated over all four angles.  ``part`` picks the real or
    imaginary part of a complex integrand.
    """
    if part not in ("real", "imag"):
        raise ValueError("part must be 'real' or 'imag'")
    from scipy import integrate

    x = LocalElement.lift(a)
    if pert is not None:
        x = pert.value * x * pert.value
    if x.delta_pow and delta_value is None:
        raise UnsupportedDelta("a formal Delta needs delta_value for quadrature")

    def f(xi1, xi2, phi, psi):
        p = ChartPoint(xi1, xi2, phi, psi)
        v = x.classical_eval(p, q_value, delta_value)
        v = v.real if part == "real" else v.imag
        return v * math.cos(psi) ** 3 * math.sin(phi) * math.cos(phi)

    eps = 1e-15  # chart is open; the boundary has measure zero
    lo_phi, hi_phi = eps, math.pi / 2 - eps
    lo_psi, hi_psi = -math.pi / 2 + eps, math.pi / 2 - eps
    opts = {"epsabs": tol * 1e-2, "epsrel": tol * 1e-2, "limit": 200}
    if is_central(x.num):
        val, err = integrate.nquad(lambda phi, psi: f(1.0, 1.0, phi, psi),
                                   [(lo_phi, hi_phi), (lo_psi, hi_psi)], opts=[opts, opts])
        val, err = val * 4 * math.pi ** 2, err * 4 * math.pi ** 2
    else:
        val, err = integrate.nquad(f, [(eps, 2 * math.pi - eps), (eps, 2 * math.pi - eps),
                                       (lo_phi, hi_phi), (lo_psi, hi_psi)], opts=[opts] * 4)
    if not math.isfinite(val) or err > tol * max(1.0, abs(val)):
        raise ConvergenceFailure(f"quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}")
    return val
