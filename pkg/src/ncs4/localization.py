"""Fractions over the central multiplicative set generated by |Z|^2, |W|^2,
1 - T^2 and 1 + T^2, with an optional formal central unit ``Delta``.

The denominators are central and regular, so fractions need no Ore
bookkeeping: ``n/s`` is stored as a numerator and four exponents, and
equality is decided by cross-multiplication.  Reduction is best-effort.
"""
from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction
from typing import NamedTuple

from .algebra import (
    ONE_EL, AlgebraElement, CentralFactor, ChartPoint, _divide, classical_eval,
)
from .scalars import GaussianRational, QScalar

__all__ = [
    "CentralDenominator", "LocalElement", "DeltaGradeMismatch", "NotAUnit",
    "loc_add", "loc_mul", "loc_eq", "invert", "DELTA", "LOC_ONE", "LOC_ZERO",
]

FACTORS = (CentralFactor.ABS_Z2, CentralFactor.ABS_W2,
           CentralFactor.ONE_MINUS_T2, CentralFactor.ONE_PLUS_T2)


class DeltaGradeMismatch(ValueError):
    pass


class NotAUnit(ArithmeticError):
    pass


class CentralDenominator(NamedTuple):
    """Exponents of (|Z|^2)^a (|W|^2)^b (1-T^2)^c (1+T^2)^e."""

    a: int = 0
    b: int = 0
    c: int = 0
    e: int = 0

    def __add__(self, other):
        return CentralDenominator(*(x + y for x, y in zip(self, other)))

    def lcm(self, other) -> "CentralDenominator":
        return CentralDenominator(*(max(x, y) for x, y in zip(self, other)))

    def minus(self, other) -> "CentralDenominator":
        return CentralDenominator(*(x - y for x, y in zip(self, other)))

    @property
    def is_trivial(self) -> bool:
        return not any(self)

    def element(self) -> AlgebraElement:
        out = ONE_EL
        for f, p in zip(FACTORS, self):
            if p:
                out = out * _factor_power(f, p)
        return out

    def to_json(self):
        return dict(self._asdict())


@lru_cache(maxsize=256)
def _factor_power(f: CentralFactor, p: int) -> AlgebraElement:
    return f.element ** p


def _apply_den(num: AlgebraElement, den: CentralDenominator) -> AlgebraElement:
    """Multiply ``num`` by the algebra element represented by ``den``."""
    if den.is_trivial:
        return num
    if den.a or den.b:
        num = num.shift(den.a, den.a, den.b, den.b)
    if den.c:
        num = num * _factor_power(CentralFactor.ONE_MINUS_T2, den.c)
    if den.e:
        num = num * _factor_power(CentralFactor.ONE_PLUS_T2, den.e)
    return num


class LocalElement:
    """``Delta^delta_pow * num / den`` with ``den`` a central monomial."""

    __slots__ = ("num", "den", "delta_pow")
    __hash__ = None

    def __init__(self, num=None, den=None, delta_pow: int = 0, reduce: bool = True):
        if num is None:
            num = AlgebraElement.zero()
        elif not isinstance(num, AlgebraElement):
            num = AlgebraElement.scalar(num)
        den = CentralDenominator() if den is None else CentralDenominator(*den)
        if min(den) < 0:
            raise ValueError("denominator exponents must be non-negative")
        if num.is_zero:
            den = CentralDenominator()
        self.num = num
        self.den = den
        self.delta_pow = int(delta_pow)
        if reduce and not den.is_trivial:
            self._reduce()

    def _reduce(self):
        num = self.num
        den = list(self.den)
        for i, f in enumerate(FACTORS):
            while den[i]:
                x = _divide(num, f)
                if x is None:
                    break
                num = x
                den[i] -= 1
        self.num = num
        self.den = CentralDenominator(*den)

    # coercion -------------------------------------------------------------
    @staticmethod
    def lift(x) -> "LocalElement":
        if isinstance(x, LocalElement):
            return x
        return LocalElement(x)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    # arithmetic -----------------------------------------------------------
    def _combine(self, other, sign: int) -> "LocalElement":
        other = LocalElement.lift(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other if sign > 0 else -other
        if self.delta_pow != other.delta_pow:
            raise DeltaGradeMismatch(
                f"cannot add Delta-grades {self.delta_pow} and {other.delta_pow}")
        den = self.den.lcm(other.den)
        n1 = _apply_den(self.num, den.minus(self.den))
        n2 = _apply_den(other.num, den.minus(other.den))
        num = n1 + n2 if sign > 0 else n1 - n2
        return LocalElement(num, den, self.delta_pow)

    def __add__(self, other):
        try:
            return self._combine(other, 1)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return self._combine(other, -1)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return LocalElement.lift(other) - self

    def __neg__(self):
        return LocalElement(-self.num, self.den, self.delta_pow, reduce=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, QScalar)):
            return LocalElement(self.num.scale(other), self.den, self.delta_pow, reduce=False)
        if isinstance(other, AlgebraElement):
            other = LocalElement(other)
        if not isinstance(other, LocalElement):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LOC_ZERO
        return LocalElement(self.num * other.num, self.den + other.den,
                            self.delta_pow + other.delta_pow)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, QScalar)):
            return self.__mul__(other)
        if isinstance(other, AlgebraElement):
            return LocalElement(other) * self
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self * (Fraction(1) / other if not isinstance(other, GaussianRational)
                           else GaussianRational(1) / other)
        return self * invert(LocalElement.lift(other))

    def __rtruediv__(self, other):
        return LocalElement.lift(other) * invert(self)

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        out = LOC_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def star(self) -> "LocalElement":
        # denominators and Delta are hermitian and central
        return LocalElement(self.num.star(), self.den, self.delta_pow, reduce=False)

    def is_hermitian(self) -> bool:
        return loc_eq(self, self.star())

    def is_central(self) -> bool:
        from .algebra import is_central
        return is_central(self.num)

    def to_algebra(self) -> AlgebraElement:
        if self.delta_pow or not self.den.is_trivial:
            raise ValueError(f"{self} is not an element of the unlocalized algebra")
        return self.num

    def with_delta(self, k: int) -> "LocalElement":
        return LocalElement(self.num, self.den, self.delta_pow + k, reduce=False)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (LocalElement, AlgebraElement, int, Fraction,
                              GaussianRational, QScalar)):
            return loc_eq(self, LocalElement.lift(other))
        return NotImplemented

    # display / io ---------------------------------------------------------
    def __repr__(self):
        return f"LocalElement({self})"

    def __str__(self):
        s = str(self.num)
        parts = []
        for name, p in zip(("|Z|^2", "|W|^2", "(1-T^2)", "(1+T^2)"), self.den):
            if p:
                parts.append(name if p == 1 else f"{name}^{p}")
        if parts:
            s = f"({s}) / ({' '.join(parts)})"
        if self.delta_pow:
            if not parts and len(self.num._t) > 1:
                s = f"({s})"
            s = f"Delta^{self.delta_pow} * {s}" if self.delta_pow != 1 else f"Delta * {s}"
        return s

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json(),
                "delta_pow": self.delta_pow}

    @classmethod
    def from_json(cls, data) -> "LocalElement":
        d = data["den"]
        return cls(AlgebraElement.from_json(data["num"]),
                   CentralDenominator(d["a"], d["b"], d["c"], d["e"]),
                   data.get("delta_pow", 0))

    def classical_eval(self, p: ChartPoint, q_value: complex = 1.0,
                       delta_value: complex = None) -> complex:
        """Numeric chart value; ``Delta`` needs an explicit ``delta_value``."""
        val = classical_eval(self.num, p, q_value)
        s = math.cos(p.phi) ** 2
        t = math.sin(p.psi)
        c2 = 1 - t * t
        den = ((s * c2) ** self.den.a * ((1 - s) * c2) ** self.den.b
               * c2 ** self.den.c * (1 + t * t) ** self.den.e)
        val /= den
        if self.delta_pow:
            if delta_value is None:
                raise ValueError("formal Delta needs a numeric delta_value")
            val *= delta_value ** self.delta_pow
        return val


LOC_ZERO = LocalElement()
LOC_ONE = LocalElement(ONE_EL)
DELTA = LocalElement(ONE_EL, delta_pow=1)


def loc_add(x: LocalElement, y: LocalElement) -> LocalElement:
    return x + y


def loc_mul(x: LocalElement, y: LocalElement) -> LocalElement:
    return x * y


def loc_eq(x: LocalElement, y: LocalElement) -> bool:
    if x.is_zero or y.is_zero:
        return x.is_zero and y.is_zero
    if x.delta_pow != y.delta_pow:
        return False
    den = x.den.lcm(y.den)
    return _apply_den(x.num, den.minus(x.den)) == _apply_den(y.num, den.minus(y.den))


def unit_factorization(x: LocalElement):
    """Write ``x`` as ``c * q^n * prod f_i^{p_i} * Delta^k`` or raise ``NotAUnit``.

    Returns ``(scalar, exponents, delta_pow)`` with integer exponents (possibly
    negative) over |Z|^2, |W|^2, 1-T^2, 1+T^2.
    """
    if x.is_zero:
        raise NotAUnit("zero is not a unit")
    num = x.num
    up = [0, 0, 0, 0]
    for i, f in enumerate(FACTORS):
        while True:
            y = _divide(num, f)
            if y is None:
                break
            num = y
            up[i] += 1
    sc = num.scalar_part()
    if sc is None or len(sc._terms) != 1:
        raise NotAUnit(f"{x} is not a unit of the localized center")
    exps = tuple(u - d for u, d in zip(up, x.den))
    return sc, exps, x.delta_pow


def from_unit_factorization(scalar: QScalar, exps, delta_pow: int = 0) -> LocalElement:
    num = AlgebraElement.scalar(scalar)
    pos = CentralDenominator(*(max(p, 0) for p in exps))
    neg = CentralDenominator(*(max(-p, 0) for p in exps))
    return LocalElement(_apply_den(num, pos), neg, delta_pow, reduce=False)


def invert(x: LocalElement) -> LocalElement:
    """Inverse of a monomial unit ``c q^n * prod factors^p * Delta^k``."""
    x = LocalElement.lift(x)
    sc, exps, k = unit_factorization(x)
    (n, c), = sc._terms.items()
    inv = QScalar._raw({-n: GaussianRational(1) / c})
    return from_unit_factorization(inv, tuple(-p for p in exps), -k)
