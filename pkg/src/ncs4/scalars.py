"""Exact coefficient arithmetic.

``GaussianRational`` is a complex number with rational real and imaginary
parts.  ``QScalar`` is a finite Laurent sum ``sum c_n q**n`` over Gaussian
rationals, where ``q`` is a formal invertible symbol of modulus one
(``q**n == 1`` only for ``n == 0``).
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterator, Tuple, Union

__all__ = ["GaussianRational", "QScalar", "ZERO", "ONE", "I_UNIT", "as_gaussian"]

Number = Union[int, Fraction, "GaussianRational"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """``re + i*im`` with ``re, im`` arbitrary-precision rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = as_gaussian(other)
            except TypeError:
                return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = as_gaussian(other)
            except TypeError:
                return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gaussian(other) - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = as_gaussian(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, b)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational._raw(other.re / n, -other.im / n)

    def __rtruediv__(self, other):
        return as_gaussian(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (ONE / self) ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    # comparisons ----------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"({self.re}{sign}{_imag_str(abs(self.im))})"


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    return f"{v}i"


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction, Rational, str)):
        return GaussianRational._raw(_frac(x), Fraction(0))
    raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I_UNIT = GaussianRational(0, 1)


class QScalar:
    """Finite Laurent polynomial in the formal deformation phase ``q``.

    Immutable; ``terms`` never stores zero coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {0: as_gaussian(terms)}
        clean: Dict[int, GaussianRational] = {}
        for n, c in terms.items():
            c = as_gaussian(c)
            if c:
                clean[int(n)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, GaussianRational]) -> "QScalar":
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def q(cls, n: int = 1) -> "QScalar":
        return cls._raw({n: ONE})

    @property
    def terms(self) -> Dict[int, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, GaussianRational]]:
        return iter(sorted(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def _coerce(self, other) -> "QScalar":
        if isinstance(other, QScalar):
            return other
        return QScalar(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for n, c in other._terms.items():
            v = out.get(n)
            v = c if v is None else v + c
            if v:
                out[n] = v
            else:
                out.pop(n, None)
        return QScalar._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw({n: -c for n, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[int, GaussianRational] = {}
        for n1, c1 in self._terms.items():
            for n2, c2 in other._terms.items():
                n = n1 + n2
                v = out.get(n)
                p = c1 * c2
                out[n] = p if v is None else v + p
        return QScalar._raw({n: c for n, c in out.items() if c})

    __rmul__ = __mul__

    def shift(self, k: int) -> "QScalar":
        """Multiply by ``q**k``."""
        if not k:
            return self
        return QScalar._raw({n + k: c for n, c in self._terms.items()})

    def conjugate(self) -> "QScalar":
        return QScalar._raw({-n: c.conjugate() for n, c in self._terms.items()})

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def constant(self) -> GaussianRational:
        """The ``q**0`` coefficient."""
        return self._terms.get(0, ZERO)

    def evaluate(self, q_value: complex) -> complex:
        return sum(complex(c) * q_value ** n for n, c in self._terms.items())

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self._terms == other._terms
        try:
            return self._terms == QScalar(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"QScalar({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for n, c in sorted(self._terms.items()):
            if n == 0:
                parts.append(str(c))
                continue
            qs = "q" if n == 1 else f"q^{n}"
            if c == 1:
                parts.append(qs)
            elif c == -1:
                parts.append(f"-{qs}")
            else:
                parts.append(f"{c}*{qs}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [
            [n, c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]
            for n, c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data) -> "QScalar":
        return cls({
            int(n): GaussianRational(Fraction(rn, rd), Fraction(inn, idd))
            for n, rn, rd, inn, idd in data
        })
