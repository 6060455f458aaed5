"""Normal-form arithmetic in the theta-deformed four-sphere algebra.

Elements are finite sums ``sum_I a_I e^I`` over the monomial basis
``e^I = Z^j (Z*)^k W^l (W*)^m T^eps`` with ``eps in {0, 1}``, subject to

    W Z = q Z W,   W* Z = qbar Z W*,   Z Z* + W W* + T^2 = 1,
    T* = T,  and T, Z Z*, W W* central.

Coefficients are ``QScalar`` values.  Internally an element is stored as a
flat dict keyed by ``(j, k, l, m, eps, n)`` with ``n`` the power of ``q``.
"""
from __future__ import annotations

import cmath
import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, NamedTuple, Tuple

from ._kernel import add_terms, divide_terms, mul_terms
from .scalars import GaussianRational, QScalar, as_gaussian

__all__ = [
    "MultiIndex", "AlgebraElement", "CentralFactor", "ChartPoint",
    "NotCentral", "NotDivisible",
    "basis_product", "mul", "star", "commutator", "is_central",
    "center_decompose", "from_center", "try_divide_central", "classical_eval",
    "random_element",
    "ONE_EL", "Z", "ZS", "W", "WS", "T", "X1", "X2", "X3", "X4", "X5",
    "ABS_Z2", "ABS_W2", "ONE_MINUS_T2", "ONE_PLUS_T2",
]


class NotCentral(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


class MultiIndex(NamedTuple):
    j: int
    k: int
    l: int
    m: int
    eps: int = 0

    def __add__(self, other):  # component-wise, unlike tuple concatenation
        return MultiIndex(*(a + b for a, b in zip(self, other)))

    @property
    def degree(self) -> int:
        return self.j + self.k + self.l + self.m + self.eps


def _check_index(idx) -> MultiIndex:
    idx = MultiIndex(*idx)
    if min(idx[:4]) < 0 or idx.eps not in (0, 1):
        raise ValueError(f"invalid multi-index {tuple(idx)}")
    return idx


class AlgebraElement:
    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        """Build from a mapping ``MultiIndex -> coefficient``.

        Coefficients may be ints, Fractions, Gaussian rationals or QScalars.
        """
        flat: Dict[tuple, GaussianRational] = {}
        if terms:
            for idx, coeff in terms.items():
                idx = _check_index(idx)
                qs = coeff if isinstance(coeff, QScalar) else QScalar(coeff)
                for n, c in qs._terms.items():
                    key = (*idx, n)
                    v = flat.get(key)
                    flat[key] = c if v is None else v + c
        self._t = {k: v for k, v in flat.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, flat: Dict[tuple, GaussianRational]) -> "AlgebraElement":
        obj = object.__new__(cls)
        obj._t = flat
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls._raw({})

    @classmethod
    def scalar(cls, c) -> "AlgebraElement":
        qs = c if isinstance(c, QScalar) else QScalar(c)
        return cls._raw({(0, 0, 0, 0, 0, n): v for n, v in qs._terms.items()})

    @classmethod
    def basis(cls, idx, coeff=1) -> "AlgebraElement":
        return cls({_check_index(idx): coeff})

    # views ----------------------------------------------------------------
    @property
    def terms(self) -> Dict[MultiIndex, QScalar]:
        grouped: Dict[MultiIndex, Dict[int, GaussianRational]] = {}
        for (j, k, l, m, e, n), c in self._t.items():
            grouped.setdefault(MultiIndex(j, k, l, m, e), {})[n] = c
        return {idx: QScalar._raw(d) for idx, d in grouped.items()}

    def coefficient(self, idx) -> QScalar:
        idx = tuple(_check_index(idx))
        return QScalar._raw({key[5]: c for key, c in self._t.items() if key[:5] == idx})

    def support(self):
        return sorted({MultiIndex(*key[:5]) for key in self._t})

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    @property
    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int:
        return max((sum(key[:5]) for key in self._t), default=-1)

    def scalar_part(self):
        """Return the coefficient if the element is a scalar multiple of 1, else None."""
        if any(key[:5] != (0, 0, 0, 0, 0) for key in self._t):
            return None
        return QScalar._raw({key[5]: c for key, c in self._t.items()})

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return other
        return AlgebraElement.scalar(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraElement._raw(add_terms(self._t, other._t, 1))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraElement._raw(add_terms(self._t, other._t, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return AlgebraElement._raw({k: -v for k, v in self._t.items()})

    def scale(self, c) -> "AlgebraElement":
        """Multiply by a scalar (central, so the side does not matter)."""
        if isinstance(c, QScalar):
            if c.is_constant():
                c = c.constant()
            else:
                return self * AlgebraElement.scalar(c)
        c = as_gaussian(c)
        if not c:
            return AlgebraElement.zero()
        if c == 1:
            return self
        return AlgebraElement._raw({k: v * c for k, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement._raw(mul_terms(self._t, other._t))
        if isinstance(other, (int, Fraction, GaussianRational, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers need the localized algebra")
        out = ONE_EL
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def star(self) -> "AlgebraElement":
        out = {}
        for (j, k, l, m, e, n), c in self._t.items():
            out[(k, j, m, l, e, -n + (j - k) * (l - m))] = c.conjugate()
        return AlgebraElement._raw(out)

    def is_hermitian(self) -> bool:
        return self == self.star()

    def shift(self, dj=0, dk=0, dl=0, dm=0) -> "AlgebraElement":
        """Multiply by ``(|Z|^2)^p (|W|^2)^r`` encoded as an index shift (dj=dk, dl=dm)."""
        return AlgebraElement._raw({
            (j + dj, k + dk, l + dl, m + dm, e, n): c
            for (j, k, l, m, e, n), c in self._t.items()
        })

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self._t == other._t
        try:
            return self._t == AlgebraElement.scalar(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # display --------------------------------------------------------------
    def __repr__(self):
        return f"AlgebraElement({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for idx, qs in sorted(self.terms.items()):
            mono = _monomial_str(idx)
            coeff = str(qs)
            if " " in coeff:
                coeff = f"({coeff})"
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            elif coeff == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # serialization --------------------------------------------------------
    def to_json(self):
        return [
            {"j": idx.j, "k": idx.k, "l": idx.l, "m": idx.m, "eps": idx.eps,
             "coeff": qs.to_json()}
            for idx, qs in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data) -> "AlgebraElement":
        return cls({
            MultiIndex(r["j"], r["k"], r["l"], r["m"], r["eps"]): QScalar.from_json(r["coeff"])
            for r in data
        })


def _monomial_str(idx: MultiIndex) -> str:
    out = []
    for name, p in zip(("Z", "Zs", "W", "Ws", "T"), idx):
        if p == 1:
            out.append(name)
        elif p > 1:
            out.append(f"{name}^{p}")
    return " ".join(out)


ONE_EL = AlgebraElement.scalar(1)
Z = AlgebraElement.basis((1, 0, 0, 0, 0))
ZS = AlgebraElement.basis((0, 1, 0, 0, 0))
W = AlgebraElement.basis((0, 0, 1, 0, 0))
WS = AlgebraElement.basis((0, 0, 0, 1, 0))
T = AlgebraElement.basis((0, 0, 0, 0, 1))
ABS_Z2 = AlgebraElement.basis((1, 1, 0, 0, 0))
ABS_W2 = AlgebraElement.basis((0, 0, 1, 1, 0))
ONE_MINUS_T2 = ABS_Z2 + ABS_W2
ONE_PLUS_T2 = 2 - ABS_Z2 - ABS_W2

_HALF = Fraction(1, 2)
_HALF_OVER_I = GaussianRational(0, Fraction(-1, 2))  # 1/(2i)
X1 = (Z + ZS).scale(_HALF)
X2 = (Z - ZS).scale(_HALF_OVER_I)
X3 = (W + WS).scale(_HALF)
X4 = (W - WS).scale(_HALF_OVER_I)
X5 = T


def basis_product(i1, i2) -> AlgebraElement:
    """Product ``e^{I1} e^{I2}`` in normal form."""
    return AlgebraElement.basis(i1) * AlgebraElement.basis(i2)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def star(a: AlgebraElement) -> AlgebraElement:
    return a.star()


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


def is_central(a: AlgebraElement) -> bool:
    # Valid for generic q: q^n = 1 only when n = 0.
    return all(j == k and l == m for (j, k, l, m, _e, _n) in a._t)


def center_decompose(a: AlgebraElement) -> Dict[Tuple[int, int, int], QScalar]:
    """Coefficients ``c[(i1, i2, eps)]`` with ``a = sum c (|Z|^2)^i1 (|W|^2)^i2 T^eps``."""
    if not is_central(a):
        raise NotCentral(f"{a} is not central")
    grouped: Dict[Tuple[int, int, int], Dict[int, GaussianRational]] = {}
    for (j, _k, l, _m, e, n), c in a._t.items():
        grouped.setdefault((j, l, e), {})[n] = c
    return {key: QScalar._raw(d) for key, d in grouped.items()}


def from_center(coeffs) -> AlgebraElement:
    """Inverse of ``center_decompose``."""
    return AlgebraElement({MultiIndex(i1, i1, i2, i2, e): c for (i1, i2, e), c in coeffs.items()})


class CentralFactor(enum.Enum):
    """The central regular elements that get inverted by localization."""

    ABS_Z2 = "|Z|^2"
    ABS_W2 = "|W|^2"
    ONE_MINUS_T2 = "1-T^2"
    ONE_PLUS_T2 = "1+T^2"

    @property
    def element(self) -> AlgebraElement:
        return _FACTOR_ELEMENTS[self]


_FACTOR_ELEMENTS = {
    CentralFactor.ABS_Z2: ABS_Z2,
    CentralFactor.ABS_W2: ABS_W2,
    CentralFactor.ONE_MINUS_T2: ONE_MINUS_T2,
    CentralFactor.ONE_PLUS_T2: ONE_PLUS_T2,
}


def _divide(a: AlgebraElement, d: CentralFactor):
    """Quotient ``x`` with ``d x = a``, or None.  No multiply-back check."""
    t = a._t
    if d is CentralFactor.ABS_Z2:
        if any(key[0] < 1 or key[1] < 1 for key in t):
            return None
        return AlgebraElement._raw({(j - 1, k - 1, l, m, e, n): c for (j, k, l, m, e, n), c in t.items()})
    if d is CentralFactor.ABS_W2:
        if any(key[2] < 1 or key[3] < 1 for key in t):
            return None
        return AlgebraElement._raw({(j, k, l - 1, m - 1, e, n): c for (j, k, l, m, e, n), c in t.items()})
    out = divide_terms(t, d is CentralFactor.ONE_PLUS_T2)
    return None if out is None else AlgebraElement._raw(out)


def try_divide_central(a: AlgebraElement, d: CentralFactor) -> AlgebraElement:
    """Return ``x`` with ``d x = a``; raise ``NotDivisible`` otherwise."""
    d = CentralFactor(d)
    x = _divide(a, d)
    if x is None or d.element * x != a:
        raise NotDivisible(f"{a} is not divisible by {d.value}")
    return x


@dataclass(frozen=True)
class ChartPoint:
    """Point of the chart with open ranges 0<xi1,xi2<2pi, 0<phi<pi/2, -pi/2<psi<pi/2."""

    xi1: float
    xi2: float
    phi: float
    psi: float

    def __post_init__(self):
        ok = (0 < self.xi1 < 2 * math.pi and 0 < self.xi2 < 2 * math.pi
              and 0 < self.phi < math.pi / 2 and -math.pi / 2 < self.psi < math.pi / 2)
        if not ok:
            raise ValueError(f"{self} lies outside the chart")

    @classmethod
    def random(cls, rng: random.Random, margin: float = 0.05) -> "ChartPoint":
        return cls(
            rng.uniform(margin, 2 * math.pi - margin),
            rng.uniform(margin, 2 * math.pi - margin),
            rng.uniform(margin, math.pi / 2 - margin),
            rng.uniform(-math.pi / 2 + margin, math.pi / 2 - margin),
        )


def classical_eval(a: AlgebraElement, p: ChartPoint, q_value: complex = 1.0) -> complex:
    """Evaluate the term-wise chart image of ``a`` with ``q`` specialized to ``q_value``."""
    zr = math.cos(p.phi) * math.cos(p.psi)
    wr = math.sin(p.phi) * math.cos(p.psi)
    t = math.sin(p.psi)
    total = 0j
    for (j, k, l, m, e, n), c in a._t.items():
        val = (cmath.exp(1j * (j - k) * p.xi1) * zr ** (j + k)
               * cmath.exp(1j * (l - m) * p.xi2) * wr ** (l + m) * t ** e)
        total += complex(c) * q_value ** n * val
    return total


def random_element(rng: random.Random, max_degree: int = 4, n_terms: int = 4,
                   q_span: int = 1, complex_coeffs: bool = True) -> AlgebraElement:
    """Random element with small integer-ish coefficients, for property checks."""
    terms = {}
    for _ in range(n_terms):
        deg = rng.randint(0, max_degree)
        idx = [0, 0, 0, 0, 0]
        eps = rng.randint(0, 1) if deg else 0
        idx[4] = eps
        for _ in range(deg - eps):
            idx[rng.randrange(4)] += 1
        n = rng.randint(-q_span, q_span)
        re = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        im = Fraction(rng.randint(-2, 2), rng.randint(1, 2)) if complex_coeffs else 0
        key = MultiIndex(*idx)
        terms[key] = terms.get(key, QScalar()) + QScalar({n: GaussianRational(re, im)})
    return AlgebraElement(terms)


def iter_basis(max_degree: int) -> Iterable[MultiIndex]:
    """All multi-indices of total degree at most ``max_degree``."""
    for total in range(max_degree + 1):
        for eps in (0, 1):
            rest = total - eps
            if rest < 0:
                continue
            for j in range(rest + 1):
                for k in range(rest - j + 1):
                    for l in range(rest - j - k + 1):
                        yield MultiIndex(j, k, l, rest - j - k - l, eps)
