"""Hermitian derivations of the deformed sphere and the real Lie algebra they span.

Basis derivations are ``D_i(n) = T^n (1-T^2) dt_i`` for i = 1, 2,
``D_3(n) = T^n dt_3`` and ``D_4 = dt_4``, where the ``dt_i`` act on the
generators by

    dt_1 Z = iZ,         dt_2 W = iW,
    dt_3 Z = Z|W|^2,     dt_3 W = -W|Z|^2,
    dt_4 Z = ZT,         dt_4 W = WT,        dt_4 T = T^2 - 1,

extended to adjoints hermitianly and to products by the Leibniz rule.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, NamedTuple, Optional

from .algebra import ONE_MINUS_T2, AlgebraElement, T
from .localization import FACTORS, LocalElement
from .scalars import GaussianRational

__all__ = [
    "DerivationBasis", "Derivation", "DeltaRule", "apply", "apply_local", "bracket",
    "partial", "parse_derivation",
]


class DerivationBasis(NamedTuple):
    kind: int  # 1, 2, 3 or 4
    n: int = 0

    def __str__(self):
        if self.kind == 4:
            return "d4"
        return f"d{self.kind}" if self.n == 0 else f"d{self.kind}@{self.n}"


def _basis(kind: int, n: int = 0) -> DerivationBasis:
    if kind not in (1, 2, 3, 4) or n < 0 or (kind == 4 and n):
        raise ValueError(f"no basis derivation D{kind}({n})")
    return DerivationBasis(kind, n)


class Derivation:
    """Finite rational combination of basis derivations."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[DerivationBasis, Fraction]] = None):
        self.terms = {_basis(*b): Fraction(c) for b, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, kind: int, n: int = 0) -> "Derivation":
        return cls({_basis(kind, n): 1})

    def __add__(self, other: "Derivation") -> "Derivation":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, 0) + c
        return Derivation(out)

    def __neg__(self):
        return Derivation({b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return Derivation({b: c * v for b, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def d4_coefficient(self) -> Fraction:
        return self.terms.get(DerivationBasis(4, 0), Fraction(0))

    def __repr__(self):
        return f"Derivation({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for b, c in sorted(self.terms.items()):
            parts.append(str(b) if c == 1 else f"{c}*{b}")
        return " + ".join(parts)


def partial(i: int, n: int = 0) -> Derivation:
    """``D_i(n)``; ``partial(4)`` is the fourth generator."""
    return Derivation.basis(i, n)


@lru_cache(maxsize=None)
def _prefactor(kind: int, n: int) -> AlgebraElement:
    if kind in (1, 2):
        return T ** n * ONE_MINUS_T2
    return T ** n


_I = GaussianRational(0, 1)


def _apply_basis(b: DerivationBasis, a: AlgebraElement) -> AlgebraElement:
    t = a._t
    if b.kind == 1:
        raw = {key: c * (_I * (key[0] - key[1])) for key, c in t.items() if key[0] != key[1]}
        return AlgebraElement._raw(raw) * _prefactor(1, b.n) if raw else AlgebraElement.zero()
    if b.kind == 2:
        raw = {key: c * (_I * (key[2] - key[3])) for key, c in t.items() if key[2] != key[3]}
        return AlgebraElement._raw(raw) * _prefactor(2, b.n) if raw else AlgebraElement.zero()
    if b.kind == 3:
        # each Z or Z* contributes |W|^2, each W or W* contributes -|Z|^2 (central)
        plus, minus = {}, {}
        for (j, k, l, m, e, n), c in t.items():
            if j + k:
                plus[(j, k, l + 1, m + 1, e, n)] = c * (j + k)
            if l + m:
                minus[(j + 1, k + 1, l, m, e, n)] = c * (l + m)
        out = AlgebraElement._raw(plus) - AlgebraElement._raw(minus)
        return out * _prefactor(3, b.n) if b.n else out
    # kind 4: each Z, Z*, W, W* contributes T; a trailing T contributes T^2 - 1
    deg = {}
    tail = AlgebraElement.zero()
    for (j, k, l, m, e, n), c in t.items():
        if j + k + l + m:
            deg[(j, k, l, m, e, n)] = c * (j + k + l + m)
    out = AlgebraElement._raw(deg) * T if deg else AlgebraElement.zero()
    tail = {}
    for (j, k, l, m, e, n), c in t.items():
        if e:
            # T^2 - 1 = -|Z|^2 - |W|^2
            for key in ((j + 1, k + 1, l, m, 0, n), (j, k, l + 1, m + 1, 0, n)):
                v = tail.get(key)
                tail[key] = -c if v is None else v - c
    if tail:
        out = out + AlgebraElement._raw({k: v for k, v in tail.items() if v})
    return out


def apply(d: Derivation, a: AlgebraElement) -> AlgebraElement:
    out = AlgebraElement.zero()
    for b, c in d.terms.items():
        out = out + _apply_basis(b, a).scale(c)
    return out


@dataclass(frozen=True)
class DeltaRule:
    """Derivative of the formal unit: ``D_4 Delta = 2 alpha Delta``; ``D_i(n)`` kill it."""

    alpha: LocalElement


def _log_derivative(d: Derivation, den) -> LocalElement:
    """``d(s)/s`` for the central denominator monomial ``s``."""
    out = LocalElement()
    for f, p in zip(FACTORS, den):
        if p:
            df = apply(d, f.element)
            if df.is_zero:
                continue
            unit = [0, 0, 0, 0]
            unit[FACTORS.index(f)] = 1
            out = out + LocalElement(df, unit) * p
    return out


def apply_local(d: Derivation, x, rule: Optional[DeltaRule] = None) -> LocalElement:
    """Extend ``d`` to fractions by the quotient rule and to ``Delta`` by ``rule``."""
    x = LocalElement.lift(x)
    if x.is_zero:
        return x
    num = LocalElement(apply(d, x.num), x.den, 0)
    if not x.den.is_trivial:
        base = LocalElement(x.num, x.den, 0, reduce=False)
        num = num - base * _log_derivative(d, x.den)
    out = num.with_delta(x.delta_pow)
    if x.delta_pow and d.d4_coefficient:
        if rule is None:
            raise ValueError("differentiating Delta requires a DeltaRule")
        extra = rule.alpha * LocalElement(x.num, x.den, x.delta_pow, reduce=False)
        out = out + extra * (2 * x.delta_pow * d.d4_coefficient)
    return out


def _bracket_basis(b1: DerivationBasis, b2: DerivationBasis) -> Derivation:
    if b1.kind == 4 and b2.kind != 4:
        i, n = b2.kind, b2.n
        out = Derivation({DerivationBasis(i, n + 1): n + 2})
        if n:
            out = out - Derivation({DerivationBasis(i, n - 1): n})
        return out
    if b2.kind == 4 and b1.kind != 4:
        return -_bracket_basis(b2, b1)
    return Derivation()


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    out = Derivation()
    for b1, c1 in d1.terms.items():
        for b2, c2 in d2.terms.items():
            br = _bracket_basis(b1, b2)
            if br.terms:
                out = out + (c1 * c2) * br
    return out


_NAME = re.compile(r"^d([1-4])(?:@(\d+))?$")


def parse_derivation(name: str) -> Derivation:
    """CLI names: d1, d2, d3, d4, d1@n, d2@n, d3@n."""
    m = _NAME.match(name.strip())
    if not m or (m.group(1) == "4" and m.group(2)):
        raise ValueError(f"unknown derivation {name!r}")
    return partial(int(m.group(1)), int(m.group(2) or 0))
