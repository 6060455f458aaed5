"""The free module spanned by E_1..E_4, its ambient embedding, metrics and the projector."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .algebra import (
    ABS_W2, ABS_Z2, ONE_EL, ONE_MINUS_T2, X1, X2, X3, X4, X5, AlgebraElement, T,
)
from .derivations import Derivation, DeltaRule, apply_local, partial
from .localization import (
    DELTA, LOC_ONE, LOC_ZERO, LocalElement, NotAUnit, invert, unit_factorization,
)

__all__ = [
    "ModuleVec", "Ambient5", "Perturbation", "Metric", "Projector",
    "NotInImage", "UnsupportedDelta",
    "E", "E_AMBIENT", "embed", "ambient_h", "metric_eval", "projector_apply",
    "ambient_to_basis", "phi_map", "PROJECTOR", "ambient_basis", "projector_expansion",
    "BASE_METRIC",
]


class NotInImage(ValueError):
    pass


class UnsupportedDelta(ValueError):
    pass


def _lift_all(xs, n):
    xs = [LocalElement.lift(x) for x in xs]
    if len(xs) != n:
        raise ValueError(f"expected {n} components, got {len(xs)}")
    return tuple(xs)


class _Vec:
    """Shared componentwise arithmetic; right multiplication by scalars."""

    __slots__ = ("comps",)
    __hash__ = None
    size = 0

    def __init__(self, comps: Sequence = None):
        if comps is None:
            comps = [LOC_ZERO] * self.size
        self.comps = _lift_all(comps, self.size)

    def __add__(self, other):
        return type(self)([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return type(self)([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return type(self)([-a for a in self.comps])

    def __mul__(self, f):
        """Right action ``U f``."""
        if isinstance(f, (int, Fraction)):
            return type(self)([a * f for a in self.comps])
        f = LocalElement.lift(f)
        return type(self)([a * f for a in self.comps])

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self * c
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return all(a == b for a, b in zip(self.comps, other.comps))

    def __getitem__(self, i):
        return self.comps[i]

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.comps)

    def to_json(self):
        return [a.to_json() for a in self.comps]

    @classmethod
    def from_json(cls, data):
        return cls([LocalElement.from_json(x) for x in data])


class ModuleVec(_Vec):
    """``sum_a E_a U^a``; ``comps[a-1]`` is the right coefficient of ``E_a``."""

    size = 4

    def __repr__(self):
        return "ModuleVec(" + ", ".join(f"E{a + 1}: {c}" for a, c in enumerate(self.comps) if c) + ")"


class Ambient5(_Vec):
    """Element of the free module of rank five in its canonical basis."""

    size = 5

    def __repr__(self):
        return "Ambient5(" + ", ".join(str(c) for c in self.comps) + ")"


def E(a: int) -> ModuleVec:
    """Basis vector ``E_a`` (1-based)."""
    comps = [LOC_ZERO] * 4
    comps[a - 1] = LOC_ONE
    return ModuleVec(comps)


def ambient_basis(i: int) -> Ambient5:
    comps = [LOC_ZERO] * 5
    comps[i - 1] = LOC_ONE
    return Ambient5(comps)


E_AMBIENT = (
    Ambient5([-X2 * ONE_MINUS_T2, X1 * ONE_MINUS_T2, 0, 0, 0]),
    Ambient5([0, 0, -X4 * ONE_MINUS_T2, X3 * ONE_MINUS_T2, 0]),
    Ambient5([X1 * ABS_W2, X2 * ABS_W2, -X3 * ABS_Z2, -X4 * ABS_Z2, 0]),
    Ambient5([X1 * T, X2 * T, X3 * T, X4 * T, T * T - 1]),
)

# Unperturbed metric h_ab = sum_i (E_a^i)^* E_b^i, diagonal in the E-basis.
BASE_METRIC = (
    LocalElement(ABS_Z2 * ONE_MINUS_T2 ** 2),
    LocalElement(ABS_W2 * ONE_MINUS_T2 ** 2),
    LocalElement(ABS_Z2 * ABS_W2 * ONE_MINUS_T2),
    LocalElement(ONE_MINUS_T2),
)


def embed(u: ModuleVec) -> Ambient5:
    out = Ambient5()
    for a, coeff in enumerate(u.comps):
        if not coeff.is_zero:
            out = out + E_AMBIENT[a] * coeff
    return out


def ambient_h(u: Ambient5, v: Ambient5) -> LocalElement:
    out = LOC_ZERO
    for x, y in zip(u.comps, v.comps):
        if not x.is_zero and not y.is_zero:
            out = out + x.star() * y
    return out


@dataclass(frozen=True)
class Perturbation:
    """Conformal factor of the metric together with ``alpha = alpha_4``.

    Explicit mode: ``delta = c (1-T^2)^p (1+T^2)^r`` with ``c > 0`` rational.
    Formal mode: ``delta = Delta`` with ``D_4 Delta = 2 alpha Delta``.
    """

    value: LocalElement
    alpha: LocalElement
    formal: bool = False
    label: str = "1"
    exponents: tuple = field(default=(Fraction(1), 0, 0))

    @classmethod
    def explicit(cls, c=1, p: int = 0, r: int = 0) -> "Perturbation":
        c = Fraction(c)
        if c <= 0:
            raise UnsupportedDelta("the constant factor of delta must be positive")
        value = LocalElement(c) * _pow_loc(LocalElement(ONE_MINUS_T2), p) \
            * _pow_loc(LocalElement(2 - ABS_Z2 - ABS_W2), r)
        # alpha = -1/2 (1-T^2) delta'/delta = p T - r T (1-T^2)/(1+T^2)
        alpha = LocalElement(T) * p - LocalElement(T * ONE_MINUS_T2, (0, 0, 0, 1)) * r
        label = _label(c, p, r)
        pert = cls(value, alpha, False, label, (c, p, r))
        if apply_local(partial(4), value) != alpha * value * 2:
            raise AssertionError(f"d4 delta != 2 alpha delta for {label}")
        return pert

    @classmethod
    def one_plus_t2(cls, n: int) -> "Perturbation":
        return cls.explicit(1, 0, n)

    @classmethod
    def from_element(cls, x: LocalElement) -> "Perturbation":
        """Recognize ``x`` as a member of the explicit family."""
        try:
            sc, exps, k = unit_factorization(LocalElement.lift(x))
        except NotAUnit as exc:
            raise UnsupportedDelta(f"{x} is not a unit of the localized center") from exc
        (n, c), = sc._terms.items()
        if k or n or exps[0] or exps[1] or not c.is_real() or c.re <= 0:
            raise UnsupportedDelta(
                f"{x} is not of the form c (1-T^2)^p (1+T^2)^r with c > 0")
        return cls.explicit(c.re, exps[2], exps[3])

    @classmethod
    def formal_unit(cls, alpha, label: Optional[str] = None) -> "Perturbation":
        alpha = LocalElement.lift(alpha)
        if not alpha.is_central() or not alpha.is_hermitian():
            raise UnsupportedDelta("alpha must be central and hermitian")
        return cls(DELTA, alpha, True, label or f"Delta[alpha={alpha}]", (None, None, None))

    @property
    def rule(self) -> Optional[DeltaRule]:
        return DeltaRule(self.alpha) if self.formal else None

    def derive(self, d: Derivation, x) -> LocalElement:
        return apply_local(d, x, self.rule)

    def alpha_prime(self) -> LocalElement:
        """Formal T-derivative of alpha, using ``D_4 f(T) = f'(T)(T^2 - 1)``."""
        return -apply_local(partial(4), self.alpha) / LocalElement(ONE_MINUS_T2)

    def polynomial(self) -> AlgebraElement:
        """delta as an element of the unlocalized algebra, when it is one."""
        if self.formal:
            raise UnsupportedDelta("formal Delta is not a polynomial")
        return self.value.to_algebra()

    def __str__(self):
        return self.label


def _pow_loc(x: LocalElement, p: int) -> LocalElement:
    return x ** p if p >= 0 else invert(x) ** (-p)


def _label(c, p, r) -> str:
    parts = []
    if c != 1:
        parts.append(str(c))
    if p:
        parts.append("(1-T^2)" + (f"^{p}" if p != 1 else ""))
    if r:
        parts.append("(1+T^2)" + (f"^{r}" if r != 1 else ""))
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class Metric:
    """``h^delta = delta h`` with ``h`` diagonal in the E-basis."""

    delta: Perturbation = field(default_factory=lambda: Perturbation.explicit())

    @property
    def base_diag(self):
        return BASE_METRIC

    def entry(self, a: int) -> LocalElement:
        return self.delta.value * BASE_METRIC[a - 1]

    @property
    def diag(self) -> List[LocalElement]:
        return [self.entry(a) for a in range(1, 5)]

    def inverse_entry(self, a: int) -> LocalElement:
        return invert(self.entry(a))

    def __call__(self, u: ModuleVec, v: ModuleVec) -> LocalElement:
        return metric_eval(self, u, v)


def metric_eval(h: Metric, u: ModuleVec, v: ModuleVec) -> LocalElement:
    out = LOC_ZERO
    for a in range(4):
        x, y = u.comps[a], v.comps[a]
        if not x.is_zero and not y.is_zero:
            out = out + x.star() * h.entry(a + 1) * y
    return out


class Projector:
    """Matrix ``delta^{ij} - X^i X^j`` acting on the left of ambient components."""

    def __init__(self):
        xs = (X1, X2, X3, X4, X5)
        self.matrix = tuple(
            tuple(LocalElement((ONE_EL if i == j else AlgebraElement.zero()) - xs[i] * xs[j])
                  for j in range(5))
            for i in range(5)
        )

    def __call__(self, u: Ambient5) -> Ambient5:
        return projector_apply(self, u)

    def squared_equals_self(self) -> bool:
        m = self.matrix
        for i in range(5):
            for j in range(5):
                s = LOC_ZERO
                for k in range(5):
                    s = s + m[i][k] * m[k][j]
                if s != m[i][j]:
                    return False
        return True


PROJECTOR = Projector()


def projector_apply(p: Projector, u: Ambient5) -> Ambient5:
    out = []
    for i in range(5):
        s = LOC_ZERO
        for j in range(5):
            if not u.comps[j].is_zero:
                s = s + p.matrix[i][j] * u.comps[j]
        out.append(s)
    return Ambient5(out)


def _build_expansions():
    """Right coefficients ``c[a][i]`` with ``P(e_i) = sum_a E_a c[a][i]``."""
    iz = LocalElement(ONE_EL, (1, 0, 1, 0))   # |Z|^-2 (1-T^2)^-1
    iw = LocalElement(ONE_EL, (0, 1, 1, 0))   # |W|^-2 (1-T^2)^-1
    it = LocalElement(T, (0, 0, 1, 0))        # T (1-T^2)^-1
    z = LOC_ZERO
    cols = [
        [-LocalElement(X2) * iz, z, LocalElement(X1) * iz, LocalElement(X1) * it],
        [LocalElement(X1) * iz, z, LocalElement(X2) * iz, LocalElement(X2) * it],
        [z, -LocalElement(X4) * iw, -LocalElement(X3) * iw, LocalElement(X3) * it],
        [z, LocalElement(X3) * iw, -LocalElement(X4) * iw, LocalElement(X4) * it],
        [z, z, z, -LOC_ONE],
    ]
    return [[cols[i][a] for i in range(5)] for a in range(4)]


_EXPANSIONS = None


def projector_expansion(i: int) -> ModuleVec:
    """``P(e_i)`` written in the E-basis."""
    global _EXPANSIONS
    if _EXPANSIONS is None:
        _EXPANSIONS = _build_expansions()
    return ModuleVec([_EXPANSIONS[a][i - 1] for a in range(4)])


def ambient_to_basis(u: Ambient5, check: bool = True) -> ModuleVec:
    """Coordinates in the E-basis of a vector fixed by the projector."""
    if check and projector_apply(PROJECTOR, u) != u:
        raise NotInImage("vector is not in the image of the projector")
    out = ModuleVec()
    for i in range(5):
        if not u.comps[i].is_zero:
            out = out + projector_expansion(i + 1) * u.comps[i]
    if check and embed(out) != u:
        raise AssertionError("round trip through the E-basis failed")
    return out


def phi_map(d: Derivation) -> ModuleVec:
    """Anchor map: ``D_i(n) -> E_i T^n`` and ``D_4 -> E_4``, extended linearly."""
    out = ModuleVec()
    for b, c in d.terms.items():
        out = out + E(b.kind) * (LocalElement(T ** b.n) * c)
    return out
