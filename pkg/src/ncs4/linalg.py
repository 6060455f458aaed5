"""Exact rank computations behind the regularity and freeness checks.

Matrices are sparse: a list of rows, each a dict column -> GaussianRational.
Generic-q maps are specialized at a rational ``q`` first.  The rank can only
drop under specialization, so full rank at one value proves full rank for
generic ``q``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Tuple

from .algebra import AlgebraElement, CentralFactor, MultiIndex, iter_basis
from .scalars import GaussianRational

__all__ = ["exact_rank", "specialize", "multiplication_rank", "embedding_rank"]

Row = Dict[Hashable, GaussianRational]


def exact_rank(rows: Iterable[Row]) -> int:
    """Rank by sparse Gaussian elimination with exact arithmetic."""
    pivots: Dict[Hashable, Row] = {}
    rank = 0
    for row in rows:
        r = {k: v for k, v in row.items() if v}
        while r:
            col = min(r, key=_order)
            piv = pivots.get(col)
            if piv is None:
                inv = GaussianRational(1) / r[col]
                pivots[col] = {k: v * inv for k, v in r.items()}
                rank += 1
                break
            f = r[col]
            for k, v in piv.items():
                nv = r.get(k, _ZERO) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


_ZERO = GaussianRational(0)


def _order(key):
    return repr(key)


def specialize(a: AlgebraElement, q: Fraction = Fraction(2)) -> Row:
    """Coefficients of ``a`` in the basis e^I with ``q`` set to a rational value."""
    out: Row = {}
    for (j, k, l, m, e, n), c in a._t.items():
        key = (j, k, l, m, e)
        v = out.get(key, _ZERO) + c * (Fraction(q) ** n)
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def multiplication_rank(d: CentralFactor, max_degree: int = 6,
                        q: Fraction = Fraction(2)) -> Tuple[int, int]:
    """``(rank, dimension)`` of ``x -> d x`` on basis elements of degree <= max_degree."""
    el = d.element
    rows = [specialize(AlgebraElement.basis(idx) * el, q) for idx in iter_basis(max_degree)]
    return exact_rank(rows), len(rows)


def embedding_rank(max_degree: int = 2, q: Fraction = Fraction(2)) -> Tuple[int, int]:
    """``(rank, dimension)`` of ``(U^a) -> sum_a E_a U^a`` on polynomial coefficients.

    The domain is four copies of the degree-bounded span; the image lives in the
    ambient module, whose columns are labelled by (component, basis index).
    """
    from .geometry import E_AMBIENT

    comps = [[c.to_algebra() for c in ea.comps] for ea in E_AMBIENT]
    basis: List[MultiIndex] = list(iter_basis(max_degree))
    rows = []
    for a in range(4):
        for idx in basis:
            u = AlgebraElement.basis(idx)
            row: Row = {}
            for i, c in enumerate(comps[a]):
                for key, v in specialize(c * u, q).items():
                    row[(i, key)] = v
            rows.append(row)
    return exact_rank(rows), len(rows)
