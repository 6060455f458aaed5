"""Pure-Python product kernel (fallback for the compiled ``_ckernel``).

Terms are flat dicts keyed by ``(j, k, l, m, eps, n)`` where ``n`` is the
power of ``q``; values are ``GaussianRational``.

Products accumulate integer numerators over a shared denominator per output
key and normalize once at the end, which avoids a gcd per partial product.
"""
from fractions import Fraction
from math import gcd

from .scalars import GaussianRational

_new = GaussianRational._raw


def _split(c):
    """``c = (x + i y) / d`` with integers x, y and d > 0."""
    re, im = c.re, c.im
    p, q = re.numerator, re.denominator
    if not im:
        return p, 0, q
    r, s = im.numerator, im.denominator
    if q == s:
        return p, r, q
    d = q * s // gcd(q, s)
    return p * (d // q), r * (d // s), d


def _join(x, y, d):
    return _new(Fraction(x, d), Fraction(y, d) if y else Fraction(0))


def mul_terms(a, b):
    acc = {}
    get = acc.get
    bs = [(key, _split(c)) for key, c in b.items()]
    for (j1, k1, l1, m1, e1, n1), c1 in a.items():
        x1, y1, d1 = _split(c1)
        s1 = l1 - m1
        for (j2, k2, l2, m2, e2, n2), (x2, y2, d2) in bs:
            n = n1 + n2 + s1 * (j2 - k2)
            if y1 or y2:
                x = x1 * x2 - y1 * y2
                y = x1 * y2 + y1 * x2
            else:
                x, y = x1 * x2, 0
            d = d1 * d2
            J = j1 + j2
            K = k1 + k2
            L = l1 + l2
            M = m1 + m2
            if e1 + e2 < 2:
                keys = (((J, K, L, M, e1 + e2, n), 1),)
            else:
                # T^2 = 1 - |Z|^2 - |W|^2
                keys = (((J, K, L, M, 0, n), 1), ((J + 1, K + 1, L, M, 0, n), -1),
                        ((J, K, L + 1, M + 1, 0, n), -1))
            for key, sg in keys:
                v = get(key)
                if v is None:
                    acc[key] = [sg * x, sg * y, d]
                elif v[2] == d:
                    v[0] += sg * x
                    v[1] += sg * y
                else:
                    dv = v[2]
                    g = gcd(dv, d)
                    fv, fd = d // g, dv // g
                    v[0] = v[0] * fv + sg * x * fd
                    v[1] = v[1] * fv + sg * y * fd
                    v[2] = dv * fv
    return {key: _join(x, y, d) for key, (x, y, d) in acc.items() if x or y}


def divide_terms(t, plus):
    """Exact quotient of ``t`` by ``1 - T^2`` (``plus`` false) or ``1 + T^2``, or None.

    With u = |Z|^2 and v = |W|^2 the divisors are ``u + v`` and ``-u + (2 - v)``.
    Terms split into classes ``base * u^p v^r``; inside a class this is
    synthetic division in u over Q[v], exact because the u-coefficient is +-1.
    """
    classes = {}
    for (j, k, l, m, e, n), c in t.items():
        p = j if j < k else k
        r = l if l < m else m
        classes.setdefault((j - p, k - p, l - r, m - r, e, n), []).append((p, r, _split(c)))
    sigma = -1 if plus else 1
    out = {}
    for (bj, bk, bl, bm, e, n), terms in classes.items():
        D = 1
        for _, _, (_, _, d) in terms:
            D = D * d // gcd(D, d)
        rows = {}
        top = 0
        for p, r, (x, y, d) in terms:
            f = D // d
            rows.setdefault(p, {})[r] = [x * f, y * f]
            if p > top:
                top = p
        if top == 0:
            return None
        for kk in range(top, 0, -1):
            row = rows.get(kk)
            if not row:
                continue
            below = rows.setdefault(kk - 1, {})
            for r, (x, y) in row.items():
                if not (x or y):
                    continue
                qx, qy = sigma * x, sigma * y
                out[(bj + kk - 1, bk + kk - 1, bl + r, bm + r, e, n)] = _join(qx, qy, D)
                if plus:
                    v = below.setdefault(r, [0, 0])
                    v[0] -= 2 * qx
                    v[1] -= 2 * qy
                    v = below.setdefault(r + 1, [0, 0])
                    v[0] += qx
                    v[1] += qy
                else:
                    v = below.setdefault(r + 1, [0, 0])
                    v[0] -= qx
                    v[1] -= qy
        if any(x or y for x, y in rows.get(0, {}).values()):
            return None
    return out


def add_terms(a, b, sign=1):
    out = dict(a)
    get = out.get
    for key, c in b.items():
        v = get(key)
        if sign < 0:
            c = -c
        v = c if v is None else v + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out
