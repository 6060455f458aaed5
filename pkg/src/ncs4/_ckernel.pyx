# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled product kernel; same contract and algorithm as ``_pykernel``.

Partial products of small coefficients are formed in 64-bit arithmetic and
only the per-key accumulators hold Python integers.
"""
from fractions import Fraction
from math import gcd

from .scalars import GaussianRational

cdef object _new = GaussianRational._raw
cdef long long _SMALL = 1 << 30


cdef tuple _split(object c):
    cdef object re = c.re, im = c.im
    cdef object p = re.numerator, q = re.denominator, r, s, d
    if not im:
        return (p, 0, q)
    r, s = im.numerator, im.denominator
    if q == s:
        return (p, r, q)
    d = q * s // gcd(q, s)
    return (p * (d // q), r * (d // s), d)


cdef inline bint _small(object v):
    return -_SMALL < v < _SMALL


cdef inline void _acc(dict acc, tuple key, object x, object y, object d, int sg):
    cdef list v = acc.get(key)
    cdef object dv, g, fv, fd
    if v is None:
        if sg < 0:
            acc[key] = [-x, -y, d]
        else:
            acc[key] = [x, y, d]
        return
    dv = v[2]
    if dv == d:
        if sg < 0:
            v[0] = v[0] - x
            v[1] = v[1] - y
        else:
            v[0] = v[0] + x
            v[1] = v[1] + y
        return
    g = gcd(dv, d)
    fv = d // g
    fd = dv // g
    if sg < 0:
        v[0] = v[0] * fv - x * fd
        v[1] = v[1] * fv - y * fd
    else:
        v[0] = v[0] * fv + x * fd
        v[1] = v[1] * fv + y * fd
    v[2] = dv * fv


def mul_terms(dict a, dict b):
    cdef dict acc = {}
    cdef long j1, k1, l1, m1, e1, n1, j2, k2, l2, m2, e2, n2
    cdef long s1, n, J, K, L, M
    cdef tuple key1, key2, sp
    cdef object c1, x1, y1, d1, x2, y2, d2, x, y, d
    cdef long long sx1, sy1, sd1, sx2, sy2, sd2
    cdef bint small1, small2
    cdef list bs = []
    cdef list smalls = []
    cdef Py_ssize_t idx, nb
    for key2, c1 in b.items():
        sp = _split(c1)
        bs.append((key2, sp))
        smalls.append(_small(sp[0]) and _small(sp[1]) and _small(sp[2]))
    nb = len(bs)
    for key1, c1 in a.items():
        j1, k1, l1, m1, e1, n1 = key1
        x1, y1, d1 = _split(c1)
        small1 = _small(x1) and _small(y1) and _small(d1)
        if small1:
            sx1, sy1, sd1 = x1, y1, d1
        s1 = l1 - m1
        for idx in range(nb):
            key2, sp = bs[idx]
            j2, k2, l2, m2, e2, n2 = key2
            x2, y2, d2 = sp
            if small1 and smalls[idx]:
                sx2, sy2, sd2 = x2, y2, d2
                if sy1 or sy2:
                    x = sx1 * sx2 - sy1 * sy2
                    y = sx1 * sy2 + sy1 * sx2
                else:
                    x = sx1 * sx2
                    y = 0
                d = sd1 * sd2
            else:
                if y1 or y2:
                    x = x1 * x2 - y1 * y2
                    y = x1 * y2 + y1 * x2
                else:
                    x = x1 * x2
                    y = 0
                d = d1 * d2
            n = n1 + n2 + s1 * (j2 - k2)
            J = j1 + j2
            K = k1 + k2
            L = l1 + l2
            M = m1 + m2
            if e1 + e2 < 2:
                _acc(acc, (J, K, L, M, e1 + e2, n), x, y, d, 1)
            else:
                # T^2 = 1 - |Z|^2 - |W|^2
                _acc(acc, (J, K, L, M, 0, n), x, y, d, 1)
                _acc(acc, (J + 1, K + 1, L, M, 0, n), x, y, d, -1)
                _acc(acc, (J, K, L + 1, M + 1, 0, n), x, y, d, -1)
    cdef dict out = {}
    cdef list v
    for key1, v in acc.items():
        x, y, d = v
        if x or y:
            out[key1] = _new(Fraction(x, d), Fraction(y, d) if y else Fraction(0))
    return out


cdef inline void _bump(dict row, long r, object x, object y):
    cdef list v = row.get(r)
    if v is None:
        row[r] = [x, y]
    else:
        v[0] = v[0] + x
        v[1] = v[1] + y


def divide_terms(dict t, bint plus):
    cdef dict classes = {}
    cdef long j, k, l, m, e, n, p, r, kk, top, bj, bk, bl, bm, sigma
    cdef tuple key, sp
    cdef object c, D, d, f, x, y, qx, qy
    cdef list terms, v
    cdef dict rows, row, below
    cdef dict out = {}
    for key, c in t.items():
        j, k, l, m, e, n = key
        p = j if j < k else k
        r = l if l < m else m
        terms = classes.get((j - p, k - p, l - r, m - r, e, n))
        if terms is None:
            terms = []
            classes[(j - p, k - p, l - r, m - r, e, n)] = terms
        terms.append((p, r, _split(c)))
    sigma = -1 if plus else 1
    for key, terms in classes.items():
        bj, bk, bl, bm, e, n = key
        D = 1
        for p, r, sp in terms:
            d = sp[2]
            if d != D:
                D = D * d // gcd(D, d)
        rows = {}
        top = 0
        for p, r, sp in terms:
            f = D // sp[2]
            row = rows.get(p)
            if row is None:
                row = {}
                rows[p] = row
            row[r] = [sp[0] * f, sp[1] * f]
            if p > top:
                top = p
        if top == 0:
            return None
        for kk in range(top, 0, -1):
            row = rows.get(kk)
            if not row:
                continue
            below = rows.get(kk - 1)
            if below is None:
                below = {}
                rows[kk - 1] = below
            for r, v in row.items():
                x, y = v
                if not (x or y):
                    continue
                if sigma < 0:
                    qx, qy = -x, -y
                else:
                    qx, qy = x, y
                out[(bj + kk - 1, bk + kk - 1, bl + r, bm + r, e, n)] = _new(
                    Fraction(qx, D), Fraction(qy, D) if qy else Fraction(0))
                if plus:
                    _bump(below, r, -2 * qx, -2 * qy)
                    _bump(below, r + 1, qx, qy)
                else:
                    _bump(below, r + 1, -qx, -qy)
        row = rows.get(0)
        if row:
            for v in row.values():
                if v[0] or v[1]:
                    return None
    return out


def add_terms(dict a, dict b, int sign=1):
    cdef dict out = dict(a)
    cdef object v, c
    for key, c in b.items():
        v = out.get(key)
        if sign < 0:
            c = -c
        v = c if v is None else v + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out
