"""Pure-Python row reduction, used when the compiled kernels are unavailable.

Both routines mirror ``_kernels.pyx`` step for step so that the two backends
return identical results.
"""

from __future__ import annotations

import math


def _content(row: list[int]) -> int:
    g = 0
    for v in row:
        if v:
            g = math.gcd(g, v)
            if g == 1:
                return 1
    return g


def rref_int(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan elimination over the integers.

    Returns the reduced rows and the pivot columns.  Every row is kept
    primitive with a positive pivot; row ``r`` divided by its pivot entry is
    row ``r`` of the rational RREF.  Rows past the rank are zero.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        row = m[r]
        g = _content(row)
        if row[c] < 0:
            g = -g
        if g != 1:
            row = [v // g for v in row]
            m[r] = row
        piv = row[c]
        for i in range(nrows):
            if i == r:
                continue
            a = m[i][c]
            if a == 0:
                continue
            gg = math.gcd(piv, a)
            pp, aa = piv // gg, a // gg
            new = [pp * x - aa * y for x, y in zip(m[i], row)]
            g = _content(new)
            if g > 1:
                new = [v // g for v in new]
            m[i] = new
        pivots.append(c)
        r += 1
    return m, pivots


def rref_modp(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Gauss-Jordan elimination over F_p with monic pivot rows."""
    m = [[v % p for v in r] for r in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        q = r
        while q < nrows and m[q][c] == 0:
            q += 1
        if q == nrows:
            continue
        if q != r:
            m[q], m[r] = m[r], m[q]
        inv = pow(m[r][c], p - 2, p)
        row = [v * inv % p for v in m[r]]
        m[r] = row
        for i in range(nrows):
            if i == r:
                continue
            a = m[i][c]
            if a:
                m[i] = [(x - a * y) % p for x, y in zip(m[i], row)]
        pivots.append(c)
        r += 1
    return m, pivots
