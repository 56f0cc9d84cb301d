# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction kernels (int64 with overflow detection, and F_p)."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

cdef extern from *:
    """
    static inline int hh_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int hh_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int hh_mul_ovf(long long a, long long b, long long *r) nogil
    int hh_sub_ovf(long long a, long long b, long long *r) nogil

cdef long long LL_MIN = -9223372036854775807 - 1


cdef inline long long _gcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _make_primitive(int64_t[:, ::1] m, Py_ssize_t i, Py_ssize_t ncols, Py_ssize_t c) noexcept nogil:
    cdef long long g = 0
    cdef Py_ssize_t j
    for j in range(ncols):
        if m[i, j] != 0:
            g = _gcd(g, m[i, j])
            if g == 1:
                break
    if c >= 0 and m[i, c] < 0:
        g = -g
    if g != 1 and g != 0:
        for j in range(ncols):
            m[i, j] = m[i, j] // g
    return 0


def rref_int64(cnp.ndarray[int64_t, ndim=2] arr):
    """In-place fraction-free Gauss-Jordan elimination.

    Returns ``(ok, pivots)``; ``ok`` is False when an intermediate value
    overflowed, in which case ``arr`` is garbage and the caller must retry
    with arbitrary-precision integers.
    """
    cdef int64_t[:, ::1] m = arr
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef long long piv, a, gg, pp, aa, t1, t2, t3, tmp
    pivots = []
    if nrows == 0:
        return True, pivots
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p, c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            for j in range(ncols):
                tmp = m[p, j]
                m[p, j] = m[r, j]
                m[r, j] = tmp
        _make_primitive(m, r, ncols, c)
        piv = m[r, c]
        for i in range(nrows):
            if i == r:
                continue
            a = m[i, c]
            if a == 0:
                continue
            gg = _gcd(piv, a)
            pp = piv // gg
            aa = a // gg
            for j in range(ncols):
                if m[i, j] == 0 and m[r, j] == 0:
                    continue
                if hh_mul_ovf(pp, m[i, j], &t1):
                    return False, pivots
                if hh_mul_ovf(aa, m[r, j], &t2):
                    return False, pivots
                if hh_sub_ovf(t1, t2, &t3) or t3 == LL_MIN:
                    return False, pivots
                m[i, j] = t3
            _make_primitive(m, i, ncols, -1)
        pivots.append(c)
        r += 1
    return True, pivots


def rref_modp(cnp.ndarray[int64_t, ndim=2] arr, long long p):
    """In-place Gauss-Jordan elimination over F_p (entries already reduced)."""
    cdef int64_t[:, ::1] m = arr
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, q, i, j
    cdef long long inv, a, tmp, base, e
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        q = r
        while q < nrows and m[q, c] == 0:
            q += 1
        if q == nrows:
            continue
        if q != r:
            for j in range(ncols):
                tmp = m[q, j]
                m[q, j] = m[r, j]
                m[r, j] = tmp
        # Fermat inverse
        inv = 1
        base = m[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(ncols):
            m[r, j] = m[r, j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            a = m[i, c]
            if a == 0:
                continue
            for j in range(ncols):
                if m[r, j] != 0:
                    m[i, j] = (m[i, j] - a * m[r, j]) % p
                    if m[i, j] < 0:
                        m[i, j] += p
        pivots.append(c)
        r += 1
    return True, pivots
