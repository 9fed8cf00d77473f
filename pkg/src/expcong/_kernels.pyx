# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Field elements are base-p encodings in int64.

Every function mirrors one in ``_kernels_py`` and must return identical
results; ``kernels`` picks the implementation at import.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef enum:
    MAXNU = 64


cdef inline int64_t _add(int64_t a, int64_t b, int64_t p, int nu) noexcept nogil:
    cdef int64_t r = 0, pl = 1, da, db
    cdef int k
    if nu == 1:
        r = a + b
        return r - p if r >= p else r
    for k in range(nu):
        da = a % p
        db = b % p
        a //= p
        b //= p
        da += db
        if da >= p:
            da -= p
        r += da * pl
        pl *= p
    return r


cdef inline int64_t _sub(int64_t a, int64_t b, int64_t p, int nu) noexcept nogil:
    cdef int64_t r = 0, pl = 1, da, db
    cdef int k
    if nu == 1:
        r = a - b
        return r + p if r < 0 else r
    for k in range(nu):
        da = a % p
        db = b % p
        a //= p
        b //= p
        da -= db
        if da < 0:
            da += p
        r += da * pl
        pl *= p
    return r


cdef inline int64_t _mul(int64_t a, int64_t b, int64_t p, int nu, const int64_t[::1] modulus) noexcept nogil:
    cdef int64_t da[MAXNU]
    cdef int64_t db[MAXNU]
    cdef int64_t prod[2 * MAXNU]
    cdef int64_t top, r = 0, pl = 1
    cdef int i, j, k
    if nu == 1:
        return <int64_t>((<uint64_t>a * <uint64_t>b) % <uint64_t>p)
    for i in range(nu):
        da[i] = a % p
        a //= p
        db[i] = b % p
        b //= p
    for i in range(2 * nu - 1):
        prod[i] = 0
    for i in range(nu):
        if da[i]:
            for j in range(nu):
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p
    for k in range(2 * nu - 2, nu - 1, -1):
        top = prod[k]
        if top:
            for j in range(nu):
                prod[k - nu + j] = (prod[k - nu + j] + (p - top) * modulus[j]) % p
    for i in range(nu):
        r += prod[i] * pl
        pl *= p
    return r


def powers(int64_t g, int64_t n, int64_t coeff, int64_t p, int nu, const int64_t[::1] modulus):
    out_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t x = coeff
    cdef int64_t i
    with nogil:
        for i in range(n):
            out[i] = x
            x = _mul(x, g, p, nu, modulus)
    return out_arr


def brute_counts(const int64_t[::1] v1, const int64_t[::1] v2, const int64_t[::1] v3,
                 int64_t q, int64_t p, int nu):
    """counts[b] = #{(i, j, k) : v1[i] + v2[j] + v3[k] = b} by direct enumeration."""
    counts_arr = np.zeros(q, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t n1 = v1.shape[0], n2 = v2.shape[0], n3 = v3.shape[0]
    cdef int64_t s12
    with nogil:
        for i in range(n1):
            for j in range(n2):
                s12 = _add(v1[i], v2[j], p, nu)
                for k in range(n3):
                    counts[_add(s12, v3[k], p, nu)] += 1
    return counts_arr


def group_convolve(const int64_t[::1] a, const int64_t[::1] b, int64_t q, int64_t p, int nu):
    """c[z] = sum_{x + y = z} a[x] b[y] over (F_q, +), skipping zero entries."""
    out_arr = np.zeros(q, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t x, y, ax
    with nogil:
        for x in range(q):
            ax = a[x]
            if ax == 0:
                continue
            for y in range(q):
                if b[y]:
                    out[_add(x, y, p, nu)] += ax * b[y]
    return out_arr


def scan_pairs(const int64_t[::1] u_outer, const int64_t[::1] w_inner, const int64_t[::1] baby,
               int64_t giant, int64_t m_steps, int64_t s1,
               int64_t p, int nu, const int64_t[::1] modulus):
    """First (k, j) in outer-major order with u_outer[k] - w_inner[j] in <g>.

    ``baby`` is a dense table: baby[g^i] = i for i < m_steps, -1 elsewhere.
    ``giant`` is g^(-m_steps). Returns (x1, j, k, queries, giant_steps, max_steps, pairs);
    x1 = -1 when nothing was found.
    """
    cdef Py_ssize_t k, j
    cdef Py_ssize_t n_out = u_outer.shape[0], n_in = w_inner.shape[0]
    cdef int64_t h, y, i, hit
    cdef int64_t queries = 0, steps = 0, pairs = 0, qsteps, max_steps = 0
    cdef int64_t fx = -1, fj = -1, fk = -1
    with nogil:
        for k in range(n_out):
            for j in range(n_in):
                pairs += 1
                h = _sub(u_outer[k], w_inner[j], p, nu)
                if h == 0:
                    continue
                queries += 1
                y = h
                qsteps = 0
                for i in range(m_steps):
                    qsteps += 1
                    hit = baby[y]
                    if hit >= 0:
                        fx = (i * m_steps + hit) % s1
                        break
                    y = _mul(y, giant, p, nu, modulus)
                steps += qsteps
                if qsteps > max_steps:
                    max_steps = qsteps
                if fx >= 0:
                    fj = j
                    fk = k
                    break
            if fx >= 0:
                break
    return fx, fj, fk, queries, steps, max_steps, pairs


def dlog_many(const int64_t[::1] hs, const int64_t[::1] baby, int64_t giant, int64_t m_steps,
              int64_t s, int64_t p, int nu, const int64_t[::1] modulus):
    """BSGS for each entry of hs (all nonzero); -1 marks h outside <g>.

    Returns (logs, total_giant_steps, max_giant_steps).
    """
    out_arr = np.empty(hs.shape[0], dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef Py_ssize_t n
    cdef int64_t y, i, hit, res, qsteps, steps = 0, max_steps = 0
    with nogil:
        for n in range(hs.shape[0]):
            y = hs[n]
            res = -1
            qsteps = 0
            for i in range(m_steps):
                qsteps += 1
                hit = baby[y]
                if hit >= 0:
                    res = (i * m_steps + hit) % s
                    break
                y = _mul(y, giant, p, nu, modulus)
            out[n] = res
            steps += qsteps
            if qsteps > max_steps:
                max_steps = qsteps
    return out_arr, steps, max_steps
