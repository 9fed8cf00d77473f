"""Pure-Python/numpy versions of the compiled kernels (same signatures, same results)."""
from __future__ import annotations

import numpy as np


def _digits(v: np.ndarray, p: int, nu: int) -> np.ndarray:
    place = p ** np.arange(nu, dtype=np.int64)
    return (v[..., None] // place) % p


def _undigits(d: np.ndarray, p: int, nu: int) -> np.ndarray:
    place = p ** np.arange(nu, dtype=np.int64)
    return (d % p) @ place


def _add_vec(a: np.ndarray, b: np.ndarray, p: int, nu: int) -> np.ndarray:
    if nu == 1:
        return (a + b) % p
    return _undigits(_digits(a, p, nu) + _digits(b, p, nu), p, nu)


def _mul(a: int, b: int, p: int, nu: int, modulus) -> int:
    if nu == 1:
        return a * b % p
    da = [(a // p**i) % p for i in range(nu)]
    db = [(b // p**i) % p for i in range(nu)]
    prod = [0] * (2 * nu - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * nu - 2, nu - 1, -1):
        top = prod[k]
        if top:
            for j in range(nu):
                prod[k - nu + j] = (prod[k - nu + j] - top * int(modulus[j])) % p
    return sum(c * p**i for i, c in enumerate(prod[:nu]))


def _sub(a: int, b: int, p: int, nu: int) -> int:
    if nu == 1:
        return (a - b) % p
    r, pl = 0, 1
    for _ in range(nu):
        r += ((a % p - b % p) % p) * pl
        a //= p
        b //= p
        pl *= p
    return r


def powers(g: int, n: int, coeff: int, p: int, nu: int, modulus) -> np.ndarray:
    out = np.empty(n, dtype=np.int64)
    x = coeff
    for i in range(n):
        out[i] = x
        x = _mul(x, g, p, nu, modulus)
    return out


def brute_counts(v1, v2, v3, q: int, p: int, nu: int) -> np.ndarray:
    v1 = np.asarray(v1, dtype=np.int64)
    pair = _add_vec(np.asarray(v2, dtype=np.int64)[:, None], np.asarray(v3, dtype=np.int64)[None, :], p, nu)
    pair = pair.ravel()
    counts = np.zeros(q, dtype=np.int64)
    if nu == 1:
        for x in v1:
            counts += np.bincount((pair + x) % p, minlength=q)
    else:
        pd = _digits(pair, p, nu)
        for x in v1:
            tot = _undigits(pd + _digits(np.int64(x), p, nu), p, nu)
            counts += np.bincount(tot, minlength=q)
    return counts


def group_convolve(a, b, q: int, p: int, nu: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(q, dtype=np.int64)
    ys = np.flatnonzero(b)
    by = b[ys]
    for x in np.flatnonzero(a):
        idx = _add_vec(np.full_like(ys, x), ys, p, nu)
        out[idx] += a[x] * by  # idx entries are distinct: y -> x + y is a bijection
    return out


def scan_pairs(u_outer, w_inner, baby, giant: int, m_steps: int, s1: int, p: int, nu: int, modulus):
    """See the compiled twin. ``baby`` may be a dense array or a dict."""
    if isinstance(baby, dict):
        lookup = baby.get
    else:
        dense = baby

        def lookup(y, _d=dense):
            v = int(_d[y])
            return None if v < 0 else v

    queries = steps = pairs = max_steps = 0
    w = [int(x) for x in w_inner]
    for k, u in enumerate(int(x) for x in u_outer):
        for j, wj in enumerate(w):
            pairs += 1
            h = _sub(u, wj, p, nu)
            if h == 0:
                continue
            queries += 1
            y = h
            for i in range(m_steps):
                steps += 1
                hit = lookup(y)
                if hit is not None:
                    max_steps = max(max_steps, i + 1)
                    return (i * m_steps + hit) % s1, j, k, queries, steps, max_steps, pairs
                y = _mul(y, giant, p, nu, modulus)
            max_steps = max(max_steps, m_steps)
    return -1, -1, -1, queries, steps, max_steps, pairs


def dlog_many(hs, baby, giant: int, m_steps: int, s: int, p: int, nu: int, modulus):
    """See the compiled twin. ``baby`` may be a dense array or a dict."""
    if not isinstance(baby, dict):
        baby = {int(k): int(v) for k, v in enumerate(baby) if v >= 0}
    out = np.empty(len(hs), dtype=np.int64)
    steps = max_steps = 0
    for n, h in enumerate(hs):
        y = int(h)
        res = -1
        for i in range(m_steps):
            hit = baby.get(y)
            if hit is not None:
                res = (i * m_steps + hit) % s
                break
            y = _mul(y, giant, p, nu, modulus)
        q_steps = i + 1
        out[n] = res
        steps += q_steps
        max_steps = max(max_steps, q_steps)
    return out, steps, max_steps
