"""Integer factorization and multiplicative orders.

Factoring is deterministic: trial division up to ``TRIAL_LIMIT`` followed by
Pollard rho with the polynomial ``x^2 + c`` (``c = 1, 2, ...``), and a
Miller-Rabin test whose base set is exact for every 64-bit integer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DomainError, ParameterError

if TYPE_CHECKING:
    from .ff import FieldElement

TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES: list[int] | None = None


def _small_primes() -> list[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        n = TRIAL_LIMIT
        sieve = bytearray([1]) * (n + 1)
        sieve[0:2] = b"\x00\x00"
        for i in range(2, math.isqrt(n) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
        _SMALL_PRIMES = [i for i in range(n + 1) if sieve[i]]
    return _SMALL_PRIMES


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers the 64-bit range)."""
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def prev_prime(n: int) -> int:
    """Largest prime <= n."""
    if n < 2:
        raise DomainError(f"no prime <= {n}")
    while not is_prime(n):
        n -= 1
    return n


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of the composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        for prime, e in self.factors:
            if e < 1 or not is_prime(prime):
                raise ParameterError(f"{prime}^{e} is not a prime power factor")
            prod *= prime**e
        if prod != self.n:
            raise ParameterError(f"factors do not multiply to {self.n}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def divisors(self) -> list[int]:
        divs = [1]
        for prime, e in self.factors:
            divs = [d * prime**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def factorize(n: int) -> Factorization:
    """Complete prime factorization of ``n >= 1``, primes ascending."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    counts: dict[int, int] = {}
    m = n
    for sp in _small_primes():
        if sp * sp > m:
            break
        while m % sp == 0:
            counts[sp] = counts.get(sp, 0) + 1
            m //= sp
    stack = [m] if m > 1 else []
    while stack:
        k = stack.pop()
        if is_prime(k):
            counts[k] = counts.get(k, 0) + 1
            continue
        d = _pollard_rho(k)
        stack.extend((d, k // d))
    return Factorization(n, tuple(sorted(counts.items())))


@dataclass(frozen=True)
class OrderInfo:
    element: FieldElement
    order: int


def multiplicative_order(g: FieldElement, fact_q_minus_1: Factorization | None = None) -> OrderInfo:
    """Order of ``g`` in F_q^x, found by stripping prime factors from q - 1."""
    field = g.field
    if g.enc == 0:
        raise DomainError("0 has no multiplicative order")
    fact = fact_q_minus_1 or field.factor_q_minus_1
    if fact.n != field.q - 1:
        raise DomainError(f"factorization is of {fact.n}, expected q - 1 = {field.q - 1}")
    s = field.order_of(g.enc, fact)
    assert (field.q - 1) % s == 0
    return OrderInfo(g, s)
