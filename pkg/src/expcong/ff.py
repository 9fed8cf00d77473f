"""Arithmetic in F_q = F_p[t]/(f) for prime p and monic irreducible f of degree nu.

Elements are plain integers ``enc`` in ``[0, q)`` read as base-p digits, the
low digit being the constant coefficient. ``Field`` offers scalar operations on
encodings and numpy-vectorized operations on arrays of encodings; the
``FieldElement`` wrapper and the ``ff_*`` functions give a typed surface on top.

F_q has q elements (zero included) and F_q^x = F_q \\ {0} has q - 1.
"""
from __future__ import annotations

import functools
import cmath
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .arith import Factorization, factorize, is_prime
from .errors import DomainError, ParameterError

TABLE_LIMIT = 2**16
ROOT_TABLE_LIMIT = 2**22
MAX_Q = 2**64 - 1

UnitComplex = complex


# -- polynomials over F_p, coefficient lists low -> high ------------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _poly_trim(a)
    return quot, a


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_divmod(prod, f, p)[1]


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod(a, f, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test: f | x^(p^n) - x and gcd(x^(p^(n/l)) - x, f) = 1 for primes l | n."""
    f = list(modulus)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if n <= 3:
        # a reducible polynomial of degree <= 3 has a linear factor
        return all(sum(c * pow(x, i, p) for i, c in enumerate(f)) % p for x in range(p))
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**n, f, p), x, p):
        return False
    for ell, _ in factorize(n).factors:
        h = _poly_sub(_poly_powmod(x, p ** (n // ell), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def find_modulus(p: int, nu: int) -> tuple[int, ...]:
    """First monic irreducible of degree nu, lower coefficients in base-p counting order."""
    if nu == 1:
        return (0, 1)
    for k in range(p**nu):
        coeffs = [(k // p**i) % p for i in range(nu)] + [1]
        if coeffs[0] and is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # impossible


# -- field parameters ------------------------------------------------------------


@dataclass(frozen=True)
class FieldParams:
    p: int
    nu: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ParameterError(f"p = {self.p} is not prime")
        if self.nu < 1:
            raise ParameterError(f"nu = {self.nu} must be positive")
        if self.p**self.nu > MAX_Q:
            raise ParameterError(f"q = {self.p}^{self.nu} exceeds the 64-bit range")
        if len(self.modulus) != self.nu + 1:
            raise ParameterError(f"modulus needs {self.nu + 1} coefficients, got {len(self.modulus)}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ParameterError(f"modulus coefficients must lie in [0, {self.p})")
        if self.modulus[-1] != 1:
            raise ParameterError("modulus must be monic")
        if self.nu > 1 and not is_irreducible(self.modulus, self.p):
            raise ParameterError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.nu

    @classmethod
    def make(cls, p: int, nu: int = 1, modulus: Sequence[int] | None = None) -> FieldParams:
        if modulus is None:
            if nu < 1:
                raise ParameterError(f"nu = {nu} must be positive")
            if not is_prime(p):
                raise ParameterError(f"p = {p} is not prime")
            modulus = find_modulus(p, nu)
        return cls(p, nu, tuple(modulus))

    @classmethod
    def parse(cls, spec: str) -> FieldParams:
        """Parse ``"p"``, ``"p^nu"`` or ``"p^nu/c0,c1,...,cnu"``."""
        spec = spec.strip()
        head, _, tail = spec.partition("/")
        base, _, expo = head.partition("^")
        try:
            p = int(base)
        except ValueError:
            raise ParameterError(f"bad field token {base!r} in {spec!r}") from None
        try:
            nu = int(expo) if expo else 1
        except ValueError:
            raise ParameterError(f"bad exponent token {expo!r} in {spec!r}") from None
        modulus = None
        if tail:
            modulus = []
            for tok in tail.split(","):
                try:
                    modulus.append(int(tok))
                except ValueError:
                    raise ParameterError(f"bad modulus token {tok!r} in {spec!r}") from None
        try:
            return cls.make(p, nu, modulus)
        except ParameterError as exc:
            raise ParameterError(f"{exc} (field spec {spec!r})") from None

    def spec(self) -> str:
        if self.nu == 1:
            return str(self.p)
        return f"{self.p}^{self.nu}/" + ",".join(map(str, self.modulus))


# -- the field -------------------------------------------------------------------


@functools.lru_cache(maxsize=64)
def get_field(params: FieldParams) -> Field:
    return Field(params)


def field_from_spec(spec: str) -> Field:
    return get_field(FieldParams.parse(spec))


def prime_field(p: int) -> Field:
    return get_field(FieldParams.make(p))


class Field:
    """F_q with cached tables. Immutable once built; obtain through ``get_field``."""

    def __init__(self, params: FieldParams, table_limit: int = TABLE_LIMIT):
        self.params = params
        self.p = params.p
        self.nu = params.nu
        self.q = params.q
        self.modulus = params.modulus
        self._mod_list = list(params.modulus)
        self._place = [self.p**i for i in range(self.nu)]
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._trace_basis = [self._trace_slow(self._place[k]) for k in range(self.nu)]
        self._roots: np.ndarray | None = None
        if self.p <= ROOT_TABLE_LIMIT:
            self._roots = np.exp(2j * np.pi * np.arange(self.p) / self.p)
            self._roots[0] = 1.0
        self.generator = self._find_generator()
        if self.nu > 1 and self.q <= table_limit:
            self._build_tables()

    def __repr__(self) -> str:
        return f"Field({self.params.spec()!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.params == self.params

    def __hash__(self) -> int:
        return hash(self.params)

    @functools.cached_property
    def factor_q_minus_1(self) -> Factorization:
        return factorize(self.q - 1)

    def __call__(self, enc: int) -> FieldElement:
        return FieldElement(self, enc)

    # digits

    def digits(self, a: int) -> list[int]:
        return [(a // pl) % self.p for pl in self._place]

    def from_digits(self, d: Sequence[int]) -> int:
        return sum((c % self.p) * pl for c, pl in zip(d, self._place))

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ParameterError(f"encoding {a} is not an element of F_{self.q}")
        return a

    # scalar arithmetic on encodings

    def add(self, a: int, b: int) -> int:
        if self.nu == 1:
            return (a + b) % self.p
        p = self.p
        return sum((((a // pl) + (b // pl)) % p) * pl for pl in self._place)

    def neg(self, a: int) -> int:
        if self.nu == 1:
            return -a % self.p
        p = self.p
        return sum((-(a // pl) % p) * pl for pl in self._place)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_poly(self, a: int, b: int) -> int:
        r = _poly_mulmod(self.digits(a), self.digits(b), self._mod_list, self.p)
        return self.from_digits(r)

    def mul(self, a: int, b: int) -> int:
        if self.nu == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])
        return self._mul_poly(a, b)

    def _pow_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.nu == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        if self._exp is not None:
            return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])
        return self._pow_slow(a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("0 has no inverse")
        if self.nu == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return int(self._exp[(-int(self._log[a])) % (self.q - 1)])
        return self._pow_slow(a, self.q - 2)

    def _trace_slow(self, a: int) -> int:
        acc, x = 0, a
        for _ in range(self.nu):
            acc = self.add(acc, x)
            x = self._pow_slow(x, self.p) if self.nu > 1 else x
        assert acc < self.p, "trace must land in the prime field"
        return acc

    def trace(self, a: int) -> int:
        if self.nu == 1:
            return a
        return sum(d * t for d, t in zip(self.digits(a), self._trace_basis)) % self.p

    def psi(self, x: int) -> complex:
        """The canonical additive character e^(2 pi i Tr(x) / p)."""
        t = self.trace(x)
        if self._roots is None:
            return cmath.exp(2j * cmath.pi * t / self.p) if t else 1 + 0j
        return complex(self._roots[t])

    def order_of(self, a: int, fact: Factorization | None = None) -> int:
        fact = fact or self.factor_q_minus_1
        s = self.q - 1
        for ell, e in fact.factors:
            for _ in range(e):
                if self.pow(a, s // ell) == 1:
                    s //= ell
                else:
                    break
        return s

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        primes = self.factor_q_minus_1.primes
        rng = random.Random(self.q)
        while True:
            g = rng.randrange(1, self.q)
            if self.nu == 1:
                ok = all(pow(g, (self.q - 1) // ell, self.p) != 1 for ell in primes)
            else:
                ok = all(self._pow_slow(g, (self.q - 1) // ell) != 1 for ell in primes)
            if ok:
                return g

    def _build_tables(self) -> None:
        n = self.q - 1
        exp = np.empty(n, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        g = self.generator
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g)
        assert x == 1
        self._exp, self._log = exp, log

    # vectorized arithmetic on int64 arrays of encodings

    def _digits_vec(self, v: np.ndarray) -> np.ndarray:
        pl = np.asarray(self._place, dtype=np.int64)
        return (np.asarray(v, dtype=np.int64)[..., None] // pl) % self.p

    def _from_digits_vec(self, d: np.ndarray) -> np.ndarray:
        pl = np.asarray(self._place, dtype=np.int64)
        return (d % self.p) @ pl

    def add_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.nu == 1:
            return (a + b) % self.p
        return self._from_digits_vec(self._digits_vec(a) + self._digits_vec(b))

    def neg_vec(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.nu == 1:
            return -a % self.p
        return self._from_digits_vec(-self._digits_vec(a))

    def sub_vec(self, a, b) -> np.ndarray:
        return self.add_vec(a, self.neg_vec(b))

    def scale_vec(self, c: int, v) -> np.ndarray:
        """Multiply every entry of ``v`` by the scalar ``c``."""
        v = np.asarray(v, dtype=np.int64)
        if self.nu == 1:
            return c * v % self.p
        if c == 0:
            return np.zeros_like(v)
        if self._exp is not None:
            out = self._exp[(self._log[v] + self._log[c]) % (self.q - 1)]
            return np.where(v == 0, 0, out)
        # schoolbook product against c's digits, then reduce by the modulus
        vd = self._digits_vec(v)
        cd = self.digits(c)
        nu, p = self.nu, self.p
        prod = np.zeros(v.shape + (2 * nu - 1,), dtype=np.int64)
        for i, ci in enumerate(cd):
            if ci:
                prod[..., i : i + nu] += ci * vd
        prod %= p
        for k in range(2 * nu - 2, nu - 1, -1):
            top = prod[..., k].copy()
            for j in range(nu):
                prod[..., k - nu + j] -= top * self._mod_list[j]
            prod[..., k] = 0
            prod %= p
        return self._from_digits_vec(prod[..., :nu])

    def trace_vec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if self.nu == 1:
            return v % self.p
        tb = np.asarray(self._trace_basis, dtype=np.int64)
        return (self._digits_vec(v) @ tb) % self.p

    def psi_vec(self, v) -> np.ndarray:
        t = self.trace_vec(v)
        if self._roots is None:
            return np.where(t == 0, 1 + 0j, np.exp(2j * np.pi * t / self.p))
        return self._roots[t]

    def powers(self, g: int, n: int, coeff: int = 1) -> np.ndarray:
        """``[coeff * g^x for x in range(n)]`` as an int64 array."""
        from .kernels import powers

        return powers(self, g, n, coeff)


@dataclass(frozen=True)
class FieldElement:
    field: Field = dc_field(repr=False)
    enc: int

    def __post_init__(self) -> None:
        if not 0 <= self.enc < self.field.q:
            raise ParameterError(f"encoding {self.enc} is not an element of F_{self.field.q}")

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.enc})"

    def _same(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise ParameterError("operands belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field, self.field.add(self.enc, other.enc))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field, self.field.sub(self.enc, other.enc))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, self.field.neg(self.enc))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field, self.field.mul(self.enc, other.enc))

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field, self.field.pow(self.enc, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.enc))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return self * other.inverse()

    def __bool__(self) -> bool:
        return self.enc != 0

    def poly(self) -> list[int]:
        """Coefficients over F_p, constant term first."""
        return self.field.digits(self.enc)


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def ff_pow(g: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise DomainError("exponent must be nonnegative")
    return g**e


def ff_trace(a: FieldElement) -> int:
    return a.field.trace(a.enc)


def additive_character(mu: FieldElement, x: FieldElement) -> UnitComplex:
    """psi(mu * x) = exp(2 pi i Tr(mu x) / p)."""
    mu._same(x)
    f = mu.field
    return f.psi(f.mul(mu.enc, x.enc))


def unit_check(z: complex, tol: float = 1e-12) -> bool:
    return abs(z.real * z.real + z.imag * z.imag - 1.0) <= tol

