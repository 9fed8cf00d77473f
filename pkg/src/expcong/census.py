"""Exact solution counts of sum_i a_i g_i^{x_i} = b and the density bounds around them.

With orders s_1 >= ... >= s_m and the smallest-order variable truncated to
``[0, r)``, the count N_b(r) splits into the main term s_1...s_{m-1} r / q and
a deviation Delta_b(r). For m = 3 the mean square E(r) = sum_b Delta_b(r)^2
stays below q^2 r, so fewer than q / delta^2 targets b deviate by
delta * sqrt(r q) or more. Counts and deviations are exact rationals.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .arith import OrderInfo, multiplicative_order
from .errors import CapacityError, DomainError, ParameterError
from .ff import Field, FieldElement

COUNT_LIMIT = 2**20
BRUTE_LIMIT = 10**8
_FFT_SAFE = 2.0**45


@dataclass(frozen=True)
class Term:
    a: FieldElement
    g: FieldElement
    order: OrderInfo

    @property
    def s(self) -> int:
        return self.order.order


@dataclass(frozen=True)
class EquationInstance:
    field: Field
    terms: tuple[Term, ...]
    b: FieldElement

    def __post_init__(self) -> None:
        if not self.terms:
            raise ParameterError("need at least one term")
        for t in self.terms:
            if t.a.field != self.field or t.g.field != self.field:
                raise ParameterError("term lies in a different field")
            if t.a.enc == 0 or t.g.enc == 0:
                raise ParameterError("coefficients and bases must be nonzero")
            if self.field.pow(t.g.enc, t.s) != 1:
                raise ParameterError(f"{t.g!r} does not have order {t.s}")
        if self.b.field != self.field:
            raise ParameterError("b lies in a different field")

    @classmethod
    def build(cls, field: Field, pairs: Sequence[tuple[int, int]], b: int) -> EquationInstance:
        """Instance from ``(a_i, g_i)`` encodings; orders are computed here."""
        terms = []
        for a, g in pairs:
            if a == 0 or g == 0:
                raise ParameterError(f"term {a}:{g} has a zero coefficient or base")
            ge = field(g)
            terms.append(Term(field(a), ge, multiplicative_order(ge)))
        return cls(field, tuple(terms), field(b))

    def with_b(self, b: int) -> EquationInstance:
        return EquationInstance(self.field, self.terms, self.field(b))

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(t.s for t in self.terms)

    def sorted_indices(self) -> list[int]:
        """Term indices by descending order, ties kept in user order."""
        return sorted(range(self.m), key=lambda i: -self.terms[i].s)

    def values(self, i: int, n: int | None = None) -> np.ndarray:
        """``a_i g_i^x`` for ``x < n`` (default: the full order)."""
        t = self.terms[i]
        n = t.s if n is None else n
        return self.field.powers(t.g.enc, n, t.a.enc)


@dataclass(frozen=True)
class SearchRegion:
    r: int
    full_sizes: tuple[int, ...]
    truncated: int  # index of the variable restricted to [0, r)
    r_raw: float = math.nan  # q^m (s_1...s_{m-1})^-2 delta^2 before ceiling and clamping
    guarantee_applicable: bool = True

    def sizes(self) -> tuple[int, ...]:
        out = list(self.full_sizes)
        out[self.truncated] = self.r
        return tuple(out)

    @property
    def volume(self) -> int:
        return math.prod(self.sizes())


def full_region(instance: EquationInstance) -> SearchRegion:
    idx = instance.sorted_indices()[-1]
    return SearchRegion(instance.terms[idx].s, instance.orders, idx)


def region_with_r(instance: EquationInstance, r: int) -> SearchRegion:
    idx = instance.sorted_indices()[-1]
    s_last = instance.terms[idx].s
    if not 1 <= r <= s_last:
        raise ParameterError(f"r = {r} outside [1, {s_last}]")
    return SearchRegion(r, instance.orders, idx)


def sqrt_log_delta(q: int) -> float:
    return math.sqrt(math.log(q))


def r_argument(q: int, big_orders: Sequence[int], m: int, delta: float) -> float:
    """q^m (prod of the m-1 largest orders)^-2 delta^2."""
    return q**m / math.prod(big_orders) ** 2 * delta * delta


def min_r(instance: EquationInstance, delta: float | None = None) -> SearchRegion:
    """Smallest truncation r guaranteeing solutions for non-exceptional b.

    r = ceil(q^3 (s_1 s_2)^-2 delta^2) for three terms, clamped to [1, s_3].
    ``guarantee_applicable`` records whether some r <= s_3 exceeds the
    threshold with delta^2 = log q.
    """
    q = instance.field.q
    delta = sqrt_log_delta(q) if delta is None else delta
    order = instance.sorted_indices()
    s = [instance.terms[i].s for i in order]
    x = r_argument(q, s[:-1], instance.m, delta)
    r = min(max(math.ceil(x), 1), s[-1])
    x_log = r_argument(q, s[:-1], instance.m, sqrt_log_delta(q))
    return SearchRegion(r, instance.orders, order[-1], x, x_log < s[-1])


def necessary_condition(instance: EquationInstance) -> dict[str, bool | None]:
    """Necessary condition s_1 s_2 / q >= sqrt(q log q / s_3) for solutions.

    ``with_s3_minus_2`` evaluates the variant with s_3 - 2 in the denominator.
    """
    q = instance.field.q
    s = sorted(instance.orders, reverse=True)
    if len(s) != 3:
        return {"with_s3": None, "with_s3_minus_2": None}
    lhs = s[0] * s[1] / q
    with_s3 = lhs >= math.sqrt(q / s[2] * math.log(q))
    shifted = lhs >= math.sqrt(q / (s[2] - 2) * math.log(q)) if s[2] > 2 else None
    return {"with_s3": with_s3, "with_s3_minus_2": shifted}


# -- exact counting ----------------------------------------------------------------


def _value_distribution(instance: EquationInstance, i: int, n: int) -> np.ndarray:
    return np.bincount(instance.values(i, n), minlength=instance.field.q).astype(np.int64)


def _fft_convolve(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # (F_q, +) is (Z/p)^nu; digits of the encoding index the axes
    shape = (field.p,) * field.nu
    fa = np.fft.rfftn(a.reshape(shape).astype(np.float64))
    fb = np.fft.rfftn(b.reshape(shape).astype(np.float64))
    c = np.fft.irfftn(fa * fb, s=shape, axes=tuple(range(field.nu))).ravel()
    out = np.rint(c)
    if np.max(np.abs(c - out), initial=0.0) > 0.25:
        raise ArithmeticError("FFT rounding residual too large")
    return out.astype(np.int64)


def convolve_group(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact convolution of two count vectors over the additive group of F_q."""
    la, lb = float(a.sum()), float(b.sum())
    if la * lb <= _FFT_SAFE:
        return _fft_convolve(field, a, b)
    if la > lb:
        a, b, la, lb = b, a, lb, la
    # split the larger operand into limbs so each partial product stays exact
    bits = int(math.floor(math.log2(_FFT_SAFE / (la * field.q))))
    if bits < 1:
        return kernels.group_convolve(field, a, b)
    out = np.zeros(field.q, dtype=np.int64)
    mask = (1 << bits) - 1
    shift = 0
    rest = b.copy()
    while rest.any():
        out += _fft_convolve(field, a, rest & mask) << shift
        rest >>= bits
        shift += bits
    return out


def _check_counting(instance: EquationInstance, limit: int) -> None:
    if instance.field.q > limit:
        raise CapacityError(f"q = {instance.field.q} exceeds the counting limit {limit}")


def count_all_b(instance: EquationInstance, region: SearchRegion | None = None, limit: int = COUNT_LIMIT) -> np.ndarray:
    """N_b(r) for every b at once (index = encoding of b)."""
    _check_counting(instance, limit)
    region = region or full_region(instance)
    sizes = region.sizes()
    acc = _value_distribution(instance, 0, sizes[0])
    for i in range(1, instance.m):
        acc = convolve_group(instance.field, acc, _value_distribution(instance, i, sizes[i]))
    if int(acc.sum()) != region.volume:
        raise ArithmeticError("convolution lost mass")
    return acc


def count_brute(
    instance: EquationInstance,
    region: SearchRegion | None = None,
    limit: int = BRUTE_LIMIT,
    solutions: bool = False,
):
    """Direct enumeration of the search box; the reference for ``count_all_b``.

    With ``solutions=True`` also returns ``{b: [(x_1, ..., x_m), ...]}``.
    """
    region = region or full_region(instance)
    if region.volume > limit:
        raise CapacityError(f"search box of {region.volume} points exceeds {limit}")
    f = instance.field
    sizes = region.sizes()
    vals = [instance.values(i, n) for i, n in enumerate(sizes)]
    if solutions:
        sols: dict[int, list[tuple[int, ...]]] = {}
        counts = np.zeros(f.q, dtype=np.int64)
        for xs in itertools.product(*(range(n) for n in sizes)):
            tot = 0
            for v, x in zip(vals, xs):
                tot = f.add(tot, int(v[x]))
            counts[tot] += 1
            sols.setdefault(tot, []).append(xs)
        return counts, sols
    while len(vals) > 3:
        a, b = vals.pop(0), vals.pop(0)
        vals.insert(0, f.add_vec(a[:, None], b[None, :]).ravel())
    zero = np.zeros(1, dtype=np.int64)
    while len(vals) < 3:
        vals.append(zero)
    return kernels.brute_counts(f, *vals)


# -- character sums ------------------------------------------------------------------


def _mul_outer(field: Field, mus: np.ndarray, v: np.ndarray) -> np.ndarray:
    if field.nu == 1:
        return mus[:, None] * v[None, :] % field.p
    return np.stack([field.scale_vec(int(mu), v) for mu in mus])


def character_sums(field: Field, values: np.ndarray, chunk: int = 256) -> np.ndarray:
    """S(mu) = sum_v psi(mu v) over the given values, for every mu in F_q."""
    out = np.empty(field.q, dtype=np.complex128)
    for start in range(0, field.q, chunk):
        mus = np.arange(start, min(start + chunk, field.q), dtype=np.int64)
        out[start : start + len(mus)] = field.psi_vec(_mul_outer(field, mus, values)).sum(axis=1)
    return out


def charsum_products(instance: EquationInstance, region: SearchRegion | None = None) -> np.ndarray:
    """P(mu) = prod_i sum_{x in X_i} psi(mu a_i g_i^x) over the region."""
    region = region or full_region(instance)
    prod = np.ones(instance.field.q, dtype=np.complex128)
    for i, n in enumerate(region.sizes()):
        prod *= character_sums(instance.field, instance.values(i, n))
    return prod


def count_via_charsum(
    instance: EquationInstance,
    b: FieldElement | int | None = None,
    region: SearchRegion | None = None,
    products: np.ndarray | None = None,
) -> float:
    """N_b(r) = (1/q) sum_mu psi(-mu b) P(mu), evaluated in floating point."""
    f = instance.field
    b_enc = instance.b.enc if b is None else (b.enc if isinstance(b, FieldElement) else b)
    P = charsum_products(instance, region) if products is None else products
    mus = np.arange(f.q, dtype=np.int64)
    twist = f.psi_vec(f.scale_vec(f.neg(b_enc), mus))
    return float(np.sum(twist * P).real / f.q)


def count_all_via_charsum(instance: EquationInstance, region: SearchRegion | None = None) -> np.ndarray:
    P = charsum_products(instance, region)
    return np.array([count_via_charsum(instance, b, region, P) for b in range(instance.field.q)])


def mean_square_via_charsums(instance: EquationInstance, region: SearchRegion | None = None) -> float:
    """(1/q) sum_{mu != 0} prod_i |S_i(mu)|^2, which equals sum_b Delta_b^2."""
    P = charsum_products(instance, region)
    return float(np.sum(np.abs(P[1:]) ** 2) / instance.field.q)


def weil_check(a: FieldElement, g: FieldElement, s: int, mu: FieldElement) -> tuple[float, float]:
    """|sum_{x < s} psi(a mu g^x)| together with the bound sqrt(q)."""
    if mu.enc == 0:
        raise DomainError("the bound concerns nontrivial characters, mu must be nonzero")
    f = a.field
    vals = f.powers(g.enc, s, f.mul(a.enc, mu.enc))
    return float(abs(np.sum(f.psi_vec(vals)))), math.sqrt(f.q)


def weil_scan(a: FieldElement, g: FieldElement, s: int) -> np.ndarray:
    """|sum_{x < s} psi(a mu g^x)| for every mu (entry 0 is the trivial character)."""
    f = a.field
    return np.abs(character_sums(f, f.powers(g.enc, s, a.enc)))


# -- the census ------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityReport:
    b: int
    N: int
    main_term: Fraction
    delta: Fraction
    threshold: float
    exceptional: bool


@dataclass(frozen=True)
class CensusReport:
    q: int
    r: int
    per_b: dict[int, DensityReport]
    E_r: Fraction
    E_bound: int
    exceptional_count: int
    exceptional_bound: float
    delta_param: float

    @property
    def e_bound_holds(self) -> bool:
        return self.E_r < self.E_bound

    @property
    def exceptional_bound_holds(self) -> bool:
        return self.exceptional_count <= self.exceptional_bound

    @property
    def ok(self) -> bool:
        return self.e_bound_holds and self.exceptional_bound_holds

    def summary(self) -> str:
        return (
            f"E(r)={self.E_r} bound={self.E_bound} "
            f"exceptional={self.exceptional_count}/{self.exceptional_bound:.12g}"
        )


def census(
    instance: EquationInstance,
    delta: float | None = None,
    region: SearchRegion | None = None,
    limit: int = COUNT_LIMIT,
) -> CensusReport:
    """Deviation of every N_b(r) from its main term, and the bounds they obey.

    The threshold is delta * sqrt(r q^(m-2)) and E(r) is compared with
    q^(m-1) r; for three terms these are delta * sqrt(r q) and q^2 r.
    """
    f = instance.field
    q = f.q
    delta = sqrt_log_delta(q) if delta is None else delta
    if not delta > 0:
        raise DomainError("delta must be positive")
    region = region or min_r(instance, delta)
    counts = count_all_b(instance, region, limit)
    main = Fraction(region.volume, q)
    r, m = region.r, instance.m
    threshold = delta * math.sqrt(r * q ** (m - 2))
    per_b = {}
    E = Fraction(0)
    n_exc = 0
    for b in range(q):
        N = int(counts[b])
        dev = N - main
        exc = abs(dev) >= threshold
        n_exc += exc
        E += dev * dev
        per_b[b] = DensityReport(b, N, main, dev, threshold, exc)
    return CensusReport(q, r, per_b, E, q ** (m - 1) * r, n_exc, q / delta**2, delta)


CSV_HEADER = "b,N,main_num,main_den,delta_num,delta_den,threshold,exceptional"


def census_csv(report: CensusReport) -> str:
    lines = [CSV_HEADER]
    for b in sorted(report.per_b):
        d = report.per_b[b]
        lines.append(
            f"{b},{d.N},{d.main_term.numerator},{d.main_term.denominator},"
            f"{d.delta.numerator},{d.delta.denominator},{d.threshold:.12g},{int(d.exceptional)}"
        )
    return "\n".join(lines) + "\n"
