"""Classical solver: enumerate the small-order variables, recover x_1 by BSGS.

Terms are re-indexed by descending order (s_1 >= s_2 >= s_3). For each pair
(x_2, x_3) with x_3 < min(r, s_3) the solver looks for x_1 with
g_1^{x_1} = a_1^{-1} (b - a_2 g_2^{x_2} - a_3 g_3^{x_3}). Pairs are visited
x_3-major, so "first solution" means lexicographically least in (x_3, x_2).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .census import EquationInstance, min_r, sqrt_log_delta
from .dlog import build_table
from .errors import DomainError, ParameterError


class Case(str, enum.Enum):
    R_LE_S3 = "R_LE_S3"
    R_GT_S3 = "R_GT_S3"


class Status(str, enum.Enum):
    FOUND = "Found"
    NO_SOLUTION = "NoSolution"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SolvePlan:
    perm: tuple[int, ...]  # user indices, largest order first
    orders: tuple[int, ...]  # orders in ``perm`` order
    r: int  # ceil of r_raw, at least 1, not clamped to s_3
    r_raw: float
    case: Case
    search_set_size: int

    @property
    def s1(self) -> int:
        return self.orders[0]

    @property
    def giant_bound(self) -> int:
        return math.isqrt(self.s1 - 1) + 1 if self.s1 > 1 else 1

    @property
    def work_bound(self) -> int:
        """search_set_size * ceil(sqrt(s_1)) giant steps."""
        return self.search_set_size * self.giant_bound


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    solution: tuple[int, ...] | None  # user term order
    dlog_queries: int
    pairs_scanned: int
    giant_steps: int
    max_giant_steps: int
    scanned_r: int
    plan: SolvePlan

    @property
    def scanned_size(self) -> int:
        return math.prod(self.plan.orders[1:-1]) * self.scanned_r if len(self.plan.orders) > 1 else 1


def _inner_count(orders: tuple[int, ...], n_last: int) -> int:
    if len(orders) == 1:
        return 1
    return math.prod(orders[1:-1]) * n_last


def plan(instance: EquationInstance, delta: float | None = None, r: int | None = None) -> SolvePlan:
    """Sort terms by order and size the truncated region; ``r`` overrides the computed value."""
    if instance.m > 3:
        raise ParameterError("the solver handles at most three terms")
    delta = sqrt_log_delta(instance.field.q) if delta is None else delta
    perm = tuple(instance.sorted_indices())
    orders = tuple(instance.terms[i].s for i in perm)
    region = min_r(instance, delta)
    r_unclamped = max(math.ceil(region.r_raw), 1) if r is None else r
    if r_unclamped < 1:
        raise ParameterError(f"r = {r} must be positive")
    case = Case.R_LE_S3 if r_unclamped <= orders[-1] else Case.R_GT_S3
    size = _inner_count(orders, min(r_unclamped, orders[-1]))
    return SolvePlan(perm, orders, r_unclamped, region.r_raw, case, size)


def verify(instance: EquationInstance, xs) -> bool:
    """True iff sum_i a_i g_i^{x_i} = b, exponents given in user term order."""
    if len(xs) != instance.m:
        raise DomainError(f"expected {instance.m} exponents, got {len(xs)}")
    f = instance.field
    total = 0
    for t, x in zip(instance.terms, xs):
        if not 0 <= x < t.s:
            raise DomainError(f"exponent {x} outside [0, {t.s})")
        total = f.add(total, f.mul(t.a.enc, f.pow(t.g.enc, x)))
    return total == instance.b.enc


def solve_classical(
    instance: EquationInstance, delta: float | None = None, full_scan: bool = False, r: int | None = None
) -> SolveOutcome:
    """Either find a solution, prove there is none, or report the scan inconclusive.

    Without ``full_scan`` and with r <= s_3 only x_3 < r is searched; an empty
    result there is ``Inconclusive`` rather than a proof of absence.
    """
    pl = plan(instance, delta, r)
    f = instance.field
    t1 = instance.terms[pl.perm[0]]
    table = build_table(t1.g, t1.s)
    a1_inv = f.inv(t1.a.enc)
    s_last = pl.orders[-1]
    if pl.case is Case.R_LE_S3 and not full_scan:
        n_last = min(pl.r, s_last)
    else:
        n_last = s_last

    b_scaled = f.mul(a1_inv, instance.b.enc)
    if instance.m == 1:
        outer = np.array([b_scaled], dtype=np.int64)
        inner = np.zeros(1, dtype=np.int64)
    else:
        last = instance.values(pl.perm[-1], n_last)
        outer = f.sub_vec(np.full_like(last, b_scaled), f.scale_vec(a1_inv, last))
        if instance.m == 3:
            inner = f.scale_vec(a1_inv, instance.values(pl.perm[1]))
        else:
            inner = np.zeros(1, dtype=np.int64)

    x1, j, k, queries, steps, max_steps, pairs = kernels.scan_pairs(
        f, outer, inner, table.baby_map, table.giant, table.m, t1.s
    )
    solution = None
    if x1 >= 0:
        sorted_xs = [int(x1)]
        if instance.m == 3:
            sorted_xs += [int(j), int(k)]
        elif instance.m == 2:
            sorted_xs += [int(k)]
        xs = [0] * instance.m
        for pos, user_idx in enumerate(pl.perm):
            xs[user_idx] = sorted_xs[pos]
        solution = tuple(xs)
        assert verify(instance, solution), "solver returned a non-solution"
        status = Status.FOUND
    elif n_last == s_last:
        status = Status.NO_SOLUTION
    else:
        status = Status.INCONCLUSIVE
    return SolveOutcome(status, solution, int(queries), int(pairs), int(steps), int(max_steps), n_last, pl)
