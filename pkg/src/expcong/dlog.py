"""Baby-step/giant-step discrete logarithms inside the cyclic group <g>."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .arith import factorize
from .errors import DomainError, ParameterError
from .ff import FieldElement


@dataclass
class DlogStats:
    queries: int = 0
    giant_steps: int = 0
    max_steps: int = 0


@dataclass(frozen=True)
class DlogTable:
    base: FieldElement
    order: int
    m: int
    baby_map: dict[int, int] = dc_field(repr=False)
    giant: int = dc_field(repr=False)  # g^(-m)


def build_table(g: FieldElement, s: int) -> DlogTable:
    """Baby steps g^j for j < ceil(sqrt(s)), keyed by encoding."""
    f = g.field
    if s < 1 or f.pow(g.enc, s) != 1:
        raise ParameterError(f"{g!r} does not have order dividing {s}")
    for ell in factorize(s).primes:
        if f.pow(g.enc, s // ell) == 1:
            raise ParameterError(f"{g!r} has order dividing {s // ell} < {s}")
    m = math.isqrt(s - 1) + 1 if s > 1 else 1
    baby: dict[int, int] = {}
    x = 1
    for j in range(m):
        baby[x] = j
        x = f.mul(x, g.enc)
    giant = f.inv(f.pow(g.enc, m))
    return DlogTable(g, s, m, baby, giant)


def dlog(table: DlogTable, h: FieldElement | int, stats: DlogStats | None = None) -> int | None:
    """x in [0, s) with g^x = h, or None when h is not in <g>."""
    f = table.base.field
    y = h.enc if isinstance(h, FieldElement) else h
    if y == 0:
        raise DomainError("0 is not a power of any element")
    steps = 0
    result = None
    for i in range(table.m):
        steps += 1
        j = table.baby_map.get(y)
        if j is not None:
            result = (i * table.m + j) % table.order
            break
        y = f.mul(y, table.giant)
    if stats is not None:
        stats.queries += 1
        stats.giant_steps += steps
        stats.max_steps = max(stats.max_steps, steps)
    return result


def dlog_batch(table: DlogTable, hs, stats: DlogStats | None = None) -> np.ndarray:
    """Vectorized ``dlog`` over an array of nonzero encodings; -1 where absent."""
    hs = np.asarray(hs, dtype=np.int64)
    if np.any(hs == 0):
        raise DomainError("0 is not a power of any element")
    f = table.base.field
    out, steps, max_steps = kernels.dlog_many(f, hs, table.baby_map, table.giant, table.m, table.order)
    if stats is not None:
        stats.queries += len(hs)
        stats.giant_steps += int(steps)
        stats.max_steps = max(stats.max_steps, int(max_steps))
    return out


def dlog_naive(g: FieldElement, s: int, h: FieldElement | int) -> int | None:
    """Exhaustive search over g^0 .. g^(s-1); the oracle for ``dlog``."""
    f = g.field
    target = h.enc if isinstance(h, FieldElement) else h
    x = 1
    for e in range(s):
        if x == target:
            return e
        x = f.mul(x, g.enc)
    return None
