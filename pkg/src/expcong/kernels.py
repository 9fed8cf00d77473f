"""Backend selection for the hot loops.

The Cython extension ``_kernels`` is used when it imports; otherwise (or with
``EXPCONG_PURE=1`` in the environment) the numpy fallback in ``_kernels_py``
runs. Both return identical results.
"""
from __future__ import annotations

import contextlib
import os
from typing import TYPE_CHECKING, Iterator

import numpy as np

from . import _kernels_py

if TYPE_CHECKING:
    from .ff import Field

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

COMPILED_AVAILABLE = _compiled is not None
DENSE_LIMIT = 2**26

_impl = _kernels_py if (_compiled is None or os.environ.get("EXPCONG_PURE")) else _compiled


def backend() -> str:
    return "compiled" if _impl is _compiled else "python"


@contextlib.contextmanager
def use_backend(name: str) -> Iterator[None]:
    """Temporarily force ``"compiled"`` or ``"python"``."""
    global _impl
    if name == "compiled" and _compiled is None:
        raise RuntimeError("compiled kernels are not built")
    prev = _impl
    _impl = _compiled if name == "compiled" else _kernels_py
    try:
        yield
    finally:
        _impl = prev


def _native_ok(field: Field) -> bool:
    # uint64 products stay exact only for p < 2^32
    return _impl is _compiled and field.p < 2**32 and field.q < 2**62


def _mod(field: Field) -> np.ndarray:
    return np.asarray(field.modulus, dtype=np.int64)


def powers(field: Field, g: int, n: int, coeff: int = 1) -> np.ndarray:
    impl = _impl if _native_ok(field) else _kernels_py
    return impl.powers(g, n, coeff, field.p, field.nu, _mod(field))


def brute_counts(field: Field, v1, v2, v3) -> np.ndarray:
    impl = _impl if _native_ok(field) else _kernels_py
    arrs = [np.ascontiguousarray(v, dtype=np.int64) for v in (v1, v2, v3)]
    return impl.brute_counts(*arrs, field.q, field.p, field.nu)


def group_convolve(field: Field, a, b) -> np.ndarray:
    impl = _impl if _native_ok(field) else _kernels_py
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    return impl.group_convolve(a, b, field.q, field.p, field.nu)


def _dense(field: Field, baby: dict[int, int]) -> np.ndarray:
    dense = np.full(field.q, -1, dtype=np.int64)
    dense[np.fromiter(baby.keys(), dtype=np.int64, count=len(baby))] = np.fromiter(
        baby.values(), dtype=np.int64, count=len(baby)
    )
    return dense


def dlog_many(field: Field, hs, baby: dict[int, int], giant: int, m_steps: int, s: int):
    hs = np.ascontiguousarray(hs, dtype=np.int64)
    if _native_ok(field) and field.q <= DENSE_LIMIT:
        return _impl.dlog_many(hs, _dense(field, baby), giant, m_steps, s, field.p, field.nu, _mod(field))
    return _kernels_py.dlog_many(hs, baby, giant, m_steps, s, field.p, field.nu, field.modulus)


def scan_pairs(field: Field, u_outer, w_inner, baby: dict[int, int], giant: int, m_steps: int, s1: int):
    u = np.ascontiguousarray(u_outer, dtype=np.int64)
    w = np.ascontiguousarray(w_inner, dtype=np.int64)
    if _native_ok(field) and field.q <= DENSE_LIMIT:
        return _impl.scan_pairs(u, w, _dense(field, baby), giant, m_steps, s1, field.p, field.nu, _mod(field))
    return _kernels_py.scan_pairs(u, w, baby, giant, m_steps, s1, field.p, field.nu, field.modulus)
