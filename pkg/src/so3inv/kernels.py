"""Sector-blocked state-sum contraction kernels.

A *plan* describes a braid closure with one strand cut open: per crossing, a
sparse list of (source state, target state, entry id) triples grouped by
weight sector, plus the starting column states.  The same contraction runs

* modulo a prime on several evaluation lanes (int64), or
* on absolute values (float64), which bounds the size of the exact answer.

The numba kernel is used when numba imports and ``SO3INV_DISABLE_NUMBA`` is
not set; otherwise a vectorized numpy version computes the same thing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

_DISABLED = os.environ.get("SO3INV_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:  # pragma: no cover - import guard
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


@dataclass
class Plan:
    """Arrays consumed by the kernels.

    src/dst are sector-local indices; ``ptr[c, s]:ptr[c, s+1]`` is the slice of
    crossing c whose source lies in sector s.  Columns of sector s are
    ``col_ptr[s]:col_ptr[s+1]`` with sector-local start states ``col_state``.
    """

    src: np.ndarray  # int64 (nnz,)
    dst: np.ndarray  # int64 (nnz,)
    eid: np.ndarray  # int64 (nnz,)
    ptr: np.ndarray  # int64 (n_cross, n_sec + 1), absolute offsets into src/dst/eid
    sec_size: np.ndarray  # int64 (n_sec,)
    col_state: np.ndarray  # int64 (n_cols,)
    col_ptr: np.ndarray  # int64 (n_sec + 1,)
    col_pivot: np.ndarray  # int64 (n_cols,) id of the pivotal weight entry


def _contract_impl(plan_src, plan_dst, plan_eid, ptr, sec_size, col_state, col_ptr,
                   col_pivot, coef, pivots, modulus):
    n_cross = ptr.shape[0]
    n_sec = sec_size.shape[0]
    lanes = coef.shape[1]
    out = np.zeros(lanes, dtype=coef.dtype)
    for s in range(n_sec):
        c0 = col_ptr[s]
        nc = col_ptr[s + 1] - c0
        if nc == 0:
            continue
        dim = sec_size[s]
        X = np.zeros((dim, nc, lanes), dtype=coef.dtype)
        for c in range(nc):
            for l in range(lanes):
                X[col_state[c0 + c], c, l] = 1
        for x in range(n_cross):
            Y = np.zeros((dim, nc, lanes), dtype=coef.dtype)
            for e in range(ptr[x, s], ptr[x, s + 1]):
                a = plan_src[e]
                b = plan_dst[e]
                k = plan_eid[e]
                for c in range(nc):
                    for l in range(lanes):
                        v = X[a, c, l]
                        if v != 0:
                            if modulus > 0:
                                Y[b, c, l] = (Y[b, c, l] + coef[k, l] * v) % modulus
                            else:
                                Y[b, c, l] += coef[k, l] * v
            X = Y
        for c in range(nc):
            st = col_state[c0 + c]
            pv = col_pivot[c0 + c]
            for l in range(lanes):
                if modulus > 0:
                    out[l] = (out[l] + pivots[pv, l] * X[st, c, l]) % modulus
                else:
                    out[l] += pivots[pv, l] * X[st, c, l]
    return out


if HAVE_NUMBA:
    _contract_numba = njit(cache=True)(_contract_impl)


def _contract_numpy(plan_src, plan_dst, plan_eid, ptr, sec_size, col_state, col_ptr,
                    col_pivot, coef, pivots, modulus):
    lanes = coef.shape[1]
    out = np.zeros(lanes, dtype=coef.dtype)
    for s in range(len(sec_size)):
        c0, c1 = col_ptr[s], col_ptr[s + 1]
        nc = c1 - c0
        if nc == 0:
            continue
        X = np.zeros((sec_size[s], nc, lanes), dtype=coef.dtype)
        X[col_state[c0:c1], np.arange(nc), :] = 1
        for x in range(ptr.shape[0]):
            lo, hi = ptr[x, s], ptr[x, s + 1]
            contrib = coef[plan_eid[lo:hi]][:, None, :] * X[plan_src[lo:hi]]
            if modulus:
                contrib %= modulus
            Y = np.zeros_like(X)
            np.add.at(Y, plan_dst[lo:hi], contrib)
            if modulus:
                Y %= modulus
            X = Y
        picked = X[col_state[c0:c1], np.arange(nc), :] * pivots[col_pivot[c0:c1]]
        if modulus:
            picked %= modulus
        out += picked.sum(axis=0)
        if modulus:
            out %= modulus
    return out


def contract(plan: Plan, coef: np.ndarray, pivots: np.ndarray, modulus: int,
             backend: str | None = None) -> np.ndarray:
    """Run the contraction; ``modulus == 0`` means plain (float) arithmetic."""
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    fn = _contract_numba if backend == "numba" else _contract_numpy
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable")
    return fn(plan.src, plan.dst, plan.eid, plan.ptr, plan.sec_size, plan.col_state,
              plan.col_ptr, plan.col_pivot, coef, pivots, modulus)


def default_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
