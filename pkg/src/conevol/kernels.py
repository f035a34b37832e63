"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

Two loops dominate runtime at desk scale:

* ``ordered_rank_sums`` walks all N**n ordered index tuples of the brute-force
  functional and buckets tuple products by the rank of the tuple's index set;
* ``power_sum_batch`` evaluates polynomials of the form
  ``sum_r w_r * (a_r . x)**d`` at many points at once (segment grids in the
  optimizers, vertex scans).

The backend is chosen once at import time.  Setting ``CONEVOL_DISABLE_NUMBA=1``
(or running without numba installed) selects the numpy path.  Both flavours are
always importable by name so tests and the benchmark can compare them.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("CONEVOL_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"


# ---------------------------------------------------------------------------
# ordered-tuple rank sums


def ordered_rank_sums_numpy(x: np.ndarray, rank_table: np.ndarray, n: int) -> np.ndarray:
    """Sum of prod(x[i_1..i_n]) over ordered tuples, bucketed by tuple rank.

    ``rank_table[mask]`` is the rank of the index set encoded by bitmask
    ``mask``; only masks with at most n bits are ever looked up.
    Returns an array ``s`` of length n+1 with ``s[k]`` the rank-k total.
    """
    x = np.asarray(x, dtype=np.float64)
    N = x.shape[0]
    bits = np.left_shift(np.int64(1), np.arange(N, dtype=np.int64))
    masks = np.zeros(1, dtype=np.int64)
    prods = np.ones(1, dtype=np.float64)
    for _ in range(n):
        masks = (masks[:, None] | bits[None, :]).ravel()
        prods = (prods[:, None] * x[None, :]).ravel()
    ranks = rank_table[masks]
    out = np.zeros(n + 1)
    for k in range(n + 1):
        sel = ranks == k
        if sel.any():
            out[k] = np.sum(prods[sel])  # pairwise summation
    return out


def _ordered_rank_sums_py(x, rank_table, n):
    N = x.shape[0]
    out = np.zeros(n + 1)
    comp = np.zeros(n + 1)
    idx = np.zeros(n, dtype=np.int64)
    pmask = np.zeros(n + 1, dtype=np.int64)
    pprod = np.ones(n + 1)
    depth = 0
    while True:
        # descend, filling prefix state for positions depth..n-1
        while depth < n:
            i = idx[depth]
            pmask[depth + 1] = pmask[depth] | (np.int64(1) << np.int64(i))
            pprod[depth + 1] = pprod[depth] * x[i]
            depth += 1
        k = rank_table[pmask[n]]
        v = pprod[n]
        # Neumaier compensated accumulation
        t = out[k] + v
        if abs(out[k]) >= abs(v):
            comp[k] += (out[k] - t) + v
        else:
            comp[k] += (v - t) + out[k]
        out[k] = t
        # odometer increment
        depth = n - 1
        while depth >= 0:
            idx[depth] += 1
            if idx[depth] < N:
                break
            idx[depth] = 0
            depth -= 1
        if depth < 0:
            break
    return out + comp


# ---------------------------------------------------------------------------
# batched power-sum polynomials


def power_sum_batch_numpy(points: np.ndarray, rows: np.ndarray, weights: np.ndarray,
                          degree: int) -> np.ndarray:
    """Evaluate ``sum_r weights[r] * (rows[r] . p)**degree`` for each point p."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    S = pts @ rows.T
    return np.power(S, degree) @ weights


def _power_reduce_py(S, weights, degree):
    # S[g, r] = rows[r] . points[g]; the matmul itself stays in BLAS
    G, m = S.shape
    out = np.zeros(G)
    for g in range(G):
        acc = 0.0
        for r in range(m):
            s = S[g, r]
            p = 1.0
            for _ in range(degree):
                p *= s
            acc += weights[r] * p
        out[g] = acc
    return out


if HAVE_NUMBA:
    _ordered_rank_sums_jit = njit(cache=True)(_ordered_rank_sums_py)
    _power_reduce_jit = njit(cache=True)(_power_reduce_py)

    def ordered_rank_sums_numba(x, rank_table, n):
        return _ordered_rank_sums_jit(np.ascontiguousarray(x, dtype=np.float64),
                                      np.ascontiguousarray(rank_table, dtype=np.int64), int(n))

    def power_sum_batch_numba(points, rows, weights, degree):
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        S = np.ascontiguousarray(pts @ np.asarray(rows, dtype=np.float64).T)
        return _power_reduce_jit(S, np.ascontiguousarray(weights, dtype=np.float64), int(degree))
else:  # pragma: no cover
    ordered_rank_sums_numba = ordered_rank_sums_numpy
    power_sum_batch_numba = power_sum_batch_numpy


IMPLEMENTATIONS = {
    "numpy": {"ordered_rank_sums": ordered_rank_sums_numpy,
              "power_sum_batch": power_sum_batch_numpy},
    "numba": {"ordered_rank_sums": ordered_rank_sums_numba,
              "power_sum_batch": power_sum_batch_numba},
}

ordered_rank_sums = IMPLEMENTATIONS[BACKEND]["ordered_rank_sums"]
power_sum_batch = IMPLEMENTATIONS[BACKEND]["power_sum_batch"]
