"""Hot numeric kernels: Ryser permanent, LU determinant, phase-class counting.

Two interchangeable backends are built at import time:

* ``numba``  - scalar/batch loops compiled with ``@njit`` (default when numba
  imports cleanly),
* ``numpy``  - vectorized pure-numpy fallback with the same results.

Set the environment variable ``MULTIPORT_PURE_NUMPY=1`` before import to
force the numpy backend; ``benchmarks/bench_kernels.py`` times both.  All
kernels are deterministic: fixed Gray-code/Kahan order on the numba path,
fixed chunking with numpy pairwise sums on the numpy path.
"""

from __future__ import annotations

import functools
import itertools
import os

import numpy as np

_TRUTHY = ("1", "true", "yes", "on")
PURE_NUMPY_REQUESTED = os.environ.get("MULTIPORT_PURE_NUMPY", "").strip().lower() in _TRUTHY

PIVOT_NULL_SCALE = 1e-14  # pivot column counts as null below this times max|entry|

_SUBSET_CHUNK = 1 << 16  # subsets per block in the numpy Ryser path


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _permanent_numpy(a: np.ndarray) -> complex:
    """Ryser permanent, subsets expanded blockwise into a matmul."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    full = 1 << n
    bits = np.arange(n, dtype=np.uint64)
    block_totals = []
    for start in range(1, full, _SUBSET_CHUNK):
        subs = np.arange(start, min(start + _SUBSET_CHUNK, full), dtype=np.uint64)
        masks = ((subs[:, None] >> bits) & 1).astype(np.float64)  # (B, n) column picks
        rowsums = masks @ a.T  # (B, n): sum_{j in S} a[i, j]
        prods = rowsums.prod(axis=1)
        odd = (masks.sum(axis=1).astype(np.int64) & 1).astype(bool)
        signs = np.where(odd, -1.0, 1.0)  # (-1)^{|S|}
        block_totals.append(np.sum(signs * prods))
    total = complex(np.sum(block_totals))
    return -total if n & 1 else total


def _batch_permanent_numpy(mats: np.ndarray) -> np.ndarray:
    """Permanents of a stack of equal-size square matrices."""
    mats = np.ascontiguousarray(mats, dtype=np.complex128)
    b, n = mats.shape[0], mats.shape[1]
    if b == 0:
        return np.zeros(0, dtype=np.complex128)
    if n == 0:
        return np.ones(b, dtype=np.complex128)
    if n > 13:  # subset table too wide; fall back to scalar loop
        return np.array([_permanent_numpy(m) for m in mats], dtype=np.complex128)
    full = 1 << n
    bits = np.arange(n, dtype=np.uint64)
    subs = np.arange(1, full, dtype=np.uint64)
    masks = ((subs[:, None] >> bits) & 1).astype(np.float64)  # (S, n)
    odd = (masks.sum(axis=1).astype(np.int64) & 1).astype(bool)
    signs = np.where(odd, -1.0, 1.0)
    out = np.empty(b, dtype=np.complex128)
    step = max(1, (1 << 22) // (full * n))
    for lo in range(0, b, step):
        chunk = mats[lo:lo + step]
        rowsums = np.einsum("sj,bij->bsi", masks, chunk)  # (B, S, n)
        prods = rowsums.prod(axis=2)
        out[lo:lo + step] = prods @ signs
    if n & 1:
        out = -out
    return out


def _determinant_numpy(a: np.ndarray) -> complex:
    """LU with partial pivoting; exact 0 when a pivot column is numerically null."""
    m = np.array(a, dtype=np.complex128, copy=True)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    amax = float(np.abs(m).max())
    if amax == 0.0:
        return 0.0 + 0.0j
    thresh = PIVOT_NULL_SCALE * amax
    det = 1.0 + 0.0j
    for k in range(n):
        col = np.abs(m[k:, k])
        piv = int(col.argmax()) + k
        if col.max() <= thresh:
            return 0.0 + 0.0j
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            det = -det
        det *= m[k, k]
        if k + 1 < n:
            f = m[k + 1:, k] / m[k, k]
            m[k + 1:, k + 1:] -= f[:, None] * m[k, k + 1:]
    return complex(det)


def _batch_determinant_numpy(mats: np.ndarray) -> np.ndarray:
    """LU determinants vectorized across the batch axis."""
    m = np.array(mats, dtype=np.complex128, copy=True)
    b, n = m.shape[0], m.shape[1]
    if b == 0:
        return np.zeros(0, dtype=np.complex128)
    if n == 0:
        return np.ones(b, dtype=np.complex128)
    amax = np.abs(m).reshape(b, -1).max(axis=1)
    thresh = PIVOT_NULL_SCALE * amax
    det = np.where(amax > 0.0, 1.0 + 0.0j, 0.0 + 0.0j)
    alive = amax > 0.0
    bidx = np.arange(b)
    for k in range(n):
        col = np.abs(m[:, k:, k])
        piv = col.argmax(axis=1) + k
        pmag = col.max(axis=1)
        died = alive & (pmag <= thresh)
        det[died] = 0.0
        alive &= ~died
        swap = alive & (piv != k)
        if swap.any():
            rows_k = m[swap, k, :].copy()
            m[swap, k, :] = m[bidx[swap], piv[swap], :]
            m[bidx[swap], piv[swap], :] = rows_k
            det[swap] = -det[swap]
        pivval = m[:, k, k]
        det[alive] *= pivval[alive]
        if k + 1 < n:
            safe = np.where(alive, pivval, 1.0)
            f = m[:, k + 1:, k] / safe[:, None]
            f[~alive] = 0.0
            m[:, k + 1:, k + 1:] -= f[:, :, None] * m[:, None, k, k + 1:]
    return det


def _phase_counts_numpy(dr: np.ndarray, ds: np.ndarray, n: int,
                        perms: np.ndarray, parity: np.ndarray) -> np.ndarray:
    """Counts[2, n]: many-particle path phases mod n, split by permutation parity."""
    nperm, N = perms.shape
    theta = np.zeros(nperm, dtype=np.int64)
    for j in range(N):
        theta += dr[perms[:, j]] * int(ds[j])
    k = theta % n
    out = np.zeros((2, n), dtype=np.int64)
    out[0] = np.bincount(k[parity == 0], minlength=n)
    out[1] = np.bincount(k[parity == 1], minlength=n)
    return out


_NUMPY_BACKEND = {
    "permanent": _permanent_numpy,
    "batch_permanent": _batch_permanent_numpy,
    "determinant": _determinant_numpy,
    "batch_determinant": _batch_determinant_numpy,
    "phase_counts": _phase_counts_numpy,
}


# ---------------------------------------------------------------------------
# numba backend (same contracts, explicit loops)
# ---------------------------------------------------------------------------

def _build_numba_backend():
    try:
        from numba import njit
    except ImportError:
        return None

    jit = functools.partial(njit, cache=True, nogil=True)

    @jit
    def permanent_nb(a):
        n = a.shape[0]
        if n == 0:
            return 1.0 + 0.0j
        rows = np.zeros(n, dtype=np.complex128)
        total = 0.0 + 0.0j
        comp = 0.0 + 0.0j
        sign = 1.0
        for k in range(1, 1 << n):
            j = 0
            kk = k
            while kk & 1 == 0:
                kk >>= 1
                j += 1
            g = k ^ (k >> 1)
            if (g >> j) & 1:
                for i in range(n):
                    rows[i] += a[i, j]
            else:
                for i in range(n):
                    rows[i] -= a[i, j]
            sign = -sign
            prod = 1.0 + 0.0j
            for i in range(n):
                prod *= rows[i]
            term = sign * prod
            y = term - comp  # Kahan-compensated outer sum
            t = total + y
            comp = (t - total) - y
            total = t
        if n & 1:
            total = -total
        return total

    @jit
    def batch_permanent_nb(mats):
        b = mats.shape[0]
        out = np.empty(b, dtype=np.complex128)
        for i in range(b):
            out[i] = permanent_nb(mats[i])
        return out

    @jit
    def determinant_nb(a):
        n = a.shape[0]
        if n == 0:
            return 1.0 + 0.0j
        m = a.copy()
        amax = 0.0
        for i in range(n):
            for j in range(n):
                v = abs(m[i, j])
                if v > amax:
                    amax = v
        if amax == 0.0:
            return 0.0 + 0.0j
        thresh = PIVOT_NULL_SCALE * amax
        det = 1.0 + 0.0j
        for k in range(n):
            piv = k
            pmag = abs(m[k, k])
            for i in range(k + 1, n):
                v = abs(m[i, k])
                if v > pmag:
                    pmag = v
                    piv = i
            if pmag <= thresh:
                return 0.0 + 0.0j
            if piv != k:
                for j in range(n):
                    tmp = m[k, j]
                    m[k, j] = m[piv, j]
                    m[piv, j] = tmp
                det = -det
            det *= m[k, k]
            for i in range(k + 1, n):
                f = m[i, k] / m[k, k]
                for j in range(k + 1, n):
                    m[i, j] -= f * m[k, j]
        return det

    @jit
    def batch_determinant_nb(mats):
        b = mats.shape[0]
        out = np.empty(b, dtype=np.complex128)
        for i in range(b):
            out[i] = determinant_nb(mats[i])
        return out

    @jit
    def phase_counts_nb(dr, ds, n, perms, parity):
        nperm, N = perms.shape
        out = np.zeros((2, n), dtype=np.int64)
        for p_i in range(nperm):
            th = 0
            for j in range(N):
                th += dr[perms[p_i, j]] * ds[j]
            out[parity[p_i], th % n] += 1
        return out

    def permanent(a):
        return complex(permanent_nb(np.ascontiguousarray(a, dtype=np.complex128)))

    def batch_permanent(mats):
        return batch_permanent_nb(np.ascontiguousarray(mats, dtype=np.complex128))

    def determinant(a):
        return complex(determinant_nb(np.ascontiguousarray(a, dtype=np.complex128)))

    def batch_determinant(mats):
        return batch_determinant_nb(np.ascontiguousarray(mats, dtype=np.complex128))

    def phase_counts(dr, ds, n, perms, parity):
        return phase_counts_nb(dr, ds, n, perms, parity)

    return {
        "permanent": permanent,
        "batch_permanent": batch_permanent,
        "determinant": determinant,
        "batch_determinant": batch_determinant,
        "phase_counts": phase_counts,
    }


BACKENDS: dict[str, dict] = {"numpy": _NUMPY_BACKEND}
_numba_backend = _build_numba_backend()
if _numba_backend is not None:
    BACKENDS["numba"] = _numba_backend

HAVE_NUMBA = "numba" in BACKENDS
ACTIVE_BACKEND = "numpy" if (PURE_NUMPY_REQUESTED or not HAVE_NUMBA) else "numba"
_ACTIVE = BACKENDS[ACTIVE_BACKEND]


def active_backend() -> str:
    return ACTIVE_BACKEND


def permanent(a: np.ndarray) -> complex:
    return _ACTIVE["permanent"](a)


def batch_permanent(mats: np.ndarray) -> np.ndarray:
    return _ACTIVE["batch_permanent"](mats)


def determinant(a: np.ndarray) -> complex:
    return _ACTIVE["determinant"](a)


def batch_determinant(mats: np.ndarray) -> np.ndarray:
    return _ACTIVE["batch_determinant"](mats)


@functools.lru_cache(maxsize=None)
def permutation_table(N: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of range(N) (int8, N <= 9) and their parities (0 even, 1 odd)."""
    if N > 9:
        raise ValueError("permutation table capped at N=9")
    if N == 0:
        perms = np.zeros((1, 0), dtype=np.int8)
    else:
        perms = np.array(list(itertools.permutations(range(N))), dtype=np.int8)
    nperm = perms.shape[0]
    parity = np.zeros(nperm, dtype=np.int8)
    if N >= 2:
        iu, ju = np.triu_indices(N, 1)
        step = max(1, (1 << 24) // max(1, len(iu)))
        for lo in range(0, nperm, step):
            chunk = perms[lo:lo + step].astype(np.int16)
            inv = (chunk[:, iu] > chunk[:, ju]).sum(axis=1)
            parity[lo:lo + step] = (inv & 1).astype(np.int8)
    perms.setflags(write=False)
    parity.setflags(write=False)
    return perms, parity


def phase_counts(dr: np.ndarray, ds: np.ndarray, n: int) -> np.ndarray:
    """(2, n) int64 path counts by phase class and permutation parity.

    dr, ds are 1-based mode assignment lists of equal length N <= 9.
    """
    dr = np.ascontiguousarray(dr, dtype=np.int64)
    ds = np.ascontiguousarray(ds, dtype=np.int64)
    perms, parity = permutation_table(len(dr))
    return _ACTIVE["phase_counts"](dr, ds, int(n), perms, parity)
