"""Complex matrices for scattering: builders, permanent, determinant, submatrix.

Matrices are plain ``numpy.ndarray`` of complex128.  The permanent uses
Ryser's inclusion-exclusion with Gray-code subset updates, O(2^N * N); the
determinant uses LU with partial pivoting.  Both are served by
:mod:`multiport.kernels` (numba or pure-numpy backend).
"""

from __future__ import annotations

import itertools
import json
import math
from pathlib import Path

import numpy as np

from . import kernels
from .arrangements import as_occupation, occupation_to_assignment
from .errors import MatrixFileError, ParticleMismatchError, ShapeError, SizeError

MAX_PERMANENT_SIZE = 30  # practical bound for the exponential kernel
MAX_NAIVE_SIZE = 9


def _require_square(m: np.ndarray, op: str) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"{op} needs a square matrix, got shape {a.shape}")
    return a


def fourier_matrix(n: int) -> np.ndarray:
    """Unbiased n-mode multiport: entry (j,k) = exp(i*2*pi*(j-1)(k-1)/n)/sqrt(n)."""
    if n < 1:
        raise ShapeError("need n >= 1")
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / math.sqrt(n)


def is_fourier(u: np.ndarray, tol: float = 1e-12) -> bool:
    """True when u matches fourier_matrix(n) entrywise within tol."""
    a = np.asarray(u)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.abs(a - fourier_matrix(a.shape[0])).max() <= tol)


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    """Max-norm test of U U^dagger = I."""
    a = _require_square(u, "is_unitary")
    n = a.shape[0]
    return bool(np.abs(a @ a.conj().T - np.eye(n)).max() <= tol)


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-style unitary from QR of a seeded complex Gaussian matrix."""
    if n < 1:
        raise ShapeError("need n >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def permanent(m: np.ndarray) -> complex:
    """perm(M) = sum over permutations of row-column products (Ryser kernel)."""
    a = _require_square(m, "permanent")
    if a.shape[0] > MAX_PERMANENT_SIZE:
        raise SizeError(f"permanent capped at {MAX_PERMANENT_SIZE}x{MAX_PERMANENT_SIZE}")
    return kernels.permanent(a.astype(np.complex128))


def permanent_naive(m: np.ndarray) -> complex:
    """Direct sum over all N! permutations; test oracle, independent of the kernel."""
    a = _require_square(m, "permanent_naive")
    n = a.shape[0]
    if n > MAX_NAIVE_SIZE:
        raise SizeError(f"naive permanent capped at {MAX_NAIVE_SIZE}x{MAX_NAIVE_SIZE}")
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    rows = range(n)
    for perm in itertools.permutations(rows):
        prod = 1.0 + 0.0j
        for i in rows:
            prod *= a[i, perm[i]]
        total += prod
    return total


def determinant(m: np.ndarray) -> complex:
    """det(M) by LU with partial pivoting; exact 0 on a numerically null pivot column."""
    a = _require_square(m, "determinant")
    return kernels.determinant(a.astype(np.complex128))


def submatrix_for_transition(u: np.ndarray, r, s) -> np.ndarray:
    """N x N matrix M[j,k] = u[d_j(r), d_k(s)] (1-based assignment lists)."""
    a = _require_square(u, "submatrix_for_transition")
    n = a.shape[0]
    occ_r = as_occupation(r, n)
    occ_s = as_occupation(s, n)
    if occ_r.total != occ_s.total:
        raise ParticleMismatchError(
            f"input has {occ_r.total} particles, output has {occ_s.total}")
    dr = np.asarray(occupation_to_assignment(occ_r), dtype=np.int64) - 1
    ds = np.asarray(occupation_to_assignment(occ_s), dtype=np.int64) - 1
    return a[np.ix_(dr, ds)]


def matrix_to_json_dict(u: np.ndarray) -> dict:
    a = _require_square(u, "matrix_to_json_dict")
    entries = [[float(v.real), float(v.imag)] for v in a.ravel()]
    return {"n": int(a.shape[0]), "entries": entries}


def matrix_from_json_dict(data) -> np.ndarray:
    """Parse {"n": int, "entries": [[re, im], ...]} (row-major, length n*n)."""
    if not isinstance(data, dict):
        raise MatrixFileError("matrix file must hold a JSON object")
    try:
        n = int(data["n"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFileError("matrix file needs integer 'n' and 'entries'") from exc
    if n < 1:
        raise MatrixFileError("matrix file declares n < 1")
    if not isinstance(entries, list) or len(entries) != n * n:
        raise MatrixFileError(f"expected {n * n} entries, got {len(entries) if isinstance(entries, list) else 'non-list'}")
    flat = np.empty(n * n, dtype=np.complex128)
    for i, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MatrixFileError(f"entry {i} is not a [re, im] pair")
        re, im = pair
        if isinstance(re, bool) or isinstance(im, bool) or \
                not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
            raise MatrixFileError(f"entry {i} has non-numeric parts")
        flat[i] = complex(re, im)
    return flat.reshape(n, n)


def load_matrix_file(path: str | Path) -> np.ndarray:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as exc:
        raise MatrixFileError(f"cannot read matrix file {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"matrix file {p} is not valid JSON: {exc}") from exc
    return matrix_from_json_dict(data)


def save_matrix_file(u: np.ndarray, path: str | Path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json_dict(u)))
