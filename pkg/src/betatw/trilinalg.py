"""Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

Only eigenvalues are computed, never eigenvectors. Dense real symmetric
matrices are brought to tridiagonal form by Householder reflections first.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

_SAFMIN = np.finfo(float).tiny
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float).reshape(-1)
        e = np.ascontiguousarray(self.offdiag, dtype=float).reshape(-1)
        if d.size < 1:
            raise ValueError("tridiagonal matrix needs at least one diagonal entry")
        if e.size != d.size - 1:
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.size}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("tridiagonal entries must be finite")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self):
        return self.diag.size

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@njit(cache=True, nogil=True)
def _gershgorin(d, e):
    n = d.size
    lo = np.inf
    hi = -np.inf
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return lo, hi


@njit(cache=True, nogil=True)
def _pivmin(e2):
    m = 1.0
    for v in e2:
        m = max(m, v)
    return _SAFMIN * m


@njit(cache=True, nogil=True)
def _sturm(d, e2, x, pivmin):
    # Pivots are nudged to +pivmin (not -pivmin) so an eigenvalue sitting
    # exactly at x is not counted: the count is of eigenvalues strictly below x.
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin if q < 0.0 else pivmin
    count = 1 if q < 0.0 else 0
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin if q < 0.0 else pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def _bracket(d, e, tol):
    lo, hi = _gershgorin(d, e)
    pad = max(tol, 4.0 * _EPS * max(abs(lo), abs(hi), 1.0))
    return lo - pad, hi + pad


@njit(cache=True, nogil=True)
def _kth_eigenvalue(d, e2, k, lo, hi, tol, pivmin):
    # k is 0-based from the bottom; invariant: count(lo) <= k < count(hi)
    if d.size == 1:
        return d[0]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm(d, e2, mid, pivmin) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def _largest_kernel(d, e, tol):
    e2 = e * e
    lo, hi = _bracket(d, e, tol)
    return _kth_eigenvalue(d, e2, d.size - 1, lo, hi, tol, _pivmin(e2))


@njit(cache=True, nogil=True)
def _smallest_kernel(d, e, tol):
    e2 = e * e
    lo, hi = _bracket(d, e, tol)
    return _kth_eigenvalue(d, e2, 0, lo, hi, tol, _pivmin(e2))


@njit(cache=True, nogil=True)
def _all_kernel(d, e, tol):
    e2 = e * e
    lo, hi = _bracket(d, e, tol)
    pivmin = _pivmin(e2)
    n = d.size
    out = np.empty(n)
    for k in range(n):
        # eigenvalues come out ascending, so the previous one is a valid floor
        start = lo if k == 0 else max(lo, out[k - 1] - 2.0 * tol)
        out[k] = _kth_eigenvalue(d, e2, k, start, hi, tol, pivmin)
    return out


def gershgorin_bounds(T):
    return _gershgorin(T.diag, T.offdiag)


def default_tol(T):
    lo, hi = _gershgorin(T.diag, T.offdiag)
    return 1e-12 * max(1.0, abs(lo), abs(hi))


def sturm_count(T, x):
    """Number of eigenvalues of ``T`` strictly less than ``x``."""
    e2 = T.offdiag * T.offdiag
    return int(_sturm(T.diag, e2, float(x), _pivmin(e2)))


def largest_eigenvalue(T, tol=None):
    tol = default_tol(T) if tol is None else float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    return float(_largest_kernel(T.diag, T.offdiag, tol))


def smallest_eigenvalue(T, tol=None):
    tol = default_tol(T) if tol is None else float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    return float(_smallest_kernel(T.diag, T.offdiag, tol))


def all_eigenvalues(T, tol=None):
    """All eigenvalues of ``T`` in ascending order, each to within ``tol``."""
    tol = default_tol(T) if tol is None else float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    return _all_kernel(T.diag, T.offdiag, tol)


def check_symmetric(M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.array_equal(M, M.T):
        raise ValueError("matrix is not exactly symmetric")
    return M


def householder_tridiagonalize(M):
    """Orthogonally reduce a dense real symmetric matrix to tridiagonal form."""
    A = check_symmetric(M).copy()
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1 :, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        # A <- P A P with P = I - 2 v v^T acting on rows/cols k+1..n-1
        A[k + 1 :, :] -= 2.0 * np.outer(v, v @ A[k + 1 :, :])
        A[:, k + 1 :] -= 2.0 * np.outer(A[:, k + 1 :] @ v, v)
    diag = np.diag(A).copy()
    offdiag = np.diag(A, 1).copy() if n > 1 else np.empty(0)
    return TridiagonalMatrix(diag, offdiag)
