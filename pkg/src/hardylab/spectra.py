"""Symmetric tridiagonal spectral kernels: inertia counts and pencil eigenpairs.

Everything negative-eigenvalue flavored rests on Sylvester's law of
inertia: congruence preserves eigenvalue signs, so the pivot signs of an
LDL^T sweep of a symmetric tridiagonal matrix give the number of
negative, zero, and positive eigenvalues in O(n) with no factor storage.
For the generalized problem A x = mu B x with B positive definite, the
number of pencil eigenvalues below a shift equals the number of negative
pivots of A - shift*B, which is again tridiagonal.

Dense fallbacks (used by the nonlocal form assembly, where matrices are
full) are thin wrappers over numpy's symmetric eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = float(np.finfo(np.float64).eps)

# Pivot magnitudes below tol*scale are ambiguous at this matrix size and
# get flagged rather than signed; 12*n*eps tracks worst-case growth of
# rounding in the pivot recurrence, the 1e-13 floor covers tiny n.
_PIVOT_TOL_FLOOR = 1e-13
_PIVOT_TOL_RATE = 12.0


@dataclass
class Inertia:
    """Signature of a symmetric matrix: counts of eigenvalues by sign.

    ``zero`` counts pivots too small to classify; the true number of
    eigenvalues below the shift lies in [neg, neg + zero].
    """

    neg: int
    zero: int
    pos: int


@dataclass
class Tridiagonal:
    """Symmetric tridiagonal matrix stored as diagonal and off-diagonal."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self) -> None:
        self.diag = np.asarray(self.diag, dtype=np.float64)
        self.off = np.asarray(self.off, dtype=np.float64)
        if self.diag.ndim != 1 or self.off.ndim != 1:
            raise ValueError("diag and off must be one dimensional arrays")
        if self.off.shape[0] != max(self.diag.shape[0] - 1, 0):
            raise ValueError("off-diagonal must have length n - 1")

    @property
    def n(self) -> int:
        return int(self.diag.shape[0])

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        y = self.diag * x
        if self.n > 1:
            y[:-1] += self.off * x[1:]
            y[1:] += self.off * x[:-1]
        return y

    def principal(self, i0: int, i1: int) -> "Tridiagonal":
        """Principal submatrix on index range [i0, i1)."""
        if not 0 <= i0 <= i1 <= self.n:
            raise ValueError("index range out of bounds")
        if i1 - i0 <= 0:
            return Tridiagonal(np.zeros(0), np.zeros(0))
        return Tridiagonal(self.diag[i0:i1], self.off[i0:i1 - 1])

    def dense(self) -> np.ndarray:
        S = np.diag(self.diag)
        if self.n > 1:
            idx = np.arange(self.n - 1)
            S[idx, idx + 1] = self.off
            S[idx + 1, idx] = self.off
        return S

    def row_scale(self, shift: float = 0.0) -> float:
        """Infinity norm of self - shift*I, the yardstick for pivot tests."""
        s = np.abs(self.diag - shift)
        if self.n > 1:
            ab = np.abs(self.off)
            s[:-1] += ab
            s[1:] += ab
        return float(s.max()) if s.size else 0.0


def tridiag_inertia(T: Tridiagonal, shift: float = 0.0) -> Inertia:
    """Inertia of T - shift*I by the pivot-sign recurrence.

    ``neg`` is the number of eigenvalues strictly below ``shift`` up to
    the ``zero`` ambiguity.  Zero pivots are replaced by a signed
    perturbation so the recurrence continues; they are reported, not
    classified.
    """
    n = T.n
    if n == 0:
        return Inertia(0, 0, 0)
    scale = T.row_scale(shift)
    if scale == 0.0:
        return Inertia(0, n, 0)
    tol = max(_PIVOT_TOL_FLOOR, _PIVOT_TOL_RATE * n * _EPS) * scale
    a = (T.diag - shift).tolist()
    b = T.off.tolist()
    neg = zero = pos = 0
    d_prev = 0.0
    for k in range(n):
        d = a[k]
        if k:
            bk = b[k - 1]
            d -= bk * bk / d_prev
        if abs(d) <= tol:
            zero += 1
            d = tol if d >= 0.0 else -tol
        elif d < 0.0:
            neg += 1
        else:
            pos += 1
        d_prev = d
    return Inertia(neg, zero, pos)


def generalized_inertia(A: Tridiagonal, B: Tridiagonal, shift: float) -> Inertia:
    """Inertia of A - shift*B; with B > 0, ``neg`` counts pencil
    eigenvalues of A x = mu B x below the shift."""
    if A.n != B.n:
        raise ValueError("pencil matrices must share a size")
    return tridiag_inertia(Tridiagonal(A.diag - shift * B.diag,
                                       A.off - shift * B.off))


def tridiag_min_eig(T: Tridiagonal, rel_tol: float = 1e-12,
                    max_iter: int = 200) -> float:
    """Lower bound for the smallest eigenvalue, by bisection on the
    negative-pivot count.  Starts from the Gershgorin bound, so the
    returned value certifies lambda_min >= result up to pivot tolerance."""
    n = T.n
    if n == 0:
        raise ValueError("empty matrix has no eigenvalues")
    lo_arr = T.diag.copy()
    if n > 1:
        ab = np.abs(T.off)
        lo_arr[:-1] -= ab
        lo_arr[1:] -= ab
    lo = float(lo_arr.min())
    hi = float(T.diag.min())        # Rayleigh quotient at a basis vector
    span = max(abs(lo), abs(hi), 1.0)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if tridiag_inertia(T, mid).neg >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel_tol * span:
            break
    return lo


def _tridiag_solve(C: Tridiagonal, rhs: np.ndarray) -> np.ndarray:
    """Solve C x = rhs by LU with partial pivoting.

    Row swaps widen U to two superdiagonals; near-singular pivots are
    nudged, which is exactly what inverse iteration wants.
    """
    n = C.n
    b = np.asarray(rhs, dtype=np.float64).copy()
    if n == 1:
        piv = C.diag[0] if C.diag[0] != 0.0 else 1e-300
        return b / piv
    di = C.diag.copy()
    e = C.off
    u1 = np.zeros(n)
    u1[:n - 1] = e
    u2 = np.zeros(n)
    for i in range(n - 1):
        r1 = (di[i], u1[i], u2[i])
        r2 = (e[i], di[i + 1], e[i + 1] if i + 1 < n - 1 else 0.0)
        if abs(r2[0]) > abs(r1[0]):
            r1, r2 = r2, r1
            b[i], b[i + 1] = b[i + 1], b[i]
        piv = r1[0] if r1[0] != 0.0 else 1e-300
        m = r2[0] / piv
        di[i] = piv
        u1[i] = r1[1]
        u2[i] = r1[2]
        di[i + 1] = r2[1] - m * r1[1]
        u1[i + 1] = r2[2] - m * r1[2]
        u2[i + 1] = 0.0
        b[i + 1] -= m * b[i]
    for i in range(n - 1, -1, -1):
        s = b[i]
        if i + 1 < n:
            s -= u1[i] * b[i + 1]
        if i + 2 < n:
            s -= u2[i] * b[i + 2]
        dd = di[i] if di[i] != 0.0 else 1e-300
        b[i] = s / dd
    return b


def generalized_eigenpairs(A: Tridiagonal, B: Tridiagonal, k: int,
                           rel_tol: float = 1e-10, max_iter: int = 200):
    """Lowest k eigenpairs of A x = mu B x, B positive definite.

    Eigenvalues by per-index bisection on the pencil inertia count,
    eigenvectors by shifted inverse iteration with a B-orthogonalization
    pass and a Rayleigh quotient polish.  Returns (values, vectors) with
    vectors B-orthonormal in columns.
    """
    n = A.n
    if B.n != n:
        raise ValueError("pencil matrices must share a size")
    if k < 1 or k > n:
        raise ValueError("eigenpair count must lie in [1, n]")
    bmin = tridiag_min_eig(B)
    if bmin <= 0.0:
        raise ValueError("right-hand matrix must be positive definite")
    bound = A.row_scale() / bmin
    bound = max(bound, 1e-300)

    vals = np.empty(k)
    for j in range(k):
        lo = -1.0000001 * bound
        hi = 1.0000001 * bound
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if generalized_inertia(A, B, mid).neg >= j + 1:
                hi = mid
            else:
                lo = mid
            if hi - lo <= rel_tol * max(abs(lo), abs(hi)):
                break
        vals[j] = 0.5 * (lo + hi)

    vecs = np.empty((n, k))
    rng = np.random.default_rng(271828)
    for j in range(k):
        sigma = vals[j] * (1.0 + 3e-10) if vals[j] != 0.0 else 3e-10 * bound
        C = Tridiagonal(A.diag - sigma * B.diag, A.off - sigma * B.off)
        x = rng.standard_normal(n)
        for _ in range(3):
            x = _tridiag_solve(C, B.matvec(x))
            x /= np.sqrt(x @ B.matvec(x))
        for i in range(j):
            v = vecs[:, i]
            x -= (v @ B.matvec(x)) * v
        nrm = np.sqrt(x @ B.matvec(x))
        if nrm > 0.0:
            x /= nrm
        vecs[:, j] = x
        num = x @ A.matvec(x)
        den = x @ B.matvec(x)
        if den > 0.0:
            vals[j] = num / den
    return vals, vecs


_DENSE_CAP = 2000


def dense_eigenvalues(S: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric dense matrix, ascending."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("expected a square matrix")
    if S.shape[0] > _DENSE_CAP:
        raise ValueError(f"dense eigenvalue path is capped at n = {_DENSE_CAP}")
    return np.linalg.eigvalsh(S)


def dense_generalized_eigenvalues(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Eigenvalues of the dense pencil A x = mu B x with B > 0, ascending.

    Reduced to a standard problem through the Cholesky factor of B.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ValueError("pencil matrices must share a shape")
    if A.shape[0] > _DENSE_CAP:
        raise ValueError(f"dense eigenvalue path is capped at n = {_DENSE_CAP}")
    L = np.linalg.cholesky(B)
    Y = np.linalg.solve(L, A)
    C = np.linalg.solve(L, Y.T).T
    C = 0.5 * (C + C.T)
    return np.linalg.eigvalsh(C)
