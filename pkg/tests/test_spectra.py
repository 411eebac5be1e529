"""Tests for the tridiagonal and dense spectral kernels.

Two independent oracles guard the inertia count: an exact rational
characteristic polynomial (Descartes sign count, valid since symmetric
matrices have real spectra) and a hand-rolled cyclic Jacobi solver.
"""

from fractions import Fraction

import numpy as np
import pytest

from hardylab.spectra import (
    Inertia,
    Tridiagonal,
    dense_eigenvalues,
    dense_generalized_eigenvalues,
    generalized_eigenpairs,
    generalized_inertia,
    tridiag_inertia,
    tridiag_min_eig,
    _tridiag_solve,
)


# ---------------------------------------------------------------- oracles

def _char_poly_exact(M):
    """Characteristic polynomial det(x I - M) with Fraction arithmetic,
    by the trace recurrence.  Returns coefficients, highest power first."""
    n = len(M)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def matmul(X, Y):
        return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]

    coeffs = [Fraction(1)]
    Ak = [row[:] for row in M]
    for k in range(1, n + 1):
        ck = sum(Ak[i][i] for i in range(n)) / k
        coeffs.append(-ck)
        if k < n:
            shifted = [[Ak[i][j] - (ck if i == j else 0) for j in range(n)]
                       for i in range(n)]
            Ak = matmul(M, shifted)
    return coeffs


def _count_signs_exact(M):
    """(neg, zero, pos) eigenvalue counts of a rational symmetric matrix.

    Real-rooted polynomials make Descartes' rule exact: sign changes in
    p(x) count positive roots, in p(-x) negative roots, with multiplicity.
    """
    coeffs = _char_poly_exact(M)
    n = len(M)
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def sign_changes(cs):
        signs = [1 if c > 0 else -1 for c in cs if c != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    pos = sign_changes(coeffs)
    neg_poly = [c if (len(coeffs) - 1 - i) % 2 == 0 else -c
                for i, c in enumerate(coeffs)]
    neg = sign_changes(neg_poly)
    assert neg + zero + pos == n
    return neg, zero, pos


def _jacobi_eigenvalues(S, sweeps=60):
    """Cyclic Jacobi eigenvalue sweep, independent of numpy's solver."""
    A = np.array(S, dtype=np.float64)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= 1e-13 * max(np.abs(np.diag(A)).max(), 1.0):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                elif theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
    return np.sort(np.diag(A))


# ---------------------------------------------------------------- inertia

def _frac_tridiag():
    diag = [Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(-3), Fraction(5)]
    off = [Fraction(1), Fraction(1, 3), Fraction(2), Fraction(1)]
    M = [[Fraction(0)] * 5 for _ in range(5)]
    for i in range(5):
        M[i][i] = diag[i]
    for i in range(4):
        M[i][i + 1] = off[i]
        M[i + 1][i] = off[i]
    return diag, off, M


def test_inertia_matches_exact_rational_count():
    diag, off, M = _frac_tridiag()
    T = Tridiagonal(np.array([float(d) for d in diag]),
                    np.array([float(b) for b in off]))
    for shift in [Fraction(0), Fraction(1, 4), Fraction(-2), Fraction(3)]:
        Ms = [[M[i][j] - (shift if i == j else 0) for j in range(5)]
              for i in range(5)]
        neg, zero, pos = _count_signs_exact(Ms)
        got = tridiag_inertia(T, float(shift))
        assert (got.neg, got.zero, got.pos) == (neg, zero, pos)


def test_inertia_flags_singular_shift():
    # diag(1, -1) shifted by exactly 1 has a zero eigenvalue
    T = Tridiagonal(np.array([1.0, -1.0]), np.array([0.0]))
    got = tridiag_inertia(T, 1.0)
    assert got.zero == 1
    assert got.neg == 1
    assert got.pos == 0


def test_inertia_against_jacobi_oracle():
    rng = np.random.default_rng(7)
    n = 50
    diag = rng.standard_normal(n) * 2.0
    off = rng.standard_normal(n - 1)
    T = Tridiagonal(diag, off)
    eigs = _jacobi_eigenvalues(T.dense())
    dense = dense_eigenvalues(T.dense())
    assert np.max(np.abs(eigs - dense)) < 1e-9 * max(np.abs(eigs).max(), 1.0)
    for shift in [-2.5, -0.3, 0.0, 0.7, 3.1]:
        # shifts kept away from the spectrum ties by construction noise
        if np.min(np.abs(eigs - shift)) < 1e-8:
            continue
        got = tridiag_inertia(T, shift)
        assert got.zero == 0
        assert got.neg == int(np.sum(eigs < shift))


def test_inertia_random_sizes_vs_dense():
    rng = np.random.default_rng(11)
    for n in [1, 2, 3, 17, 120]:
        diag = rng.standard_normal(n)
        off = rng.standard_normal(max(n - 1, 0))
        T = Tridiagonal(diag, off)
        eigs = dense_eigenvalues(T.dense())
        for shift in rng.standard_normal(4):
            if np.min(np.abs(eigs - shift)) < 1e-9:
                continue
            got = tridiag_inertia(T, float(shift))
            assert got.neg == int(np.sum(eigs < shift))
            assert got.zero == 0


def test_interlacing_under_one_row_deletion():
    # dropping one row/column changes the below-shift count by at most one
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = 40
        T = Tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
        shift = float(rng.standard_normal())
        full = tridiag_inertia(T, shift).neg
        head = tridiag_inertia(T.principal(0, n - 1), shift).neg
        assert head <= full <= head + 1


# ---------------------------------------------------------------- pencils

def _random_spd_tridiag(rng, n):
    off = 0.3 * rng.standard_normal(n - 1)
    diag = 1.0 + np.abs(rng.standard_normal(n))
    diag[:-1] += np.abs(off)
    diag[1:] += np.abs(off)          # diagonally dominant, hence SPD
    return Tridiagonal(diag, off)


def test_generalized_inertia_counts_pencil_eigenvalues():
    rng = np.random.default_rng(5)
    n = 40
    A = Tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
    B = _random_spd_tridiag(rng, n)
    mus = dense_generalized_eigenvalues(A.dense(), B.dense())
    for shift in [-1.5, 0.0, 0.4, 2.0]:
        if np.min(np.abs(mus - shift)) < 1e-9:
            continue
        assert generalized_inertia(A, B, shift).neg == int(np.sum(mus < shift))


def test_generalized_eigenpairs_match_dense_pencil():
    rng = np.random.default_rng(13)
    n = 60
    A = Tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
    B = _random_spd_tridiag(rng, n)
    k = 5
    vals, vecs = generalized_eigenpairs(A, B, k)
    mus = dense_generalized_eigenvalues(A.dense(), B.dense())
    assert np.max(np.abs(vals - mus[:k])) < 1e-8 * max(np.abs(mus[:k]).max(), 1.0)
    for j in range(k):
        x = vecs[:, j]
        res = A.matvec(x) - vals[j] * B.matvec(x)
        assert np.linalg.norm(res) < 1e-7 * (A.row_scale() + abs(vals[j]) * B.row_scale())
    G = vecs.T @ np.array([B.matvec(vecs[:, j]) for j in range(k)]).T
    assert np.max(np.abs(G - np.eye(k))) < 1e-8


def test_min_eig_bound_is_certified():
    rng = np.random.default_rng(3)
    for n in [5, 30, 90]:
        T = Tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
        eigs = dense_eigenvalues(T.dense())
        lb = tridiag_min_eig(T)
        assert lb <= eigs[0] + 1e-10 * max(1.0, abs(eigs[0]))
        assert eigs[0] - lb < 1e-9 * max(1.0, abs(eigs[0]))


# ---------------------------------------------------------------- solvers

def test_tridiag_solve_matches_dense_solver():
    rng = np.random.default_rng(17)
    for n in [1, 2, 5, 80]:
        T = Tridiagonal(rng.standard_normal(n), rng.standard_normal(max(n - 1, 0)))
        rhs = rng.standard_normal(n)
        x = _tridiag_solve(T, rhs)
        xd = np.linalg.solve(T.dense(), rhs)
        assert np.max(np.abs(x - xd)) < 1e-8 * max(np.abs(xd).max(), 1.0)


def test_tridiag_solve_needs_pivoting():
    # leading entry zero forces a row swap immediately
    T = Tridiagonal(np.array([0.0, 1.0, 2.0]), np.array([1.0, 1.0]))
    rhs = np.array([1.0, 2.0, 3.0])
    x = _tridiag_solve(T, rhs)
    assert np.max(np.abs(T.matvec(x) - rhs)) < 1e-12


def test_matvec_and_principal_agree_with_dense():
    rng = np.random.default_rng(29)
    n = 12
    T = Tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
    x = rng.standard_normal(n)
    assert np.allclose(T.matvec(x), T.dense() @ x)
    sub = T.principal(3, 9)
    assert np.allclose(sub.dense(), T.dense()[3:9, 3:9])


def test_dense_cap_rejects_large_matrices():
    with pytest.raises(ValueError):
        dense_eigenvalues(np.eye(2001))


def test_inertia_partition_sums_to_dimension():
    rng = np.random.default_rng(31)
    n = 25
    T = Tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
    got = tridiag_inertia(T, 0.1)
    assert got.neg + got.zero + got.pos == n
    assert isinstance(got, Inertia)
