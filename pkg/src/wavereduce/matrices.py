"""Exact characteristic-polynomial machinery on small numeric matrices.

Matrices are lists of rows.  Entries may be ``Fraction`` (exact), ``int``,
``float`` or mpmath ``mpf``; every routine stays in whatever field the
entries live in, so rational input gives rational output.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

Matrix = Sequence[Sequence]

BRUTEFORCE_MAX_DIM = 6


def _square(H: Matrix) -> int:
    m = len(H)
    if m == 0 or any(len(row) != m for row in H):
        raise ValueError("matrix must be square and non-empty")
    return m


def _exact_ints(H: Matrix) -> list[list]:
    """Promote plain ints to Fraction so the recurrence's division stays exact."""
    return [[Fraction(x) if isinstance(x, int) else x for x in row] for row in H]


def identity(m: int, one=1) -> list[list]:
    return [[one if i == j else 0 * one for j in range(m)] for i in range(m)]


def matmul(A: Matrix, B: Matrix) -> list[list]:
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), 0 * row[0]) for col in cols] for row in A]


def trace(H: Matrix):
    return sum((H[i][i] for i in range(1, len(H))), H[0][0])


def minor_sums(H: Matrix) -> tuple:
    """Principal-minor sums M_0..M_m by the Faddeev-LeVerrier recurrence.

    det(t I - H) = sum_k a_k t^(m-k) with N_1 = I, a_k = -tr(H N_k) / k and
    N_{k+1} = H N_k + a_k I; the minor sums are M_k = (-1)^k a_k.
    """
    m = _square(H)
    H = _exact_ints(H)
    one = H[0][0] ** 0
    sums = [one]
    N = identity(m, one)
    for k in range(1, m + 1):
        HN = matmul(H, N)
        a = -trace(HN) / k
        sums.append(a if k % 2 == 0 else -a)
        N = [[HN[i][j] + (a if i == j else 0) for j in range(m)] for i in range(m)]
    return tuple(sums)


def determinant(H: Matrix):
    """Cofactor expansion along the first row; intended for m <= 6."""
    m = _square(H)
    if m == 1:
        return H[0][0]
    if m == 2:
        return H[0][0] * H[1][1] - H[0][1] * H[1][0]
    total = 0 * H[0][0]
    for j in range(m):
        if H[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in H[1:])]
        sign = -1 if j % 2 else 1
        total = total + sign * H[0][j] * determinant(minor)
    return total


def minor_sums_bruteforce(H: Matrix) -> tuple:
    """Principal-minor sums by enumerating every principal submatrix."""
    m = _square(H)
    if m > BRUTEFORCE_MAX_DIM:
        raise ValueError(f"brute-force enumeration limited to dimension {BRUTEFORCE_MAX_DIM}")
    one = H[0][0] ** 0
    sums = [one]
    for k in range(1, m + 1):
        total = 0 * one
        for idx in combinations(range(m), k):
            total = total + determinant([[H[i][j] for j in idx] for i in idx])
        sums.append(total)
    return tuple(sums)


def matrix_powers(H: Matrix, kmax: int) -> list[list[list]]:
    """[H^0, H^1, ..., H^kmax]."""
    m = _square(H)
    powers = [identity(m, H[0][0] ** 0)]
    for _ in range(kmax):
        powers.append(matmul(powers[-1], H))
    return powers


def cayley_hamilton_residual(H: Matrix):
    """Max-norm of sum_{k=0}^{m} (-1)^k M_k H^{m-k}; zero for every square H."""
    m = _square(H)
    M = minor_sums(H)
    powers = matrix_powers(H, m)
    acc = [[0 * H[0][0] for _ in range(m)] for _ in range(m)]
    for k in range(m + 1):
        coeff = M[k] if k % 2 == 0 else -M[k]
        P = powers[m - k]
        acc = [[acc[i][j] + coeff * P[i][j] for j in range(m)] for i in range(m)]
    return max(abs(x) for row in acc for x in row)


def power_traces(H: Matrix, kmax: int) -> tuple:
    """(tr H, tr H^2, ..., tr H^kmax)."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    return tuple(trace(P) for P in matrix_powers(H, kmax)[1:])


def newton_residuals(M: Sequence, p: Sequence) -> tuple:
    """Residuals of Newton's identities between minor sums and power traces.

    For k = 1..len(p): p_k - sum_{i=1}^{k-1} (-1)^{i-1} M_i p_{k-i} - (-1)^{k-1} k M_k,
    with M_k = 0 beyond the matrix dimension.
    """
    out = []
    for k in range(1, len(p) + 1):
        Mk = M[k] if k < len(M) else 0
        r = p[k - 1]
        for i in range(1, k):
            Mi = M[i] if i < len(M) else 0
            r = r - (-1) ** (i - 1) * Mi * p[k - i - 1]
        r = r - (-1) ** (k - 1) * k * Mk
        out.append(r)
    return tuple(out)


def max_abs(values) -> object:
    return max((abs(v) for v in values), default=0)
