"""Exact integer linear algebra on lists of Python ints."""
from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def copy_matrix(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in A]


def bareiss_determinant(A: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer input."""
    M = copy_matrix(A)
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_diagonal(A: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form: nonnegative d_1 | d_2 | ... (zeros last)."""
    M = copy_matrix(A)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if M[i][j] and (pivot is None or abs(M[i][j]) < abs(M[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = M[t][t]
            for i in range(t + 1, rows):
                q = M[i][t] // p
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = M[t][j] // p
                if q:
                    for row in M:
                        row[j] -= q * row[t]
                if M[t][j]:
                    done = False
            if done:
                # divisibility: fold any entry not divisible by the pivot into row t
                bad = next(
                    (i for i in range(t + 1, rows) for j in range(t + 1, cols) if M[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                M[t] = [a + b for a, b in zip(M[t], M[bad])]
                continue
            # restart with the smallest nonzero remainder as pivot
            best = None
            for i in range(t, rows):
                if M[i][t] and (best is None or abs(M[i][t]) < abs(best[2])):
                    best = (i, t, M[i][t])
            for j in range(t, cols):
                if M[t][j] and (best is None or abs(M[t][j]) < abs(best[2])):
                    best = (t, j, M[t][j])
            bi, bj, _ = best
            M[t], M[bi] = M[bi], M[t]
            for row in M:
                row[t], row[bj] = row[bj], row[t]
        diag.append(abs(M[t][t]))
        t += 1
    diag.extend([0] * (min(rows, cols) - len(diag)))
    _check_divisibility(diag)
    return diag


def _check_divisibility(diag: list[int]) -> None:
    nonzero = [d for d in diag if d]
    for a, b in zip(nonzero, nonzero[1:]):
        if b % a:
            raise ArithmeticError(f"Smith diagonal not a divisor chain: {diag}")
    if nonzero and any(diag[i] == 0 and diag[i + 1] for i in range(len(diag) - 1)):
        raise ArithmeticError(f"zeros not trailing in Smith diagonal: {diag}")


def adjugate_and_det(A: Sequence[Sequence[int]]) -> tuple[Matrix, int]:
    """Integer adjugate via cofactors; fine for the small matrices used here."""
    n = len(A)
    det = bareiss_determinant(A)
    if n == 1:
        return [[1]], det
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(A) if k != i]
            adj[j][i] = (-1) ** (i + j) * bareiss_determinant(minor)
    return adj, det


def vector_gcd(values: Sequence[int]) -> int:
    out = 0
    for v in values:
        out = gcd(out, v)
    return out
