"""Exact rational linear algebra."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularSystemError(ArithmeticError):
    pass


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Solve ``A X = B`` exactly by Gauss-Jordan elimination.

    ``rhs`` holds one row per equation and one column per right-hand side,
    so several systems sharing ``A`` are solved together. Returns ``X`` with
    the same shape as ``rhs``.
    """
    n = len(matrix)
    if n == 0:
        return []
    k = len(rhs[0])
    aug = [list(map(Fraction, matrix[i])) + list(map(Fraction, rhs[i])) for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError(f"singular matrix at column {col}")
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        if inv != 1:
            for j in range(col, n + k):
                if prow[j]:
                    prow[j] *= inv
        for r in range(n):
            if r == col:
                continue
            row = aug[r]
            factor = row[col]
            if factor == 0:
                continue
            for j in range(col, n + k):
                if prow[j]:
                    row[j] -= factor * prow[j]
    return [row[n:] for row in aug]
