"""Exact linear algebra over the rationals.

Rank and determinant use fraction-free (Bareiss) elimination on integer
matrices obtained by clearing row denominators; kernels use Gauss-Jordan
over :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence]


def _integer_rows(rows: Matrix) -> tuple[list[list[int]], int]:
    """Scale each row to integers; returns the rows and the product of scales."""
    out = []
    scale = 1
    for row in rows:
        q = [Fraction(x) for x in row]
        d = math.lcm(*(x.denominator for x in q)) if q else 1
        out.append([int(x * d) for x in q])
        scale *= d
    return out, scale


def _bareiss(M: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination; returns (rank, sign of row swaps)."""
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    r = 0
    prev = 1
    sign = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        p = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, ncols):
                num = p * row_i[j] - a * row_r[j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                row_i[j] = q
            row_i[c] = 0
        prev = p
        r += 1
    return r, sign


def rank(rows: Matrix) -> int:
    if not rows or not len(rows[0]):
        return 0
    M, _ = _integer_rows(rows)
    return _bareiss(M)[0]


def det(rows: Matrix) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    M, scale = _integer_rows(rows)
    r, sign = _bareiss(M)
    if r < n:
        return Fraction(0)
    return Fraction(sign * M[n - 1][n - 1], scale)


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(x) for x in row] for row in rows]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -R[r][f]
        basis.append(x)
    return basis


def transpose(rows: Matrix) -> list[list]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Matrix, b: Matrix) -> list[list]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]
