"""Exact rational-arithmetic linear solver.

This module is the independent cross-check for the floating-point mesh
solver.  It deliberately shares no code with :mod:`srmec.network`: the
production path assembles numpy arrays and calls LAPACK, while this path
converts every coefficient to :class:`fractions.Fraction` and runs a
hand-written Gauss-Jordan elimination.  Agreement between the two routes
is therefore meaningful evidence, not a tautology.

Float inputs are converted to fractions exactly (every IEEE double is a
rational number), so the returned solution is the exact solution of the
floating-point system as assembled, with no rounding anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def solve_exact(matrix: Sequence[Sequence[float]], rhs: Sequence[float]) -> list[Fraction]:
    """Solve ``matrix @ x == rhs`` in exact rational arithmetic.

    Args:
        matrix: square coefficient matrix; entries may be int, float or
            Fraction.  Floats are converted exactly, not via string
            round-tripping.
        rhs: right-hand side of matching length.

    Returns:
        Solution vector as a list of Fractions.

    Raises:
        ValueError: on shape mismatch or an exactly singular matrix.
    """
    n = len(rhs)
    if n == 0:
        return []
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError(f"matrix must be {n}x{n} to match rhs of length {n}")

    # Augmented matrix in exact arithmetic.
    work = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]

    for col in range(n):
        # Partial pivoting keeps intermediate fractions smaller; it does
        # not affect exactness.
        pivot_row = max(range(col, n), key=lambda r: abs(work[r][col]))
        if work[pivot_row][col] == 0:
            raise ValueError(f"matrix is singular: no pivot in column {col}")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        for row in range(n):
            if row != col and work[row][col] != 0:
                factor = work[row][col] / work[col][col]
                work[row] = [work[row][k] - factor * work[col][k] for k in range(n + 1)]

    return [work[i][n] / work[i][i] for i in range(n)]


def residual_exact(
    matrix: Sequence[Sequence[float]],
    rhs: Sequence[float],
    solution: Sequence[Fraction],
) -> list[Fraction]:
    """Exact residual ``matrix @ solution - rhs`` for auditing a solve."""
    n = len(rhs)
    out = []
    for i in range(n):
        acc = Fraction(0)
        for j in range(n):
            acc += Fraction(matrix[i][j]) * solution[j]
        out.append(acc - Fraction(rhs[i]))
    return out
