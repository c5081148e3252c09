"""Dense exact linear algebra over Fraction matrices: reduced row echelon
form, nullspace bases, and linear solves.  Desk-scale sizes only; rows are
plain lists and pivoting always takes the leftmost nonzero column.
"""

from __future__ import annotations

from fractions import Fraction


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix):
    """Basis of the right nullspace, free variables set one-hot to 1."""
    if not matrix:
        return []
    rows, pivots = rref(matrix)
    ncols = len(matrix[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def solve(matrix, rhs):
    """One solution of A x = b with free variables set to zero, or None.

    ``rhs`` entries may live in any module over Fraction (Scalar included):
    elimination only ever multiplies them by rationals.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    vec = list(rhs)
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        vec[r], vec[pivot] = vec[pivot], vec[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        vec[r] = vec[r] * inv
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
                vec[i] = vec[i] - vec[r] * factor
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if _nonzero(vec[i]):
            return None
    out = [Fraction(0)] * ncols
    for row_idx, col in enumerate(pivots):
        out[col] = vec[row_idx]
    return out


def _nonzero(x) -> bool:
    zero = getattr(x, "is_zero", None)
    if zero is not None:
        return not x.is_zero()
    return x != 0
