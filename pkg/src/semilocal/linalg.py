"""Dense linear algebra over a FieldSpec: rref, inverse, solving.

Matrices are lists of lists of FieldElement.  Everything here is
desk-scale Gaussian elimination; no pivoting refinements needed over an
exact field.
"""

from __future__ import annotations

from .field import FieldSpec, FieldElement


def identity(field: FieldSpec, n: int):
    return [
        [field.one() if i == j else field.zero() for j in range(n)] for i in range(n)
    ]


def mat_mul(a, b):
    field = a[0][0].field
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = field.zero()
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a, v):
    field = a[0][0].field
    out = []
    for row in a:
        acc = field.zero()
        for c, x in zip(row, v):
            acc = acc + c * x
        out.append(acc)
    return out


def rref(matrix, field: FieldSpec):
    """Reduced row echelon form; returns (rows, pivot_columns).

    Zero rows are dropped.  Input is not mutated.
    """
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [c * inv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix, field: FieldSpec) -> int:
    return len(rref(matrix, field)[0])


def inverse(matrix, field: FieldSpec):
    """Matrix inverse, or None when singular."""
    n = len(matrix)
    aug = [list(row) + ident for row, ident in zip(matrix, identity(field, n))]
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(red) != n:
        return None
    return [row[n:] for row in red]


def solve(matrix, rhs, field: FieldSpec):
    """One solution of matrix @ x = rhs, or None when inconsistent.

    Free variables are set to zero.
    """
    n = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, field)
    for row, p in zip(red, pivots):
        if p == n:  # pivot in the rhs column
            return None
    x = [field.zero()] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return x
