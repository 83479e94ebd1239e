"""Small exact linear algebra over a field (rationals or a prime field).

Matrices are lists of lists of field scalars.  Everything here is dense
Gaussian elimination; the problem sizes are tiny (coordinate changes,
graded-piece echelon forms, tangent-vector solves).
"""

from __future__ import annotations


class SingularMatrixError(ValueError):
    pass


def identity(n, field):
    one, zero = field.one, field.zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matvec(matrix, vector, field):
    out = []
    for row in matrix:
        acc = field.zero
        for a, x in zip(row, vector):
            acc = field.add(acc, field.mul(a, x))
        out.append(acc)
    return out


def invert(matrix, field):
    """Inverse of a square matrix; raises SingularMatrixError otherwise."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    work = [list(row) + list(identity(n, field)[i]) for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not field.is_zero(work[r][col])), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = field.invert(work[col][col])
        work[col] = [field.mul(inv, a) for a in work[col]]
        for r in range(n):
            if r != col and not field.is_zero(work[r][col]):
                factor = work[r][col]
                work[r] = [field.sub(a, field.mul(factor, b)) for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]


def rref(matrix, field):
    """Reduced row echelon form; returns (rows, pivot_columns).

    Zero rows are dropped, pivots are monic and cleared above and below.
    """
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if not field.is_zero(rows[r][col])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.invert(rows[rank][col])
        rows[rank] = [field.mul(inv, a) for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not field.is_zero(rows[r][col]):
                factor = rows[r][col]
                rows[r] = [field.sub(a, field.mul(factor, b)) for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def solve_affine(matrix, rhs, field):
    """Solve A x = b; returns (particular, nullspace_basis) or None if inconsistent."""
    if not matrix:
        return [], []
    ncols = len(matrix[0])
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(augmented, field)
    if ncols in pivots:
        return None
    particular = [field.zero] * ncols
    for row, col in zip(rows, pivots):
        particular[col] = row[-1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [field.zero] * ncols
        vec[f] = field.one
        for row, col in zip(rows, pivots):
            vec[col] = field.neg(row[f])
        basis.append(vec)
    return particular, basis
