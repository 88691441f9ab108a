"""Exact integer linear algebra: row Hermite form with transform, kernels, saturation.

Matrices are plain tuples of integer rows. Rational work (inverses, solves)
goes through sympy so no floating point enters a verdict.
"""

from collections.abc import Sequence

import sympy as sp

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Transpose a matrix with `ncols` columns (needed when there are no rows)."""
    return tuple(tuple(row[j] for row in rows) for j in range(ncols))


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int) -> IntMatrix:
    ncols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(ncols))
        for i in range(len(a))
    )


def vec_mat(v: Sequence[int], m: Sequence[Sequence[int]], ncols: int) -> tuple[int, ...]:
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(ncols))


def hermite_with_transform(
    rows: Sequence[Sequence[int]], ncols: int
) -> tuple[list[list[int]], list[list[int]], int]:
    """Row Hermite normal form.

    Args:
        rows: m x ncols integer matrix A
        ncols: Number of columns (A may have no rows)

    Returns:
        (H, U, rank) with U unimodular, U*A == H, the first `rank` rows of H
        nonzero in echelon form with positive pivots and entries above each
        pivot reduced into [0, pivot), and the remaining rows zero.
    """
    h = [list(row) for row in rows]
    m = len(h)
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivot_row = 0
    for col in range(ncols):
        if pivot_row == m:
            break
        while True:
            nonzero = [i for i in range(pivot_row, m) if h[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(h[i][col]))
            h[pivot_row], h[best] = h[best], h[pivot_row]
            u[pivot_row], u[best] = u[best], u[pivot_row]
            done = True
            for i in range(pivot_row + 1, m):
                if h[i][col] != 0:
                    q = h[i][col] // h[pivot_row][col]
                    h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row], strict=True)]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row], strict=True)]
                    if h[i][col] != 0:
                        done = False
            if done:
                break
        if h[pivot_row][col] == 0:
            continue
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        pivot = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // pivot
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row], strict=True)]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row], strict=True)]
        pivot_row += 1
    return h, u, pivot_row


def row_basis(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Canonical Z-basis (nonzero Hermite rows) of the row lattice."""
    h, _, rank = hermite_with_transform(rows, ncols)
    return as_matrix(h[:rank])


def rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    return hermite_with_transform(rows, ncols)[2]


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Z-basis of {x : x*A = 0}."""
    _, u, r = hermite_with_transform(rows, ncols)
    return as_matrix(u[r:])


def right_kernel(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Z-basis of {v : A*v = 0}, returned as rows."""
    return left_kernel(transpose(rows, ncols), len(rows))


def saturation(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Primitive closure (row span over Q) intersected with Z^ncols, in Hermite form."""
    annihilator = right_kernel(rows, ncols)
    return row_basis(right_kernel(annihilator, ncols), ncols)


def complete_basis(rows: Sequence[Sequence[int]], ncols: int) -> tuple[IntMatrix, IntMatrix]:
    """Extend a saturated row lattice K to a unimodular basis.

    Returns:
        (V, W) where V is unimodular, its first rank(K) rows span K, and
        W = V^-1 so that the coordinates of x in the basis V are x*W.
    """
    _, u, r = hermite_with_transform(transpose(rows, ncols), len(rows))
    # u * K^T = H  =>  K = H^T * (u^T)^-1
    w = sp.Matrix(u).T
    v = w.inv()
    if rows:
        # K * W = H^T, whose leading r x r block must be unimodular
        leading = (sp.Matrix(rows) * w)[:, :r]
        if abs(leading.det()) != 1:
            raise ValueError("rows do not span a saturated sublattice")
    return as_matrix(v.tolist()), as_matrix(w.tolist())


def solve_in_rows(basis: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coefficients c with c*basis == v, or None if v is not in the row lattice.

    `basis` rows must be linearly independent.
    """
    if not basis:
        return () if all(x == 0 for x in v) else None
    b = sp.Matrix(basis)
    target = sp.Matrix([list(v)])
    # c * B = v  <=>  B^T * c^T = v^T; least-squares form is exact for independent rows
    gram = b * b.T
    c = (target * b.T) * gram.inv()
    if c * b != target:
        return None
    if any(not entry.is_integer for entry in c):
        return None
    return tuple(int(entry) for entry in c)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return int(sp.Matrix(rows).det())
