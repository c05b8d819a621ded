"""Dense exact linear algebra over Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                m[i] = [a - f * b for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return m, pivots


def solve(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int
) -> tuple[list[Fraction] | None, list[list[Fraction]]]:
    """Solve a.y = b.

    Returns (particular, kernel): the particular solution has every free
    variable set to zero (None if inconsistent); the kernel basis has one
    vector per free column, in column order.
    """
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    m, pivots = rref(aug, ncols + 1)
    kernel = nullspace_from_rref(m, pivots, ncols)
    if ncols in pivots:
        return None, kernel
    y = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        y[c] = m[i][ncols]
    return y, kernel


def nullspace_from_rref(m: Matrix, pivots: list[int], ncols: int) -> list[list[Fraction]]:
    piv = [c for c in pivots if c < ncols]
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def nullspace(a: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    m, pivots = rref(a, ncols)
    return nullspace_from_rref(m, pivots, ncols)


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
