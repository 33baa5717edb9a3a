"""Exact rational linear algebra on tuples of Fractions.

Vectors are tuples of Fractions, matrices are tuples of row tuples.  Everything
is immutable and hashable so vectors can be used as dict keys and set members.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Iterable, Sequence

Vec = tuple[Q, ...]
Mat = tuple[Vec, ...]


def vec(*xs) -> Vec:
    return tuple(Q(x) for x in xs)


def as_vec(xs: Iterable) -> Vec:
    return tuple(Q(x) for x in xs)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def smul(c, a: Vec) -> Vec:
    c = Q(c)
    return tuple(c * x for x in a)


def vdot(a: Vec, b: Vec) -> Q:
    return sum((x * y for x, y in zip(a, b, strict=True)), Q(0))


def vzero(n: int) -> Vec:
    return (Q(0),) * n


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(as_vec(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n))


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b))
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def rref(m: Sequence[Sequence[Q]]) -> tuple[list[list[Q]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    a = [list(row) for row in m]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = Q(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m: Sequence[Sequence[Q]]) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Sequence[Sequence[Q]], ncols: int | None = None) -> list[Vec]:
    """Basis of the right kernel, one vector per free column of the RREF.

    Each basis vector has entry 1 in its free coordinate, so the result is
    deterministic for a fixed row set.
    """
    rows = [list(r) for r in m]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for empty matrix")
        ncols = len(rows[0])
    a, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * ncols
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(tuple(v))
    return basis


def solve(m: Sequence[Sequence[Q]], rhs: Sequence[Q]) -> Vec | None:
    """One solution of m x = rhs, or None if inconsistent."""
    rows = [list(r) + [Q(rhs[i])] for i, r in enumerate(m)]
    ncols = len(m[0])
    a, pivots = rref(rows)
    for r in range(len(a)):
        if all(x == 0 for x in a[r][:ncols]) and a[r][ncols] != 0:
            return None
    x = [Q(0)] * ncols
    for r, pc in enumerate(pivots):
        if pc < ncols:
            x[pc] = a[r][ncols]
    return tuple(x)


def det(m: Sequence[Sequence[Q]]) -> Q:
    a = [list(row) for row in m]
    n = len(a)
    sign = Q(1)
    d = Q(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        d *= a[c][c]
        inv = Q(1) / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * d


def mat_inv(m: Mat) -> Mat:
    n = len(m)
    aug = [list(m[i]) + [Q(1) if j == i else Q(0) for j in range(n)] for i in range(n)]
    a, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix not invertible")
    return tuple(tuple(a[i][n:]) for i in range(n))
