"""Exact linear algebra over Q on dense row-major lists.

Rank uses fraction-free (Bareiss) elimination on an integer copy of the
matrix; kernels use reduced row echelon form over Fractions.  Pivot choice
is always the first nonzero entry in row-major order.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Sequence

Matrix = List[List[Fraction]]


def _integer_rows(m: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for row in m:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def bareiss_rank(m: Sequence[Sequence[Fraction]]) -> int:
    if not m or not m[0]:
        return 0
    a = _integer_rows(m)
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            ar = a[r]
            f = ar[col]
            for c in range(col + 1, ncols):
                # exact by Sylvester's identity
                ar[c] = (p * ar[c] - f * a[rank][c]) // prev
            ar[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rref(m: Sequence[Sequence[Fraction]]):
    """Return (reduced matrix, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return a, pivots


def nullspace(m: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of {v : m v = 0}; ``ncols`` is needed when m has no rows."""
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def in_column_span(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    """Is ``v`` a combination of the columns of ``m`` (rows = len(v))?"""
    if not any(v):
        return True
    if not m or not m[0]:
        return False
    base = bareiss_rank(m)
    aug = [list(row) + [x] for row, x in zip(m, v)]
    return bareiss_rank(aug) == base
