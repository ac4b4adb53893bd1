"""Index sets (subsets of [q] = {1..q}) and the sign conventions built on them.

An index set is a plain sorted tuple of positive ints.  All differential,
product and homotopy formulas in the package go through ``sign_pair`` and
``sign_elem``.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Tuple

IndexSet = Tuple[int, ...]


def index_set(members: Iterable[int]) -> IndexSet:
    """Canonical sorted tuple; rejects duplicates and non-positive members."""
    out = tuple(sorted(members))
    if any(a == b for a, b in zip(out, out[1:])):
        raise ValueError(f"repeated member in index set {out}")
    if out and out[0] < 1:
        raise ValueError(f"index sets live in [q] = 1..q, got {out}")
    return out


def union(a: IndexSet, b: Iterable[int]) -> IndexSet:
    return tuple(sorted(set(a).union(b)))


def minus(a: IndexSet, b: Iterable[int]) -> IndexSet:
    drop = set(b)
    return tuple(x for x in a if x not in drop)


def add(a: IndexSet, i: int) -> IndexSet:
    return tuple(sorted(a + (i,)))


def remove(a: IndexSet, i: int) -> IndexSet:
    return tuple(x for x in a if x != i)


def contains(a: IndexSet, b: Iterable[int]) -> bool:
    s = set(a)
    return all(x in s for x in b)


def all_subsets(q: int) -> Iterator[IndexSet]:
    """Every subset of [q], by cardinality and then lexicographically."""
    ground = range(1, q + 1)
    for k in range(q + 1):
        yield from combinations(ground, k)


def sign_pair(a: IndexSet, b: IndexSet) -> int:
    """sign(A, B): 0 if A and B meet, else (-1)^(transpositions sorting the sequence A,B)."""
    sa = set(a)
    if any(x in sa for x in b):
        return 0
    # inversions of the concatenation: pairs (x in A, y in B) with x > y
    inv = sum(1 for y in b for x in a if x > y)
    return -1 if inv & 1 else 1


def sign_elem(i: int, a: IndexSet) -> int:
    if i in a:
        return 0
    smaller = sum(1 for x in a if x < i)
    return -1 if smaller & 1 else 1


def binom(n: int, k: int) -> int:
    """Binomial coefficient that is 0 outside 0 <= k <= n (including any negative argument)."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def permutation_sign(seq) -> int:
    """Parity of the number of inversions in ``seq``."""
    inv = 0
    for i, x in enumerate(seq):
        for y in seq[i + 1:]:
            if x > y:
                inv += 1
    return -1 if inv & 1 else 1
