from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from pivotres.linalg import bareiss_rank, in_column_span, nullspace, rref

entries = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(0, 5))
    c = draw(st.integers(1, 5))
    rank_one = draw(st.booleans())
    if rank_one and r:
        u = [draw(entries) for _ in range(r)]
        v = [draw(entries) for _ in range(c)]
        return [[a * b for b in v] for a in u], c
    return [[draw(entries) for _ in range(c)] for _ in range(r)], c


def sym(m, c):
    return sympy.Matrix(len(m), c, [sympy.Rational(x.numerator, x.denominator) for row in m for x in row])


@given(matrices())
def test_rank_matches_sympy(mc):
    m, c = mc
    assert bareiss_rank(m) == sym(m, c).rank()


@given(matrices())
def test_nullspace(mc):
    m, c = mc
    basis = nullspace(m, c)
    assert len(basis) == c - bareiss_rank(m)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@given(matrices())
def test_rref_rank(mc):
    m, c = mc
    reduced, pivots = rref(m)
    assert len(pivots) == bareiss_rank(m)


def test_column_span():
    m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert in_column_span(m, [Fraction(3), Fraction(6)])
    assert not in_column_span(m, [Fraction(1), Fraction(0)])
    assert bareiss_rank([]) == 0
