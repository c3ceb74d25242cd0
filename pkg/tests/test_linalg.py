import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from markovmoments import linalg
from markovmoments.jets import det_cofactor

from oracles import rank_by_elimination

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_rank_matches_elimination(r, c, data):
    rows = [[data.draw(fractions) for _ in range(c)] for _ in range(r)]
    # make rank deficiency likely
    if r > 1 and data.draw(st.booleans()):
        rows[-1] = [a + 2 * b for a, b in zip(rows[0], rows[1 % r])]
    assert linalg.rank(rows) == rank_by_elimination(rows)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 4), st.data())
def test_det_matches_cofactor(n, data):
    M = [[data.draw(fractions) for _ in range(n)] for _ in range(n)]
    assert linalg.det(M) == (det_cofactor(M) if n else 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 6), st.data())
def test_nullspace(r, c, data):
    rows = [[data.draw(fractions) for _ in range(c)] for _ in range(r)]
    basis = linalg.nullspace(rows)
    assert len(basis) == c - linalg.rank(rows)
    for x in basis:
        assert all(sum(a * b for a, b in zip(row, x)) == 0 for row in rows)


def test_empty_det():
    assert linalg.det([]) == 1
