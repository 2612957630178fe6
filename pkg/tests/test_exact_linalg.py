from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from jordec.errors import InputError
from jordec.exact_linalg import (Matrix, SparseMatrix, SpanSolver, format_rational, nullspace,
                                 rank, rref, solve_in_span, to_rational)

F = Fraction


def M(rows):
    return Matrix.from_rows(rows)


# -- rationals ---------------------------------------------------------------

@pytest.mark.parametrize("text,value", [("3/2", F(3, 2)), ("-4", F(-4)), ("6/4", F(3, 2)),
                                        ("0", F(0)), (" 7 ", F(7))])
def test_parse_rational(text, value):
    assert to_rational(text) == value


@pytest.mark.parametrize("bad", ["1.5", "1e3", "", "x", "1/0", 1.5, True])
def test_parse_rational_rejects_inexact(bad):
    with pytest.raises(InputError):
        to_rational(bad)


def test_format_rational_is_canonical():
    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(F(-6, 3)) == "-2"
    assert format_rational(0) == "0"


def test_arithmetic_two_ways_agrees():
    a, b = F(2, 3), F(5, 7)
    assert a + b == F(2 * 7 + 5 * 3, 21) == F(29, 21)
    assert (a + b).denominator == 21


# -- rref --------------------------------------------------------------------

def test_rref_identity():
    r = rref(Matrix.identity(2))
    assert r.reduced == Matrix.identity(2)
    assert r.pivot_columns == (0, 1) and r.rank == 2


def test_rref_zero():
    r = rref(Matrix.zeros(2, 2))
    assert r.reduced == Matrix.zeros(2, 2)
    assert r.pivot_columns == () and r.rank == 0


def test_rref_hand_example():
    # R2 <- R2 - R1/2, then R1 <- R1/2
    r = rref(M([[2, 4], [1, 2]]))
    assert r.reduced == M([[1, 2], [0, 0]])
    assert r.pivot_columns == (0,) and r.rank == 1


def test_rref_sparse_carrier_matches_dense():
    a = M([[0, 2, 4, 1], [0, 1, 2, 0], [3, 0, 0, 1]])
    dense = rref(a)
    sparse = rref(SparseMatrix.from_dense(a))
    assert sparse.reduced.to_dense() == dense.reduced
    assert sparse.pivot_columns == dense.pivot_columns == (0, 1, 3)


# -- nullspace ---------------------------------------------------------------

def test_nullspace_full_rank():
    assert nullspace(Matrix.identity(3)) == []


def test_nullspace_zero_map():
    assert nullspace(Matrix.zeros(2, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_nullspace_hand_example():
    basis = nullspace(M([[1, 1, 0]]))
    assert basis == [(-1, 1, 0), (0, 0, 1)]
    for v in basis:
        assert M([[1, 1, 0]]).apply(v) == (0,)


def test_nullspace_mod_p():
    # x + 2y = 0 over F_3 -> y free, x = -2y = y
    assert nullspace(M([[1, 2]]), modulus=3) == [(1, 1)]
    with pytest.raises(InputError):
        rank(M([[1]]), modulus=9)
    with pytest.raises(InputError):
        rank(M([[1]]), modulus=2)


# -- solve_in_span -----------------------------------------------------------

def test_solve_in_span_examples():
    assert solve_in_span([(1, 0), (0, 1)], (1, 2)) == (1, 2)
    assert solve_in_span([(1, 0)], (0, 1)) is None
    # (3,1) = 2(1,1) + 1(1,-1)
    assert solve_in_span([(1, 1), (1, -1)], (3, 1)) == (2, 1)


def test_solve_in_span_errors():
    with pytest.raises(InputError):
        solve_in_span([(1, 0)], (1, 0, 0))
    with pytest.raises(InputError):
        SpanSolver([(1, 2), (2, 4)])


def test_solve_in_empty_span():
    assert solve_in_span([], (0, 0)) == ()
    assert solve_in_span([], (0, 1)) is None


# -- properties against sympy as an independent oracle -----------------------

small = st.integers(-4, 4)
rationals = st.builds(F, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def matrices(draw, entries=small, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = [[draw(entries) for _ in range(c)] for _ in range(r)]
    return Matrix(r, c, tuple(x for row in rows for x in row))


@settings(max_examples=150, deadline=None)
@given(matrices(entries=st.one_of(small, rationals)))
def test_rref_matches_sympy(a):
    ours = rref(a)
    expected, pivots = sympy.Matrix(a.rows, a.cols, [sympy.Rational(x.numerator, x.denominator)
                                                     for x in a.entries]).rref()
    assert ours.pivot_columns == tuple(pivots)
    got = [[sympy.Rational(x.numerator, x.denominator) for x in ours.reduced.row(i)]
           for i in range(a.rows)]
    assert sympy.Matrix(a.rows, a.cols, [x for row in got for x in row]) == expected


@settings(max_examples=150, deadline=None)
@given(matrices(entries=st.one_of(small, rationals)))
def test_nullspace_properties(a):
    basis = nullspace(a)
    for v in basis:
        assert all(x == 0 for x in a.apply(v))
    assert rank(a) + len(basis) == a.cols
    if basis:
        assert rank(Matrix.from_rows(basis)) == len(basis)
    r = rref(a)
    assert rref(r.reduced) == r
    assert rank(SparseMatrix.from_dense(a)) == r.rank
    assert nullspace(SparseMatrix.from_dense(a)) == basis


@settings(max_examples=100, deadline=None)
@given(matrices(), st.sampled_from([3, 5, 7]))
def test_mod_p_nullspace_annihilates(a, p):
    for v in nullspace(a, modulus=p):
        assert all(x % p == 0 for x in a.apply(v))
    assert rank(a, modulus=p) <= rank(a)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4), st.lists(small, min_size=4, max_size=4))
def test_solve_in_span_roundtrip(a, coeffs):
    basis = nullspace(a)
    target = tuple(sum((c * v[i] for c, v in zip(coeffs, basis)), F(0)) for i in range(a.cols))
    coords = solve_in_span(basis, target)
    assert coords == tuple(coeffs[:len(basis)])
