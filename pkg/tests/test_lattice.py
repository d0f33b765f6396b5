from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from f1quiver.lattice import (
    clear_denominators,
    fourier_motzkin,
    free_cokernel_projection,
    integer_rank,
    matmul,
    nullspace,
    rational_rank,
    smith_normal_form,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda k: st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=n, max_size=n)))


def _diag(d):
    return [d[i][i] for i in range(min(len(d), len(d[0])))]


def test_snf_fixed_cases():
    assert _diag(smith_normal_form([[1, 0], [0, 1]])[1]) == [1, 1]
    assert _diag(smith_normal_form([[0, 0], [0, 0]])[1]) == [0, 0]
    assert _diag(smith_normal_form([[2, 4], [2, 4]])[1]) == [2, 0]


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_against_sympy(a):
    u, d, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(Matrix(u).det()) == 1 and abs(Matrix(v).det()) == 1
    for i in range(len(d)):
        for j in range(len(d[0])):
            if i != j:
                assert d[i][j] == 0
    diag = _diag(d)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    expected = sympy_snf(Matrix(a), domain=ZZ)
    ref = sorted(abs(expected[i, i]) for i in range(min(expected.shape)) if expected[i, i])
    assert sorted(nz) == ref


def test_projection_band_lattice():
    # one cycle whose image is 2*a1 - 2*a2: the saturated quotient has rank 1
    p = free_cokernel_projection([[2, -2]], 2)
    assert p.rank == 1
    assert p((1, 0)) == p((0, 1))
    assert abs(p((1, 0))[0]) == 1


def test_projection_trivial_and_full():
    p = free_cokernel_projection([], 2)
    assert p.rank == 2 and p((3, 4)) == (3, 4)
    assert free_cokernel_projection([[1, 0], [0, 1]], 2).rank == 0


@settings(max_examples=100, deadline=None)
@given(small_matrices)
def test_projection_kills_columns_and_is_onto(a):
    n = len(a)
    cols = [[a[i][j] for i in range(n)] for j in range(len(a[0]))]
    p = free_cokernel_projection(cols, n)
    assert p.rank == n - rational_rank(a)
    for c in cols:
        assert all(x == 0 for x in p(c))
    # surjective onto Z^r: the Smith form of P has unit diagonal
    if p.rank:
        _, d, _ = smith_normal_form([list(r) for r in p.matrix])
        assert _diag(d) == [1] * p.rank


def test_integer_rank():
    assert integer_rank(smith_normal_form([[2, 4], [2, 4]])[1]) == 1


@settings(max_examples=100, deadline=None)
@given(small_matrices)
def test_nullspace(rows):
    basis = nullspace(rows, len(rows[0]))
    assert len(basis) == len(rows[0]) - rational_rank(rows)
    for vec in basis:
        assert all(sum(Fraction(x) * y for x, y in zip(r, vec)) == 0 for r in rows)


def test_clear_denominators():
    assert clear_denominators([Fraction(1, 2), Fraction(1, 3)]) == [3, 2]
    assert clear_denominators([Fraction(0)]) == [0]


def test_fourier_motzkin_feasible_and_not():
    x = fourier_motzkin([([1, 0], 1), ([0, 1], 1), ([1, -1], 0), ([-1, 1], 0)], 2)
    assert x is not None and x[0] >= 1 and x[0] == x[1]
    assert fourier_motzkin([([1], 1), ([-1], 0)], 1) is None


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(-3, 3)),
                min_size=1, max_size=5))
def test_fourier_motzkin_points_satisfy(rows):
    x = fourier_motzkin(rows, 3)
    if x is not None:
        for coeffs, rhs in rows:
            assert sum(c * v for c, v in zip(coeffs, x)) >= rhs
    else:
        # infeasibility cross-check on a coarse rational grid
        grid = [Fraction(k, 2) for k in range(-12, 13)]
        assert not any(all(sum(c * v for c, v in zip(co, (a, b, c_))) >= r for co, r in rows)
                       for a in grid for b in grid for c_ in grid)


@pytest.mark.parametrize("rows", [[[1, 2], [2, 4]], [[0, 0]], [[1, 0], [0, 1]]])
def test_rational_rank(rows):
    assert rational_rank(rows) == Matrix(rows).rank()
