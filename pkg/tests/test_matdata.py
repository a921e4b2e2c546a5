from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axlab import DomainError, Matrix, ShapeError, TruncSeries
from axlab.matdata import (UnsupportedInput, WkmPoint, exp_data, general_exp, matrix_data,
                           nilpotent_exp, nilpotent_log, phi)
from axlab.scalars import exact_rank, generic_rank
from axlab.triexp import tri_exp
from helpers import (distinct_series, rand_series, random_composition, random_point,
                     strict_upper)

F = Fraction


def _jordan(n, z=F(0)):
    return Matrix([[z if i == j else F(int(j == i + 1)) for j in range(n)] for i in range(n)])


def _identity_point(mult):
    n = sum(mult)
    pivots, start = [], 0
    for mi in mult:
        pivots.append(list(range(start, start + mi)))
        start += mi
    pe = [[F(0)] * (mi * (n - mi)) for mi in mult]
    ne = [[F(0)] * (mi * mi) for mi in mult]
    return WkmPoint(tuple(mult), pivots, pe, ne)


def test_phi_examples():
    z = [F(1), F(-2), F(3, 5)]
    assert phi(_identity_point([1, 1, 1]), z) == Matrix.diagonal(z)
    pt = _identity_point([4])
    pt = pt.with_coords([F(int(c == r + 1)) for r in range(4) for c in range(4)])
    assert phi(pt, [F(0)]) == _jordan(4)
    with pytest.raises(DomainError):
        phi(_identity_point([1, 1]), [F(2), F(2)])
    with pytest.raises(ShapeError):
        phi(_identity_point([1, 1]), [F(2)])


def test_matrix_data_examples():
    d = matrix_data(Matrix.diagonal([F(1), F(1), F(2)]))
    assert d.k == 2 and d.m == [2, 1]
    assert d.P.block([0, 1, 2], [0, 1]) == Matrix([[F(1), F(0)], [F(0), F(1)], [F(0), F(0)]])
    assert all(Ni.is_zero() for Ni in d.N)
    z = TruncSeries.var(0, 1, 4)
    d = matrix_data(Matrix([[z, z.one()], [z.zero(), z]]))
    assert d.k == 1 and d.m == [2]
    assert d.N[0] == Matrix([[F(0), F(1)], [F(0), F(0)]])


def test_matrix_data_errors():
    A = Matrix([[F(1), F(2)], [F(3), F(4)]])
    with pytest.raises(UnsupportedInput):
        matrix_data(A)
    with pytest.raises(DomainError):
        matrix_data(Matrix.diagonal([F(1), F(2)]), [F(1), F(5)])
    with pytest.raises(UnsupportedInput):
        matrix_data(Matrix.diagonal([F(1), F(2)]), [F(1)])


def _same_span(X, Y):
    return exact_rank([list(r) for r in X.entries]) == exact_rank(
        [list(a) + list(b) for a, b in zip(X.entries, Y.entries)]) == exact_rank([list(r) for r in Y.entries])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_phi_decompose_round_trip_rational(n, seed):
    rng = np.random.default_rng(seed)
    mult = random_composition(rng, n, 3)
    pt = random_point(rng, mult, 1, 0, series_n=False)
    z = [F(int(v)) for v in rng.choice(np.arange(-6, 7), len(mult), replace=False)]
    A = phi(pt, z)
    d = matrix_data(A, z)
    assert d.m == list(mult) and d.z == z
    P0 = pt.basis()
    for blk in d.blocks():
        assert _same_span(d.P.block(range(n), blk), P0.block(range(n), blk))
    canon = WkmPoint.from_data(d)
    assert phi(canon, z) == A
    assert WkmPoint.from_data(matrix_data(phi(canon, z), z)) == canon


def test_phi_five_by_five_three_two():
    rng = np.random.default_rng(11)
    pt = random_point(rng, [3, 2], 1, 0, series_n=False)
    z = [F(1), F(-1)]
    d = matrix_data(phi(pt, z), z)
    assert d.m == [3, 2]
    assert phi(WkmPoint.from_data(d), z) == phi(pt, z)


def test_nilpotent_examples():
    assert nilpotent_exp(Matrix.zeros(3, 3, F(0))) == Matrix.identity(3, F(1))
    a = F(7, 3)
    assert nilpotent_exp(Matrix([[F(0), a], [F(0), F(0)]])) == Matrix([[F(1), a], [F(0), F(1)]])
    N = _jordan(4)
    I = Matrix.identity(4, F(1))
    assert nilpotent_exp(N) == I + N + (N @ N).scale(F(1, 2)) + (N @ N @ N).scale(F(1, 6))
    assert nilpotent_log(I) == Matrix.zeros(4, 4, F(0))
    assert nilpotent_log(Matrix([[F(1), a], [F(0), F(1)]])) == Matrix([[F(0), a], [F(0), F(0)]])
    with pytest.raises(DomainError):
        nilpotent_exp(Matrix([[F(1), F(0)], [F(0), F(0)]]))
    with pytest.raises(DomainError):
        nilpotent_log(Matrix([[F(2), F(0)], [F(0), F(1)]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10 ** 6))
def test_log_exp_inverse(n, seed):
    rng = np.random.default_rng(seed)
    N = strict_upper(rng, n)
    assert nilpotent_log(nilpotent_exp(N)) == N
    U = nilpotent_exp(N)
    assert nilpotent_exp(nilpotent_log(U)) == U


def test_nilpotent_over_series():
    rng = np.random.default_rng(5)
    zero = TruncSeries(2, 5)
    N = Matrix([[rand_series(rng, 2, 5) if j > i else zero for j in range(3)] for i in range(3)])
    assert nilpotent_log(nilpotent_exp(N)) == N
    assert nilpotent_exp(N) == tri_exp(N)


def test_exp_data_examples():
    rng = np.random.default_rng(6)
    z = distinct_series(rng, 3, 1, 6)
    d = matrix_data(Matrix.diagonal(z))
    e = exp_data(d)
    assert e.z == [x.exp() for x in z] and e.P == d.P
    assert all(Ni.is_zero() for Ni in e.N)
    J = _jordan(3)
    d = matrix_data(J, [F(0)])
    e = exp_data(d)
    assert e.N[0] == nilpotent_exp(d.N[0]) - Matrix.identity(3, F(1))
    bad = matrix_data(Matrix.diagonal([F(1), F(2)]))
    with pytest.raises(DomainError):
        exp_data(bad)


def test_general_exp_examples():
    zero = TruncSeries(1, 5)
    Z = Matrix.zeros(3, 3, zero)
    assert general_exp(Z) == Matrix.identity(3, zero.one())
    rng = np.random.default_rng(7)
    B1 = Matrix([[rand_series(rng, 1, 5) for _ in range(2)] for _ in range(2)])
    B2 = Matrix([[rand_series(rng, 1, 5)]])
    A = Matrix([B1.row(0) + [zero], B1.row(1) + [zero], [zero, zero, B2[0, 0]]])
    E = general_exp(A)
    assert E.block([0, 1], [0, 1]) == general_exp(B1)
    assert E[2, 2] == B2[0, 0].exp() and E[0, 2].is_zero() and E[2, 0].is_zero()
    with pytest.raises(DomainError):
        general_exp(Matrix([[zero.one()]]))


def _functorial(rng, n, kmax, m, D):
    mult = random_composition(rng, n, kmax)
    z = [x for x in distinct_series(rng, len(mult), m, D)]
    A = phi(random_point(rng, mult, m, D), z)
    assert exp_data(matrix_data(A, z)) == matrix_data(general_exp(A), [x.exp() for x in z])


@pytest.mark.parametrize("seed", range(12))
def test_exp_functorial_one_variable(seed):
    rng = np.random.default_rng(seed)
    _functorial(rng, int(rng.integers(1, 5)), 3, 1, 12)


@pytest.mark.parametrize("seed", range(6))
def test_exp_functorial_two_variables(seed):
    rng = np.random.default_rng(100 + seed)
    _functorial(rng, int(rng.integers(1, 4)), 3, 2, 8)


def test_series_data_rank():
    rng = np.random.default_rng(8)
    z = distinct_series(rng, 2, 1, 8)
    A = phi(random_point(rng, [2, 1], 1, 8), z)
    d = matrix_data(A, z)
    assert generic_rank([[x if not isinstance(x, TruncSeries) else x for x in row]
                         for row in d.P.entries]) == 3
