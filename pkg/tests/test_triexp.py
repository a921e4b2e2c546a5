from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axlab import DomainError, Matrix, ShapeError, TruncSeries
from axlab.scalars import numeric as num
from axlab.triexp import (expm_reference, f_exp, f_n, f_n_closed, g_n, g_n_closed, taylor_exp,
                          tri_exp, tri_exp_numeric, tri_power_entry)
from helpers import rand_rational, rand_series, random_triangular

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


def test_f_n_examples():
    assert f_n(1, 1, 3) == 3
    assert f_n(Fraction(5), Fraction(-2), 1) == 1
    assert f_n(2, 1, 3) == 7
    with pytest.raises(DomainError):
        f_n(1, 2, 0)


def test_g_n_examples():
    assert g_n(Fraction(3), Fraction(2), Fraction(5), 0) == 1
    for N in range(6):
        assert g_n(1, 1, 1, N) == (N + 2) * (N + 1) // 2
    assert g_n(2, 1, 0, 1) == 3
    assert g_n_closed(2, 1, 0, 1) == 3


@settings(max_examples=300, deadline=None)
@given(rationals, rationals, rationals, st.integers(0, 9), st.sampled_from(["free", "st", "sx", "all"]))
def test_closed_forms_match_sums(x, s, t, N, tie):
    if tie in ("st", "all"):
        t = s
    if tie in ("sx", "all"):
        x = s
    assert f_n(s, t, N + 1) == f_n_closed(s, t, N + 1)
    assert g_n(x, s, t, N) == g_n_closed(x, s, t, N)


def test_f_exp_examples():
    assert num.close(f_exp(0, 0), 1, num.ctx.mpf(2) ** -100)
    t1 = TruncSeries.var(0, 1, 2)
    assert f_exp(t1, 0).terms == {(0,): 1, (1,): Fraction(1, 2), (2,): Fraction(1, 6)}
    with pytest.raises(DomainError):
        f_exp(t1 + 1, t1)


def test_f_exp_numeric_matches_quotient():
    ctx = num.ctx
    near = ctx.mpf(3) + ctx.mpf(10) ** -20
    for s, t in [(1, 2), (Fraction(1, 3), Fraction(-2, 5)), (3, near)]:
        a, b = num.to_num(s), num.to_num(t)
        with ctx.workprec(512):
            expect = (ctx.exp(a) - ctx.exp(b)) / (a - b)
        assert num.close(f_exp(a, b), expect, ctx.mpf(2) ** -60)


def test_power_entry_examples():
    rng = np.random.default_rng(0)
    a, b, x = Fraction(2), Fraction(-1, 3), Fraction(5, 7)
    A = Matrix([[a, x], [0, b]])
    for N in range(1, 7):
        assert tri_power_entry(A, N) == x * f_n(a, b, N)
    B = Matrix([[rand_rational(rng) if j >= i else Fraction(0) for j in range(4)] for i in range(4)])
    assert tri_power_entry(B, 1) == B[0, 3]
    assert tri_power_entry(B, 5) == (B ** 5)[0, 3]
    with pytest.raises(ShapeError):
        tri_power_entry(Matrix([[a, x], [x, b]]), 2)


def test_tri_exp_two_by_two_closed_form():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b, x = (rand_series(rng, 2, 6) for _ in range(3))
        E = tri_exp(Matrix([[a, x], [a.zero(), b]]))
        assert E[0, 0] == a.exp() and E[1, 1] == b.exp() and E[1, 0].is_zero()
        assert E[0, 1] == x * f_exp(a, b)


def test_tri_exp_nilpotent_and_zero():
    rng = np.random.default_rng(2)
    zero = TruncSeries(2, 5)
    N = Matrix([[rand_series(rng, 2, 5) if j > i else zero for j in range(3)] for i in range(3)])
    I = Matrix.identity(3, zero.one())
    assert tri_exp(N) == I + N + (N @ N).scale(Fraction(1, 2))
    assert tri_exp(Matrix([[zero] * 3 for _ in range(3)])) == I


def test_tri_exp_errors():
    x = TruncSeries.var(0, 1, 3)
    with pytest.raises(DomainError):
        tri_exp(Matrix([[x + 1, x], [x.zero(), x]]))
    with pytest.raises(ShapeError):
        tri_exp(Matrix([[x, x], [x, x]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(2, 6), st.integers(0, 10 ** 6))
def test_tri_exp_matches_taylor(n, m, D, seed):
    rng = np.random.default_rng(seed)
    A = random_triangular(rng, n, m, D)
    if rng.random() < 0.5 and n > 1:
        rows = A.tolist()
        rows[n - 1][n - 1] = rows[0][0]
        A = Matrix(rows)
    assert tri_exp(A) == taylor_exp(A)


def _close_mat(X, Y, rel):
    ctx = num.ctx
    scale = max(1, max(abs(y) for row in Y.entries for y in row))
    return all(abs(x - y) <= rel * scale for rx, ry in zip(X.entries, Y.entries) for x, y in zip(rx, ry))


def test_numeric_examples():
    ctx = num.ctx
    tol = ctx.mpf(2) ** -100
    E = tri_exp_numeric(Matrix([[1, 0], [0, 2]]))
    assert num.close(E[0, 0], ctx.e, tol) and num.close(E[1, 1], ctx.e ** 2, tol) and E[0, 1] == 0
    E = tri_exp_numeric(Matrix([[0, 1], [0, 0]]))
    assert _close_mat(E, Matrix([[1, 1], [0, 1]]), tol)


def test_numeric_matches_reference():
    rng = np.random.default_rng(4)
    tol = num.ctx.mpf(2) ** -90
    for trial in range(10):
        n = 5
        d = [Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(n)]
        d[3] = d[1]
        if trial % 2:
            d[4] = d[1] + Fraction(1, 10 ** 15)
        A = Matrix([[d[i] if i == j else (rand_rational(rng) if j > i else Fraction(0))
                     for j in range(n)] for i in range(n)])
        assert _close_mat(tri_exp_numeric(A), expm_reference(A), tol)
