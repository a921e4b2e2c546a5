from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axlab import DomainError, Matrix, SeriesFraction, ShapeError, TruncSeries
from axlab.eigencoords import (canonical_basis, check_basis, coordinates_from_basis,
                               eigen_classes, eigencoordinates, matrix_from_eigencoordinates,
                               predict_exp_eigencoords)
from axlab.triexp import tri_exp
from helpers import compositions, rand_series, triangular_instance

M, D = 2, 6


def _two(rng, equal=False):
    f1 = TruncSeries.var(0, M, D) + rand_series(rng, M, D)
    f2 = f1 if equal else TruncSeries.var(1, M, D) + rand_series(rng, M, D)
    g = rand_series(rng, M, D)
    return f1, f2, g, Matrix([[f1, g], [f1.zero(), f2]])


def test_distinct_pair_vector():
    rng = np.random.default_rng(0)
    f1, f2, g, A = _two(rng)
    cb = canonical_basis(A)
    v2 = cb.vector(1)
    assert v2[0] == -(SeriesFraction(g) / SeriesFraction(f1 - f2))
    assert v2[1] == SeriesFraction(f1.one())
    assert eigencoordinates(A).kind(0, 1) == "t"


def test_equal_pair_gives_s():
    rng = np.random.default_rng(1)
    z, _, g, A = _two(rng, equal=True)
    cb = canonical_basis(A)
    assert cb.vector(0)[1].is_zero() and cb.vector(1)[0].is_zero()
    ec = eigencoordinates(A)
    assert ec.kind(0, 1) == "s" and ec.value(0, 1) == SeriesFraction(g)


def test_zero_matrix():
    zero = TruncSeries(M, D)
    Z = Matrix([[zero] * 3 for _ in range(3)])
    ec = eigencoordinates(Z)
    assert all(v.is_zero() for _, v in ec.entries.values())
    assert matrix_from_eigencoordinates(ec) == Z


def test_inverse_two_by_two():
    rng = np.random.default_rng(2)
    f1, f2, _, A = _two(rng)
    c = SeriesFraction(rand_series(rng, M, D))
    ec = eigencoordinates(A)
    ec.entries[(0, 1)] = ("t", c)
    B = matrix_from_eigencoordinates(ec)
    assert SeriesFraction(B[0, 1]) == c * (f1 - f2)


def test_wrong_kind_rejected():
    rng = np.random.default_rng(3)
    _, _, _, A = _two(rng)
    ec = eigencoordinates(A)
    ec.entries[(0, 1)] = ("s", ec.value(0, 1))
    with pytest.raises(ShapeError):
        matrix_from_eigencoordinates(ec)


def test_input_errors():
    x = TruncSeries.var(0, 1, 3)
    with pytest.raises(ShapeError):
        eigencoordinates(Matrix([[x, x], [x, x]]))
    with pytest.raises(DomainError):
        eigencoordinates(Matrix([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)]]))
    ec = eigencoordinates(Matrix([[x + 1, x], [x.zero(), x]]))
    with pytest.raises(DomainError):
        predict_exp_eigencoords(ec)


def test_eigen_classes():
    x = TruncSeries.var(0, 1, 3)
    assert eigen_classes([x, 2 * x, x, x]) == [[0, 2, 3], [1]]


def test_predict_examples():
    rng = np.random.default_rng(4)
    z, _, g, A = _two(rng, equal=True)
    pred = predict_exp_eigencoords(eigencoordinates(A))
    assert pred.value(0, 1) == SeriesFraction(z.exp()) * g
    _, _, _, B = _two(rng)
    ec = eigencoordinates(B)
    assert predict_exp_eigencoords(ec).value(0, 1) == ec.value(0, 1)
    # triple block: exp of the nilpotent part by hand
    a, b, c = (rand_series(rng, M, D) for _ in range(3))
    zero = z.zero()
    T = Matrix([[z, a, c], [zero, z, b], [zero, zero, z]])
    pred = predict_exp_eigencoords(eigencoordinates(T))
    ez = SeriesFraction(z.exp())
    assert pred.value(0, 2) == ez * (c + (a * b).scale(Fraction(1, 2)))
    assert pred.value(0, 1) == ez * a and pred.value(1, 2) == ez * b


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.sampled_from(list(compositions(n)))),
       st.integers(0, 10 ** 6), st.booleans())
def test_basis_round_trip_and_exp(comp, seed, shuffle):
    rng = np.random.default_rng(seed)
    A = triangular_instance(rng, comp, m=M, D=D, shuffle=shuffle)
    cb = canonical_basis(A)
    assert check_basis(A, cb)
    ec = coordinates_from_basis(cb)
    assert matrix_from_eigencoordinates(ec) == A
    assert eigencoordinates(tri_exp(A)) == predict_exp_eigencoords(ec)
