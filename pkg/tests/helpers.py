"""Seeded generators shared by the test modules."""
from fractions import Fraction
import itertools

import numpy as np

from axlab import Matrix, TruncSeries
from axlab.matdata import WkmPoint
from axlab.scalars import exact_rank


def rand_rational(rng, h=5, dmax=3):
    return Fraction(int(rng.integers(-h, h + 1)), int(rng.integers(1, dmax + 1)))


def rand_series(rng, m, D, deg=2, density=0.6, const=False, h=5):
    """Random polynomial of total degree <= deg, embedded at order D."""
    terms = {}
    for e in itertools.product(range(deg + 1), repeat=m):
        if sum(e) > min(deg, D) or (sum(e) == 0 and not const):
            continue
        if rng.random() < density:
            terms[e] = rand_rational(rng, h)
    return TruncSeries(m, D, terms)


def compositions(n):
    """All ordered tuples of positive ints summing to n."""
    for cuts in itertools.product((0, 1), repeat=n - 1):
        out, c = [], 1
        for b in cuts:
            if b:
                out.append(c)
                c = 1
            else:
                c += 1
        out.append(c)
        yield tuple(out)


def distinct_series(rng, k, m, D):
    """k series with zero constant term whose pairwise differences have a linear term.

    Differences of higher valuation make divided differences lose more than
    the truncation order on larger matrices.
    """
    while True:
        vals = [TruncSeries.var(0, m, D).scale(i + 1) + rand_series(rng, m, D) for i in range(k)]
        if all((vals[i] - vals[j]).valuation() == 1 for i in range(k) for j in range(i)):
            return vals


def triangular_instance(rng, comp, m=2, D=6, shuffle=True, density=0.8):
    """Upper triangular series matrix whose diagonal has multiplicities ``comp``."""
    vals = distinct_series(rng, len(comp), m, D)
    diag = [vals[c] for c, mult in enumerate(comp) for _ in range(mult)]
    if shuffle:
        diag = [diag[i] for i in rng.permutation(len(diag))]
    n = len(diag)
    zero = TruncSeries(m, D)
    rows = [[diag[i] if i == j else
             (rand_series(rng, m, D) if j > i and rng.random() < density else zero)
             for j in range(n)] for i in range(n)]
    return Matrix(rows)


def random_triangular(rng, n, m, D, deg=2):
    """Upper triangular series matrix, zero constant terms, random diagonal."""
    zero = TruncSeries(m, D)
    return Matrix([[rand_series(rng, m, D, deg) if j >= i else zero for j in range(n)]
                   for i in range(n)])


def random_composition(rng, n, kmax):
    k = int(rng.integers(1, min(n, kmax) + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, n), k - 1, replace=False)) if k > 1 else []
    return [b - a for a, b in zip([0] + cuts, cuts + [n])]


def random_point(rng, mult, m, D, series_n=True):
    """Chart point with rational P entries and strictly upper triangular N_i."""
    n = sum(mult)
    while True:
        rows = [int(r) for r in rng.permutation(n)]
        pivots, pos = [], 0
        for mi in mult:
            pivots.append(sorted(rows[pos:pos + mi]))
            pos += mi
        pe = [[Fraction(int(rng.integers(-2, 3))) for _ in range(mi * (n - mi))] for mi in mult]
        ne = []
        for mi in mult:
            ne.append([(rand_series(rng, m, D) if series_n else rand_rational(rng))
                       if c > r else (TruncSeries(m, D) if series_n else Fraction(0))
                       for r in range(mi) for c in range(mi)])
        pt = WkmPoint(tuple(mult), pivots, pe, ne)
        if exact_rank(pt.basis().entries) == n:
            return pt


def strict_upper(rng, n, h=4):
    return Matrix([[rand_rational(rng, h) if j > i else Fraction(0) for j in range(n)]
                   for i in range(n)])
