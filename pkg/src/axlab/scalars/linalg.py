"""Exact dense linear algebra over Q and over series fractions.

Rational routines clear denominators row by row and run fraction-free
(Bareiss) elimination on Python ints.  The generic routines only need
``+ - * /`` and truthiness, so they work for Fraction and SeriesFraction
entries alike.
"""
from fractions import Fraction
import math

import numpy as np

from .series import ShapeError, TruncSeries

DEFAULT_HEIGHT = 97


def _int_rows(M):
    """Rows of a rational matrix scaled to integer lists."""
    out = []
    for row in M:
        row = [Fraction(x) for x in row]
        L = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * L) for x in row])
    return out


def _bareiss(rows, ncols, col_order=None, pick="first"):
    """In-place fraction-free row echelon; returns pivot (row, col) list."""
    cols = list(range(ncols)) if col_order is None else list(col_order)
    nrows = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in cols:
        if r == nrows:
            break
        cand = [i for i in range(r, nrows) if rows[i][c]]
        if not cand:
            continue
        if pick == "first":
            p = cand[0]
        elif pick == "last":
            p = cand[-1]
        else:
            p = min(cand, key=lambda i: abs(rows[i][c]))
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            f = rows[i][c]
            rows[i] = [(piv * a - f * b) // prev for a, b in zip(rows[i], rows[r])]
        prev = piv
        pivots.append((r, c))
        r += 1
    return pivots


def exact_rank(M, pivoting="first", column_order=None):
    """Rank over Q.  ``pivoting`` in first|last|smallest, ``column_order`` a permutation."""
    rows = _int_rows(M)
    if not rows:
        return 0
    ncols = len(rows[0])
    return len(_bareiss(rows, ncols, column_order, pivoting))


def rref(M):
    """Reduced row echelon form over Q as Fractions, plus pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = pick_pivot(A, range(r, nrows), c)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def primitive(vec):
    """Scale a rational vector to coprime integers, first nonzero positive."""
    vec = [Fraction(x) for x in vec]
    nz = [x for x in vec if x]
    if not nz:
        return [0] * len(vec)
    L = math.lcm(*(x.denominator for x in nz))
    ints = [int(x * L) for x in vec]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return ints


def exact_nullspace(M, ncols=None):
    """Right nullspace basis as primitive integer vectors (RREF order)."""
    if not M:
        if ncols is None:
            return []
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(primitive(v))
    return basis


# -- generic field routines ------------------------------------------------

def _weight(x):
    """Pivot preference: valuation of a series fraction, 0 for other scalars."""
    num = getattr(x, "num", None)
    if num is None:
        return 0
    return num.valuation() - x.den_valuation()


def pick_pivot(A, rows, c):
    """Row in ``rows`` with a nonzero entry in column c of least valuation."""
    best, bw = None, None
    for i in rows:
        x = A[i][c]
        if x:
            w = _weight(x)
            if best is None or w < bw:
                best, bw = i, w
                if w <= 0:
                    break
    return best


def _gauss_jordan(A, B):
    """Reduce [A | B] with A square; returns A^{-1} B as list of rows."""
    n = len(A)
    A = [list(r) for r in A]
    B = [list(r) for r in B]
    for c in range(n):
        p = pick_pivot(A, range(c, n), c)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        B[c], B[p] = B[p], B[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        B[c] = [x * inv for x in B[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
                B[i] = [a - f * b for a, b in zip(B[i], B[c])]
    return B


def solve(A, b):
    """Solve A x = b for square invertible A; b a vector or list of rows."""
    if len(A) != len(A[0] if A else []):
        raise ShapeError("solve needs a square matrix")
    vector = b and not isinstance(b[0], (list, tuple))
    B = [[x] for x in b] if vector else b
    X = _gauss_jordan(A, B)
    return [r[0] for r in X] if vector else X


def inverse(A, one=None):
    n = len(A)
    if one is None:
        one = Fraction(1)
    zero = one - one
    I = [[one if i == j else zero for j in range(n)] for i in range(n)]
    return _gauss_jordan(A, I)


def generic_rank(A):
    """Rank over any exact field whose elements support truthiness."""
    A = [list(r) for r in A]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = pick_pivot(A, range(r, nrows), c)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        for i in range(r + 1, nrows):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def generic_nullspace(A, ncols, one):
    """Right nullspace over a generic field; vectors normalised to 1 at the free slot."""
    A = [list(r) for r in A]
    nrows = len(A)
    zero = one - one
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = pick_pivot(A, range(r, nrows), c)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][fc]
        basis.append(v)
    return basis


# -- jacobians ---------------------------------------------------------------

def random_rational(rng, height=DEFAULT_HEIGHT):
    num = int(rng.integers(-height, height + 1))
    den = int(rng.integers(1, height + 1))
    return Fraction(num, den)


def jacobian(fns):
    """Matrix of partial derivatives (order D-1 series), rows = functions."""
    if not fns:
        return []
    m = fns[0].num_vars
    return [[f.derivative(v) for v in range(m)] for f in fns]


def jacobian_rank_at_points(fns, samples=3, seed=0, height=DEFAULT_HEIGHT):
    """Max exact rank of the Jacobian over ``samples`` random rational points."""
    fns = list(fns)
    if not fns:
        return 0
    m, D = fns[0].num_vars, fns[0].order
    for f in fns:
        if not isinstance(f, TruncSeries) or f.num_vars != m or f.order != D:
            raise ShapeError("jacobian needs series with a common ring")
    J = jacobian(fns)
    rng = np.random.default_rng(seed)
    cap = min(m, len(fns))
    best = 0
    for _ in range(samples):
        pt = [random_rational(rng, height) for _ in range(m)]
        vals = [[d.evaluate(pt) for d in row] for row in J]
        best = max(best, exact_rank(vals))
        if best == cap:
            break
    return best
