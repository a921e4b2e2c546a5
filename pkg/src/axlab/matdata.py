"""Data of a matrix: eigenvalues, multiplicities, generalized eigenspaces and
the nilpotent operators they carry.

Each generalized eigenspace V_i is represented by its column-reduced echelon
basis (identity on the pivot rows), which makes the basis canonical, and
N_i is the matrix of (A - z_i) on V_i in that basis.
"""
from dataclasses import dataclass
from fractions import Fraction

from .scalars import (
    DomainError,
    Matrix,
    SeriesFraction,
    ShapeError,
    TruncSeries,
    generic_nullspace,
    inverse,
)
from .scalars.linalg import pick_pivot
from .scalars import numeric as num
from .triexp import taylor_exp


class UnsupportedInput(ValueError):
    """Eigenvalues are not available exactly."""


def _to_field(x):
    if isinstance(x, TruncSeries):
        return SeriesFraction(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


def _settle(x):
    if isinstance(x, SeriesFraction) and x.is_series() and x.prec >= x.order:
        return x.to_series()
    return x


def _field_matrix(A):
    return [[_to_field(x) for x in row] for row in A.entries]


def _mat_mul(X, Y, zero):
    out = []
    for row in X:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append([sum((a * Y[k][j] for k, a in nz if Y[k][j]), start=zero)
                    for j in range(len(Y[0]))])
    return out


def _identity(n, one):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def column_echelon(cols, one):
    """Column-reduced echelon basis of span(cols) and its pivot rows.

    Columns come back with a 1 at their pivot row and 0 at the other pivot
    rows, ordered by pivot row.
    """
    rows = [list(c) for c in cols]
    if not rows:
        return [], []
    ncols = len(rows[0])
    piv = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = pick_pivot(rows, range(r, len(rows)), c)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return rows[:r], piv


@dataclass
class MatrixData:
    z: list            # distinct eigenvalues
    m: list            # multiplicities
    P: Matrix          # columns: echelon bases of V_1, ..., V_k in order
    N: list            # N_i as m_i x m_i matrices
    pivots: list = None  # pivot rows of each block's echelon basis

    @property
    def n(self):
        return sum(self.m)

    @property
    def k(self):
        return len(self.z)

    def blocks(self):
        out, start = [], 0
        for mi in self.m:
            out.append(list(range(start, start + mi)))
            start += mi
        return out

    def __eq__(self, other):
        if not isinstance(other, MatrixData):
            return NotImplemented
        return (self.m == other.m and len(self.z) == len(other.z)
                and all(a == b for a, b in zip(self.z, other.z))
                and self.P == other.P
                and all(a == b for a, b in zip(self.N, other.N)))

    __hash__ = None


@dataclass
class WkmPoint:
    """Chart point: pivot rows per block, non-pivot entries of P, entries of N_i."""

    m: tuple
    pivots: list       # per block, pivot row of each column
    p_entries: list    # per block, non-pivot entries of the columns (column-major)
    n_entries: list    # per block, entries of N_i row-major

    @property
    def k(self):
        return len(self.m)

    @property
    def n(self):
        return sum(self.m)

    def coords(self):
        """Chart coordinates g_1..g_w in chart order."""
        out = []
        for pe, ne in zip(self.p_entries, self.n_entries):
            out.extend(pe)
            out.extend(ne)
        return out

    @property
    def w(self):
        return len(self.coords())

    def coordinate_names(self):
        return [f"g{i + 1}" for i in range(self.w)]

    def with_coords(self, coords):
        coords = list(coords)
        pe, ne = [], []
        pos = 0
        for b, mi in enumerate(self.m):
            a = len(self.p_entries[b])
            pe.append(coords[pos:pos + a])
            pos += a
            ne.append(coords[pos:pos + mi * mi])
            pos += mi * mi
        if pos != len(coords):
            raise ShapeError("wrong number of chart coordinates")
        return WkmPoint(tuple(self.m), [list(p) for p in self.pivots], pe, ne)

    def basis(self, one=Fraction(1)):
        n = self.n
        zero = one - one
        cols = []
        for b, mi in enumerate(self.m):
            piv = self.pivots[b]
            others = iter(self.p_entries[b])
            for c in range(mi):
                col = []
                for r in range(n):
                    if r in piv:
                        col.append(one if r == piv[c] else zero)
                    else:
                        col.append(next(others))
                cols.append(col)
        return Matrix([list(r) for r in zip(*cols)])

    def nilpotents(self):
        out = []
        for mi, ne in zip(self.m, self.n_entries):
            out.append(Matrix([ne[r * mi:(r + 1) * mi] for r in range(mi)]))
        return out

    @classmethod
    def from_data(cls, d):
        pivots, pe, ne = [], [], []
        n = d.n
        for b, (blk, Ni) in enumerate(zip(d.blocks(), d.N)):
            cols = [d.P.column(c) for c in blk]
            if d.pivots is not None:
                piv = list(d.pivots[b])
            else:
                piv = [next(r for r in range(n) if col[r] == 1 and all(
                    not other[r] for other in cols if other is not col)) for col in cols]
            pivots.append(piv)
            pe.append([col[r] for col in cols for r in range(n) if r not in piv])
            ne.append([x for row in Ni.entries for x in row])
        return cls(tuple(d.m), pivots, pe, ne)


def _check_distinct(z):
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if z[i] == z[j]:
                raise DomainError(f"eigenvalues {i + 1} and {j + 1} coincide")


def phi(point, z):
    """P J P^-1 with J = blockdiag(z_i I + N_i)."""
    z = list(z)
    if len(z) != point.k:
        raise ShapeError("need one eigenvalue per block")
    _check_distinct(z)
    P = point.basis()
    Ns = point.nilpotents()
    n = point.n
    sample = z[0]
    zero = sample - sample
    J = [[zero] * n for _ in range(n)]
    start = 0
    for zi, Ni, mi in zip(z, Ns, point.m):
        for a in range(mi):
            for b in range(mi):
                J[start + a][start + b] = Ni[a, b] + (zi if a == b else zero)
        start += mi
    Pf = [[_to_field(x) for x in row] for row in P.entries]
    rational_p = all(isinstance(x, Fraction) for row in Pf for x in row)
    if rational_p:
        Pinv = inverse(Pf)
    else:
        one = next(x for row in Pf for x in row if isinstance(x, SeriesFraction)).one()
        Pf = [[x if isinstance(x, SeriesFraction) else one * x for x in row] for row in Pf]
        Pinv = inverse(Pf, one)
    J = [[_to_field(x) if not rational_p else x for x in row] for row in J]
    zf = zero if rational_p else _to_field(zero)
    out = _mat_mul(_mat_mul(Pf, J, zf), Pinv, zf)
    return Matrix([[_settle(x) for x in row] for row in out])


def _eigenvalues_of(A):
    if not A.is_upper_triangular():
        raise UnsupportedInput("eigenvalues must be supplied for a non-triangular matrix")
    z = []
    for x in A.diag():
        if not any(x == y for y in z):
            z.append(x)
    return z


def generalized_kernel(B, one):
    """Basis of ker B^n, grown one preimage step at a time.

    K_{r+1} = {v : B v in K_r}.  Working with B instead of B^n keeps pivot
    valuations small, which matters over truncated series.
    """
    n = len(B)
    K = []
    while True:
        # [B | -K] (v, c) = 0  <=>  B v = sum c_l K_l
        M = [B[r] + [-k[r] for k in K] for r in range(n)]
        sol = generic_nullspace(M, n + len(K), one)
        vs = [v[:n] for v in sol]
        basis, _ = column_echelon(vs, one) if vs else ([], [])
        if len(basis) == len(K):
            return basis
        K = basis


def matrix_data(A, eigenvalues=None):
    """Data (z, m, P, N) of A.  Eigenvalues come from the diagonal of a
    triangular A (first-occurrence order) or must be supplied."""
    if A.rows != A.cols:
        raise ShapeError("matrix must be square")
    n = A.rows
    z = list(eigenvalues) if eigenvalues is not None else _eigenvalues_of(A)
    _check_distinct(z)
    F = _field_matrix(A)
    one = next((x for row in F for x in row if isinstance(x, SeriesFraction)), None)
    one = one.one() if one is not None else Fraction(1)
    zero = one - one
    ms, cols_all, Ns, pivs = [], [], [], []
    for zi in z:
        zf = _to_field(zi) * one
        B = [[F[r][c] - (zf if r == c else zero) for c in range(n)] for r in range(n)]
        if len(z) == 1:
            # the whole space, provided A - z is nilpotent; preimage steps would
            # only burn precision on pivots that all vanish at the origin
            Bn = _identity(n, one)
            for _ in range(n):
                Bn = _mat_mul(Bn, B, zero)
            if not _is_zero_matrix(Bn):
                raise UnsupportedInput("supplied eigenvalues do not account for the whole space")
            ms, pivs = [n], [list(range(n))]
            P = Matrix([[_settle(x) for x in row] for row in _identity(n, one)])
            return MatrixData(list(z), ms, P, [Matrix([[_settle(x) for x in row] for row in B])], pivs)
        ker = generalized_kernel(B, one)
        if not ker:
            raise DomainError("supplied eigenvalue is not an eigenvalue")
        V, piv = column_echelon(ker, one)
        mi = len(V)
        # (A - z) V = V N; V is the identity on its pivot rows
        BV = _mat_mul(B, [list(r) for r in zip(*V)], zero)
        Ni = [[BV[p][c] for c in range(mi)] for p in piv]
        ms.append(mi)
        pivs.append(piv)
        cols_all.extend(V)
        Ns.append(Matrix([[_settle(x) for x in row] for row in Ni]))
    if sum(ms) != n:
        raise UnsupportedInput("supplied eigenvalues do not account for the whole space")
    P = Matrix([[_settle(x) for x in row] for row in zip(*cols_all)])
    return MatrixData(list(z), ms, P, Ns, pivs)


def _is_zero_matrix(M):
    return all(not x for row in M for x in row)


def nilpotent_exp(N):
    """sum_{r<n} N^r / r!; N must be nilpotent."""
    n = N.n
    one = N.one()
    zero = N.zero()
    E = [list(r) for r in N.entries]
    Nn = _identity(n, one)
    for _ in range(n):
        Nn = _mat_mul(Nn, N.entries, zero)
    if not _is_zero_matrix(Nn):
        raise DomainError("matrix is not nilpotent")
    total = _identity(n, one)
    power = _identity(n, one)
    fact = 1
    for r in range(1, n):
        power = _mat_mul(power, E, zero)
        fact *= r
        total = [[a + b / fact for a, b in zip(tr, pr)] for tr, pr in zip(total, power)]
    return Matrix(total)


def nilpotent_log(U):
    """sum_{r<n} (-1)^(r+1) (U - I)^r / r; U - I must be nilpotent."""
    n = U.n
    one = U.one()
    zero = U.zero()
    M = [[x - (one if i == j else zero) for j, x in enumerate(row)] for i, row in enumerate(U.entries)]
    Mn = _identity(n, one)
    for _ in range(n):
        Mn = _mat_mul(Mn, M, zero)
    if not _is_zero_matrix(Mn):
        raise DomainError("U - I is not nilpotent")
    total = [[zero] * n for _ in range(n)]
    power = _identity(n, one)
    for r in range(1, n):
        power = _mat_mul(power, M, zero)
        sign = 1 if r % 2 else -1
        total = [[a + b * Fraction(sign, r) for a, b in zip(tr, pr)] for tr, pr in zip(total, power)]
    return Matrix(total)


def _exp_scalar(z):
    if isinstance(z, TruncSeries):
        if z.constant_term():
            raise DomainError("series eigenvalue needs zero constant term")
        return z.exp()
    if isinstance(z, SeriesFraction):
        if not z.is_series() or z.num.constant_term():
            raise DomainError("eigenvalue must be a series with zero constant term")
        return SeriesFraction(z.num.exp(), prec=z.prec)
    if isinstance(z, (int, Fraction)):
        if z:
            raise DomainError("exp of a nonzero rational is not rational")
        return Fraction(1)
    return num.ctx.exp(z)


def exp_data(d):
    """Data of exp(A) from the data of A: e^z_i, same P, e^z_i (exp(N_i) - I)."""
    z2 = [_exp_scalar(z) for z in d.z]
    N2 = []
    for ez, Ni in zip(z2, d.N):
        E = nilpotent_exp(Ni)
        mi = Ni.n
        N2.append(Matrix([[(E[a, b] - (1 if a == b else 0)) * ez for b in range(mi)] for a in range(mi)]))
    return MatrixData(z2, list(d.m), d.P, N2, d.pivots)


def general_exp(A):
    """sum_{N<=D} A^N/N! for a series matrix vanishing at the origin."""
    return taylor_exp(A)
