"""Dense matrices over a single exact (or numeric) scalar domain."""
from fractions import Fraction

from .fraction import SeriesFraction
from .series import ShapeError, TruncSeries


def domain_of(x):
    if isinstance(x, TruncSeries):
        return "series"
    if isinstance(x, SeriesFraction):
        return "fraction"
    if isinstance(x, (int, Fraction)):
        return "rational"
    return "numeric"


class Matrix:
    """Rectangular array of scalars.  Immutable by convention."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, entries):
        entries = [list(r) for r in entries]
        if not entries:
            raise ShapeError("empty matrix")
        cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise ShapeError("ragged matrix")
        self.entries = entries
        self.rows = len(entries)
        self.cols = cols

    @classmethod
    def identity(cls, n, one=1):
        zero = one - one
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols, zero=0):
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, diag):
        zero = diag[0] - diag[0]
        n = len(diag)
        return cls([[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return self.rows, self.cols

    @property
    def n(self):
        if self.rows != self.cols:
            raise ShapeError("matrix is not square")
        return self.rows

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def column(self, j):
        return [r[j] for r in self.entries]

    def diag(self):
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def map(self, f):
        return Matrix([[f(x) for x in r] for r in self.entries])

    def transpose(self):
        return Matrix([list(c) for c in zip(*self.entries)])

    def domain(self):
        return domain_of(self.entries[0][0])

    def zero(self):
        x = self.entries[0][0]
        return x - x

    def one(self):
        return self.zero() + 1

    def is_upper_triangular(self):
        return all(not self.entries[i][j] for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_zero(self):
        return all(not x for r in self.entries for x in r)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError("matrix sizes differ")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError("matrix sizes differ")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c):
        return self.map(lambda x: x * c)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        oc = [other.column(j) for j in range(other.cols)]
        zero = self.zero() * other.zero()
        out = []
        for r in self.entries:
            nz = [k for k, x in enumerate(r) if x]
            row = []
            for c in oc:
                acc = None
                for k in nz:
                    if c[k]:
                        t = r[k] * c[k]
                        acc = t if acc is None else acc + t
                row.append(zero if acc is None else acc)
            out.append(row)
        return Matrix(out)

    def __pow__(self, k):
        result = Matrix.identity(self.n, self.one())
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))

    __hash__ = None

    def block(self, rows, cols):
        return Matrix([[self.entries[i][j] for j in cols] for i in rows])

    def tolist(self):
        return [list(r) for r in self.entries]

    def __repr__(self):
        body = ";\n ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix([{body}])"
