"""Eigencoordinates of upper triangular matrices over truncated series.

For each column j the canonical vector is

    v_j = e_j - sum_{i<j} t_{i,j} e_i,      t_{i,j} = 0 when f_i = f_j,

chosen so that (A - f_j) v_j is a combination of the earlier v_p with the
same diagonal value: (A - f_j) v_j = sum_p s_{p,j} v_p.  The eigencoordinate
T_{i,j} is t_{i,j} for distinct diagonal values and s_{i,j} otherwise.
"""
from dataclasses import dataclass, field

from .scalars import DomainError, Matrix, SeriesFraction, ShapeError, TruncSeries


def _lift(x):
    if isinstance(x, SeriesFraction):
        return x
    if isinstance(x, TruncSeries):
        return SeriesFraction(x)
    raise DomainError(f"expected a series entry, got {type(x).__name__}")


def _settle(x):
    """Return a TruncSeries when the fraction is one at full precision."""
    if isinstance(x, SeriesFraction) and x.is_series() and x.prec >= x.order:
        return x.to_series()
    return x


def eigen_classes(diag):
    """Group indices by equal diagonal value, in order of first occurrence."""
    classes = []
    for i, f in enumerate(diag):
        for cls in classes:
            if diag[cls[0]] == f:
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


@dataclass
class CanonicalBasis:
    n: int
    diagonal: list
    t: dict            # (i, j) -> t_{i,j} for i < j (zero for equal diagonal values)
    s: dict            # (p, j) -> s_{p,j} for p < j with f_p = f_j

    def vector(self, j):
        one = SeriesFraction(self.diagonal[0].one())
        zero = one.zero()
        return [-self.t[(i, j)] for i in range(j)] + [one] + [zero] * (self.n - j - 1)

    @property
    def vectors(self):
        return [self.vector(j) for j in range(self.n)]


@dataclass
class Eigencoordinates:
    n: int
    diagonal: list
    entries: dict = field(default_factory=dict)   # (i, j) -> (kind, value)

    def kind(self, i, j):
        return self.entries[(i, j)][0]

    def value(self, i, j):
        return self.entries[(i, j)][1]

    def blocks(self):
        """Nilpotent blocks: (indices, strictly upper k x k array of s-values)."""
        out = []
        for cls in eigen_classes(self.diagonal):
            if len(cls) < 2:
                continue
            zero = SeriesFraction(self.diagonal[0].zero())
            k = len(cls)
            S = [[zero] * k for _ in range(k)]
            for a in range(k):
                for b in range(a + 1, k):
                    S[a][b] = self.value(cls[a], cls[b])
            out.append((cls, S))
        return out

    def __eq__(self, other):
        if not isinstance(other, Eigencoordinates):
            return NotImplemented
        if self.n != other.n or self.diagonal != other.diagonal:
            return False
        if self.entries.keys() != other.entries.keys():
            return False
        return all(self.entries[k][0] == other.entries[k][0]
                   and self.entries[k][1] == other.entries[k][1] for k in self.entries)

    __hash__ = None

    def mismatches(self, other):
        """Keys where two coordinate sets disagree (for diagnostics)."""
        return [k for k in self.entries
                if k not in other.entries or self.entries[k][0] != other.entries[k][0]
                or self.entries[k][1] != other.entries[k][1]]


def _check_input(A):
    if A.rows != A.cols:
        raise ShapeError("matrix must be square")
    if not A.is_upper_triangular():
        raise ShapeError("eigencoordinates need an upper triangular matrix")
    for i in range(A.rows):
        if not isinstance(A[i, i], TruncSeries):
            raise DomainError("diagonal entries must be truncated series")


def canonical_basis(A):
    """The unique basis with unit diagonal, zero t's within an eigenvalue class."""
    _check_input(A)
    n = A.rows
    f = A.diag()
    g = [[_lift(x) for x in row] for row in A.entries]
    zero = SeriesFraction(f[0].zero())
    t, s = {}, {}
    for j in range(n):
        same = [p for p in range(j) if f[p] == f[j]]
        sameset = set(same)
        for r in range(j - 1, -1, -1):
            base = g[r][j]
            for k in range(r + 1, j):
                tk = t[(k, j)]
                if tk and g[r][k]:
                    base = base - g[r][k] * tk
            if r in sameset:
                t[(r, j)] = zero
                s[(r, j)] = base
                continue
            for p in same:
                if p > r and s[(p, j)] and t[(r, p)]:
                    base = base + s[(p, j)] * t[(r, p)]
            d = f[r] - f[j]
            if d.is_zero():
                raise AssertionError("zero pivot outside an eigenvalue class")
            t[(r, j)] = base / d
    return CanonicalBasis(n, list(f), t, s)


def coordinates_from_basis(cb):
    ec = Eigencoordinates(cb.n, list(cb.diagonal))
    for j in range(cb.n):
        for i in range(j):
            if cb.diagonal[i] == cb.diagonal[j]:
                ec.entries[(i, j)] = ("s", cb.s[(i, j)])
            else:
                ec.entries[(i, j)] = ("t", cb.t[(i, j)])
    return ec


def eigencoordinates(A):
    return coordinates_from_basis(canonical_basis(A))


def check_basis(A, cb):
    """Verify A v_j = f_j v_j + sum_p s_{p,j} v_p for every column j (exact)."""
    n = cb.n
    g = [[_lift(x) for x in row] for row in A.entries]
    vecs = cb.vectors
    for j in range(n):
        v = vecs[j]
        lhs = [sum((g[r][k] * v[k] for k in range(r, n) if v[k] and g[r][k]), start=v[0].zero())
               for r in range(n)]
        rhs = [v[r] * cb.diagonal[j] for r in range(n)]
        for (p, jj), sv in cb.s.items():
            if jj != j or not sv:
                continue
            rhs = [a + sv * b for a, b in zip(rhs, vecs[p])]
        if any(a != b for a, b in zip(lhs, rhs)):
            return False
        for i in range(j):
            if cb.diagonal[i] == cb.diagonal[j] and cb.t[(i, j)]:
                return False
    return True


def matrix_from_eigencoordinates(ec):
    """The upper triangular matrix with diagonal ``ec.diagonal`` and these coordinates."""
    n = ec.n
    f = ec.diagonal
    zero = SeriesFraction(f[0].zero())
    t, s = {}, {}
    for (i, j), (kind, val) in ec.entries.items():
        equal = f[i] == f[j]
        if (kind == "s") != equal:
            raise ShapeError(f"coordinate ({i},{j}) has kind {kind!r} but diagonal says otherwise")
        if equal:
            s[(i, j)] = _lift(val)
            t[(i, j)] = zero
        else:
            t[(i, j)] = _lift(val)
    if len(ec.entries) != n * (n - 1) // 2:
        raise ShapeError("wrong number of eigencoordinates")
    g = [[zero] * n for _ in range(n)]
    for j in range(n):
        g[j][j] = SeriesFraction(f[j])
        same = [p for p in range(j) if f[p] == f[j]]
        for r in range(j - 1, -1, -1):
            acc = zero
            for k in range(r + 1, j):
                if g[r][k] and t[(k, j)]:
                    acc = acc + g[r][k] * t[(k, j)]
            if r in same:
                g[r][j] = s[(r, j)] + acc
                continue
            val = t[(r, j)] * (f[r] - f[j]) + acc
            for p in same:
                if p > r and s[(p, j)] and t[(r, p)]:
                    val = val - s[(p, j)] * t[(r, p)]
            g[r][j] = val
    return Matrix([[_settle(x) for x in row] for row in g])


def _nilpotent_exp_minus_identity(S):
    """exp(S) - I for a strictly upper triangular square array (finite sum)."""
    k = len(S)
    zero = S[0][0]
    total = [row[:] for row in S]
    power = [row[:] for row in S]
    fact = 1
    for r in range(2, k):
        power = [[sum((power[a][c] * S[c][b] for c in range(k) if power[a][c] and S[c][b]), start=zero)
                  for b in range(k)] for a in range(k)]
        fact *= r
        total = [[total[a][b] + power[a][b] / fact for b in range(k)] for a in range(k)]
    return total


def predict_exp_eigencoords(ec):
    """Eigencoordinates of exp(A) computed from those of A alone."""
    for f in ec.diagonal:
        if f.constant_term():
            raise DomainError("diagonal series need zero constant term")
    out = Eigencoordinates(ec.n, [f.exp() for f in ec.diagonal], dict(ec.entries))
    for cls, S in ec.blocks():
        ez = SeriesFraction(ec.diagonal[cls[0]].exp())
        X = _nilpotent_exp_minus_identity(S)
        for a in range(len(cls)):
            for b in range(a + 1, len(cls)):
                out.entries[(cls[a], cls[b])] = ("s", ez * X[a][b])
    return out
