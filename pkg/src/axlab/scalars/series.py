"""Truncated multivariate power series over Q.

A :class:`TruncSeries` lives in Q[t_1..t_m] / (total degree > D).  Coefficients
are stored densely over the graded monomial basis as Python integers sharing a
single positive denominator, which keeps products in integer arithmetic.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import product
import math

import numpy as np


class ShapeError(ValueError):
    """Operands disagree in variable count, truncation order or matrix shape."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class Ring:
    """Monomial bookkeeping for one (num_vars, order) pair.  Use :func:`ring`."""

    def __init__(self, m, D):
        if m < 1 or D < 0:
            raise ShapeError(f"invalid ring: {m} vars, order {D}")
        self.m = m
        self.D = D
        mons = [e for e in product(range(D + 1), repeat=m) if sum(e) <= D]
        # graded, and inside a degree lexicographically descending (t1 > t2 > ...)
        mons.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        self.monomials = mons
        self.index = {e: i for i, e in enumerate(mons)}
        self.size = len(mons)
        self.degrees = np.array([sum(e) for e in mons], dtype=np.int64)
        self._pairs = None
        self._addtab = None
        self._deriv = {}

    @property
    def pairs(self):
        """Admissible (i, j) index pairs grouped by product slot."""
        if self._pairs is None:
            pi, pj, pk = [], [], []
            mons, idx, D = self.monomials, self.index, self.D
            degs = self.degrees
            for i, a in enumerate(mons):
                da = degs[i]
                for j, b in enumerate(mons):
                    if da + degs[j] > D:
                        break
                    pi.append(i)
                    pj.append(j)
                    pk.append(idx[tuple(x + y for x, y in zip(a, b))])
            pi, pj, pk = np.array(pi), np.array(pj), np.array(pk)
            order = np.argsort(pk, kind="stable")
            pi, pj, pk = pi[order], pj[order], pk[order]
            starts = np.searchsorted(pk, np.arange(self.size))
            self._pairs = (pi.astype(np.int64), pj.astype(np.int64), starts.astype(np.int64))
        return self._pairs

    @property
    def addtab(self):
        if self._addtab is None:
            tab = np.full((self.size, self.size), -1, dtype=np.int64)
            pi, pj, starts = self.pairs
            pk = np.repeat(np.arange(self.size), np.diff(np.append(starts, len(pi))))
            tab[pi, pj] = pk
            self._addtab = tab
        return self._addtab

    def derivative_table(self, v):
        """(source index, target index in order D-1, multiplier) for d/dt_v."""
        if v not in self._deriv:
            lower = ring(self.m, self.D - 1)
            src, dst, mul = [], [], []
            for i, e in enumerate(self.monomials):
                if e[v] == 0 or sum(e) > self.D:
                    continue
                f = list(e)
                f[v] -= 1
                src.append(i)
                dst.append(lower.index[tuple(f)])
                mul.append(e[v])
            self._deriv[v] = (src, dst, mul)
        return self._deriv[v]


@lru_cache(maxsize=None)
def ring(m, D):
    return Ring(m, D)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    raise TypeError(f"not a rational scalar: {x!r}")


def _normalize(num, den):
    if den < 0:
        num = -num
        den = -den
    nz = [int(x) for x in num if x]
    if not nz:
        return np.zeros(len(num), dtype=object), 1
    g = math.gcd(den, *nz)
    if g != 1:
        num = num // g
        den //= g
    return num, den


class TruncSeries:
    """Element of Q[[t_1..t_m]] truncated above total degree ``order``.

    Immutable.  Binary operations require equal ``num_vars`` and ``order``;
    plain ints and Fractions are promoted to constants.
    """

    __slots__ = ("_ring", "_num", "_den", "_hash")

    def __init__(self, num_vars, order, terms=None):
        r = ring(num_vars, order)
        num = np.zeros(r.size, dtype=object)
        num[:] = 0
        den = 1
        if terms:
            fr = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != num_vars:
                    raise ShapeError(f"exponent {e} has wrong length for {num_vars} vars")
                if sum(e) > order:
                    continue
                c = _as_fraction(c)
                if c:
                    fr[r.index[e]] = fr.get(r.index[e], 0) + c
            if fr:
                den = math.lcm(*(c.denominator for c in fr.values()))
                for i, c in fr.items():
                    num[i] = c.numerator * (den // c.denominator)
        self._set(r, *_normalize(num, den))

    def _set(self, r, num, den):
        self._ring = r
        self._num = num
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, r, num, den, normalize=True):
        obj = cls.__new__(cls)
        if normalize:
            num, den = _normalize(num, den)
        obj._set(r, num, den)
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, num_vars, order):
        return cls(num_vars, order, {(0,) * num_vars: c})

    @classmethod
    def var(cls, i, num_vars, order, coeff=1):
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, order, {tuple(e): coeff})

    @classmethod
    def from_dense(cls, coeffs, num_vars, order):
        """Build from a sequence of rationals in the ring's monomial order."""
        r = ring(num_vars, order)
        fr = [_as_fraction(c) for c in coeffs]
        if len(fr) != r.size:
            raise ShapeError("dense coefficient vector has wrong length")
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        num = np.array([c.numerator * (den // c.denominator) for c in fr] + [None], dtype=object)[:-1]
        return cls._raw(r, num, den)

    def zero(self):
        return TruncSeries._raw(self._ring, np.zeros(self._ring.size, dtype=object), 1, False)

    def one(self):
        return TruncSeries.constant(1, self.num_vars, self.order)

    # -- basic accessors ----------------------------------------------------
    @property
    def num_vars(self):
        return self._ring.m

    @property
    def order(self):
        return self._ring.D

    @property
    def ring(self):
        return self._ring

    @property
    def terms(self):
        r = self._ring
        return {r.monomials[i]: Fraction(int(c), self._den) for i, c in enumerate(self._num) if c}

    def coefficient(self, exponent):
        i = self._ring.index.get(tuple(exponent))
        if i is None:
            return Fraction(0)
        return Fraction(int(self._num[i]), self._den)

    def dense(self):
        """Coefficients in monomial order as Fractions."""
        return [Fraction(int(c), self._den) for c in self._num]

    def integer_parts(self):
        """(numerator vector, common denominator); read-only view."""
        return self._num, self._den

    def constant_term(self):
        return Fraction(int(self._num[0]), self._den)

    def is_zero(self):
        return not any(self._num)

    def valuation(self):
        """Lowest total degree with a nonzero coefficient (``None`` for zero)."""
        nz = np.nonzero(self._num != 0)[0]
        if nz.size == 0:
            return None
        return int(self._ring.degrees[nz[0]])

    def degree(self):
        nz = np.nonzero(self._num != 0)[0]
        if nz.size == 0:
            return None
        return int(self._ring.degrees[nz[-1]])

    def leading_coefficient(self):
        """First nonzero coefficient in monomial order (lowest degree first)."""
        nz = np.nonzero(self._num != 0)[0]
        if nz.size == 0:
            return Fraction(0)
        return Fraction(int(self._num[nz[0]]), self._den)

    def sort_key(self):
        return tuple(self.dense())

    def nnz(self):
        return int(np.count_nonzero(self._num != 0))

    # -- equality / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (self._ring is other._ring and self._den == other._den
                    and all(int(a) == int(b) for a, b in zip(self._num, other._num)))
        if isinstance(other, (int, Fraction, np.integer)):
            c = _as_fraction(other)
            return self.constant_term() == c and not any(self._num[1:])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._ring.m, self._ring.D, self._den, tuple(int(c) for c in self._num)))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            if other._ring is not self._ring:
                raise ShapeError(
                    f"series mismatch: ({self.num_vars} vars, order {self.order}) vs "
                    f"({other.num_vars} vars, order {other.order})")
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return TruncSeries.constant(other, self.num_vars, self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        L = math.lcm(self._den, o._den)
        num = self._num * (L // self._den) + o._num * (L // o._den)
        return TruncSeries._raw(self._ring, num, L)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw(self._ring, -self._num, self._den, False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return self.zero()
        return TruncSeries._raw(self._ring, self._num * c.numerator, self._den * c.denominator)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return self.zero()
        r = self._ring
        a, b = self._num, o._num
        nza = np.nonzero(a != 0)[0]
        nzb = np.nonzero(b != 0)[0]
        pi, pj, starts = r.pairs
        if len(nza) * len(nzb) * 4 < len(pi) and r.size <= 2000:
            tab = r.addtab
            out = np.zeros(r.size, dtype=object)
            out[:] = 0
            bvals = b[nzb]
            for i in nza:
                tgt = tab[i, nzb]
                ok = tgt >= 0
                if not ok.any():
                    continue
                ai = a[i]
                for k, v in zip(tgt[ok], bvals[ok]):
                    out[k] += ai * v
        else:
            out = np.add.reduceat(a[pi] * b[pj], starts)
        return TruncSeries._raw(r, out, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division of series by zero")
            return self.scale(1 / c)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise DomainError("series powers must be non-negative integers")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self):
        """Multiplicative inverse of a unit (nonzero constant term)."""
        c = self.constant_term()
        if not c:
            raise DomainError("series with zero constant term is not invertible")
        w = self.scale(1 / c) - 1
        # 1/(1+w) = sum (-w)^k, w has valuation >= 1
        acc = self.one()
        for _ in range(self.order):
            acc = 1 - w * acc
        return acc.scale(1 / c)

    def exp(self):
        """exp(s) = sum_{k<=D} s^k/k!, exact to order D; needs zero constant term."""
        if self.constant_term():
            raise DomainError("exp of a series with nonzero constant term leaves Q")
        acc = self.one()
        for k in range(self.order, 0, -1):
            acc = 1 + (self * acc).scale(Fraction(1, k))
        return acc

    def derivative(self, v):
        """Formal partial derivative d/dt_v; the result has order D-1."""
        if not 0 <= v < self.num_vars:
            raise IndexError(f"variable index {v} out of range")
        if self.order == 0:
            raise DomainError("cannot differentiate an order-0 series")
        lower = ring(self.num_vars, self.order - 1)
        src, dst, mul = self._ring.derivative_table(v)
        out = np.zeros(lower.size, dtype=object)
        out[:] = 0
        for s, d, k in zip(src, dst, mul):
            if self._num[s]:
                out[d] = self._num[s] * k
        return TruncSeries._raw(lower, out, self._den)

    def with_order(self, order):
        """Re-embed at another truncation order (drops terms above ``order``).

        Raising the order is exact only when the series is known to be a
        polynomial of degree <= its current order.
        """
        target = ring(self.num_vars, order)
        out = np.zeros(target.size, dtype=object)
        out[:] = 0
        r = self._ring
        for i, c in enumerate(self._num):
            if c:
                j = target.index.get(r.monomials[i])
                if j is not None:
                    out[j] = c
        return TruncSeries._raw(target, out, self._den)

    def evaluate(self, point):
        """Exact value of the truncation (a polynomial) at a rational point."""
        pt = [_as_fraction(x) for x in point]
        if len(pt) != self.num_vars:
            raise ShapeError("point has wrong dimension")
        D = self.order
        nums = [x.numerator for x in pt]
        dens = [x.denominator for x in pt]
        npow = [[n ** k for k in range(D + 1)] for n in nums]
        dpow = [[d ** k for k in range(D + 1)] for d in dens]
        total = 0
        for i, c in enumerate(self._num):
            if c:
                e = self._ring.monomials[i]
                term = int(c)
                for v, k in enumerate(e):
                    term *= npow[v][k] * dpow[v][D - k]
                total += term
        scale = self._den
        for d in dens:
            scale *= d ** D
        return Fraction(total, scale)

    def mod_p(self, p):
        """Dense residue vector mod p (int64)."""
        inv = pow(self._den % p, -1, p)
        return np.array([(int(c) % p) * inv % p for c in self._num], dtype=np.int64)

    def __repr__(self):
        return f"TruncSeries({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms.items():
            mon = "*".join(f"t{v + 1}" + (f"^{k}" if k > 1 else "") for v, k in enumerate(e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")
