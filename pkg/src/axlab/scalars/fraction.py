"""Quotients of truncated series with tracked precision.

A value V is stored as ``num / den`` where ``den`` is a product of *atoms*:
non-unit series normalised so that their first coefficient is 1.  Units are
inverted eagerly and never appear as atoms.  Sums take the lcm of the atom
multisets, which keeps the denominator valuation as small as possible.

Truncation means ``num`` is only right up to some degree.  ``prec`` records
it: num - V*den has no terms of total degree <= prec.  Every operation
propagates this bound, and equality compares cross-multiplied numerators
only up to the precision both sides actually carry.
"""
from fractions import Fraction

import numpy as np

from .series import DomainError, ShapeError, TruncSeries

_INF = float("inf")


class PrecisionError(ArithmeticError):
    """Not enough precision is left to decide a question about a value."""


def _val(s):
    v = s.valuation()
    return _INF if v is None else v


def _atom_of(s):
    """Split a non-unit series into (scalar, normalised atom)."""
    lc = s.leading_coefficient()
    return lc, s.scale(1 / lc)


def _atoms_valuation(atoms):
    return sum(a.valuation() * k for a, k in atoms.items())


def _homogeneous_quotient(P, Q):
    """Exact quotient of homogeneous polynomials given as term dicts, or None."""
    lmq = max(Q)
    lcq = Q[lmq]
    P = dict(P)
    out = {}
    while P:
        lm = max(P)
        if any(a < b for a, b in zip(lm, lmq)):
            return None
        c = P[lm] / lcq
        mono = tuple(a - b for a, b in zip(lm, lmq))
        out[mono] = out.get(mono, 0) + c
        for e, q in Q.items():
            key = tuple(x + y for x, y in zip(mono, e))
            val = P.get(key, 0) - c * q
            if val:
                P[key] = val
            else:
                P.pop(key, None)
    return out


def _by_degree(s):
    parts = {}
    for e, c in s.terms.items():
        parts.setdefault(sum(e), {})[e] = c
    return parts


def series_quotient(s, a, upto):
    """q with s - q*a vanishing through degree ``upto``, or None.

    Solved degree by degree; each step is an exact division of a homogeneous
    part by the lowest homogeneous part of ``a``.
    """
    w = s.valuation()
    if w is None:
        return s.zero()
    v = a.valuation()
    if w < v:
        return None
    lead = _by_degree(a)[v]
    m, D = s.num_vars, s.order
    q = s.zero()
    rest = s
    for d in range(w, upto + 1):
        part = _by_degree(rest).get(d)
        if not part:
            continue
        qq = _homogeneous_quotient(part, lead)
        if qq is None:
            return None
        qs = TruncSeries(m, D, qq)
        q = q + qs
        rest = rest - qs * a
    return q


_ASSOC = {}


def associate_unit(a, b):
    """Unit u with a = u*b to the truncation order, or None."""
    key = (a, b)
    if key not in _ASSOC:
        u = None
        if a.valuation() == b.valuation():
            u = series_quotient(a, b, a.order)
            if u is not None and not u.constant_term():
                u = None
        _ASSOC[key] = u
    return _ASSOC[key]


def _reduce(num, atoms, prec):
    """Cancel atoms that divide the numerator (through degree prec)."""
    for a in list(atoms):
        v = a.valuation()
        while atoms[a] and num.valuation() is not None and num.valuation() >= v:
            q = series_quotient(num, a, prec)
            if q is None:
                break
            num, prec = q, prec - v
            atoms[a] -= 1
        if not atoms[a]:
            del atoms[a]
    return num, atoms, prec


class SeriesFraction:
    """``num / den`` with ``num``, ``den`` truncated series, ``den != 0``."""

    __slots__ = ("num", "_atoms", "prec")

    def __init__(self, num, den=None, prec=None):
        if isinstance(num, SeriesFraction):
            if den is not None:
                raise TypeError("cannot combine a SeriesFraction with a denominator")
            self.num, self._atoms, self.prec = num.num, num._atoms, num.prec
            return
        if not isinstance(num, TruncSeries):
            raise TypeError("numerator must be a TruncSeries")
        self.num = num
        self._atoms = {}
        self.prec = num.order if prec is None else min(prec, num.order)
        if den is None:
            return
        if not isinstance(den, TruncSeries):
            den = TruncSeries.constant(den, num.num_vars, num.order)
        if den.ring is not num.ring:
            raise ShapeError("numerator and denominator live in different rings")
        q = SeriesFraction(num, prec=prec) / SeriesFraction(den)
        self.num, self._atoms, self.prec = q.num, q._atoms, q.prec

    @classmethod
    def _make(cls, num, atoms, prec):
        obj = cls.__new__(cls)
        atoms = {a: k for a, k in atoms.items() if k}
        prec = min(prec, num.order)
        if atoms and not num.is_zero():
            num, atoms, prec = _reduce(num, atoms, prec)
        obj.num = num
        obj._atoms = atoms
        obj.prec = prec
        if obj._atoms and _atoms_valuation(obj._atoms) > num.order:
            raise PrecisionError("denominator vanishes to the truncation order")
        return obj

    # -- accessors ----------------------------------------------------------
    @property
    def den(self):
        d = self.num.one()
        for a, k in self._atoms.items():
            d = d * a ** k
        return d

    @property
    def atoms(self):
        return dict(self._atoms)

    @property
    def num_vars(self):
        return self.num.num_vars

    @property
    def order(self):
        return self.num.order

    def den_valuation(self):
        return _atoms_valuation(self._atoms)

    def known_order(self):
        """Degree up to which the value itself (not just num) is determined."""
        return self.prec - self.den_valuation()

    def is_series(self):
        return not self._atoms

    def to_series(self):
        """The value as a TruncSeries; only possible when the denominator is a unit."""
        if self._atoms:
            raise DomainError("fraction with non-unit denominator is not a series")
        return self.num

    def is_zero(self):
        """True when num has no nonzero term through degree ``prec``."""
        if self.num.is_zero():
            return True
        v = self.num.valuation()
        return v > self.prec

    def __bool__(self):
        return not self.is_zero()

    def zero(self):
        return SeriesFraction(self.num.zero())

    def one(self):
        return SeriesFraction(self.num.one())

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, SeriesFraction):
            if other.num.ring is not self.num.ring:
                raise ShapeError("series fractions live in different rings")
            return other
        if isinstance(other, TruncSeries):
            if other.ring is not self.num.ring:
                raise ShapeError("series fraction and series live in different rings")
            return SeriesFraction(other)
        if isinstance(other, (int, Fraction, np.integer)):
            return SeriesFraction(TruncSeries.constant(other, self.num_vars, self.order))
        return None

    def _lift(self, atoms):
        """(numerator over the larger atom multiset ``atoms``, its precision)."""
        num = self.num
        gain = 0
        for a, k in atoms.items():
            extra = k - self._atoms.get(a, 0)
            if extra:
                num = num * a ** extra
                gain += a.valuation() * extra
        return num, self.prec + gain

    def _rebase(self, atoms):
        """Rewrite self so that atoms associate to ones in ``atoms`` use those."""
        if not self._atoms or not atoms:
            return self
        num, prec = self.num, self.prec
        mine = {}
        changed = False
        for a, k in self._atoms.items():
            if a in atoms:
                mine[a] = mine.get(a, 0) + k
                continue
            for b in atoms:
                u = associate_unit(a, b)
                if u is not None:
                    # 1/a^k = u^-k / b^k, u known up to degree D - v(a)
                    num = num * u.inverse() ** k
                    prec = min(prec, num.order - a.valuation() + _val(self.num))
                    mine[b] = mine.get(b, 0) + k
                    changed = True
                    break
            else:
                mine[a] = mine.get(a, 0) + k
        if not changed:
            return self
        return SeriesFraction._make(num, mine, prec)

    @staticmethod
    def _lcm(x, y):
        lcm = dict(x._atoms)
        for a, k in y._atoms.items():
            lcm[a] = max(lcm.get(a, 0), k)
        return lcm

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        o = o._rebase(self._atoms)
        lcm = self._lcm(self, o)
        a, pa = self._lift(lcm)
        b, pb = o._lift(lcm)
        return SeriesFraction._make(a + b, lcm, min(pa, pb))

    __radd__ = __add__

    def __neg__(self):
        return SeriesFraction._make(-self.num, self._atoms, self.prec)

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

    @staticmethod
    def _cancel(num, prec, atoms):
        """Cancel ``num`` against an atom it is a scalar multiple of."""
        if not atoms or num.is_zero() or not num.valuation():
            return num, prec, atoms
        lc, at = _atom_of(num)
        if atoms.get(at):
            atoms = dict(atoms)
            atoms[at] -= 1
            return num.one().scale(lc), prec - at.valuation(), atoms
        return num, prec, atoms

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, pa, b_atoms = self._cancel(self.num, self.prec, o._atoms)
        b, pb, a_atoms = self._cancel(o.num, o.prec, self._atoms)
        atoms = dict(a_atoms)
        for at, k in b_atoms.items():
            atoms[at] = atoms.get(at, 0) + k
        prec = min(pa + _val(b), pb + _val(a))
        return SeriesFraction._make(a * b, atoms, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.num
        if o.is_zero():
            raise ZeroDivisionError("division by a zero series fraction")
        # y = self * den(o), cancelling shared atoms
        atoms = dict(self._atoms)
        num = self.num
        prec = self.prec
        for a, k in o._atoms.items():
            have = atoms.get(a, 0)
            used = min(have, k)
            if used:
                atoms[a] = have - used
            if k - used:
                num = num * a ** (k - used)
                prec += a.valuation() * (k - used)
        # then divide y by the numerator of o, which is only known to o.prec
        vd = d.valuation()
        prec = min(prec, o.prec + _val(num) - vd)
        if vd == 0:
            return SeriesFraction._make(num * d.inverse(), atoms, prec)
        lc, at = _atom_of(d)
        b_num, prec2, atoms = self._cancel(num, prec, {**atoms, at: atoms.get(at, 0) + 1})
        return SeriesFraction._make(b_num.scale(1 / lc), atoms, prec2)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers")
        r = self.one()
        for _ in range(k):
            r = r * self
        return r

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        diff = self - o
        if diff.prec < diff.den_valuation():
            raise PrecisionError(
                f"comparison needs degree {diff.den_valuation()} but only {diff.prec} is known")
        r = diff.num.ring
        nums, _ = diff.num.integer_parts()
        for i, c in enumerate(nums):
            if r.degrees[i] > diff.prec:
                break
            if c:
                return False
        return True

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def __repr__(self):
        if not self._atoms:
            return f"SeriesFraction({self.num}; prec {self.prec})"
        return f"SeriesFraction(({self.num}) / ({self.den}); prec {self.prec})"
