"""Small sparse polynomials over Q in named variables.

Used for the equations of weakly special varieties and for their
parametrizations.  Evaluation works in any ring whose elements support
``+``, ``*`` and integer powers (Fractions, series, series fractions,
mpmath numbers).
"""
from fractions import Fraction
import re

_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_,]*$")


def parse_rational(text):
    """'p/q', 'p' or an int to a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string 'p/q', got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def format_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Poly:
    """Immutable map from exponent tuples (over ``names``) to nonzero rationals."""

    __slots__ = ("names", "terms")

    def __init__(self, names, terms=None):
        self.names = tuple(names)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(self.names):
                raise ValueError("exponent length does not match variable names")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def var(cls, name, names):
        names = tuple(names)
        e = tuple(int(n == name) for n in names)
        return cls(names, {e: 1})

    @classmethod
    def const(cls, c, names):
        return cls(names, {(0,) * len(tuple(names)): c})

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("polynomials over different variable lists")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.names)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.names, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = {}
        for e, c in self.terms.items():
            for f, d in o.terms.items():
                g = tuple(a + b for a, b in zip(e, f))
                t[g] = t.get(g, 0) + c * d
        return Poly(self.names, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = Poly.const(1, self.names)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def constant_term(self):
        return self.terms.get((0,) * len(self.names), Fraction(0))

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(n for n, k in zip(self.names, e) if k)
        return [n for n in self.names if n in used]

    def evaluate(self, values, zero=None):
        """Value at ``values`` (a mapping name -> ring element)."""
        acc = zero
        for e, c in sorted(self.terms.items()):
            term = None
            for name, k in zip(self.names, e):
                if k:
                    p = values[name] ** k
                    term = p if term is None else term * p
            term = c if term is None else term * c
            acc = term if acc is None else acc + term
        if acc is None:
            return Fraction(0) if zero is None else zero
        return acc

    def derivative(self, name):
        i = self.names.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return Poly(self.names, t)

    def rename(self, names):
        """Same polynomial over a larger (or reordered) variable list."""
        names = tuple(names)
        idx = [names.index(n) for n in self.names]
        t = {}
        for e, c in self.terms.items():
            f = [0] * len(names)
            for i, k in zip(idx, e):
                f[i] = k
            t[tuple(f)] = c
        return Poly(names, t)

    # -- JSON -----------------------------------------------------------------
    def to_json(self):
        mons = []
        for e, c in sorted(self.terms.items()):
            powers = {n: k for n, k in zip(self.names, e) if k}
            mons.append({"coef": format_rational(c), "powers": powers})
        return {"monomials": mons}

    @classmethod
    def from_json(cls, obj, names=None):
        if not isinstance(obj, dict) or "monomials" not in obj:
            raise ValueError("polynomial must be an object with a 'monomials' list")
        mons = obj["monomials"]
        if not isinstance(mons, list):
            raise ValueError("'monomials' must be a list")
        seen = []
        for mon in mons:
            for n in mon.get("powers", {}):
                if not _NAME.match(n):
                    raise ValueError(f"bad variable name {n!r}")
                if n not in seen:
                    seen.append(n)
        if names is None:
            names = seen
        else:
            missing = [n for n in seen if n not in names]
            if missing:
                raise ValueError(f"unknown variables {missing}")
        names = tuple(names)
        terms = {}
        for mon in mons:
            e = [0] * len(names)
            for n, k in mon.get("powers", {}).items():
                if not isinstance(k, int) or k < 0:
                    raise ValueError(f"bad exponent {k!r} for {n}")
                e[names.index(n)] += k
            terms[tuple(e)] = terms.get(tuple(e), 0) + parse_rational(mon.get("coef", "1"))
        return cls(names, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(n + (f"^{k}" if k > 1 else "") for n, k in zip(self.names, e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def t_name(i, j):
    """Symbol for the eigencoordinate at 0-based position (i, j)."""
    return f"T{i + 1},{j + 1}"


def t_names(n):
    return [t_name(i, j) for j in range(n) for i in range(j)]
