"""Weakly special subvarieties of triangular and general matrices.

An h-flavoured weakly special X is cut out by homogeneous Q-linear
relations on the diagonal (a sigma system) together with polynomial
equations in the eigencoordinates T_{i,j}; a gl-flavoured one uses
relations on the distinct eigenvalues and equations in the chart
coordinates g_1..g_w of the data.  Specs carry equations for membership
and, optionally, a parametrization for sampling.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .eigencoords import eigencoordinates, matrix_from_eigencoordinates
from .matdata import WkmPoint, matrix_data, phi
from .poly import Poly, format_rational, parse_rational, t_name, t_names
from .scalars import (
    SeriesFraction,
    ShapeError,
    TruncSeries,
    exact_nullspace,
    exact_rank,
)
from .scalars import numeric as num
from .triexp import expm_reference, tri_exp_numeric


class OutsideUSigma(ValueError):
    """The diagonal has a coincidence that the sigma system does not force."""


class Unsupported(ValueError):
    """The operation needs data the spec does not carry (a parametrization)."""


class InsufficientSamples(ValueError):
    pass


# -- sigma systems --------------------------------------------------------------

@dataclass(frozen=True)
class SigmaSystem:
    nvars: int
    rows: tuple = ()

    def __init__(self, nvars, rows=()):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        for r in rows:
            if len(r) != nvars:
                raise ShapeError(f"sigma row {r} has {len(r)} entries, expected {nvars}")
        if rows and exact_rank([list(r) for r in rows]) != len(rows):
            raise ValueError("sigma rows are not linearly independent")
        object.__setattr__(self, "nvars", int(nvars))
        object.__setattr__(self, "rows", rows)

    def in_span(self, vec):
        if not self.rows:
            return not any(vec)
        base = [list(r) for r in self.rows]
        return exact_rank(base + [list(vec)]) == len(self.rows)

    def kernel(self):
        """Integer basis (as columns of an nvars x r list) of the solution space."""
        basis = exact_nullspace([list(r) for r in self.rows], self.nvars)
        return [[v[i] for v in basis] for i in range(self.nvars)]

    def residuals(self, values, zero):
        """sum_i q_i x_i for each row."""
        out = []
        for r in self.rows:
            acc = zero
            for q, x in zip(r, values):
                if q:
                    acc = acc + x * q
            out.append(acc)
        return out

    def require_no_coincidence(self):
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                e = [0] * self.nvars
                e[i], e[j] = 1, -1
                if self.in_span(e):
                    raise ValueError(f"sigma forces z{i + 1} = z{j + 1}")

    def to_json(self):
        return [[format_rational(q) for q in r] for r in self.rows]

    @classmethod
    def from_json(cls, nvars, rows):
        return cls(nvars, [[parse_rational(q) for q in r] for r in rows])


@dataclass(frozen=True)
class ISigma:
    pairs: frozenset   # 0-based (i, j), i < j

    def __contains__(self, pair):
        i, j = pair
        return (min(i, j), max(i, j)) in self.pairs

    def one_based(self):
        return sorted((i + 1, j + 1) for i, j in self.pairs)


def i_sigma(sigma):
    """Pairs (i, j) with e_i - e_j in the row span of sigma."""
    pairs = set()
    for i in range(sigma.nvars):
        for j in range(i + 1, sigma.nvars):
            e = [0] * sigma.nvars
            e[i], e[j] = 1, -1
            if sigma.in_span(e):
                pairs.add((i, j))
    return ISigma(frozenset(pairs))


# -- specs ----------------------------------------------------------------------

@dataclass
class Parametrization:
    """Polynomial map from free parameters to coordinates (unlisted ones are 0).

    The diagonal (or eigenvalue vector) is drawn from the solution space of
    sigma, so only eigencoordinates / chart coordinates are parametrized.
    """
    params: list
    maps: dict                      # coordinate name -> Poly over params
    num_vars: int = 1
    order: int = 8
    pivots: list = None             # gl only: pivot rows per block

    def values(self, point):
        return {name: p.evaluate(point) for name, p in self.maps.items()}

    def to_json(self):
        out = {"params": list(self.params),
               "maps": {k: p.to_json() for k, p in self.maps.items()},
               "num_vars": self.num_vars, "order": self.order}
        if self.pivots is not None:
            out["pivots"] = [[r + 1 for r in piv] for piv in self.pivots]
        return out

    @classmethod
    def from_json(cls, obj):
        params = list(obj.get("params", []))
        maps = {k: Poly.from_json(v, params) for k, v in obj.get("maps", {}).items()}
        piv = obj.get("pivots")
        if piv is not None:
            piv = [[r - 1 for r in p] for p in piv]
        return cls(params, maps, int(obj.get("num_vars", 1)), int(obj.get("order", 8)), piv)


def _check_origin(equations):
    for eq in equations:
        if eq.constant_term():
            raise ValueError(f"equation {eq} does not vanish at the origin")


@dataclass
class WeaklySpecialH:
    n: int
    sigma: SigmaSystem
    equations: list = field(default_factory=list)   # Polys in the T names
    parametrization: Parametrization = None
    check_origin: bool = True

    def __post_init__(self):
        if self.sigma.nvars != self.n:
            raise ShapeError("sigma must be a system on the n diagonal entries")
        names = t_names(self.n)
        self.equations = [eq.rename(names) for eq in self.equations]
        if self.check_origin:
            _check_origin(self.equations)
        if self.parametrization is not None:
            bad = [k for k in self.parametrization.maps if k not in names]
            if bad:
                raise ValueError(f"parametrization names unknown coordinates {bad}")

    @property
    def flavor(self):
        return "h"

    def to_json(self):
        out = {"flavor": "h", "n": self.n, "sigma": self.sigma.to_json(),
               "equations": [eq.to_json() for eq in self.equations]}
        if not self.check_origin:
            out["check_origin"] = False
        if self.parametrization is not None:
            out["param"] = self.parametrization.to_json()
        return out


@dataclass
class WeaklySpecialGL:
    n: int
    m: tuple
    sigma: SigmaSystem
    equations: list = field(default_factory=list)   # Polys in g1..gw
    parametrization: Parametrization = None
    pivots: list = None
    check_origin: bool = True

    def __post_init__(self):
        self.m = tuple(int(x) for x in self.m)
        if sum(self.m) != self.n or any(x < 1 for x in self.m):
            raise ShapeError("multiplicities must be positive and sum to n")
        if self.sigma.nvars != self.k:
            raise ShapeError("sigma must be a system on the k distinct eigenvalues")
        self.sigma.require_no_coincidence()
        if self.pivots is None:
            if self.parametrization is not None and self.parametrization.pivots is not None:
                self.pivots = self.parametrization.pivots
            else:
                self.pivots = [list(range(mi)) for mi in self.m]
        self.pivots = [list(p) for p in self.pivots]
        names = self.chart().coordinate_names()
        self.equations = [eq.rename(names) for eq in self.equations]
        if self.check_origin:
            _check_origin(self.equations)

    @property
    def k(self):
        return len(self.m)

    @property
    def flavor(self):
        return "gl"

    def chart(self, coords=None):
        """WkmPoint for this chart with the given coordinates (default all zero)."""
        pe = [[0] * ((self.n - mi) * mi) for mi in self.m]
        ne = [[0] * (mi * mi) for mi in self.m]
        pt = WkmPoint(self.m, self.pivots, pe, ne)
        return pt if coords is None else pt.with_coords(coords)

    def to_json(self):
        out = {"flavor": "gl", "n": self.n, "m": list(self.m),
               "pivots": [[r + 1 for r in p] for p in self.pivots],
               "sigma": self.sigma.to_json(),
               "equations": [eq.to_json() for eq in self.equations]}
        if not self.check_origin:
            out["check_origin"] = False
        if self.parametrization is not None:
            out["param"] = self.parametrization.to_json()
        return out


def spec_from_json(obj):
    flavor = obj.get("flavor")
    n = obj.get("n")
    if flavor not in ("h", "gl") or not isinstance(n, int) or n < 1:
        raise ValueError("spec needs flavor 'h' or 'gl' and a positive integer n")
    param = Parametrization.from_json(obj["param"]) if obj.get("param") else None
    check = bool(obj.get("check_origin", True))
    if flavor == "h":
        names = t_names(n)
        eqs = [Poly.from_json(e, names) for e in obj.get("equations", [])]
        sigma = SigmaSystem.from_json(n, obj.get("sigma", []))
        return WeaklySpecialH(n, sigma, eqs, param, check)
    m = obj.get("m")
    if not isinstance(m, list):
        raise ValueError("gl spec needs the multiplicity list 'm'")
    piv = obj.get("pivots")
    if piv is not None:
        piv = [[r - 1 for r in p] for p in piv]
    sigma = SigmaSystem.from_json(len(m), obj.get("sigma", []))
    w = sum((n - mi) * mi + mi * mi for mi in m)
    names = [f"g{i + 1}" for i in range(w)]
    eqs = [Poly.from_json(e, names) for e in obj.get("equations", [])]
    return WeaklySpecialGL(n, m, sigma, eqs, param, piv, check)


# -- membership -------------------------------------------------------------------

@dataclass
class Membership:
    member: bool
    witness: str = None

    def __bool__(self):
        return self.member

    def to_json(self):
        return {"member": self.member, "witness": self.witness}


def _row_text(row, var):
    text = ""
    for i, q in enumerate(row):
        if not q:
            continue
        mag = abs(q)
        body = f"{var}{i + 1}" if mag == 1 else f"{mag}*{var}{i + 1}"
        if not text:
            text = "-" + body if q < 0 else body
        else:
            text += (" - " if q < 0 else " + ") + body
    return text + " = 0"


def membership_h(A, ws):
    """Decide A in X(sigma, V); witness names the first violated condition."""
    if A.rows != ws.n or A.cols != ws.n:
        raise ShapeError(f"expected a {ws.n}x{ws.n} matrix")
    if not A.is_upper_triangular():
        raise ShapeError("membership needs an upper triangular matrix")
    if A.is_zero():
        return Membership(True, "origin")
    f = A.diag()
    zero = f[0].zero()
    for row, res in zip(ws.sigma.rows, ws.sigma.residuals(f, zero)):
        if not res.is_zero():
            return Membership(False, "sigma: " + _row_text(row, "f"))
    forced = i_sigma(ws.sigma)
    for i in range(ws.n):
        for j in range(i + 1, ws.n):
            if (i, j) not in forced and f[i] == f[j]:
                raise OutsideUSigma(f"f{i + 1} = f{j + 1} is not forced by sigma")
    ec = eigencoordinates(A)
    values = {t_name(i, j): ec.value(i, j) for (i, j) in ec.entries}
    szero = SeriesFraction(zero)
    for eq in ws.equations:
        if eq.evaluate(values, szero) != 0:
            return Membership(False, f"equation: {eq} = 0")
    return Membership(True)


def membership_gl(A, ws, eigenvalues=None):
    """Decide A in the image of X(k, m, sigma, W) using the data of A."""
    if A.rows != ws.n or A.cols != ws.n:
        raise ShapeError(f"expected a {ws.n}x{ws.n} matrix")
    d = matrix_data(A, eigenvalues)
    if tuple(d.m) != tuple(ws.m):
        raise ShapeError(f"data has multiplicities {d.m}, spec has {list(ws.m)}")
    z = d.z
    sample = z[0]
    zero = sample - sample
    for row, res in zip(ws.sigma.rows, ws.sigma.residuals(z, zero)):
        if res != 0:
            return Membership(False, "sigma: " + _row_text(row, "z"))
    pt = WkmPoint.from_data(d)
    if [list(p) for p in pt.pivots] != ws.pivots:
        return Membership(False, "chart: pivot pattern differs")
    names = pt.coordinate_names()
    coords = [SeriesFraction(x) if isinstance(x, TruncSeries) else x for x in pt.coords()]
    values = dict(zip(names, coords))
    one = next((x for x in coords if isinstance(x, SeriesFraction)), None)
    ezero = one.zero() if one is not None else Fraction(0)
    for eq in ws.equations:
        if eq.evaluate(values, ezero) != 0:
            return Membership(False, f"equation: {eq} = 0")
    return Membership(True)


def membership(A, ws, eigenvalues=None):
    if ws.flavor == "h":
        return membership_h(A, ws)
    return membership_gl(A, ws, eigenvalues)


# -- sampling -------------------------------------------------------------------------

def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _rand_q(rng, height=9):
    return Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))


def _param_point(param, rng, values):
    if values is not None:
        missing = [p for p in param.params if p not in values]
        if missing:
            raise ValueError(f"missing parameter values {missing}")
        return {p: Fraction(values[p]) if not isinstance(values[p], TruncSeries) else values[p]
                for p in param.params}
    return {p: _rand_q(rng) for p in param.params}


def _random_series(rng, m, D, deg=3):
    terms = {}
    for total in range(1, min(D, deg) + 1):
        for combo in combinations_with_replacement(range(m), total):
            e = [0] * m
            for v in combo:
                e[v] += 1
            c = int(rng.integers(-5, 6))
            if c:
                terms[tuple(e)] = Fraction(c)
    # a fixed nonzero linear term keeps the value a non-unit
    e = tuple(int(v == 0) for v in range(m))
    terms[e] = terms.get(e, 0) or Fraction(1)
    return TruncSeries(m, D, terms)


def _pattern_ok(vals, forced):
    n = len(vals)
    for i in range(n):
        for j in range(i + 1, n):
            if ((i, j) in forced) != (vals[i] == vals[j]):
                return False
    return True


def sample_diagonal(sigma, rng, m=1, D=8, numeric=False, tries=50):
    """Random point of Z(sigma) with exactly the coincidences of I_sigma.

    Series (zero constant term) by default; small rationals when ``numeric``.
    """
    B = sigma.kernel()
    r = len(B[0]) if B else 0
    forced = i_sigma(sigma)
    for _ in range(tries):
        if numeric:
            u = [Fraction(int(rng.integers(-16, 17)), 16) for _ in range(r)]
            zero = Fraction(0)
        else:
            u = [_random_series(rng, m, D) for _ in range(r)]
            zero = TruncSeries(m, D)
        vals = []
        for i in range(sigma.nvars):
            acc = zero
            for b in range(r):
                if B[i][b]:
                    acc = acc + u[b] * B[i][b]
            vals.append(acc)
        if _pattern_ok(vals, forced):
            return vals
    raise ValueError("could not draw a diagonal with the required coincidence pattern")


def _matrix_from_t(ws, diag, values):
    """Upper triangular matrix with this diagonal and T values (constants or series)."""
    from .eigencoords import Eigencoordinates
    ec = Eigencoordinates(ws.n, list(diag))
    m, D = diag[0].num_vars, diag[0].order
    for j in range(ws.n):
        for i in range(j):
            kind = "s" if diag[i] == diag[j] else "t"
            v = values.get(t_name(i, j), Fraction(0))
            if not isinstance(v, TruncSeries):
                v = TruncSeries.constant(v, m, D)
            ec.entries[(i, j)] = (kind, SeriesFraction(v))
    return matrix_from_eigencoordinates(ec)


def sample_h(ws, seed=0, values=None):
    """A member of ws drawn through its parametrization."""
    if ws.parametrization is None:
        raise Unsupported("sampling needs a parametrization")
    par = ws.parametrization
    rng = _rng(seed)
    point = _param_point(par, rng, values)
    diag = sample_diagonal(ws.sigma, rng, par.num_vars, par.order)
    return _matrix_from_t(ws, diag, par.values(point))


def sample_gl(ws, seed=0, values=None, tries=20):
    """(A, z): a member of ws built by phi, with its eigenvalues."""
    if ws.parametrization is None:
        raise Unsupported("sampling needs a parametrization")
    par = ws.parametrization
    rng = _rng(seed)
    names = ws.chart().coordinate_names()
    for _ in range(tries):
        point = _param_point(par, rng, values)
        vals = par.values(point)
        coords = [vals.get(nm, Fraction(0)) for nm in names]
        pt = ws.chart(coords)
        z = sample_diagonal(ws.sigma, rng, par.num_vars, par.order)
        try:
            return phi(pt, z), z
        except ZeroDivisionError:
            if values is not None:
                raise
    raise ValueError("parametrization keeps producing singular bases")


def sample(ws, seed=0, values=None):
    if ws.flavor == "h":
        return sample_h(ws, seed, values)
    return sample_gl(ws, seed, values)[0]


def _numeric_sample(ws, rng):
    """Rational matrix on ws (constant diagonal) and its exponential in mpmath."""
    par = ws.parametrization
    point = _param_point(par, rng, None)
    vals = par.values(point)
    z = sample_diagonal(ws.sigma, rng, numeric=True)
    if ws.flavor == "h":
        diag = [TruncSeries.constant(x, 1, 0) for x in z]
        A = _matrix_from_t(ws, diag, vals).map(lambda x: x.constant_term())
        E = tri_exp_numeric(A)
    else:
        names = ws.chart().coordinate_names()
        A = phi(ws.chart([vals.get(nm, Fraction(0)) for nm in names]), z)
        E = expm_reference(A)
    # A is rational, so E(A) is real
    return E.map(num.ctx.re)


# -- numeric image relations ------------------------------------------------------------

def _monomials(nvars, d):
    out = []
    for total in range(d + 1):
        for combo in combinations_with_replacement(range(nvars), total):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def _eval_monomials(vals, mons):
    ctx = num.ctx
    out = []
    for e in mons:
        x = ctx.mpf(1)
        for v, k in zip(vals, e):
            if k:
                x *= v ** k
        out.append(x)
    return out


def _reconstruct(x, max_den=10 ** 4, tol=None):
    ctx = num.ctx
    tol = tol or ctx.mpf(2) ** -40
    q = Fraction(str(ctx.nstr(x, 40, min_fixed=-ctx.inf, max_fixed=ctx.inf))).limit_denominator(max_den)
    return q if abs(x - ctx.mpf(q.numerator) / q.denominator) <= tol * max(1, abs(x)) else None


def _numeric_rref(rows):
    """Reduced echelon rows (partial pivoting) of a small list of mp vectors."""
    ctx = num.ctx
    rows = [list(r) for r in rows]
    if not rows:
        return rows
    ncols = len(rows[0])
    r = 0
    for c in range(ncols - 1, -1, -1):
        if r == len(rows):
            break
        p = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
        if abs(rows[p][c]) < ctx.mpf(2) ** -60:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return rows


@dataclass
class RelationCheck:
    degree: int
    entries: list          # names of the varying entries used
    monomial_count: int
    samples: int
    nullity: int
    relations: list       # confirmed relations: list of (coefficient, exponent tuple)
    unconfirmed: int = 0

    def relation_strings(self):
        out = []
        for rel in self.relations:
            text = ""
            for c, e in rel:
                mon = "*".join(n + (f"^{k}" if k > 1 else "") for n, k in zip(self.entries, e) if k)
                mag = abs(c)
                body = (str(mag) if not mon else mon if mag == 1 else f"{mag}*{mon}")
                sign = "-" if c < 0 else "+"
                text = (f"-{body}" if sign == "-" else body) if not text else f"{text} {sign} {body}"
            out.append(text + " = 0")
        return out

    def to_json(self):
        return {"degree": self.degree, "entries": self.entries,
                "monomials": self.monomial_count, "samples": self.samples,
                "nullity": self.nullity, "relations": self.relation_strings(),
                "unconfirmed": self.unconfirmed}


REL_TOL_BITS = 48


def image_relation_check(ws, degree, samples=None, seed=0, confirm=4):
    """Numeric count of polynomial relations of degree <= d on E(ws).

    Entries of E(A) that are the same at every sample are dropped.  The
    nullity of the scaled monomial matrix (relative tolerance 2^-48) is
    reported; candidate relations are rationalised and kept only if they
    also vanish at ``confirm`` fresh samples.
    """
    if ws.parametrization is None:
        raise Unsupported("relation check needs a parametrization")
    ctx = num.ctx
    tol = ctx.mpf(2) ** -REL_TOL_BITS
    rng = _rng(seed)
    n = ws.n
    probe = [_numeric_sample(ws, rng) for _ in range(3)]
    varying = []
    for i in range(n):
        for j in range(n):
            vals = [E[i, j] for E in probe]
            scale = max(1, max(abs(v) for v in vals))
            if any(abs(v - vals[0]) > tol * scale for v in vals):
                varying.append((i, j))
    names = [f"E{i + 1},{j + 1}" for i, j in varying]
    mons = _monomials(len(varying), degree)
    C = len(mons)
    if samples is None:
        samples = C + 8
    if samples < C:
        raise InsufficientSamples(f"{samples} samples for {C} monomials")
    pts = probe + [_numeric_sample(ws, rng) for _ in range(max(0, samples - len(probe)))]
    pts = pts[:samples]
    M = [_eval_monomials([E[i, j] for i, j in varying], mons) for E in pts]
    scales = [max(abs(M[r][c]) for r in range(samples)) or ctx.mpf(1) for c in range(C)]
    Ms = ctx.matrix([[M[r][c] / scales[c] for c in range(C)] for r in range(samples)])
    _, S, V = ctx.svd_r(Ms, full_matrices=True, compute_uv=True)
    smax = max(S) if len(S) else ctx.mpf(0)
    rank = sum(1 for s in S if s > tol * smax)
    nullity = C - rank
    null_rows = [[V[r, c] / scales[c] for c in range(C)] for r in range(rank, C)]
    candidates = []
    for row in _numeric_rref(null_rows):
        coeffs = [_reconstruct(x) for x in row]
        if any(c is None for c in coeffs):
            continue
        rel = [(c, e) for c, e in zip(coeffs, mons) if c]
        if rel:
            candidates.append(rel)
    fresh = [_numeric_sample(ws, rng) for _ in range(confirm)]
    confirmed = []
    for rel in candidates:
        ok = True
        for E in fresh:
            vals = [E[i, j] for i, j in varying]
            terms = [ctx.mpf(c.numerator) / c.denominator * _eval_monomials(vals, [e])[0] for c, e in rel]
            if abs(ctx.fsum(terms)) > tol * max(ctx.mpf(1), ctx.fsum(abs(t) for t in terms)):
                ok = False
                break
        if ok:
            confirmed.append(rel)
    return RelationCheck(degree, names, C, samples, nullity, confirmed,
                         unconfirmed=nullity - len(confirmed))


# -- the two worked examples ----------------------------------------------------------------

def _tp(name, params=("s",)):
    return Poly.var(name, params)


def example_one(num_vars=1, order=8):
    """n=3, distinct diagonal, eigenvectors (1,0,0), (1,1,0), (s, s^2, 1).

    Its equations T12 + 1 = 0, T23 + T13^2 = 0 do not hold at the origin,
    so the origin check is switched off for it.
    """
    s = _tp("s")
    names = t_names(3)
    T = {nm: Poly.var(nm, names) for nm in names}
    eqs = [T["T1,2"] + 1, T["T2,3"] + T["T1,3"] ** 2]
    par = Parametrization(["s"], {"T1,2": Poly.const(-1, ["s"]), "T1,3": -s, "T2,3": -(s ** 2)},
                          num_vars, order)
    return WeaklySpecialH(3, SigmaSystem(3), eqs, par, check_origin=False)


def example_two(num_vars=1, order=8):
    """n=3 with f1 = f3: A v2 = f2 v2 for v2 = (s,1,0) and A v3 = f1 v3 + s^5 v1."""
    s = _tp("s")
    names = t_names(3)
    T = {nm: Poly.var(nm, names) for nm in names}
    eqs = [T["T2,3"] + T["T1,2"] ** 2, T["T1,3"] + T["T1,2"] ** 5]
    par = Parametrization(["s"], {"T1,2": -s, "T2,3": -(s ** 2), "T1,3": s ** 5}, num_vars, order)
    return WeaklySpecialH(3, SigmaSystem(3, [[1, 0, -1]]), eqs, par)


def diagonal_family(n, sigma_rows=()):
    """All diagonal matrices whose diagonal satisfies sigma (T's identically 0)."""
    names = t_names(n)
    eqs = [Poly.var(nm, names) for nm in names]
    return WeaklySpecialH(n, SigmaSystem(n, sigma_rows), eqs, Parametrization([], {}))


def full_h(n, sigma_rows=()):
    """All of the triangular matrices (with diagonal on sigma), T's free."""
    names = t_names(n)
    params = [f"a{i + 1}" for i in range(len(names))]
    maps = {nm: Poly.var(p, params) for nm, p in zip(names, params)}
    return WeaklySpecialH(n, SigmaSystem(n, sigma_rows), [], Parametrization(params, maps))


def dimension(ws):
    """dim of the spec as N + (dimension of the coordinate part).

    N is the dimension of Z(sigma); the coordinate part is the jacobian rank
    of the parametrization at random rational points.
    """
    N = ws.sigma.nvars - len(ws.sigma.rows)
    par = ws.parametrization
    if par is None:
        raise Unsupported("dimension needs a parametrization")
    return N + parametrization_rank(par)


def parametrization_rank(par, samples=3, seed=0):
    if not par.params or not par.maps:
        return 0
    rng = np.random.default_rng(seed)
    best = 0
    derivs = {}
    for nm, p in par.maps.items():
        derivs[nm] = [p.derivative(v) for v in par.params]
    for _ in range(samples):
        pt = {v: _rand_q(rng, 97) for v in par.params}
        J = [[d.evaluate(pt) for d in row] for row in derivs.values()]
        best = max(best, exact_rank(J))
        if best == min(len(par.params), len(derivs)):
            break
    return best


__all__ = [
    "ISigma", "InsufficientSamples", "Membership", "OutsideUSigma", "Parametrization",
    "RelationCheck", "SigmaSystem", "Unsupported", "WeaklySpecialGL", "WeaklySpecialH",
    "diagonal_family", "dimension", "example_one", "example_two", "full_h", "i_sigma",
    "image_relation_check", "membership", "membership_gl", "membership_h",
    "parametrization_rank", "sample", "sample_diagonal", "sample_gl", "sample_h",
    "spec_from_json",
]
