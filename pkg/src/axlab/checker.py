"""Ax-Schanuel harness: relation search, transcendence degree estimates and
the inequality checks for triangular and general matrix families.

Relation search works on truncated series.  A finite truncation can only
separate as many monomials as it has coefficients, so sources that can be
recomputed at a higher order (``Liftable``) are searched at an order large
enough for the monomial count, and every relation is re-checked one step
higher before it is trusted.  Plain series lists are searched at their own
order only.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
import math
import time

import numpy as np

from . import kernels
from .matdata import general_exp
from .poly import Poly, parse_rational
from .scalars import (
    Matrix,
    ShapeError,
    TruncSeries,
    exact_nullspace,
    exact_rank,
    jacobian_rank_at_points,
    primitive,
)
from .special import (
    OutsideUSigma,
    SigmaSystem,
    Unsupported,
    dimension,
    i_sigma,
    membership_h,
    spec_from_json,
)
from .triexp import tri_exp

DEFAULT_DEGREE = 3
DEFAULT_ORDER = 8
DEFAULT_BUDGET = 3000
MAX_LIFT_ORDER = 96


class BudgetExceeded(RuntimeError):
    def __init__(self, needed, budget):
        super().__init__(f"relation search needs {needed} monomial columns, budget is {budget}")
        self.needed = needed
        self.budget = budget


class ValidationError(ValueError):
    pass


# -- function sources ----------------------------------------------------------------

class Liftable:
    """Functions that can be recomputed at any truncation order."""

    def __init__(self, build, order, labels=None):
        self._build = build
        self._cache = {}
        self.order = order
        first = self.at(order)
        self.labels = list(labels) if labels is not None else [f"x{i + 1}" for i in range(len(first))]

    def at(self, order):
        if order not in self._cache:
            self._cache[order] = list(self._build(order))
        return self._cache[order]

    def subset(self, idx):
        idx = list(idx)
        return Liftable(lambda D: [self.at(D)[i] for i in idx], self.order,
                        [self.labels[i] for i in idx])

    def __len__(self):
        return len(self.labels)


class Fixed:
    """A plain list of series at one order."""

    def __init__(self, fns, labels=None):
        self.fns = list(fns)
        self.order = self.fns[0].order if self.fns else 0
        self.labels = list(labels) if labels is not None else [f"x{i + 1}" for i in range(len(self.fns))]

    def at(self, order):
        if order != self.order:
            raise ValueError("fixed series cannot change order")
        return self.fns

    def subset(self, idx):
        idx = list(idx)
        return Fixed([self.fns[i] for i in idx], [self.labels[i] for i in idx])

    def __len__(self):
        return len(self.fns)


def _source(fns, labels=None):
    if isinstance(fns, (Liftable, Fixed)):
        return fns
    fns = list(fns)
    for f in fns[1:]:
        if f.ring is not fns[0].ring:
            raise ShapeError("functions must share num_vars and order")
    return Fixed(fns, labels)


def polynomial_source(fns, labels=None):
    """Liftable view of series that are exact polynomials (degree <= order)."""
    fns = list(fns)
    D = fns[0].order if fns else 0
    return Liftable(lambda order: [f.with_order(order) for f in fns], D, labels)


# -- Q-linear span ------------------------------------------------------------------------

def qlinear_span_dim(fns):
    """(N, integer relation basis) for the Q-span of series with zero constant term."""
    fns = list(fns)
    if not fns:
        return 0, []
    rows = {}
    for j, f in enumerate(fns):
        if f.constant_term():
            raise ValueError("functions need zero constant term")
        for e, c in f.terms.items():
            rows.setdefault(e, [Fraction(0)] * len(fns))[j] = c
    M = list(rows.values())
    rels = exact_nullspace(M, len(fns))
    return len(fns) - len(rels), rels


# -- relation search ---------------------------------------------------------------------

def _exponents(k, d):
    out = []
    for total in range(d + 1):
        for combo in combinations_with_replacement(range(k), total):
            e = [0] * k
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def _parent(e):
    """(smaller exponent, variable) with e = smaller + unit(variable)."""
    v = max(i for i, x in enumerate(e) if x)
    f = list(e)
    f[v] -= 1
    return tuple(f), v


def _monomial_residues(fns, mons, p):
    r = fns[0].ring
    pi, pj, starts = r.pairs
    res = [f.mod_p(p) for f in fns]
    cols = {}
    for e in mons:
        if not any(e):
            v = np.zeros(r.size, dtype=np.int64)
            v[0] = 1
        else:
            f, var = _parent(e)
            v = kernels.conv_mod(cols[f], res[var], pi, pj, starts, p)
        cols[e] = v
    return np.stack([cols[e] for e in mons], axis=1)


def _ratrecon(a, M):
    """Rational x with x = a mod M and |num|, den <= sqrt(M/2), or None."""
    a %= M
    bound = math.isqrt(M // 2)
    r0, r1 = M, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _modular_candidates(fns, mons):
    """Rational nullspace candidates from CRT over one, two, then three primes."""
    residues, moduli, shape = [], [], None
    for p in kernels.PRIMES:
        try:
            M = _monomial_residues(fns, mons, p)
        except (ValueError, ZeroDivisionError):
            continue   # p divides a denominator
        _, piv = kernels.rref_mod(M, p)
        sig = tuple(int(c) for c in piv)
        if shape is not None and sig != shape:
            # a prime with a rank drop is unlucky; keep the larger rank
            if len(sig) < len(shape):
                continue
            residues, moduli = [], []
        shape = sig
        residues.append(kernels.nullspace_mod(M, p))
        moduli.append(p)
        if not len(residues[0]):
            yield []
            return
        vecs = _crt_reconstruct(residues, moduli)
        if vecs is not None:
            yield vecs


def _crt_reconstruct(residues, moduli):
    M = 1
    for p in moduli:
        M *= p
    out = []
    for k in range(residues[0].shape[0]):
        vec = []
        for c in range(residues[0].shape[1]):
            x, mod = 0, 1
            for basis, p in zip(residues, moduli):
                a = int(basis[k, c])
                # x = x mod mod, x = a mod p
                t = ((a - x) * pow(mod, -1, p)) % p
                x += mod * t
                mod *= p
            q = _ratrecon(x, M)
            if q is None:
                return None
            vec.append(q)
        out.append(vec)
    return out


class _ExactMonomials:
    def __init__(self, fns):
        self.fns = fns
        self.cache = {}

    def get(self, e):
        if e not in self.cache:
            if not any(e):
                self.cache[e] = self.fns[0].one()
            else:
                f, v = _parent(e)
                self.cache[e] = self.get(f) * self.fns[v]
        return self.cache[e]

    def combination(self, vec, mons):
        acc = self.fns[0].zero()
        for c, e in zip(vec, mons):
            if c:
                acc = acc + self.get(e).scale(c)
        return acc


def _search_at(fns, mons):
    """Independent integer relations exact at the order of ``fns``."""
    exact = _ExactMonomials(fns)
    for vecs in _modular_candidates(fns, mons):
        if all(exact.combination(v, mons).is_zero() for v in vecs):
            return [primitive(v) for v in vecs]
    # fall back to exact elimination
    rows = [[Fraction(0)] * len(mons) for _ in range(fns[0].ring.size)]
    for c, e in enumerate(mons):
        for i, x in enumerate(exact.get(e).dense()):
            rows[i][c] = x
    return exact_nullspace(rows, len(mons))


@dataclass
class Relation:
    coefficients: list     # integers, one per monomial
    monomials: list        # exponent tuples over the labels

    def terms(self):
        return [(c, e) for c, e in zip(self.coefficients, self.monomials) if c]

    def degree(self):
        return max(sum(e) for _, e in self.terms())

    def variables(self):
        used = set()
        for _, e in self.terms():
            used.update(i for i, k in enumerate(e) if k)
        return used

    def text(self, labels):
        out = ""
        for c, e in sorted(self.terms(), key=lambda t: (-sum(t[1]), t[1]), reverse=False):
            mon = "*".join(lab + (f"^{k}" if k > 1 else "") for lab, k in zip(labels, e) if k)
            mag = abs(c)
            body = str(mag) if not mon else (mon if mag == 1 else f"{mag}*{mon}")
            if not out:
                out = "-" + body if c < 0 else body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out + " = 0"


@dataclass
class RelationReport:
    labels: list
    degree: int
    order: int             # truncation order of the input
    certified_order: int   # order at which every relation was verified
    relations: list = field(default_factory=list)
    dropped: int = 0       # candidates that vanished only to a lower order

    def texts(self):
        return [r.text(self.labels) for r in self.relations]

    def to_json(self):
        return {"labels": self.labels, "degree": self.degree, "order": self.order,
                "certified_order": self.certified_order, "relations": self.texts(),
                "dropped": self.dropped}


def _lift_order(m, D, count):
    """Smallest order >= D whose coefficient count comfortably exceeds ``count``."""
    need = count + count // 2 + 4
    order = D
    while ring_size(m, order) < need and order < MAX_LIFT_ORDER:
        order += 1
    return order


def ring_size(m, D):
    return math.comb(m + D, m)


def relation_search(fns, degree=DEFAULT_DEGREE, budget=DEFAULT_BUDGET, labels=None):
    """Polynomial relations of total degree <= ``degree`` among ``fns``.

    ``fns`` is a list of TruncSeries (searched at their order) or a
    :class:`Liftable` (searched at a high enough order, each relation
    re-verified at a strictly higher one).
    """
    src = _source(fns, labels)
    k = len(src)
    mons = _exponents(k, degree)
    if len(mons) > budget:
        raise BudgetExceeded(len(mons), budget)
    D = src.order
    if k == 0:
        return RelationReport([], degree, D, D)
    m = src.at(D)[0].num_vars
    if isinstance(src, Fixed):
        vecs = _search_at(src.at(D), mons)
        rels = [Relation(v, mons) for v in vecs]
        return RelationReport(src.labels, degree, D, D, rels)
    order = _lift_order(m, D, len(mons))
    # every monomial of degree <= d must keep its leading term, or a product
    # that merely falls off the truncation reads as a relation
    vals = [f.valuation() for f in src.at(D) if not f.is_zero()]
    if vals:
        order = min(MAX_LIFT_ORDER, max(order, degree * max(vals) + 1))
    dropped = 0
    while True:
        vecs = _search_at(src.at(order), mons)
        if not vecs:
            return RelationReport(src.labels, degree, D, order, [], dropped)
        nxt = min(MAX_LIFT_ORDER + 8, order + max(2, order // 4))
        check = _ExactMonomials(src.at(nxt))
        good = [v for v in vecs if check.combination(v, mons).is_zero()]
        if len(good) == len(vecs) or order >= MAX_LIFT_ORDER:
            dropped += len(vecs) - len(good)
            return RelationReport(src.labels, degree, D, nxt if good == vecs else order,
                                  [Relation(v, mons) for v in good], dropped)
        dropped += len(vecs) - len(good)
        order = nxt


@dataclass
class TrdegResult:
    estimate: int
    kept: list               # indices of the admitted functions
    certificates: dict       # excluded index -> RelationReport
    complete: bool           # False when stopped early at the target


def trdeg_estimate(fns, degree=DEFAULT_DEGREE, budget=DEFAULT_BUDGET, target=None,
                   labels=None, full=False):
    """Greedy transcendence degree estimate.

    Functions are taken in order; one is admitted when no relation of degree
    <= ``degree`` ties it to the ones already admitted.  With a ``target``
    the scan stops once that many are admitted.  Returns the count, or a
    :class:`TrdegResult` when ``full``.
    """
    src = _source(fns, labels)
    kept, certs = [], {}
    complete = True
    for i in range(len(src)):
        if target is not None and len(kept) >= target:
            complete = i == len(src)
            break
        rep = relation_search(src.subset(kept + [i]), degree, budget)
        if rep.relations:
            certs[i] = rep
        else:
            kept.append(i)
    res = TrdegResult(len(kept), kept, certs, complete)
    return res if full else res.estimate


# -- families ----------------------------------------------------------------------------

@dataclass
class FamilySpec:
    flavor: str
    n: int
    num_vars: int
    order: int
    A: Matrix
    eigenvalues: list = None          # gl: distinct eigenvalues as series
    multiplicities: list = None
    notes: str = ""
    seed: object = None
    polynomial: bool = True           # entries are exact polynomials, so they lift

    def at_order(self, order):
        """Same family re-embedded at another truncation order (exact for polynomials)."""
        A = self.A.map(lambda x: x.with_order(order))
        z = [x.with_order(order) for x in self.eigenvalues] if self.eigenvalues else None
        return FamilySpec(self.flavor, self.n, self.num_vars, order, A, z,
                          self.multiplicities, self.notes, self.seed, self.polynomial)


@dataclass
class FamilyParams:
    flavor: str = "h"
    n: int = 2
    m: int = 2
    D: int = DEFAULT_ORDER
    pattern: str = "distinct"         # distinct | blocks | relations
    blocks: list = None               # composition: equal-diagonal groups (h) or multiplicities (gl)
    relations: list = None            # rows on the diagonal (h) or the eigenvalues (gl)
    density: float = 0.6


def trial_rng(seed, trial=None):
    """Generator for one trial; streams for different trials are independent."""
    if isinstance(seed, np.random.Generator):
        return seed
    if trial is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _rand_poly(rng, m, D, maxdeg, density, height=3):
    terms = {}
    for total in range(1, maxdeg + 1):
        for combo in combinations_with_replacement(range(m), total):
            if rng.random() < density:
                e = [0] * m
                for v in combo:
                    e[v] += 1
                c = int(rng.integers(-height, height + 1))
                if c:
                    terms[tuple(e)] = Fraction(c)
    return TruncSeries(m, D, terms)


def _sigma_for(params, nvars):
    rows = []
    if params.pattern == "distinct":
        if params.blocks or params.relations:
            raise ValidationError("pattern 'distinct' takes no blocks or relations")
    elif params.pattern == "blocks":
        if params.flavor == "h":
            blocks = params.blocks or []
            if sum(blocks) != nvars or any(b < 1 for b in blocks):
                raise ValidationError("blocks must be a composition of n")
            start = 0
            for b in blocks:
                for i in range(start + 1, start + b):
                    row = [0] * nvars
                    row[start], row[i] = 1, -1
                    rows.append(row)
                start += b
    elif params.pattern == "relations":
        rows = [list(r) for r in (params.relations or [])]
    else:
        raise ValidationError(f"unknown pattern {params.pattern!r}")
    try:
        return SigmaSystem(nvars, rows)
    except (ValueError, ShapeError) as exc:
        raise ValidationError(str(exc)) from exc


def _diagonal(rng, sigma, m, D, maxdeg, density, tries=30):
    """Series on Z(sigma) whose Q-relations are exactly the span of sigma."""
    B = sigma.kernel()
    r = len(B[0]) if B else 0
    forced = i_sigma(sigma)
    zero = TruncSeries(m, D)
    for _ in range(tries):
        u = [_rand_poly(rng, m, D, maxdeg, max(density, 0.5)) for _ in range(r)]
        vals = []
        for i in range(sigma.nvars):
            acc = zero
            for b in range(r):
                if B[i][b]:
                    acc = acc + u[b] * B[i][b]
            vals.append(acc)
        N, _ = qlinear_span_dim(vals) if vals else (0, [])
        if N != r:
            continue
        if all((vals[i] == vals[j]) == ((i, j) in forced)
               for i in range(len(vals)) for j in range(i + 1, len(vals))):
            return vals
    raise ValidationError("cannot realise the requested eigenvalue pattern at this size "
                          f"(need {r} Q-independent series with m={m}, degree <= {maxdeg})")


def random_family(params, seed=0):
    """Seeded random family; see :class:`FamilyParams` for the knobs."""
    p = params
    if not (1 <= p.n <= 5 and 1 <= p.m <= 3 and 2 <= p.D <= 10):
        raise ValidationError("need n <= 5, m <= 3 and 2 <= D <= 10")
    if p.flavor not in ("h", "gl"):
        raise ValidationError("flavor must be 'h' or 'gl'")
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed)
    maxdeg = max(1, p.D // 2)
    if p.flavor == "h":
        sigma = _sigma_for(p, p.n)
        f = _diagonal(rng, sigma, p.m, p.D, maxdeg, p.density)
        zero = TruncSeries(p.m, p.D)
        rows = []
        for i in range(p.n):
            rows.append([f[i] if i == j else
                         (_rand_poly(rng, p.m, p.D, maxdeg, p.density) if j > i else zero)
                         for j in range(p.n)])
        notes = f"h, pattern {p.pattern}, sigma {[[str(q) for q in r] for r in sigma.rows]}"
        return FamilySpec("h", p.n, p.m, p.D, Matrix(rows), notes=notes, seed=_seed_repr(seed))
    # for gl, blocks are the multiplicities and relations act on the k eigenvalues
    mult = list(p.blocks) if p.blocks else [1] * p.n
    if sum(mult) != p.n or any(x < 1 for x in mult):
        raise ValidationError("multiplicities must be a composition of n")
    k = len(mult)
    rows = p.relations if p.pattern == "relations" else []
    if p.pattern == "distinct" and p.relations:
        raise ValidationError("pattern 'distinct' takes no relations")
    try:
        sigma = SigmaSystem(k, rows)
        sigma.require_no_coincidence()
    except (ValueError, ShapeError) as exc:
        raise ValidationError(str(exc)) from exc
    z = _diagonal(rng, sigma, p.m, p.D, maxdeg, p.density) if k else []
    A = _gl_matrix(rng, z, mult, p.m, p.D, maxdeg, p.density)
    notes = f"gl, multiplicities {mult}, sigma {[[str(q) for q in r] for r in sigma.rows]}"
    return FamilySpec("gl", p.n, p.m, p.D, A, z, mult, notes, _seed_repr(seed))


def _seed_repr(seed):
    return seed if isinstance(seed, int) else None


def _gl_matrix(rng, z, mult, m, D, maxdeg, density):
    """P J P^-1 with J = blockdiag(z_i + N_i), P a small random integer matrix."""
    from .scalars import inverse
    n = sum(mult)
    while True:
        P = [[Fraction(int(rng.integers(-2, 3))) for _ in range(n)] for _ in range(n)]
        if exact_rank(P) == n:
            break
    Pinv = inverse(P)
    zero = TruncSeries(m, D)
    J = [[zero] * n for _ in range(n)]
    start = 0
    for zi, mi in zip(z, mult):
        for a in range(mi):
            J[start + a][start + a] = zi
            for b in range(a + 1, mi):
                J[start + a][start + b] = _rand_poly(rng, m, D, maxdeg, density)
        start += mi
    PJ = [[_lin(P[r], [J[c][j] for c in range(n)], zero) for j in range(n)] for r in range(n)]
    A = [[_lin([Pinv[c][j] for c in range(n)], PJ[r], zero) for j in range(n)] for r in range(n)]
    return Matrix(A)


def _lin(coeffs, series, zero):
    acc = zero
    for c, s in zip(coeffs, series):
        if c and not s.is_zero():
            acc = acc + s.scale(c)
    return acc


# -- checks --------------------------------------------------------------------------------

@dataclass
class CheckReport:
    N: int
    rankJ: int
    trdeg: int
    verdict: str
    relations: list
    seed: object = None
    ms: float = None
    labels: list = None
    complete: bool = True
    flavor: str = "h"

    def to_json(self, timings=False):
        out = {"N": self.N, "rankJ": self.rankJ, "trdeg": self.trdeg,
               "verdict": self.verdict, "relations": self.relations, "seed": self.seed}
        if timings:
            out["ms"] = self.ms
        return out


def _entry_labels(n, prefix, upper):
    out = []
    for i in range(n):
        for j in range(n):
            if upper and j < i:
                continue
            out.append((i, j, f"{prefix}{i + 1},{j + 1}"))
    return out


def _functions(fam, exp_fn, upper):
    """Liftable source over the nonzero entries of A then of E(A)."""
    cells = _entry_labels(fam.n, "A", upper)
    ecells = _entry_labels(fam.n, "E", upper)

    def build(order):
        f2 = fam if order == fam.order else fam.at_order(order)
        E = exp_fn(f2.A)
        return [f2.A[i, j] for i, j, _ in cells] + [E[i, j] for i, j, _ in ecells]

    base = build(fam.order)
    keep = [k for k, s in enumerate(base) if not s.is_zero()]
    labels = [lab for _, _, lab in cells] + [lab for _, _, lab in ecells]
    if fam.polynomial:
        src = Liftable(build, fam.order, labels)
    else:
        src = Fixed(base, labels)
    return src.subset(keep)


def _check(fam, eigen, upper, exp_fn, degree, budget, full):
    t0 = time.perf_counter()
    N, _ = qlinear_span_dim(eigen)
    entries = [fam.A[i, j] for i, j, _ in _entry_labels(fam.n, "A", upper)]
    rankJ = jacobian_rank_at_points(entries, seed=0)
    src = _functions(fam, exp_fn, upper)
    target = None if full else N + rankJ
    res = trdeg_estimate(src, degree, budget, target=target, full=True)
    verdict = "PASS" if res.estimate >= N + rankJ else "WARN"
    rels = []
    for i, rep in sorted(res.certificates.items()):
        texts = rep.texts()
        rels.extend(texts if verdict == "WARN" else texts[:1])
    ms = (time.perf_counter() - t0) * 1000
    return CheckReport(N, rankJ, res.estimate, verdict, rels, fam.seed, ms, src.labels,
                       res.complete, fam.flavor)


def check_h(fam, degree=DEFAULT_DEGREE, budget=DEFAULT_BUDGET, full=False):
    """Inequality check for a triangular family: trdeg(A, E(A)) >= N + rank J."""
    if fam.flavor != "h":
        raise ValueError("check_h needs an h family")
    if not fam.A.is_upper_triangular():
        raise ShapeError("h families are upper triangular")
    return _check(fam, fam.A.diag(), True, tri_exp, degree, budget, full)


def check_gl(fam, degree=DEFAULT_DEGREE, budget=DEFAULT_BUDGET, full=False):
    """Inequality check for a general family with attached eigenvalues."""
    if fam.eigenvalues is None:
        raise ValueError("check_gl needs the eigenvalues attached to the family")
    return _check(fam, fam.eigenvalues, False, general_exp, degree, budget, full)


def check(fam, degree=DEFAULT_DEGREE, budget=DEFAULT_BUDGET, full=False):
    return (check_h if fam.flavor == "h" else check_gl)(fam, degree, budget, full)


def tight_family(kind="classical", D=DEFAULT_ORDER):
    """Families expected to give equality trdeg = N + rank J."""
    if kind == "classical":
        t = TruncSeries.var(0, 1, D)
        return FamilySpec("h", 1, 1, D, Matrix([[t]]), notes="n=1, A = [t1]")
    raise ValueError(f"unknown tight family {kind!r}")


def diagonal_family_spec(diag, notes=""):
    """h family with the given diagonal and zero off-diagonal entries."""
    n = len(diag)
    zero = diag[0].zero()
    A = Matrix([[diag[i] if i == j else zero for j in range(n)] for i in range(n)])
    return FamilySpec("h", n, diag[0].num_vars, diag[0].order, A, notes=notes)


# -- full Ax-Schanuel scenarios ---------------------------------------------------------------

@dataclass
class ParamFamily:
    """Polynomial map from parameters to n x n matrices, with optional equations."""
    params: list
    matrix: list                       # n x n Polys over params
    equations: list = field(default_factory=list)   # Polys over entry names

    def rank(self, samples=3, seed=0):
        if not self.params:
            return 0
        rng = np.random.default_rng(seed)
        cells = [p for row in self.matrix for p in row]
        derivs = [[p.derivative(v) for v in self.params] for p in cells]
        best = 0
        for _ in range(samples):
            pt = {v: Fraction(int(rng.integers(-97, 98)), int(rng.integers(1, 98))) for v in self.params}
            J = [[d.evaluate(pt) for d in row] for row in derivs]
            best = max(best, exact_rank(J))
            if best == len(self.params):
                break
        return best

    def point(self, values):
        return [[p.evaluate(values) for p in row] for row in self.matrix]


def _entry_names(n, prefix):
    return [f"{prefix}{i + 1},{j + 1}" for i in range(n) for j in range(n)]


def param_family_from_json(obj, n, prefix):
    params = list(obj.get("params", []))
    rows = obj.get("matrix")
    if not isinstance(rows, list) or len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"matrix must be {n}x{n}")
    mat = []
    for row in rows:
        out = []
        for x in row:
            if isinstance(x, dict):
                out.append(Poly.from_json(x, params))
            else:
                out.append(Poly.const(parse_rational(x), params))
        mat.append(out)
    names = _entry_names(n, prefix)
    eqs = [Poly.from_json(e, names) for e in obj.get("equations", [])]
    return ParamFamily(params, mat, eqs)


def param_family_to_json(fam):
    return {"params": list(fam.params),
            "matrix": [[p.to_json() for p in row] for row in fam.matrix],
            "equations": [e.to_json() for e in fam.equations]}


@dataclass
class Scenario:
    name: str
    U: object          # weakly special spec with parametrization
    V: ParamFamily
    Z: ParamFamily
    C: ParamFamily
    note: str = ""

    def to_json(self):
        return {"name": self.name, "U": self.U.to_json(), "V": param_family_to_json(self.V),
                "Z": param_family_to_json(self.Z), "C": param_family_to_json(self.C),
                "note": self.note}


def scenario_from_json(obj):
    U = spec_from_json(obj["U"])
    n = U.n
    return Scenario(obj.get("name", "scenario"), U,
                    param_family_from_json(obj["V"], n, "X"),
                    param_family_from_json(obj["Z"], n, "E"),
                    param_family_from_json(obj["C"], n, "X"),
                    obj.get("note", ""))


@dataclass
class FullReport:
    name: str
    dims: dict
    holds: bool
    checks: dict
    verdict: str

    def to_json(self):
        return {"name": self.name, "dims": self.dims, "holds": self.holds,
                "checks": self.checks, "verdict": self.verdict}


def _sample_points(fam, count, rng):
    pts = []
    for _ in range(count):
        vals = {v: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for v in fam.params}
        pts.append(fam.point(vals))
    return pts


def check_full(scenario, samples=3, seed=0):
    """dim C <= dim V + dim Z - dim X, with dimensions from exact jacobian ranks.

    Sample points of C are also checked to lie on U and on V's equations
    (exactly) and to map into Z's equations under exp (numerically).
    """
    from .scalars import numeric as num
    from .triexp import expm_reference
    U = scenario.U
    if U.parametrization is None:
        raise Unsupported("scenario needs a parametrization of U")
    dims = {"X": dimension(U), "V": scenario.V.rank(), "Z": scenario.Z.rank(),
            "C": scenario.C.rank()}
    holds = dims["C"] <= dims["V"] + dims["Z"] - dims["X"]
    rng = np.random.default_rng(seed)
    n = U.n
    checks = {"C_in_U": True, "C_in_V": True, "expC_in_Z": True}
    tol = num.ctx.mpf(2) ** -48
    for pt in _sample_points(scenario.C, samples, rng):
        M = Matrix([[TruncSeries.constant(x, 1, 0) for x in row] for row in pt])
        if U.flavor == "h":
            try:
                if not membership_h(M, U):
                    checks["C_in_U"] = False
            except (OutsideUSigma, ShapeError):
                checks["C_in_U"] = False
        xvals = dict(zip(_entry_names(n, "X"), [x for row in pt for x in row]))
        if any(eq.evaluate(xvals) != 0 for eq in scenario.V.equations):
            checks["C_in_V"] = False
        if scenario.Z.equations:
            E = expm_reference(Matrix(pt)).map(num.ctx.re)
            evals = dict(zip(_entry_names(n, "E"), [E[i, j] for i in range(n) for j in range(n)]))
            for eq in scenario.Z.equations:
                val = eq.evaluate(evals, num.ctx.mpf(0))
                scale = max(num.ctx.mpf(1), max(abs(v) for v in evals.values()) ** eq.degree())
                if abs(val) > tol * scale:
                    checks["expC_in_Z"] = False
    ok = holds and all(checks.values())
    return FullReport(scenario.name, dims, holds, checks, "PASS" if ok else "WARN")


def builtin_scenarios():
    """The equality case, the one-dimensional point case and a 2x2 diagonal case."""
    from .special import diagonal_family

    def diag_map(params, entries):
        n = len(entries)
        return [[entries[i] if i == j else Poly.const(0, params) for j in range(n)] for i in range(n)]

    def v(name, params):
        return Poly.var(name, params)

    out = []
    # equality case: V = U, Z = E(U) on diagonal 2x2 matrices
    U = diagonal_family(2)
    P = ["a", "b"]
    Q = ["p", "q"]
    out.append(Scenario(
        "equality", U,
        ParamFamily(P, diag_map(P, [v("a", P), v("b", P)])),
        ParamFamily(Q, diag_map(Q, [v("p", Q), v("q", Q)])),
        ParamFamily(P, diag_map(P, [v("a", P), v("b", P)])),
        "V = U, Z = X, C = V"))
    # U = h_1 = C, V = {t}, Z = {1}, C = {0}
    U1 = diagonal_family(1)
    T = ["t"]
    out.append(Scenario(
        "point", U1,
        ParamFamily(T, [[v("t", T)]]),
        ParamFamily([], [[Poly.const(1, [])]], [Poly.var("E1,1", ["E1,1"]) - 1]),
        ParamFamily([], [[Poly.const(0, [])]]),
        "exp(t) = 1 has the component t = 0"))
    # diagonal 2x2: V = {diag(a, 1 - a)}, Z = {diag(p, p^2)}, C = {diag(1/3, 2/3)}
    A_ = ["a"]
    names_x = _entry_names(2, "X")
    names_e = _entry_names(2, "E")
    X = {nm: Poly.var(nm, names_x) for nm in names_x}
    E = {nm: Poly.var(nm, names_e) for nm in names_e}
    out.append(Scenario(
        "diagonal-line-curve", U,
        ParamFamily(A_, diag_map(A_, [v("a", A_), 1 - v("a", A_)]),
                    [X["X1,1"] + X["X2,2"] - 1, X["X1,2"], X["X2,1"]]),
        ParamFamily(["p"], diag_map(["p"], [v("p", ["p"]), v("p", ["p"]) ** 2]),
                    [E["E2,2"] - E["E1,1"] ** 2, E["E1,2"], E["E2,1"]]),
        ParamFamily([], diag_map([], [Poly.const(Fraction(1, 3), []), Poly.const(Fraction(2, 3), [])])),
        "e^(1-a) = e^(2a): a = 1/3 is a component"))
    return out


__all__ = [
    "BudgetExceeded", "CheckReport", "FamilyParams", "FamilySpec", "FullReport", "Liftable",
    "ParamFamily", "Relation", "RelationReport", "Scenario", "TrdegResult", "ValidationError",
    "builtin_scenarios", "check", "check_full", "check_gl", "check_h", "diagonal_family_spec",
    "polynomial_source", "qlinear_span_dim", "random_family", "relation_search",
    "scenario_from_json", "tight_family", "trdeg_estimate", "trial_rng",
]
