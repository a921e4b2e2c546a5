"""Exponentials of upper triangular matrices.

The exact routine never forms powers of the matrix.  Entry (i, j) of exp(A)
is a sum over increasing index paths i = k0 < k1 < ... < kr = j of

    A[k0,k1] * ... * A[k(r-1),kr] * exp[z_k0, ..., z_kr]

where exp[...] is the divided difference of exp on the diagonal entries.
Divided differences are evaluated in the case-free form

    exp[z_0..z_r] = sum_{N >= r} h_{N-r}(z_0..z_r) / N!

with h_k the complete homogeneous polynomial, so repeated eigenvalues need
no special treatment and nothing is ever divided by z_i - z_j.
"""
from fractions import Fraction
from math import factorial

from .scalars import DomainError, Matrix, ShapeError, TruncSeries
from .scalars import numeric as num


def f_n(s, t, N):
    """sum_{a+b=N-1} s^a t^b; equals (s^N - t^N)/(s - t), or N s^(N-1) at s = t."""
    if N < 1:
        raise DomainError("F_N needs N >= 1")
    sp = [s ** 0]
    tp = [t ** 0]
    for _ in range(N - 1):
        sp.append(sp[-1] * s)
        tp.append(tp[-1] * t)
    acc = sp[0] * tp[N - 1]
    for a in range(1, N):
        acc = acc + sp[a] * tp[N - 1 - a]
    return acc


def f_n_closed(s, t, N):
    """Case-split form of :func:`f_n` (rational inputs)."""
    if s != t:
        return Fraction(s ** N - t ** N) / (s - t)
    return N * Fraction(s) ** (N - 1)


def complete_homogeneous(nodes, k):
    """h_k(nodes): sum of all monomials of degree k in the nodes."""
    table = _h_table(nodes, k)
    return table[k]


def _h_table(nodes, kmax, prev=None):
    """[h_0..h_kmax] of ``nodes``; ``prev`` is the table without the last node."""
    one = nodes[0] ** 0
    if prev is None:
        prev = [one] + [one - one] * kmax
        for z in nodes:
            prev = _extend(prev, z)
        return prev
    return _extend(prev, nodes[-1])


def _extend(prev, z):
    # h_k(..., z) = h_k(...) + z * h_{k-1}(..., z)
    out = [prev[0]]
    for k in range(1, len(prev)):
        out.append(prev[k] + z * out[k - 1])
    return out


def g_n(x, s, t, N):
    """x^N F_1(s,t) + x^(N-1) F_2(s,t) + ... + F_(N+1)(s,t), summed directly."""
    if N < 0:
        raise DomainError("G_N needs N >= 0")
    acc = None
    xp = x ** 0
    for k in range(N, -1, -1):
        term = xp * f_n(s, t, k + 1)
        acc = term if acc is None else acc + term
        xp = xp * x
    return acc


def g_n_closed(x, s, t, N):
    """The three case-split closed forms for :func:`g_n` (rational inputs)."""
    x, s, t = Fraction(x), Fraction(s), Fraction(t)
    if s != t:
        return (f_n_closed(s, x, N + 2) - f_n_closed(t, x, N + 2)) / (s - t)
    if x != s:
        return (x ** (N + 2) - x * (N + 2) * s ** (N + 1) + (N + 1) * s ** (N + 2)) / (s - x) ** 2
    return Fraction((N + 2) * (N + 1), 2) * s ** N


def _check_series_arg(*vals):
    for v in vals:
        if v.constant_term():
            raise DomainError("series arguments of exp-type functions need zero constant term")


def f_exp(s, t, order=None):
    """Divided difference (e^s - e^t)/(s - t), confluent value e^s.

    Series arguments: sum_{N=1}^{D+1} F_N(s,t)/N!, exact to order D.
    Anything else is evaluated in the numeric backend.
    """
    if isinstance(s, TruncSeries) or isinstance(t, TruncSeries):
        if not isinstance(s, TruncSeries):
            s = TruncSeries.constant(s, t.num_vars, t.order)
        if not isinstance(t, TruncSeries):
            t = TruncSeries.constant(t, s.num_vars, s.order)
        _check_series_arg(s, t)
        return divided_difference_exp([s, t])
    return exp_divided_difference_numeric([num.to_num(s), num.to_num(t)])


def divided_difference_exp(nodes, table=None):
    """exp[z_0..z_r] for series nodes with zero constant term, exact to order D.

    ``table`` may carry [h_0..h_D](nodes) to avoid recomputation.
    """
    r = len(nodes) - 1
    D = nodes[0].order
    if table is None:
        table = _h_table(nodes, D)
    acc = nodes[0].zero()
    for k in range(D + 1):
        if not table[k].is_zero():
            acc = acc + table[k].scale(Fraction(1, factorial(k + r)))
    return acc


def _require_upper(A):
    if A.rows != A.cols:
        raise ShapeError("matrix must be square")
    if not A.is_upper_triangular():
        raise ShapeError("matrix must be upper triangular")


def _require_series(A):
    for row in A.entries:
        for x in row:
            if not isinstance(x, TruncSeries):
                raise DomainError("exact exponential needs series entries")
            if x.constant_term():
                raise DomainError("entries must have zero constant term")


def tri_power_entry(A, N):
    """(1, n) entry of A^N by the first-row recursion (no full powering)."""
    _require_upper(A)
    n = A.rows
    if n < 2:
        raise ShapeError("need n >= 2")
    if N < 0:
        raise DomainError("negative power")
    zero = A.zero()
    one = A.one()
    # column vector H[a] = (A^r)[a, n-1]
    H = [zero] * (n - 1) + [one]
    for _ in range(N):
        H = [_dot(A.entries[a][a:], H[a:], zero) for a in range(n)]
    return H[0]


def _dot(xs, ys, zero):
    acc = zero
    for x, y in zip(xs, ys):
        if x and y:
            acc = acc + x * y
    return acc


def taylor_exp(A):
    """sum_{N<=D} A^N / N!, exact to order D when A vanishes at the origin."""
    if A.rows != A.cols:
        raise ShapeError("matrix must be square")
    _require_series(A)
    D = A[0, 0].order
    n = A.rows
    one = A[0, 0].one()
    I = Matrix.identity(n, one)
    # Horner: I + A/1 (I + A/2 (I + ... ))
    acc = I
    for k in range(D, 0, -1):
        acc = I + (A @ acc).scale(Fraction(1, k))
    return acc


def tri_exp(A):
    """exp(A) for upper triangular A over truncated series, exact to order D."""
    _require_upper(A)
    _require_series(A)
    n = A.rows
    z = A.diag()
    D = z[0].order
    zero = z[0].zero()
    E = [[zero] * n for _ in range(n)]
    for i in range(n):
        E[i][i] = z[i].exp()
        base = z[i].one()
        _walk(A, z, D, i, i, [z[i]], _h_table([z[i]], D), base, E)
    return Matrix(E)


def _walk(A, z, D, i, k, path, table, weight, E):
    """Depth-first over increasing paths from i; ``k`` is the current end."""
    for c in range(k + 1, A.cols):
        x = A[k, c]
        if not x:
            continue
        w = weight * x
        if w.is_zero():
            continue
        nodes = path + [z[c]]
        tab = _extend(table, z[c])
        E[i][c] = E[i][c] + w * divided_difference_exp(nodes, tab)
        _walk(A, z, D, i, c, nodes, tab, w, E)


# -- numeric backend -----------------------------------------------------------

def _spread(nodes):
    return max(abs(a - b) for a in nodes for b in nodes)


def exp_divided_difference_numeric(nodes, cluster=1):
    """exp[z_0..z_r] in the numeric backend.

    Clustered nodes (spread <= ``cluster``) use the Taylor form about their
    mean, which has no cancellation; otherwise the recurrence is applied to
    the two most distant nodes, whose difference is then well above 1.
    """
    ctx = num.ctx
    nodes = [ctx.mpc(z) for z in nodes]
    r = len(nodes) - 1
    if r == 0:
        return ctx.exp(nodes[0])
    if _spread(nodes) <= cluster:
        mu = sum(nodes) / len(nodes)
        w = [z - mu for z in nodes]
        eps = ctx.mpf(2) ** (-ctx.prec - 8)
        total = ctx.mpc(0)
        rho = max(abs(x) for x in w)
        k = 0
        hk = _numeric_h(w)
        fact = ctx.factorial(r)
        bound = 1 / fact
        while True:
            total += hk(k) / fact
            # |h_k(w)| / (k+r)! <= rho^k / (k! r!), odd terms may vanish exactly
            k += 1
            fact *= (k + r)
            bound = bound * rho / k
            if bound < eps * max(1, abs(total)):
                break
        return ctx.exp(mu) * total
    best = max(((a, b) for a in range(r + 1) for b in range(r + 1) if a < b),
               key=lambda ab: abs(nodes[ab[0]] - nodes[ab[1]]))
    a, b = best
    rest = [nodes[q] for q in range(r + 1) if q not in (a, b)]
    lo = exp_divided_difference_numeric(rest + [nodes[a]], cluster)
    hi = exp_divided_difference_numeric(rest + [nodes[b]], cluster)
    return (lo - hi) / (nodes[a] - nodes[b])


def _numeric_h(w):
    """Memoised k -> h_k(w) for numeric w."""
    ctx = num.ctx
    cols = [[ctx.mpc(1)] for _ in w]

    def h(k):
        while len(cols[-1]) <= k:
            kk = len(cols[0])
            prev = ctx.mpc(0)
            for c, z in zip(cols, w):
                # h_kk(w_0..w_c) = h_kk(w_0..w_{c-1}) + w_c h_{kk-1}(w_0..w_c)
                val = prev + z * c[kk - 1]
                c.append(val)
                prev = val
        return cols[-1][k]

    return h


def _path_sum_entry(A, i, j, dd):
    """Entry (i, j) of exp(A) as a path sum with numeric divided differences."""
    ctx = num.ctx
    total = ctx.mpc(0)
    stack = [(i, [i], ctx.mpc(1))]
    while stack:
        k, path, w = stack.pop()
        for c in range(k + 1, j + 1):
            x = A[k, c]
            if not x:
                continue
            wc = w * x
            if c == j:
                total += wc * dd([A[q, q] for q in path + [c]])
            else:
                stack.append((c, path + [c], wc))
    return total


def tri_exp_numeric(A, threshold=None):
    """exp(A) for numeric upper triangular A (Parlett, column by column).

    Entries whose diagonal pair is closer than ``threshold`` (relative) fall
    back to a path sum with confluent divided differences.
    """
    _require_upper(A)
    ctx = num.ctx
    if threshold is None:
        threshold = ctx.mpf(2) ** -40
    T = A.map(num.to_num)
    n = T.rows
    F = [[ctx.mpc(0)] * n for _ in range(n)]
    for i in range(n):
        F[i][i] = ctx.exp(T[i, i])
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            zi, zj = T[i, i], T[j, j]
            scale = max(1, abs(zi), abs(zj))
            if abs(zi - zj) < threshold * scale:
                F[i][j] = _path_sum_entry(T, i, j, exp_divided_difference_numeric)
                continue
            acc = T[i, j] * (F[j][j] - F[i][i])
            for k in range(i + 1, j):
                acc += T[i, k] * F[k][j] - F[i][k] * T[k, j]
            F[i][j] = acc / (zj - zi)
    return Matrix(F)


def expm_reference(A):
    """Scaling-and-squaring Taylor reference in the numeric backend."""
    ctx = num.ctx
    M = ctx.matrix([[num.to_num(x) for x in row] for row in A.entries])
    E = ctx.expm(M, method="taylor")
    return Matrix([[E[i, j] for j in range(A.cols)] for i in range(A.rows)])
