"""Modular int64 kernels: truncated convolution and row reduction mod p.

Each kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version.  :data:`USE_NUMBA` picks one at import time; both are always
importable so tests and the benchmark can compare them directly.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit

# Mersenne prime 2^31 - 1: products of two residues fit in int64 and sums of
# up to 2^32 reduced residues do too.
PRIMES = (2147483647, 2147483629, 2147483587)

USE_NUMBA = HAVE_NUMBA


def _conv_mod_numpy(a, b, pi, pj, starts, p):
    prod = (a[pi] * b[pj]) % p
    return np.add.reduceat(prod, starts) % p


@njit
def _conv_mod_numba(a, b, pi, pj, starts, p):
    m = starts.shape[0]
    out = np.zeros(m, dtype=np.int64)
    npairs = pi.shape[0]
    for k in range(m):
        lo = starts[k]
        hi = starts[k + 1] if k + 1 < m else npairs
        acc = 0
        for t in range(lo, hi):
            x = a[pi[t]]
            if x == 0:
                continue
            acc = (acc + (x * b[pj[t]]) % p) % p
        out[k] = acc
    return out


def _rref_mod_numpy(mat, p):
    a = mat.copy() % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - (col[mask, None] * a[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


@njit
def _powmod(b, e, p):
    result = 1
    b = b % p
    while e > 0:
        if e & 1:
            result = (result * b) % p
        b = (b * b) % p
        e >>= 1
    return result


@njit
def _rref_mod_numba(mat, p):
    a = mat.copy()
    rows, cols = a.shape
    for i in range(rows):
        for j in range(cols):
            a[i, j] = a[i, j] % p
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    npiv = 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _powmod(a[r, c], p - 2, p)
        for j in range(cols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                a[i, j] = (a[i, j] - (f * a[r, j]) % p) % p
        pivots[npiv] = c
        npiv += 1
        r += 1
    return a, pivots[:npiv]


def conv_mod(a, b, pi, pj, starts, p, numba=None):
    """Truncated product of two dense residue vectors.

    ``pi``, ``pj`` list the admissible index pairs sorted by target slot and
    ``starts`` gives the first pair of each target slot.
    """
    use = USE_NUMBA if numba is None else (numba and HAVE_NUMBA)
    if use:
        return _conv_mod_numba(a, b, pi, pj, starts, np.int64(p))
    return _conv_mod_numpy(a, b, pi, pj, starts, p)


def rref_mod(mat, p, numba=None):
    """Reduced row echelon form of an int64 matrix over GF(p)."""
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    use = USE_NUMBA if numba is None else (numba and HAVE_NUMBA)
    if use:
        return _rref_mod_numba(mat, np.int64(p))
    return _rref_mod_numpy(mat, p)


def rank_mod(mat, p, numba=None):
    return int(rref_mod(mat, p, numba)[1].shape[0])


def nullspace_mod(mat, p, numba=None):
    """Basis of the right nullspace mod p, one row per vector (RREF-canonical)."""
    red, piv = rref_mod(mat, p, numba)
    cols = red.shape[1]
    piv = [int(c) for c in piv]
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(piv):
            basis[k, pc] = (-red[r, fc]) % p
    return basis
