"""High-precision complex scalars for the sampled-point backend.

All numeric work goes through one mpmath context whose precision is set
here; tolerances are always passed explicitly.
"""
import mpmath

DEFAULT_PREC = 128
RANK_TOL = mpmath.mpf(2) ** -64

ctx = mpmath.MPContext()
ctx.prec = DEFAULT_PREC


def set_precision(bits):
    """Set the working precision (bits) of the numeric backend."""
    if bits < 53:
        raise ValueError("precision below double is not supported")
    ctx.prec = int(bits)


def get_precision():
    return ctx.prec


def to_num(x):
    """Rational, int or mpmath value as a context complex number."""
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)


def close(a, b, rel):
    """|a - b| <= rel * max(1, |a|, |b|)."""
    return abs(a - b) <= rel * max(1, abs(a), abs(b))
