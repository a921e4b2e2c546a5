"""JSON encodings for rationals, series, fractions, matrices and reports.

Rationals are strings "p/q".  A series is
``{"vars": m, "order": D, "terms": {"e1,...,em": "p/q"}}`` and a matrix is
``{"rows": r, "cols": c, "entries": [[...], ...]}`` with series or rational
entries.  Series fractions add a denominator: ``{"num": s, "den": s,
"prec": k}``.
"""
from fractions import Fraction
import json

from .eigencoords import Eigencoordinates
from .matdata import MatrixData
from .poly import format_rational, parse_rational
from .scalars import Matrix, SeriesFraction, ShapeError, TruncSeries
from .scalars import numeric as num


class InputError(ValueError):
    """Malformed input document; ``where`` locates the problem."""

    def __init__(self, msg, where=None):
        super().__init__(f"{where}: {msg}" if where else msg)
        self.where = where


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc


def load(path):
    if path == "-":
        import sys
        return loads(sys.stdin.read(), "<stdin>")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), path) from exc
    return loads(text, path)


def dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


# -- scalars -----------------------------------------------------------------------

def rational_to_json(x):
    return format_rational(x)


def rational_from_json(x, where="value"):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError("rational must be a string 'p/q' or an integer", where)
    try:
        return parse_rational(x)
    except ValueError as exc:
        raise InputError(str(exc), where) from exc


def series_to_json(s):
    terms = {",".join(str(k) for k in e): format_rational(c)
             for e, c in sorted(s.terms.items(), key=lambda t: (sum(t[0]), tuple(-k for k in t[0])))}
    return {"vars": s.num_vars, "order": s.order, "terms": terms}


def series_from_json(obj, where="series"):
    if not isinstance(obj, dict) or not {"vars", "order", "terms"} <= obj.keys():
        raise InputError("series needs 'vars', 'order' and 'terms'", where)
    m, D = obj["vars"], obj["order"]
    if not isinstance(m, int) or not isinstance(D, int) or m < 1 or D < 0:
        raise InputError("'vars' must be >= 1 and 'order' >= 0", where)
    if not isinstance(obj["terms"], dict):
        raise InputError("'terms' must be an object", where)
    terms = {}
    for key, val in obj["terms"].items():
        try:
            e = tuple(int(x) for x in key.split(","))
        except ValueError as exc:
            raise InputError(f"bad exponent key {key!r}", where) from exc
        if len(e) != m or any(k < 0 for k in e):
            raise InputError(f"exponent {key!r} does not have {m} non-negative entries", where)
        if sum(e) > D:
            raise InputError(f"exponent {key!r} exceeds the truncation order {D}", where)
        terms[e] = rational_from_json(val, f"{where}.terms[{key}]")
    return TruncSeries(m, D, terms)


def fraction_to_json(x):
    if isinstance(x, SeriesFraction):
        if x.is_series():
            return {"num": series_to_json(x.num), "den": series_to_json(x.num.one()), "prec": x.prec}
        return {"num": series_to_json(x.num), "den": series_to_json(x.den), "prec": x.prec}
    return scalar_to_json(x)


def fraction_from_json(obj, where="fraction"):
    if isinstance(obj, dict) and "num" in obj:
        n = series_from_json(obj["num"], where + ".num")
        d = series_from_json(obj.get("den") or series_to_json(n.one()), where + ".den")
        prec = obj.get("prec")
        try:
            return SeriesFraction(n, prec=prec) / SeriesFraction(d)
        except (ZeroDivisionError, ShapeError) as exc:
            raise InputError(str(exc), where) from exc
    return scalar_from_json(obj, where)


def scalar_to_json(x):
    if isinstance(x, TruncSeries):
        return series_to_json(x)
    if isinstance(x, SeriesFraction):
        return fraction_to_json(x)
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    c = num.ctx.mpmathify(x)
    if isinstance(c, num.ctx.mpc):
        return {"re": num.ctx.nstr(c.real, 40), "im": num.ctx.nstr(c.imag, 40)}
    return {"re": num.ctx.nstr(c, 40), "im": "0"}


def scalar_from_json(obj, where="value"):
    if isinstance(obj, dict):
        if "terms" in obj:
            return series_from_json(obj, where)
        if "num" in obj:
            return fraction_from_json(obj, where)
        if "re" in obj:
            try:
                return num.ctx.mpc(num.ctx.mpf(obj["re"]), num.ctx.mpf(obj.get("im", "0")))
            except (TypeError, ValueError) as exc:
                raise InputError("bad numeric value", where) from exc
        raise InputError("unrecognised scalar object", where)
    return rational_from_json(obj, where)


# -- matrices -------------------------------------------------------------------------

def matrix_to_json(A):
    return {"rows": A.rows, "cols": A.cols,
            "entries": [[scalar_to_json(x) for x in row] for row in A.entries]}


def _uniform(rows, where):
    """Promote entries to one domain: fractions > series > rationals."""
    flat = [x for row in rows for x in row]
    series = [x for x in flat if isinstance(x, (TruncSeries, SeriesFraction))]
    if not series:
        return rows
    r = series[0].num.ring if isinstance(series[0], SeriesFraction) else series[0].ring
    for x in series:
        if (x.num.ring if isinstance(x, SeriesFraction) else x.ring) is not r:
            raise InputError("series entries use different vars/order", where)
    m, D = r.m, r.D
    lift = any(isinstance(x, SeriesFraction) for x in series)

    def conv(x):
        if isinstance(x, SeriesFraction):
            return x
        if not isinstance(x, TruncSeries):
            x = TruncSeries.constant(x, m, D)
        return SeriesFraction(x) if lift else x
    return [[conv(x) for x in row] for row in rows]


def matrix_from_json(obj, where="matrix"):
    if not isinstance(obj, dict) or "entries" not in obj:
        raise InputError("matrix needs 'entries'", where)
    ent = obj["entries"]
    if not isinstance(ent, list) or not ent or not all(isinstance(r, list) for r in ent):
        raise InputError("'entries' must be a non-empty list of rows", where)
    rows = [[scalar_from_json(x, f"{where}.entries[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(ent)]
    if len({len(r) for r in rows}) != 1:
        raise InputError("rows have different lengths", where)
    r, c = obj.get("rows", len(rows)), obj.get("cols", len(rows[0]))
    if r != len(rows) or c != len(rows[0]):
        raise InputError(f"declared shape {r}x{c} does not match the entries", where)
    return Matrix(_uniform(rows, where))


# -- derived objects -----------------------------------------------------------------------

def eigencoords_to_json(ec):
    return {"n": ec.n,
            "diagonal": [series_to_json(f) for f in ec.diagonal],
            "entries": [{"i": i + 1, "j": j + 1, "kind": kind, "value": fraction_to_json(v)}
                        for (i, j), (kind, v) in sorted(ec.entries.items(), key=lambda t: (t[0][1], t[0][0]))]}


def eigencoords_from_json(obj, where="eigencoordinates"):
    if not isinstance(obj, dict) or "diagonal" not in obj or "entries" not in obj:
        raise InputError("eigencoordinates need 'diagonal' and 'entries'", where)
    diag = [series_from_json(x, f"{where}.diagonal[{k}]") for k, x in enumerate(obj["diagonal"])]
    ec = Eigencoordinates(len(diag), diag)
    for k, e in enumerate(obj["entries"]):
        w = f"{where}.entries[{k}]"
        try:
            i, j, kind = int(e["i"]) - 1, int(e["j"]) - 1, e["kind"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("entry needs i, j and kind", w) from exc
        if kind not in ("s", "t"):
            raise InputError("kind must be 's' or 't'", w)
        val = fraction_from_json(e.get("value", "0"), w + ".value")
        if not isinstance(val, SeriesFraction):
            val = SeriesFraction(TruncSeries.constant(val, diag[0].num_vars, diag[0].order))
        ec.entries[(i, j)] = (kind, val)
    return ec


def data_to_json(d):
    return {"z": [scalar_to_json(z) for z in d.z], "m": list(d.m),
            "P": [[scalar_to_json(x) for x in row] for row in d.P.entries],
            "N": [[[scalar_to_json(x) for x in row] for row in Ni.entries] for Ni in d.N],
            "pivots": [[r + 1 for r in p] for p in d.pivots] if d.pivots is not None else None}


def data_from_json(obj, where="data"):
    if not isinstance(obj, dict) or not {"z", "m", "P", "N"} <= obj.keys():
        raise InputError("matrix data needs 'z', 'm', 'P' and 'N'", where)
    z = [scalar_from_json(x, f"{where}.z[{k}]") for k, x in enumerate(obj["z"])]
    m = obj["m"]
    if not isinstance(m, list) or len(m) != len(z) or not all(isinstance(x, int) and x > 0 for x in m):
        raise InputError("'m' must list one positive multiplicity per eigenvalue", where)
    P = matrix_from_json({"entries": obj["P"]}, where + ".P")
    N = [matrix_from_json({"entries": Ni}, f"{where}.N[{k}]") for k, Ni in enumerate(obj["N"])]
    piv = obj.get("pivots")
    piv = [[r - 1 for r in p] for p in piv] if piv is not None else None
    return MatrixData(z, list(m), P, N, piv)


def family_to_json(fam):
    out = {"flavor": fam.flavor, "n": fam.n, "vars": fam.num_vars, "order": fam.order,
           "matrix": matrix_to_json(fam.A), "notes": fam.notes, "seed": fam.seed}
    if fam.eigenvalues is not None:
        out["eigenvalues"] = [series_to_json(z) for z in fam.eigenvalues]
        out["multiplicities"] = list(fam.multiplicities) if fam.multiplicities else None
    return out


def family_from_json(obj, where="family"):
    from .checker import FamilySpec
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise InputError("family needs 'matrix'", where)
    flavor = obj.get("flavor", "h")
    if flavor not in ("h", "gl"):
        raise InputError("flavor must be 'h' or 'gl'", where)
    A = matrix_from_json(obj["matrix"], where + ".matrix")
    if A.rows != A.cols or not isinstance(A[0, 0], TruncSeries):
        raise InputError("family matrix must be square with series entries", where)
    for row in A.entries:
        for x in row:
            if x.constant_term():
                raise InputError("family entries need zero constant term", where)
    z = obj.get("eigenvalues")
    if z is not None:
        z = [series_from_json(x, f"{where}.eigenvalues[{k}]") for k, x in enumerate(z)]
    if flavor == "gl" and z is None:
        if not A.is_upper_triangular():
            raise InputError("gl family needs 'eigenvalues' unless triangular", where)
        z = []
        for x in A.diag():
            if x not in z:
                z.append(x)
    return FamilySpec(flavor, A.rows, A[0, 0].num_vars, A[0, 0].order, A, z,
                      obj.get("multiplicities"), obj.get("notes", ""), obj.get("seed"))
