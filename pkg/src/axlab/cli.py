"""Command line front end.

    axlab exp --in A.json
    axlab eig --in A.json
    axlab data --in A.json [--eigenvalues z.json] [--exp]
    axlab check --flavor h --n 2 --m 2 --trunc 8 --deg 3 --trials 100 --seed 42
    axlab full --builtin all
    axlab special member|sample|image-check --spec ws.json ...

Exit status: 0 when everything passes, 1 on any WARN or negative answer,
2 on a usage or input error.  Set AXLAB_THREADS to run trials in parallel;
reports are always ordered by trial index.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import os
import sys

from . import jsonio
from .checker import (
    DEFAULT_BUDGET,
    DEFAULT_DEGREE,
    DEFAULT_ORDER,
    BudgetExceeded,
    FamilyParams,
    ValidationError,
    builtin_scenarios,
    check,
    check_full,
    random_family,
    scenario_from_json,
    trial_rng,
)
from .eigencoords import eigencoordinates, matrix_from_eigencoordinates
from .matdata import UnsupportedInput, exp_data, general_exp, matrix_data
from .scalars import DomainError, PrecisionError, ShapeError, TruncSeries
from .special import (
    InsufficientSamples,
    OutsideUSigma,
    Unsupported,
    example_one,
    example_two,
    image_relation_check,
    membership,
    sample_gl,
    sample_h,
    spec_from_json,
)
from .triexp import f_exp, tri_exp, tri_exp_numeric

USAGE_ERRORS = (jsonio.InputError, ShapeError, DomainError, ValidationError, Unsupported,
                UnsupportedInput, InsufficientSamples, OutsideUSigma, ValueError, KeyError)
RUN_ERRORS = (PrecisionError, BudgetExceeded, ZeroDivisionError)


class UsageError(Exception):
    pass


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rows(text):
    """'1,-2;1,1,-1' -> [[1,-2],[1,1,-1]]"""
    from .poly import parse_rational
    try:
        return [[parse_rational(x) for x in row.split(",")] for row in text.split(";") if row.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected rows like '1,-2;1,1,-1', got {text!r}")


def _emit(obj, out):
    text = jsonio.dumps(obj)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- exp / eig / data -----------------------------------------------------------------------

def _lemma_two_check(A, E):
    """For a 2x2 triangular series matrix compare with [[e^a, b F(a,c)], [0, e^c]]."""
    a, b, c = A[0, 0], A[0, 1], A[1, 1]
    F = f_exp(a, c)
    return E[0, 0] == a.exp() and E[1, 1] == c.exp() and E[0, 1] == b * F and E[1, 0].is_zero()


def cmd_exp(args):
    A = jsonio.matrix_from_json(jsonio.load(args.input), args.input)
    series = isinstance(A[0, 0], TruncSeries)
    method = args.method
    if method == "auto":
        method = "tri" if series and A.is_upper_triangular() else ("taylor" if series else "numeric")
    if method == "tri":
        E = tri_exp(A)
    elif method == "taylor":
        E = general_exp(A)
    else:
        if series:
            raise UsageError("numeric method needs a rational matrix")
        E = tri_exp_numeric(A) if A.is_upper_triangular() else None
        if E is None:
            from .triexp import expm_reference
            E = expm_reference(A)
    out = jsonio.matrix_to_json(E)
    out["method"] = method
    if series and A.rows == 2 and A.is_upper_triangular():
        out["closed_form_2x2"] = bool(_lemma_two_check(A, E))
    _emit(out, args.out)
    return 0


def cmd_eig(args):
    doc = jsonio.load(args.input)
    if isinstance(doc, dict) and "diagonal" in doc:
        ec = jsonio.eigencoords_from_json(doc, args.input)
        _emit(jsonio.matrix_to_json(matrix_from_eigencoordinates(ec)), args.out)
        return 0
    A = jsonio.matrix_from_json(doc, args.input)
    _emit(jsonio.eigencoords_to_json(eigencoordinates(A)), args.out)
    return 0


def _eigenvalues(path):
    if not path:
        return None
    doc = jsonio.load(path)
    if not isinstance(doc, list):
        raise jsonio.InputError("eigenvalues must be a JSON list", path)
    return [jsonio.scalar_from_json(x, f"{path}[{k}]") for k, x in enumerate(doc)]


def cmd_data(args):
    doc = jsonio.load(args.input)
    if isinstance(doc, dict) and "z" in doc:
        d = jsonio.data_from_json(doc, args.input)
        if args.exp:
            d = exp_data(d)
    else:
        A = jsonio.matrix_from_json(doc, args.input)
        d = matrix_data(A, _eigenvalues(args.eigenvalues))
        if args.exp:
            d = exp_data(d)
    _emit(jsonio.data_to_json(d), args.out)
    return 0


# -- check ---------------------------------------------------------------------------------

def _trial(job):
    params, seed, trial, degree, budget, full, timings = job
    fam = random_family(params, trial_rng(seed, trial))
    fam.seed = [seed, trial]
    rep = check(fam, degree, budget, full)
    out = {"trial": trial}
    out.update(rep.to_json(timings))
    out["notes"] = fam.notes
    return out


def _threads():
    try:
        return max(1, int(os.environ.get("AXLAB_THREADS", "1")))
    except ValueError:
        return 1


def cmd_check(args):
    if args.input:
        fam = jsonio.family_from_json(jsonio.load(args.input), args.input)
        rep = check(fam, args.deg, args.budget, args.exhaustive)
        out = rep.to_json(args.timings)
        _emit(out, args.out)
        return 0 if rep.verdict == "PASS" else 1
    if args.seed is None:
        raise UsageError("--seed is required for randomized checks")
    if args.n is None:
        raise UsageError("--n is required for randomized checks")
    params = FamilyParams(args.flavor, args.n, args.m, args.trunc, args.pattern,
                          args.blocks, args.relations)
    jobs = [(params, args.seed, t, args.deg, args.budget, args.exhaustive, args.timings)
            for t in range(args.trials)]
    threads = _threads()
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as pool:
            reports = list(pool.map(_trial, jobs))
    else:
        reports = [_trial(j) for j in jobs]
    reports.sort(key=lambda r: r["trial"])
    summary = {"PASS": sum(r["verdict"] == "PASS" for r in reports),
               "WARN": sum(r["verdict"] != "PASS" for r in reports)}
    out = {"params": {"flavor": args.flavor, "n": args.n, "m": args.m, "trunc": args.trunc,
                      "deg": args.deg, "trials": args.trials, "seed": args.seed,
                      "pattern": args.pattern, "blocks": args.blocks,
                      "relations": [[str(q) for q in r] for r in args.relations] if args.relations else None},
           "summary": summary, "reports": reports}
    _emit(out, args.out)
    return 0 if summary["WARN"] == 0 else 1


def cmd_full(args):
    if args.input:
        scenarios = [scenario_from_json(jsonio.load(args.input))]
    else:
        scenarios = builtin_scenarios()
        if args.builtin != "all":
            scenarios = [s for s in scenarios if s.name == args.builtin]
            if not scenarios:
                names = ", ".join(s.name for s in builtin_scenarios())
                raise UsageError(f"unknown scenario {args.builtin!r}; choose from {names} or all")
    reports = [check_full(s, seed=args.seed).to_json() for s in scenarios]
    _emit({"reports": reports}, args.out)
    return 0 if all(r["verdict"] == "PASS" for r in reports) else 1


# -- special -------------------------------------------------------------------------------

BUILTIN_SPECS = {"example1": example_one, "example2": example_two}


def _spec(args):
    if args.builtin:
        return BUILTIN_SPECS[args.builtin]()
    if not args.spec:
        raise UsageError("give --spec FILE or --builtin NAME")
    return spec_from_json(jsonio.load(args.spec))


def _values(text):
    if not text:
        return None
    from .poly import parse_rational
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"parameter values look like s=2,r=1/3, got {text!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = parse_rational(v.strip())
    return out


def cmd_special(args):
    ws = _spec(args)
    if args.action == "member":
        if not args.input:
            raise UsageError("member needs --in MATRIX")
        A = jsonio.matrix_from_json(jsonio.load(args.input), args.input)
        res = membership(A, ws, _eigenvalues(args.eigenvalues))
        _emit(res.to_json(), args.out)
        return 0 if res.member else 1
    if args.action == "sample":
        if args.seed is None and not args.values:
            raise UsageError("sample needs --seed (or explicit --values)")
        vals = _values(args.values)
        seed = args.seed if args.seed is not None else 0
        if ws.flavor == "h":
            out = jsonio.matrix_to_json(sample_h(ws, seed, vals))
        else:
            A, z = sample_gl(ws, seed, vals)
            out = jsonio.matrix_to_json(A)
            out["eigenvalues"] = [jsonio.series_to_json(x) for x in z]
        _emit(out, args.out)
        return 0
    if args.seed is None:
        raise UsageError("image-check needs --seed")
    rep = image_relation_check(ws, args.deg, args.samples, args.seed)
    _emit(rep.to_json(), args.out)
    return 0


# -- parser --------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="axlab", description="Exact matrix exponentials, "
                                "eigencoordinates and Ax-Schanuel checks over truncated series.")
    sub = p.add_subparsers(dest="command", required=True)

    def io(sp, need_in=True):
        sp.add_argument("--in", dest="input", required=need_in, help="input JSON file ('-' for stdin)")
        sp.add_argument("--out", help="output file (default stdout)")

    sp = sub.add_parser("exp", help="matrix exponential")
    io(sp)
    sp.add_argument("--method", choices=["auto", "tri", "taylor", "numeric"], default="auto")
    sp.set_defaults(func=cmd_exp)

    sp = sub.add_parser("eig", help="eigencoordinates (or back to the matrix)")
    io(sp)
    sp.set_defaults(func=cmd_eig)

    sp = sub.add_parser("data", help="eigenvalues, multiplicities, eigenspaces, nilpotents")
    io(sp)
    sp.add_argument("--eigenvalues", help="JSON list of the distinct eigenvalues")
    sp.add_argument("--exp", action="store_true", help="output the data of exp(A)")
    sp.set_defaults(func=cmd_data)

    sp = sub.add_parser("check", help="Ax-Schanuel inequality on random or given families")
    io(sp, need_in=False)
    sp.add_argument("--flavor", choices=["h", "gl"], default="h")
    sp.add_argument("--n", type=_positive)
    sp.add_argument("--m", type=_positive, default=2)
    sp.add_argument("--trunc", type=_positive, default=DEFAULT_ORDER)
    sp.add_argument("--deg", type=_positive, default=DEFAULT_DEGREE)
    sp.add_argument("--trials", type=_positive, default=1)
    sp.add_argument("--seed", type=_nonneg)
    sp.add_argument("--pattern", choices=["distinct", "blocks", "relations"], default="distinct")
    sp.add_argument("--blocks", type=_int_list, help="composition, e.g. 2,1")
    sp.add_argument("--relations", type=_rows, help="relation rows, e.g. '1,-2;1,1,-1'")
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp.add_argument("--exhaustive", action="store_true", help="scan all functions (no early stop)")
    sp.add_argument("--timings", action="store_true", help="include per-trial milliseconds")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("full", help="full Ax-Schanuel scenarios")
    io(sp, need_in=False)
    sp.add_argument("--builtin", default="all")
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.set_defaults(func=cmd_full)

    sp = sub.add_parser("special", help="weakly special subvarieties")
    sp.add_argument("action", choices=["member", "sample", "image-check"])
    sp.add_argument("--spec", help="weakly special spec JSON")
    sp.add_argument("--builtin", choices=sorted(BUILTIN_SPECS))
    io(sp, need_in=False)
    sp.add_argument("--eigenvalues", help="JSON list of distinct eigenvalues (gl member)")
    sp.add_argument("--seed", type=_nonneg)
    sp.add_argument("--values", help="explicit parameter values, e.g. s=2")
    sp.add_argument("--deg", type=_positive, default=2)
    sp.add_argument("--samples", type=_positive)
    sp.set_defaults(func=cmd_special)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"axlab: error: {exc}", file=sys.stderr)
        return 2
    except RUN_ERRORS as exc:
        print(f"axlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except USAGE_ERRORS as exc:
        print(f"axlab: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
