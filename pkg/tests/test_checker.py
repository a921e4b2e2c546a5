from fractions import Fraction

import pytest

from axlab import Matrix, TruncSeries
from axlab.checker import (BudgetExceeded, FamilyParams, FamilySpec, Liftable, ValidationError,
                           builtin_scenarios, check, check_full, check_gl, check_h,
                           diagonal_family_spec, polynomial_source, qlinear_span_dim,
                           random_family, relation_search, scenario_from_json, tight_family,
                           trdeg_estimate, trial_rng)
from axlab.special import i_sigma, SigmaSystem


def _vars(m=2, D=8):
    return [TruncSeries.var(i, m, D) for i in range(m)]


def _exp_source(build, D=12):
    return Liftable(build, D)


def _prop(rel, expect):
    """rel is a nonzero rational multiple of expect."""
    k = next(i for i, x in enumerate(expect) if x)
    return all(Fraction(a) * expect[k] == Fraction(b) * rel[k] for a, b in zip(rel, expect))


def test_qlinear_span_examples():
    t1, t2 = _vars()
    assert qlinear_span_dim([t1, t2])[0] == 2
    N, rels = qlinear_span_dim([t1, 2 * t1])
    assert N == 1 and _prop(rels[0], [2, -1])
    N, rels = qlinear_span_dim([t1, t2, t1 + 2 * t2])
    assert N == 2 and _prop(rels[0], [1, 2, -1])
    with pytest.raises(ValueError):
        qlinear_span_dim([t1 + 1])


def test_relation_search_polynomial():
    t1, = _vars(1, 8)
    rep = relation_search(polynomial_source([t1, t1 * t1]), 2)
    assert rep.texts() in (["x1^2 - x2 = 0"], ["-x1^2 + x2 = 0"])


def test_relation_search_high_valuation():
    # (t^4)^3 falls off a degree 8 truncation but is not a relation
    t1, = _vars(1, 8)
    assert relation_search(polynomial_source([t1 ** 4 * -3]), 3).relations == []
    fam = FamilySpec("gl", 1, 1, 8, Matrix([[t1 ** 4 * 3]]), [t1 ** 4 * 3], [1])
    assert check(fam, 3).verdict == "PASS"


def test_relation_search_exponentials():
    rep = relation_search(_exp_source(lambda D: [TruncSeries.var(0, 1, D).exp() - 1,
                                                 TruncSeries.var(0, 1, D).scale(2).exp() - 1]), 2)
    assert len(rep.relations) == 1
    # (x1 + 1)^2 = x2 + 1
    assert rep.relations[0].degree() == 2


def test_classical_pair_has_no_relation():
    src = _exp_source(lambda D: [TruncSeries.var(0, 1, D), TruncSeries.var(0, 1, D).exp()])
    rep = relation_search(src, 4)
    assert rep.relations == [] and rep.certified_order > 12


def test_fixed_truncation_forces_spurious_relations():
    t = TruncSeries.var(0, 1, 12)
    rep = relation_search([t, t.exp()], 4)
    assert rep.relations   # 15 monomials against 13 coefficients


def test_budget():
    with pytest.raises(BudgetExceeded):
        relation_search(_vars(2, 4), 3, budget=5)


def test_trdeg_examples():
    t = lambda D: TruncSeries.var(0, 1, D)
    assert trdeg_estimate(_exp_source(lambda D: [t(D), t(D).exp()]), 4) == 2
    assert trdeg_estimate(polynomial_source([t(8), t(8).scale(2), t(8) * t(8)]), 2) == 1
    assert trdeg_estimate(_exp_source(lambda D: [t(D).scale(k).exp() for k in (1, 2, 3)]), 3) == 1


def test_check_examples():
    rep = check_h(tight_family("classical"), full=True)
    assert (rep.N, rep.rankJ, rep.trdeg, rep.verdict) == (1, 1, 2, "PASS")
    t1, t2 = _vars(1, 8)[0], None
    rep = check_h(diagonal_family_spec([t1, t1.scale(2)]), full=True)
    assert (rep.N, rep.rankJ, rep.trdeg, rep.verdict) == (1, 1, 2, "PASS")
    t1, t2 = _vars(2, 8)
    A = Matrix([[t1, t1 * t2], [t1.zero(), t2]])
    rep = check_h(FamilySpec("h", 2, 2, 8, A))
    assert (rep.N, rep.rankJ, rep.verdict) == (2, 2, "PASS") and rep.trdeg >= 4
    assert check_h(FamilySpec("h", 2, 2, 8, A), full=True).trdeg == 4


def test_gl_diagonal_matches_h():
    t1, t2 = _vars(2, 8)
    fam = diagonal_family_spec([t1, t2 + t1 * t1])
    gl = FamilySpec("gl", 2, 2, 8, fam.A, [t1, t2 + t1 * t1], [1, 1])
    a, b = check_h(fam), check_gl(gl)
    assert (a.N, a.rankJ, a.trdeg, a.verdict) == (b.N, b.rankJ, b.trdeg, b.verdict)


def test_nilpotent_gl_family():
    fam = random_family(FamilyParams("gl", 3, 2, 8, "relations", [3], [[1]]), 5)
    rep = check(fam)
    assert rep.N == 0 and rep.verdict == "PASS"


def test_family_patterns():
    fam = random_family(FamilyParams("h", 3, 3, 8, "distinct"), 1)
    assert qlinear_span_dim(fam.A.diag())[0] == 3
    fam = random_family(FamilyParams("h", 3, 2, 8, "blocks", [2, 1]), 2)
    f = fam.A.diag()
    assert f[0] == f[1] and f[0] != f[2]
    assert i_sigma(SigmaSystem(3, [[1, -1, 0]])).one_based() == [(1, 2)]
    a = random_family(FamilyParams("gl", 3, 2, 6, "blocks", [2, 1]), 9)
    b = random_family(FamilyParams("gl", 3, 2, 6, "blocks", [2, 1]), 9)
    assert a == b
    for bad in (FamilyParams("h", 3, 2, 8, "blocks", [2, 2]),
                FamilyParams("h", 3, 2, 8, "distinct", None, [[1, -1, 0]]),
                FamilyParams("h", 6, 2, 8),
                FamilyParams("gl", 2, 2, 8, "relations", [1, 1], [[1, -1]])):
        with pytest.raises(ValidationError):
            random_family(bad, 0)


def test_trial_streams_are_independent():
    a = trial_rng(42, 0).integers(0, 10 ** 9, 4).tolist()
    b = trial_rng(42, 1).integers(0, 10 ** 9, 4).tolist()
    assert a != b and a == trial_rng(42, 0).integers(0, 10 ** 9, 4).tolist()


@pytest.mark.parametrize("flavor", ["h", "gl"])
def test_random_families_pass(flavor):
    for trial in range(6):
        fam = random_family(FamilyParams(flavor, 2, 2, 8), trial_rng(7, trial))
        assert check(fam).verdict == "PASS"


def test_builtin_scenarios():
    reports = [check_full(s) for s in builtin_scenarios()]
    assert [r.verdict for r in reports] == ["PASS"] * 3
    eq = reports[0]
    assert eq.dims == {"X": 2, "V": 2, "Z": 2, "C": 2}
    for s in builtin_scenarios():
        back = scenario_from_json(s.to_json())
        assert check_full(back).to_json() == check_full(s).to_json()


def test_scenario_wrong_component_warns():
    s = builtin_scenarios()[2]
    s.C.matrix[0][0] = s.C.matrix[0][0] + Fraction(1, 7)
    assert check_full(s).verdict == "WARN"
