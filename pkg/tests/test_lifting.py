from __future__ import annotations

import copy
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import solved
from hopflift import catalog
from hopflift.bosonization import Realization, hopf_ideal_check
from hopflift.braided import BraidingMatrix
from hopflift.cyclotomic import CycNum
from hopflift.expr import Expr, parse, poly_expr
from hopflift.freealg import CycField
from hopflift.lifting import (
    LOCKED,
    InconsistentSystem,
    LiftingCase,
    LiftingSolver,
    _leg_nf,
    _specialize_poly,
    admissibility,
    flatness_check,
    lambda_specializations,
    nichols_basis,
    run_case,
    solve_sparse,
    specialize,
)
from hopflift.ncgb import buchberger
from hopflift.report import compare_expected

FAST = [("ufo7a", "l1"), ("ufo7b", "l1"), ("ufo7b", "l2"), ("ufo7c", "l1"), ("ufo7c", "l2"),
        ("ufo8c", "l1l2"), ("ufo8c", "l1l2-minus"), ("br2a-q-zeta", "all"), ("br2a-q-zeta", "l1l2"),
        ("br2a-N12", "all")]


def _diff_nf(a: Expr, b: Expr, ring, R, G=None) -> dict:
    return _leg_nf(Expr("add", (a, Expr("neg", (b,)))), G, ring, R)


def _lifting_set(case, exprs, vals):
    R = case.realization
    ring = R.ring()
    rels = [specialize(e, vals, ring) for e in exprs]
    G = buchberger(rels, ring=ring, theta=R.theta, braiding=R.braiding)
    return rels, G


# ---------------------------------------------------------------- solver


def test_solve_sparse_prefers_early_columns():
    one = CycNum.rational(1, 1)
    cols = [{"e": one}, {"e": one}]
    x, rank = solve_sparse(cols, {"e": one + one}, 1)
    assert rank == 1
    assert x == {0: one + one}


def test_solve_sparse_inconsistent():
    one = CycNum.rational(1, 1)
    with pytest.raises(InconsistentSystem):
        solve_sparse([{"e": one}, {"e": one}], {"e": one, "f": one}, 1)


def test_ufo7b_golden_bracket_term():
    S = solved("ufo7b", "l2")
    rows = compare_expected(S.case, S)
    assert all(r["match"] and r["kind"] == "exact" for r in rows)
    sol = S.solution.relations["bracket"]
    assert sol.lam is None
    assert sol.cleft_correction.is_zero()
    # u = r + s, so s is minus the printed right-hand side
    term = parse("l2*q12*(1+zeta^7)*x112*x1^2*g2^2", S.case.scope())
    r = S.case.relation("bracket")
    M = S._gb("lifting", r.stratum, r.degree)
    s_expr = poly_expr(sol.lifting_correction)
    assert not _diff_nf(s_expr, Expr("neg", (term,)), S.ring, S.R, M)
    assert _diff_nf(s_expr, term, S.ring, S.R, M)
    assert S.solution.relations["x2^2"].lam == "l2"


def test_ufo7c_golden():
    S = solved("ufo7c", "l2")
    assert all(r["match"] for r in compare_expected(S.case, S))


def test_ufo8c_golden():
    S = solved("ufo8c", "l1l2")
    assert all(r["match"] for r in compare_expected(S.case, S))


@pytest.mark.parametrize("cid,tag", [("ufo7b", "l2"), ("ufo7c", "l2"), ("ufo8c", "l1l2"),
                                     ("ufo8c", "l1l2-minus"), ("ufo8b", "l2")])
def test_cascade_through_l2(cid, tag):
    S = solved(cid, tag)
    names = S.lam_names
    s = S.solution.relations["bracket"].lifting_correction
    assert not s.is_zero()
    at_zero = {k: (Fraction(0) if k == "l2" else Fraction(1)) for k in names}
    assert _specialize_poly(s, at_zero, S.R.ring()).is_zero()
    at_one = {k: Fraction(1) for k in names}
    assert not _specialize_poly(s, at_one, S.R.ring()).is_zero()


@pytest.mark.parametrize("cid,tag", FAST)
def test_all_lambda_zero_gives_zero_corrections(cid, tag):
    S = solved(cid, tag)
    zero = {k: Fraction(0) for k in S.lam_names}
    for sol in S.solution.relations.values():
        assert _specialize_poly(sol.lifting_correction, zero, S.R.ring()).is_zero()
        assert _specialize_poly(sol.cleft_correction, zero, S.R.ring()).is_zero()


def test_file_without_lambdas_has_empty_corrections():
    data = copy.deepcopy(catalog.entry("ufo7b").data)
    for stratum in data["strata"]:
        for r in stratum:
            r.pop("lambda", None)
    data.pop("expected")
    case = catalog.parse_case(data).case("l2")
    assert case.active_lambdas == []
    S = LiftingSolver(case)
    S.run()
    for r in case.relations:
        sol = S.solution.relations[r.rid]
        assert sol.lam is None
        assert sol.cleft_correction.is_zero()
        assert sol.lifting_correction.is_zero()


@pytest.mark.parametrize("cid,tag", FAST)
def test_lambda_only_on_trivial_character(cid, tag):
    S = solved(cid, tag)
    R = S.R
    for r in S.case.relations:
        sol = S.solution.relations[r.rid]
        if not R.chi_trivial(r.md) or R.is_identity(R.g_of(r.md)):
            assert sol.lam is None
            assert S.case.lambda_slots[r.rid] == LOCKED


@pytest.mark.parametrize("cid,tag", FAST)
def test_primitive_and_routes(cid, tag):
    S = solved(cid, tag)
    for sol in S.solution.relations.values():
        assert sol.primitive
        assert sol.route_agree is not False


# ----------------------------------------------------------- coherence

COHERENT = [("ufo7b", "l2"), ("ufo7c", "l2"), ("ufo8c", "l1l2"), ("br2a-q-zeta", "all")]


@settings(max_examples=6, deadline=None)
@given(st.sampled_from(COHERENT), st.data())
def test_specialization_coherence(ct, data):
    S = solved(*ct)
    vals = {k: Fraction(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 4))) for k in S.lam_names}
    N = LiftingSolver(S.case, values=vals, route2=False)
    N.run()
    ring, R = N.ring, S.R
    for r in S.case.relations:
        a, b = S.solution.relations[r.rid], N.solution.relations[r.rid]
        assert not _diff_nf(specialize(a.lifting_relation, vals, ring), b.lifting_relation, ring, R)
        assert not _diff_nf(specialize(a.cleft_relation, vals, ring), b.cleft_relation, ring, R)


# --------------------------------------------------------- admissibility


def test_admissibility_locked_serre():
    rows = {r["relation"]: r for r in admissibility(catalog.load("ufo7a", "l1"))["relations"]}
    assert rows["serre"]["status"] == LOCKED
    assert rows["x1^3"]["status"] == "l1"


def test_admissibility_ufo8c_pair():
    scan = admissibility(catalog.load("ufo8c"))["scan"]
    assert scan["pairs"]["l1*l2"] == ["1", "-1"]


def test_admissibility_br2a_q1_l3():
    scan = admissibility(catalog.load("br2a-q-1"))["scan"]
    assert scan["q12_values"]["l3"] == ["-1"]


@pytest.mark.parametrize("cid", ["ufo7a", "ufo7b", "ufo7c", "ufo8a", "ufo8b"])
def test_l1_l2_never_jointly(cid):
    assert admissibility(catalog.load(cid))["scan"]["pairs"]["l1*l2"] == []


# ------------------------------------------------------------- flatness


def test_flatness_undeformed():
    case = catalog.load("ufo7b", "l1")
    ref = nichols_basis(case)
    F = CycField(case.realization.n)
    fc = flatness_check([r.expr for r in case.relations], ref, F, 2, case.braiding)
    assert fc["flat"] and fc["dimension"] == 144


def test_flatness_legal_cleft():
    S = solved("ufo7b", "l1")
    F = CycField(S.R.n)
    rels = [specialize(s.cleft_relation, {"l1": Fraction(1)}, F) for s in S.solution.relations.values()]
    assert flatness_check(rels, nichols_basis(S.case), F, 2, S.R.braiding)["flat"]


def test_flatness_illegal_deformation_collapses():
    # chi_1^3 is not trivial here, so x1^3 = 1 is not stable under the group
    case = catalog.load("ufo7b", "l2")
    R = case.realization
    assert not R.chi_trivial((3, 0))
    scope = case.scope()
    rels = [parse("x1^3 - 1", scope), parse("x2^2", scope), case.relation("bracket").expr]
    fc = flatness_check(rels, nichols_basis(case), R.ring(), 2, case.braiding)
    assert not fc["flat"]
    # the same scalar is legal where chi_1^3 is trivial
    case = catalog.load("ufo7b", "l1")
    R = case.realization
    assert R.chi_trivial((3, 0))
    rels = [parse("x1^3 - 1", scope), parse("x2^2", scope), case.relation("bracket").expr]
    assert flatness_check(rels, nichols_basis(case), R.ring(), 2, case.braiding)["flat"]


# ------------------------------------------------------ Hopf ideal checks


def test_negative_control_undeformed_bracket():
    case = catalog.load("ufo7b", "l2")
    scope = case.scope()
    exprs = [parse("x2^2 - l2*(1-g2^2)", scope), parse("x1^3", scope), case.relation("bracket").expr]
    rels, G = _lifting_set(case, exprs, {"l2": Fraction(1)})
    assert G.complete
    assert not hopf_ideal_check(rels, G, case.realization)


def test_deformed_bracket_passes():
    S = solved("ufo7b", "l2")
    exprs = [s.lifting_relation for s in S.solution.relations.values()]
    rels, G = _lifting_set(S.case, exprs, {"l2": Fraction(1)})
    assert G.complete and G.dimension() == 144
    assert hopf_ideal_check(rels, G, S.R)


def test_br2a_q1_printed_omega_not_a_hopf_ideal():
    # the expected x112^6 relation with omega = zeta^2 - zeta, at all lambdas 1
    entry = catalog.entry("br2a-q-1")
    printed = copy.deepcopy(entry.data)
    printed["params"].update(printed["printed_variant"])
    case = catalog.parse_case(printed).case("all")
    scope = case.scope()
    exprs = [parse(f"({v['lhs']}) - ({v['rhs']})", scope) for v in case.expected["lifting"].values()]
    vals = {k: Fraction(1) for k in case.all_slots if k in dict(case.active_lambdas)}
    rels, G = _lifting_set(case, exprs, vals)
    assert G.complete and G.dimension() == 108
    assert not hopf_ideal_check(rels, G, case.realization)


# ------------------------------------------------------------- reports


def test_empty_case_trivial_report():
    R = Realization.standard(BraidingMatrix([[1, 0], [0, 1]], 2))
    case = LiftingCase.build("empty", R, [])
    rep = run_case(case)
    assert rep["passed"] and rep["relations"] == []


def test_lambda_specializations_deterministic():
    a = lambda_specializations(["l1", "l2"], 5, seed=3)
    assert a == lambda_specializations(["l1", "l2"], 5, seed=3)
    assert a[0] == {"l1": 1, "l2": 1}
    assert a[1] == {"l1": 1, "l2": 0}
    assert len({tuple(sorted(v.items())) for v in a}) == 5
    one = lambda_specializations(["l1"], 5, seed=0)
    assert len({tuple(v.items()) for v in one}) == 5
