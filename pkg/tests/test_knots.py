from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from bentkit.bent import floer_simple_check, is_positive_chain, large_surgery_dims
from bentkit.errors import (BadSlope, InvalidCase, NotApplicable, NotGenusOne, NotSymmetrizable,
                            PreconditionViolated, UnitValueViolation)
from bentkit.knots import (KnotRecord, LspaceForm, ProfileShell, closed_forms,
                           connected_sum_profile, determinant_bound_check, genus_one_case, genus_one_pipeline,
                           genus_one_profile, grading_bounds, invariants_from_signature, jn_consistency, jn_values,
                           lspace_form_check, lspace_profile, normalize_alexander, parse_alexander_cell,
                           parse_exception_flag, su2_verdict, subcase_for_nu, surgery_dim, surgery_dim_report,
                           thin_profile)

from strategies import lspace_forms

TREFOIL = {1: 1, 0: -1, -1: 1}
FIG8 = {1: -1, 0: 3, -1: -1}
T25 = {2: 1, 1: -1, 0: 1, -1: -1, -2: 1}

t = sympy.Symbol("t")


def sympy_det(d: dict[int, int]) -> int:
    expr = sum(c * t ** e for e, c in d.items())
    return abs(int(expr.subs(t, -1)))


# ---------------------------------------------------------------- Alexander polynomials

def test_normalize_examples():
    assert normalize_alexander(TREFOIL).as_dict == TREFOIL
    f = normalize_alexander(FIG8)
    assert f.as_dict == FIG8 and f(1) == 1
    assert normalize_alexander({0: -1}).as_dict == {0: 1}
    # shifted and negated input is recentred
    assert normalize_alexander({0: -1, 1: 1, 2: -1}).as_dict == TREFOIL


def test_normalize_errors():
    with pytest.raises(NotSymmetrizable):
        normalize_alexander({0: 1, 1: 1})
    with pytest.raises(NotSymmetrizable):
        normalize_alexander({1: 2, 0: -1, -1: 1})
    with pytest.raises(UnitValueViolation):
        normalize_alexander({1: 1, 0: 1, -1: 1})
    with pytest.raises(UnitValueViolation):
        normalize_alexander({})


def test_cell_roundtrip_and_text():
    d = parse_alexander_cell("1:1;0:-1;-1:1")
    p = normalize_alexander(d)
    assert parse_alexander_cell(p.to_cell()) == d
    assert str(p) == "t-1+t^-1"
    assert str(normalize_alexander({1: 2, 0: -3, -1: 2})) == "2t-3+2t^-1"
    for bad in ("", "1:1;1:2", "x:1"):
        with pytest.raises(ValueError):
            parse_alexander_cell(bad)


# ---------------------------------------------------------------- L-space forms and determinants

def test_lspace_form_examples():
    tre = normalize_alexander(TREFOIL)
    assert lspace_form_check(tre, 1) == LspaceForm((1, 0))
    assert lspace_form_check(tre, 1).k == 1
    assert lspace_form_check(normalize_alexander(FIG8), 1) is None
    f = lspace_form_check(normalize_alexander(T25), 2)
    assert f == LspaceForm((2, 1, 0)) and f.k == 2
    # right pattern but the genus does not match
    assert lspace_form_check(tre, 2) is None
    unknot = normalize_alexander({0: 1})
    assert lspace_form_check(unknot, 0) == LspaceForm((0,))
    assert lspace_form_check(unknot, 1) is None


def test_lspace_form_rejects_wide_top_gap():
    # t^3 - t + 1 - t^-1 + t^-3 is alternating but n_k != n_{k-1} + 1
    d = normalize_alexander({3: 1, 1: -1, 0: 1, -1: -1, -3: 1})
    assert lspace_form_check(d, 3) is None


def test_form_validation():
    with pytest.raises(ValueError):
        LspaceForm((1, 2, 0))
    with pytest.raises(ValueError):
        LspaceForm((2, 1))


def test_determinant_examples():
    for d, det, bound, ok in ((TREFOIL, 3, 3, True), (FIG8, 5, 3, False), ({0: 1}, 1, 1, True)):
        g = max(d)
        r = determinant_bound_check(normalize_alexander(d), g)
        assert (r.det, r.bound, r.ok) == (det, bound, ok)
        assert r.det == sympy_det(d)


@given(lspace_forms())
def test_forms_satisfy_determinant_bound(form):
    delta = form.polynomial()
    assert delta(1) == 1 and delta.is_symmetric()
    assert lspace_form_check(delta, form.genus) == form
    r = determinant_bound_check(delta, form.genus)
    assert r.ok and r.det == sympy_det(delta.as_dict)


# ---------------------------------------------------------------- profiles

def test_lspace_profile_examples():
    p = lspace_profile(LspaceForm((1, 0)))
    assert [k[0] for k in p.space.keys] == [1, 0, -1]
    assert is_positive_chain(p)
    p5 = lspace_profile(LspaceForm((2, 1, 0)))
    assert [k[0] for k in p5.space.keys] == [2, 1, 0, -1, -2]
    u = lspace_profile(LspaceForm((0,)))
    assert u.space.pieces == (((0, 0), 1),)


@given(lspace_forms())
def test_lspace_profile_properties(form):
    p = lspace_profile(form)
    assert is_positive_chain(p)
    assert floer_simple_check(p) == (form.k == 0)
    chi: dict[int, int] = {}
    for (z, par), d in p.space.pieces:
        chi[z] = chi.get(z, 0) + (d if par == 0 else -d)
    assert {z: c for z, c in chi.items() if c} == form.polynomial().as_dict


def test_thin_profile_examples():
    assert thin_profile(normalize_alexander({1: 2, 0: -3, -1: 2})).dims_by_grading() == [2, 3, 2]
    assert thin_profile(normalize_alexander(FIG8)).dims_by_grading() == [1, 3, 1]
    tre = thin_profile(normalize_alexander(TREFOIL))
    assert tre.dims_by_grading() == [1, 1, 1]
    assert tre.euler() == TREFOIL
    with pytest.raises(NotGenusOne):
        thin_profile(normalize_alexander(T25))


@given(st.integers(-12, 12).filter(bool))
def test_thin_euler_is_alexander(a1):
    delta = normalize_alexander({1: a1, 0: 1 - 2 * a1, -1: a1})
    shell = thin_profile(delta)
    # the top grading is even, so chi is Delta up to the sign of a1
    sgn = 1 if a1 > 0 else -1
    assert shell.euler() == {e: sgn * c for e, c in delta.as_dict.items()}
    assert shell.dims_by_grading() == [abs(a1), abs(1 - 2 * a1), abs(a1)]


def test_connected_sums():
    tre = thin_profile(normalize_alexander(TREFOIL))
    both = connected_sum_profile(tre, tre)
    assert both.genus == 2
    assert both.dims_by_grading() == [1, 2, 3, 2, 1]
    unknot = ProfileShell.of(0, {(0, 0): 1})
    assert connected_sum_profile(tre, unknot) == tre
    fig = genus_one_profile(1, "2a+1")
    s = connected_sum_profile(fig, lspace_profile(LspaceForm((2, 1, 0))))
    dims = s.dims_by_grading()
    assert dims == dims[::-1]


# ---------------------------------------------------------------- grading arithmetic

def test_grading_bounds_examples():
    b = grading_bounds(1, 1)
    assert (b.i_max, b.i_min) == (1, -1)
    b = grading_bounds(0, 2)
    assert (b.i_max, b.i_min) == (2, -1)
    assert b.i_max - b.i_min == 3
    b = grading_bounds(3, 0)
    assert (b.i_max, b.i_min) == (1, -1)


@given(st.integers(0, 40), st.integers(0, 10))
def test_grading_width(y, g):
    b = grading_bounds(y, g)
    assert b.i_max - b.i_min == 2 * g + y - 1
    assert b.i_max == sympy.ceiling(Fraction(y - 1, 2)) + g


def test_jn_examples():
    assert jn_consistency(1, 0, 1, 3)
    assert jn_consistency(2, 1, 0, 2)
    assert jn_consistency(1, 0, 0, 1)
    with pytest.raises(PreconditionViolated):
        jn_values(1, 0, 2, 3)
    # precondition holds but the doubled y-value goes negative
    with pytest.raises(PreconditionViolated):
        jn_values(3, 2, 0, 1)


@given(st.integers(1, 6), st.integers(0, 5), st.integers(0, 4), st.integers(1, 10))
def test_jn_always_consistent(q, q0, g, n):
    q0 %= q
    if (n - 1) * q < 2 * g or (2 * n - 1) * q < 2 * q0:
        with pytest.raises(PreconditionViolated):
            jn_values(q, q0, g, n)
        return
    assert jn_consistency(q, q0, g, n)


# ---------------------------------------------------------------- genus one

def test_case_assignment():
    assert genus_one_case(normalize_alexander(FIG8)) == ("2a+1", 1)
    assert genus_one_case(normalize_alexander(TREFOIL)) == ("2a-1", 1)
    assert genus_one_case(normalize_alexander({1: 2, 0: -3, -1: 2})) == ("2a-1", 2)
    assert genus_one_case(normalize_alexander({1: -2, 0: 5, -1: -2})) == ("2a+1", 2)


def test_signature_invariants():
    inv = invariants_from_signature(-2, "2a-1")
    assert inv.nu_sharp == 1 and inv.tau_sharp == 1
    assert invariants_from_signature(0, "2a+1").nu_sharp == 0
    assert invariants_from_signature(0, "2a-1") is None
    assert subcase_for_nu(1, "2a-1") == "A" and subcase_for_nu(-1, "2a-1") == "B"
    assert subcase_for_nu(None, "2a+1") is None
    with pytest.raises(NotApplicable):
        subcase_for_nu(0, "2a-1")


def test_pipeline_examples():
    r = genus_one_pipeline(1, "2a+1")
    assert (r.dim_H_A0, r.dim_slope_minus3, r.dim_slope_plus3, r.nu_sharp) == (3, 5, 5, 0)
    r = genus_one_pipeline(1, "2a-1", "A")
    assert {r.dim_slope_minus3, r.dim_slope_plus3} == {5, 3} and r.dim_H_A0 == 3 and r.agrees
    r = genus_one_pipeline(2, "2a-1", "A")
    assert {r.dim_slope_minus3, r.dim_slope_plus3} == {7, 5} and r.agrees
    with pytest.raises(InvalidCase):
        closed_forms(1, "2a-1", None)


@pytest.mark.parametrize("case,sub", [("2a+1", None), ("2a-1", "A"), ("2a-1", "B")])
def test_pipeline_matches_closed_forms(case, sub):
    for a in range(1, 6):
        r = genus_one_pipeline(a, case, sub)
        assert r.agrees, r


def test_synthesized_profile_dims_follow_alexander():
    for a in range(1, 5):
        p = genus_one_profile(a, "2a+1")
        assert p.space.z_dims() == {1: a, 0: 2 * a + 1, -1: a}
        q = genus_one_profile(a, "2a-1", "B")
        assert q.space.z_dims() == {1: a, 0: 2 * a - 1, -1: a}


def test_surgery_dim_examples():
    assert surgery_dim("2a+1", 1, 1, 1) == 3
    assert surgery_dim("2a-1", 1, 5, 1, nu_sharp=1) == 5
    assert surgery_dim("2a-1", 1, 1, 1, nu_sharp=1) == 1
    assert surgery_dim("2a-1", 1, -1, 1, nu_sharp=-1) == 1
    r = surgery_dim_report("2a-1", 2, 3, 2, nu_sharp=-1)
    assert r.formula == "(2a-1)v+|u+v|" and r.dim == 11
    for u, v in ((0, 1), (2, 0), (2, 4), (1, -1)):
        with pytest.raises(BadSlope):
            surgery_dim("2a+1", 1, u, v)
    with pytest.raises(NotApplicable):
        surgery_dim("2a-1", 1, 3, 1)


@pytest.mark.parametrize("case,sub,nu", [("2a+1", None, None), ("2a-1", "A", 1), ("2a-1", "B", -1)])
def test_surgery_formula_matches_large_surgery(case, sub, nu):
    for a in (1, 2, 3):
        p = genus_one_profile(a, case, sub)
        for u in (3, 4, 5, -3, -4, -5):
            assert surgery_dim(case, a, u, 1, nu) == large_surgery_dims(p, -u).total


# ---------------------------------------------------------------- records and verdicts

def rec(name, d, **kw):
    return KnotRecord(name, normalize_alexander(d), **kw)


def test_exception_flags():
    assert parse_exception_flag("T(2,5)") == ("T2", (5,))
    assert parse_exception_flag("P(-2,3,7)") == ("P", (7,))
    assert parse_exception_flag("K(3,4;2,1)") == ("K3", (4, 1))
    for bad in ("T(2,4)", "K(3,4;2,-1)", "Q(1)"):
        with pytest.raises(ValueError):
            parse_exception_flag(bad)


def test_verdict_examples():
    v = su2_verdict(rec("4_1", FIG8, families=("alternating",), signature=0))
    assert v.verdict == "Abundant"
    assert "lspace_form_fails" in v.reasons and "determinant_bound_fails:5>3" in v.reasons
    v = su2_verdict(rec("3_1", TREFOIL, families=("alternating",), exceptions=("T(2,3)",)))
    assert v.verdict == "KnownLspaceKnot"
    # P(-2,3,7): Alexander polynomial of the (3,7) torus knot
    p237 = {6: 1, 5: -1, 3: 1, 2: -1, 0: 1, -2: -1, -3: 1, -5: -1, -6: 1}
    v = su2_verdict(rec("P(-2,3,7)", p237, families=("montesinos",), exceptions=("P(-2,3,7)",)))
    assert v.verdict == "KnownLspaceKnot" and v.reasons == ("exception:P(-2,3,7)",)


def test_verdict_branches():
    assert su2_verdict(rec("0_1", {0: 1})).verdict == "KnownLspaceKnot"
    assert su2_verdict(rec("T(2,5)", T25, families=("alternating",))).reasons == \
        ("family_without_exception:alternating",)
    assert su2_verdict(rec("T(2,5)", T25)).verdict == "NotDetermined"
    v = su2_verdict(rec("3_1#3_1", {2: 1, 1: -2, 0: 3, -1: -2, -2: 1}, is_composite=True))
    assert v.verdict == "Abundant" and "composite" in v.reasons
    assert su2_verdict(rec("x", TREFOIL, is_composite=True)).reasons == ("composite",)


def test_record_validation():
    with pytest.raises(ValueError):
        rec("x", TREFOIL, families=("hyperbolic",))
    with pytest.raises(ValueError):
        rec("x", T25, genus=1)
    assert rec("x", TREFOIL, genus=3).seifert_genus == 3
    assert rec("x", TREFOIL, signature=-2).invariants().nu_sharp == 1
    assert rec("x", TREFOIL, signature=0).invariants() is None
    assert rec("x", TREFOIL, signature=0, nu_sharp=-1).invariants().nu_sharp == -1
