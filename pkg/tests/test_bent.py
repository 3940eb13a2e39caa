import pytest
from hypothesis import given

from bentkit.bent import (KhiProfile, build_bent, build_dual_bent, build_half, duality_check, floer_simple_check,
                          is_negative_chain, is_positive_chain, large_surgery_dims, mirror, projection,
                          projection_is_chain_map)
from bentkit.couple import FilteredComplex, couple_from_filtered, e_infinity
from bentkit.errors import ClassInconsistency, InvalidProfile, NotLargeSurgery
from bentkit.graded import homology
from bentkit.knots import genus_one_profile
from bentkit.linalg import ExactMatrix

from oracles import bent_dim
from strategies import profiles

X1, Y1, X2 = (1, 0), (0, 1), (-1, 0)


def trefoil() -> KhiProfile:
    return KhiProfile.build(1, {X1: 1, Y1: 1, X2: 1}, {(Y1, X1): [[1]]}, {(Y1, X2): [[1]]})


def unknot() -> KhiProfile:
    return KhiProfile.build(0, {(0, 0): 1})


def oracle_dims(p, s, dual=False):
    grading = [k[0] for k in p.space.key_of_index]
    return bent_dim(p.d_plus.to_matrix().to_rows(), p.d_minus.to_matrix().to_rows(), grading, s, dual, p.q)


# ---------------------------------------------------------------- profiles

def test_profile_validation():
    with pytest.raises(InvalidProfile):   # d_plus going down
        KhiProfile.build(1, {X1: 1, Y1: 1}, {(X1, Y1): [[1]]})
    with pytest.raises(InvalidProfile):   # parity preserved
        KhiProfile.build(1, {(1, 1): 1, Y1: 1}, {(Y1, (1, 1)): [[1]]})
    with pytest.raises(InvalidProfile):   # grading outside [-g, g]
        KhiProfile.build(0, {X1: 1})
    with pytest.raises(InvalidProfile):   # shift not a multiple of q
        KhiProfile.build(2, {(1, 0): 1, (0, 1): 1}, {((0, 1), (1, 0)): [[1]]}, q=2)
    with pytest.raises(InvalidProfile):   # d_plus squared nonzero
        KhiProfile.build(2, {(-1, 0): 1, (0, 1): 1, (1, 0): 1, (2, 1): 1},
                         {((-1, 0), (0, 1)): [[1]], ((0, 1), (1, 0)): [[1]]})


# ---------------------------------------------------------------- bent complexes

def test_zero_differential_bent():
    p = KhiProfile.build(1, {X1: 2, Y1: 3, X2: 1})
    for s in (-1, 0, 1):
        assert build_bent(p, s).dim_homology == 6
        assert build_dual_bent(p, s).dim_homology == 6


def test_trefoil_bent_A0():
    a = build_bent(trefoil(), 0)
    # d_0(y1) = x1 + x2
    assert a.complex.matrix == ExactMatrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 1, 0]])
    assert a.dim_homology == 1


def test_above_top_is_d_minus():
    p = trefoil()
    a = build_bent(p, 5)
    assert a.complex.matrix == p.d_minus.to_matrix()


def test_trefoil_surgery():
    rep = large_surgery_dims(trefoil(), 3)
    assert rep.class_dims == ((0, 1), (1, 1), (2, 1))
    assert rep.total == 3
    assert (rep.s_min, rep.s_max) == (-1, 1)


def test_figure_eight_dual_and_surgery():
    p = genus_one_profile(1, "2a+1")
    assert build_dual_bent(p, 0).dim_homology == 3
    assert build_bent(p, 0).dim_homology == 3
    assert large_surgery_dims(p, 3).total == 5
    assert large_surgery_dims(p, -3).total == 5


def test_unknot_surgery():
    assert large_surgery_dims(unknot(), 1).total == 1
    assert large_surgery_dims(unknot(), -7).total == 7


def test_surgery_errors():
    with pytest.raises(NotLargeSurgery):
        large_surgery_dims(trefoil(), 2)
    with pytest.raises(NotLargeSurgery):
        large_surgery_dims(unknot(), 0)
    q2 = KhiProfile.build(0, {(0, 0): 1}, q=2)
    with pytest.raises(InvalidProfile):
        large_surgery_dims(q2, 3)


def test_redundant_classes_agree():
    # for |n| > 2g+1 several values of s land in one class; their dimensions must agree
    rep = large_surgery_dims(trefoil(), 7)
    per_s = dict(rep.per_s)
    assert len(per_s) == 11
    for s in range(-5, -1):
        assert per_s[s] == per_s[s + 7]
    assert rep.total == 7


def test_class_inconsistency_detected():
    # H(d_plus) and H(d_minus) differ, so far-out s in one class disagree
    p = KhiProfile.build(1, {X1: 1, Y1: 1, X2: 1}, {(Y1, X1): [[1]]}, {})
    assert large_surgery_dims(p, 3).class_dims == ((0, 3), (1, 1), (2, 1))
    with pytest.raises(ClassInconsistency):
        large_surgery_dims(p, 5)


@given(profiles())
def test_surgery_classes_large_n(p):
    n = 2 * p.genus + 3
    consistent = homology(p.whole("+")).total == homology(p.whole("-")).total
    for m in (n, -n):
        if not consistent:
            with pytest.raises(ClassInconsistency):
                large_surgery_dims(p, m)
            continue
        rep = large_surgery_dims(p, m)
        assert len(rep.class_dims) == n
        build = build_bent if m > 0 else build_dual_bent
        for s, d in rep.per_s:
            chi = build(p, -s).complex.space.euler_characteristic()
            assert d >= abs(chi) and (d - chi) % 2 == 0


@given(profiles())
def test_bent_matches_dense_oracle(p):
    for s in range(p.bottom - 1, p.top + 2):
        assert build_bent(p, s).dim_homology == oracle_dims(p, s)
        assert build_dual_bent(p, s).dim_homology == oracle_dims(p, s, dual=True)


@given(profiles())
def test_limits_above_and_below(p):
    h_minus = homology(p.whole("-")).total
    h_plus = homology(p.whole("+")).total
    assert build_bent(p, p.top).dim_homology == h_minus
    assert build_bent(p, p.bottom).dim_homology == h_plus
    assert build_dual_bent(p, p.top).dim_homology == h_plus
    assert build_dual_bent(p, p.bottom).dim_homology == h_minus
    # same numbers from the spectral sequences of the two filtrations
    grading = [k[0] for k in p.space.key_of_index]
    ep = e_infinity(couple_from_filtered(FilteredComplex.build(p.d_plus.to_matrix(), grading)))
    em = e_infinity(couple_from_filtered(FilteredComplex.build(p.d_minus.to_matrix(), [-z for z in grading])))
    assert sum(ep.values()) == h_plus and sum(em.values()) == h_minus


@given(profiles())
def test_parity_flip_and_square_zero(p):
    for d in (p.d_plus, p.d_minus):
        for (sk, tk) in d.blocks():
            assert sk[1] != tk[1]
    for s in range(p.bottom, p.top + 1):
        for b in (build_bent(p, s), build_dual_bent(p, s), build_half(p, s, "+"), build_half(p, s, "-")):
            m = b.complex.matrix
            assert (m @ m).is_zero()


# ---------------------------------------------------------------- halves and projections

def test_projection_pieces():
    p = trefoil()
    pi = projection(p, 0, "+")
    assert pi.source.keys == [X1, Y1, X2]
    assert pi.target.keys == [X1, Y1]
    assert pi.block(X1) == ExactMatrix.identity(1)
    assert build_half(p, 0, "+").complex.matrix == ExactMatrix.from_rows([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        build_half(p, 0, "0")


@given(profiles())
def test_projections_are_chain_maps(p):
    for s in range(p.bottom - 1, p.top + 2):
        assert projection_is_chain_map(p, s, "+")
        assert projection_is_chain_map(p, s, "-")


# ---------------------------------------------------------------- chains and duality

def test_chain_detection_examples():
    u = unknot()
    assert is_positive_chain(u) and is_negative_chain(u) and floer_simple_check(u)
    t = trefoil()
    assert is_positive_chain(t) and not is_negative_chain(t) and not floer_simple_check(t)
    m = mirror(t)
    assert is_negative_chain(m) and not is_positive_chain(m)
    wide = KhiProfile.build(1, {X1: 2, Y1: 1, X2: 1})
    assert not is_positive_chain(wide) and not is_negative_chain(wide)


def test_scaled_chain_still_a_chain():
    t = KhiProfile.build(1, {X1: 1, Y1: 1, X2: 1}, {(Y1, X1): [[-3]]}, {(Y1, X2): [["1/2"]]})
    assert is_positive_chain(t)


def test_q2_floer_simple():
    p = KhiProfile.build(1, {(1, 0): 1, (0, 1): 1}, q=2)
    assert floer_simple_check(p)


def test_duality_examples():
    assert duality_check(unknot()).ok
    rep = duality_check(trefoil())
    assert rep.ok and len(rep.comparisons) == 5
    fig = genus_one_profile(1, "2a+1")
    for s in range(-2, 3):
        assert build_dual_bent(fig, s).dim_homology == build_bent(fig, -s).dim_homology


@given(profiles())
def test_duality_property(p):
    assert duality_check(p).ok


@given(profiles())
def test_mirror_is_involution(p):
    mm = mirror(mirror(p))
    assert mm.space == p.space
    assert mm.d_plus.to_matrix() == p.d_plus.to_matrix()
    assert mm.d_minus.to_matrix() == p.d_minus.to_matrix()
