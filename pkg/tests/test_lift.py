from hypothesis import given

from bentkit.couple import couple_from_filtered, pages
from bentkit.fixtures import RandomFilteredConfig, filtered_fixture_set
from bentkit.lift import lift, roundtrip_check

from strategies import filtered_complexes


@given(filtered_complexes())
def test_roundtrip_reproduces_every_page(fc):
    rep = roundtrip_check(couple_from_filtered(fc))
    assert rep.ok, rep.mismatches
    assert rep.parts_compose_to_zero
    assert rep.original == rep.recovered


@given(filtered_complexes())
def test_lift_splitting_and_levels(fc):
    c = couple_from_filtered(fc)
    lc = lift(c)
    assert lc.dim == sum(c.e_dim(s) for s in c.s_range)
    assert sum(lc.splitting.values()) == lc.dim
    assert lc.splitting["E'_inf"] == lc.homology_dim()
    # d'_r moves filtration level by exactly r
    for r, m in lc.parts.items():
        for a in range(m.rows):
            for b in range(m.cols):
                if m[a, b]:
                    assert lc.levels[a] - lc.levels[b] == r


def test_lift_of_trefoil_filtration():
    from test_couple import trefoil_dplus
    c = couple_from_filtered(trefoil_dplus())
    lc = lift(c)
    assert lc.homology_dim() == 1
    assert [pg.dims for pg in pages(couple_from_filtered(lc.filtered()))] == [pg.dims for pg in pages(c)]


def test_fixture_set_roundtrips():
    for fc in filtered_fixture_set(40, RandomFilteredConfig(seed=11)):
        assert roundtrip_check(couple_from_filtered(fc)).ok
