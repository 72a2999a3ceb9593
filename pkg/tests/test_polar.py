from hypothesis import given, settings, strategies as st

from conftest import read_fixture
from supergeom import perms
from supergeom.bundle import check_morphism, dilation, validate_atlas
from supergeom.dsl import emit_dsl, parse_atlas
from supergeom.fixtures import weighted_fixture
from supergeom.polar import (
    check_diag_embedding,
    desuperize,
    desuperize_morphism,
    diag_embedding,
    diagonalize,
    polarize,
    polarize_morphism,
    roundtrip_isomorphism,
)
from supergeom.symmetry import SKEW, validate_action

DEG2 = """
atlas weighted degree 2
coord x even @(0)
coord xi1 odd @(1)
coord xi2 odd @(1)
coord z even @(2)
chart U V
transition U -> V { z' = z + xi1*xi2 }
inverse { z' = z - xi1*xi2 }
"""

# w' = w + xi*z: the polarized w has three cross terms
DEG3 = """
atlas weighted degree 3
coord x even @(0)
coord xi odd @(1)
coord z even @(2)
coord w odd @(3)
chart U V
transition U -> V { w' = w + xi*z }
inverse { w' = w - xi*z }
"""


def atlas(text):
    return parse_atlas(text).atlas


def test_polarized_transition_has_both_cross_terms():
    p = polarize(atlas(DEG2))
    c = p.atlas.chart
    names = [z.name for z in c]
    assert names == ["x@(0,0)", "xi1@(0,1)", "xi2@(0,1)", "xi1@(1,0)", "xi2@(1,0)", "z@(1,1)"]
    v = dict(zip(names, c.vars()))
    img = p.atlas.transition_map("U", "V").images[5]
    assert img == v["z@(1,1)"] + v["xi1@(0,1)"] * v["xi2@(1,0)"] + v["xi1@(1,0)"] * v["xi2@(0,1)"]
    assert validate_atlas(p.atlas).ok
    assert validate_action(p.atlas, p.action).ok


def test_base_coordinates_keep_only_the_zero_copy():
    p = polarize(atlas(DEG3))
    base = [z for z in p.atlas.chart if z.name.startswith("x@")]
    assert [z.weight for z in base] == [(0, 0, 0)]
    # w of weight 3 survives only as the (1,1,1) copy, z as the three copies of weight 2
    assert [z.weight for z in p.atlas.chart if z.name.startswith("w")] == [(1, 1, 1)]
    assert len([z for z in p.atlas.chart if z.name.startswith("z")]) == 3


def test_degree_one_polarization_is_the_source():
    a = parse_atlas("""
atlas weighted degree 1
coord x even @(0)
coord y odd @(1)
chart U V
transition U -> V {
  x' = x + 1
  y' = -y
}
inverse {
  x' = x - 1
  y' = -y
}
""").atlas
    p = polarize(a)
    assert p.atlas.kind.vector_slots == 1
    assert [(z.parity, z.weight) for z in p.atlas.chart] == [(z.parity, z.weight) for z in a.chart]
    for t, u in zip(a.transitions, p.atlas.transitions):
        assert [q.terms for q in t.forward.images] == [q.terms for q in u.forward.images]


def test_diag_constants():
    a = atlas(DEG2)
    p = polarize(a)
    m = diag_embedding(a, p).on("U")
    x, xi1, xi2, z = a.chart.vars()
    assert m.images == (x, xi1, xi2, xi1, xi2, 2 * z)
    assert check_diag_embedding(diag_embedding(a, p)).ok


def test_linear_constant_fails_in_degree_three():
    a = atlas(DEG3)
    p = polarize(a)
    rep = check_diag_embedding(diag_embedding(a, p, "linear"))
    assert {c.name for c in rep.failures} == {"transition"}
    assert check_diag_embedding(diag_embedding(a, p, "factorial")).ok


def test_diagonal_recovers_the_source():
    for text in (DEG2, DEG3):
        a = atlas(text)
        p = polarize(a)
        d = diagonalize(p)
        assert [(z.name, z.parity, z.weight) for z in d.atlas.chart] == [(z.name, z.parity, z.weight) for z in a.chart]
        iso, inv = roundtrip_isomorphism(a, d, p)
        assert check_morphism(iso).ok and check_morphism(inv).ok
        for u in a.chart_names:
            assert inv.on(u).compose(iso.on(u)).images == tuple(a.chart.vars())


def test_diag_image_fixed_by_flips():
    a = atlas(DEG3)
    p = polarize(a)
    diag = diag_embedding(a, p, "linear").on("U")
    for s in perms.all_perms(3):
        assert p.action.map(s, "U").compose(diag) == diag


def test_desuperize_golden():
    a = parse_atlas(read_fixture("nmanifold_deg2.gsa")).atlas
    ds = desuperize(a)
    assert emit_dsl(ds.atlas, ds.action) == read_fixture("nmanifold_deg2.desuperized.gsa")
    assert all(c.parity == 0 for c in ds.atlas.chart)
    assert ds.action.flavor == SKEW
    assert validate_action(ds.atlas, ds.action).ok


def test_polarization_respects_dilations():
    a = atlas(DEG3)
    h2, h3 = polarize_morphism(dilation(a, 2)), polarize_morphism(dilation(a, 3))
    assert h2.compose(h3) == polarize_morphism(dilation(a, 6))
    assert check_morphism(h2).ok
    d2 = desuperize_morphism(dilation(a, 2))
    assert check_morphism(d2).ok


@settings(max_examples=6)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_roundtrip_on_random_atlases(seed, degree):
    a = weighted_fixture(seed, degree)
    p = polarize(a)
    d = diagonalize(p)
    assert validate_atlas(d.atlas).ok
    iso, inv = roundtrip_isomorphism(a, d, p)
    assert check_morphism(iso).ok and check_morphism(inv).ok


@settings(max_examples=4)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_desuperized_nmanifolds_are_even(seed, degree):
    a = weighted_fixture(seed, degree, nmanifold=True)
    ds = desuperize(a)
    assert all(c.parity == 0 for c in ds.atlas.chart)
    assert validate_action(ds.atlas, ds.action).ok


def test_degree_one_nmanifold_desuperizes_to_even_bundle():
    a = parse_atlas("""
atlas weighted degree 1 nmanifold
coord x even @(0)
coord s odd @(1)
coord t odd @(1)
chart U V
transition U -> V {
  s' = s + x*t
}
inverse {
  s' = s - x*t
}
""").atlas
    ds = desuperize(a)
    assert ds.atlas.kind.vector_slots == 1
    assert all(c.parity == 0 for c in ds.atlas.chart)
    x, s, t = ds.atlas.chart.vars()
    assert ds.atlas.transition_map("U", "V").images == (x, s + x * t, t)
