from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import read_fixture
from supergeom import perms
from supergeom.bundle import (
    Atlas,
    BundleKind,
    BundleMorphism,
    ValidationError,
    atlas_equal,
    check_morphism,
    core_bundle,
    dilation,
    euler_fields_commute,
    permute_atlas,
    restrict_to_weight,
    validate_atlas,
    weight_derivation,
    weight_vector_field,
)
from supergeom.dsl import parse_atlas
from supergeom.generators import random_vector_atlas, random_weighted_atlas, rng_for
from supergeom.superalg import Chart, Coordinate, PolynomialMap


def atlas(text):
    return parse_atlas(text).atlas


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

DVB = """
atlas vector rank 2
coord x even @(0,0)
coord y odd @(1,0)
coord Y odd @(0,1)
coord z even @(1,1)
chart U V
transition U -> V {
  x' = x + 1
  z' = 2*z + x*y*Y
}
inverse {
  x' = x - 1
  z' = 1/2*z - 1/2*x*y*Y + 1/2*y*Y
}
"""


def failed(rep):
    return {c.name for c in rep.failures}


def test_degree_two_example_is_valid():
    rep = validate_atlas(atlas(DEG2))
    assert rep.ok, str(rep)


def test_dvb_fixture_is_valid():
    assert validate_atlas(atlas(DVB)).ok


def test_non_homogeneous_transition_rejected():
    rep = validate_atlas(atlas(read_fixture("broken_homogeneity.gsa")))
    assert "homogeneity" in failed(rep)


def test_weight_outside_cube_rejected():
    # the parser refuses this, so build it by hand
    c = Chart([Coordinate("x", 0, (0, 0)), Coordinate("w", 0, (2, 0))])
    a = Atlas(BundleKind.vector(2), c, ("U",))
    assert failed(validate_atlas(a)) == {"kind"}


def test_wrong_inverse_rejected():
    a = atlas("""
atlas weighted degree 1
coord x even @(0)
coord y even @(1)
chart U V
transition U -> V { y' = 2*y }
inverse { y' = y }
""")
    assert failed(validate_atlas(a)) == {"inverse"}


def test_cocycle_failure_detected():
    a = atlas("""
atlas weighted degree 1
coord x even @(0)
coord y even @(1)
chart U V W
transition U -> V { y' = 2*y } inverse { y' = 1/2*y }
transition V -> W { y' = 3*y } inverse { y' = 1/3*y }
transition U -> W { y' = 5*y } inverse { y' = 1/5*y }
overlap U V W
""")
    assert failed(validate_atlas(a)) == {"cocycle"}


def test_nmanifold_parity_rule():
    a = atlas("""
atlas weighted degree 2 nmanifold
coord x even @(0)
coord p odd @(2)
chart U
""")
    assert failed(validate_atlas(a)) == {"nmanifold"}


def test_euler_field_of_rank_one_bundle():
    a = atlas("""
atlas vector rank 1
coord x even @(0)
coord y even @(1)
coord z odd @(1)
chart U V
transition U -> V { y' = 2*y } inverse { y' = 1/2*y }
""")
    fields = weight_vector_field(a)
    c = a.chart
    D = fields["U"]
    assert list(D.components) == [c.zero(), c.var("y"), c.var("z")]


def test_euler_field_requires_homogeneity():
    with pytest.raises(ValidationError):
        weight_vector_field(atlas(read_fixture("broken_homogeneity.gsa")))


def test_euler_fields_of_dvb_commute():
    a = atlas(DVB)
    assert euler_fields_commute(a)
    total = weight_derivation(a)
    z = a.chart.var("z")
    assert total.components[3] == 2 * z
    assert weight_derivation(a, 1).components[3] == z


def test_dilation_special_values():
    a = atlas(DVB)
    ident = BundleMorphism.identity(a)
    assert dilation(a, 1) == ident
    h0 = dilation(a, 0).on("U")
    x = a.chart.var("x")
    assert list(h0.images) == [x, a.chart.zero(), a.chart.zero(), a.chart.zero()]
    assert dilation(a, 2).compose(dilation(a, 3)) == dilation(a, 6)
    assert dilation(a, Fraction(1, 2)).compose(dilation(a, 2)) == ident


def test_dilation_is_a_morphism():
    a = atlas(DVB)
    for slot in (None, 1, 2):
        rep = check_morphism(dilation(a, 5, slot))
        assert rep.ok, str(rep)


def test_check_morphism_rejects_non_homogeneous_map():
    a = atlas(DVB)
    x, y, Y, z = a.chart.vars()
    bad = PolynomialMap(a.chart, a.chart, [x, y, Y, z + x])
    rep = check_morphism(BundleMorphism.chartwise(a, a, lambda u: bad))
    assert "homogeneity" in failed(rep)
    assert "dilation" in failed(rep)


def test_check_morphism_rejects_incompatible_charts():
    a = atlas(DVB)
    x, y, Y, z = a.chart.vars()
    twist = PolynomialMap(a.chart, a.chart, [x, y, Y, 3 * z])
    m = BundleMorphism(a, a, {("U", "U"): PolynomialMap.identity(a.chart), ("V", "V"): twist})
    assert failed(check_morphism(m)) == {"transition"}


def test_restrict_to_weight_drops_cross_terms():
    a = atlas(DVB)
    e = restrict_to_weight(a, (1, 1))
    assert e.kind == BundleKind.vector(1)
    assert [c.name for c in e.chart] == ["x", "z"]
    fwd = e.transition_map("U", "V")
    x, z = e.chart.vars()
    assert list(fwd.images) == [x + 1, 2 * z]
    assert validate_atlas(e).ok
    side = restrict_to_weight(a, (1, 0))
    assert [c.name for c in side.chart] == ["x", "y"]
    with pytest.raises(ValueError):
        restrict_to_weight(a, (0, 0))


def test_core_bundle():
    core = core_bundle(atlas(DVB), 1, 2)
    assert [c.name for c in core.chart] == ["x", "z"]
    assert [c.weight for c in core.chart] == [(0,), (1,)]
    x, z = core.chart.vars()
    assert list(core.transition_map("U", "V").images) == [x + 1, 2 * z]
    assert validate_atlas(core).ok


def test_permute_atlas_moves_weights():
    a = atlas(DVB)
    b = permute_atlas(a, perms.parse("2 1"))
    assert [c.weight for c in b.chart] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert validate_atlas(b).ok
    assert atlas_equal(permute_atlas(b, perms.parse("2 1")), a)
    assert not atlas_equal(a, b)


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_random_vector_atlases_validate(seed, n):
    a = random_vector_atlas(rng_for(seed), n, max_per_weight=1, n_charts=2)
    assert validate_atlas(a).ok
    assert check_morphism(dilation(a, 2)).ok
    for sigma in perms.all_perms(n):
        assert validate_atlas(permute_atlas(a, sigma)).ok


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_random_weighted_atlases_validate(seed, degree):
    a = random_weighted_atlas(rng_for(seed), degree, max_per_weight=1, n_charts=2)
    assert validate_atlas(a).ok
    weight_vector_field(a)
    assert check_morphism(dilation(a, 3)).ok
