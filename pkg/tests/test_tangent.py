from hypothesis import given, settings, strategies as st

from conftest import CHART, derivations, polynomials
from supergeom import perms
from supergeom.bundle import check_morphism, core_bundle, validate_atlas, weight_derivation
from supergeom.generators import random_manifold_atlas, rng_for
from supergeom.superalg import Chart, Coordinate, Derivation, PolynomialMap, bracket
from supergeom.tangent import (
    flip_action,
    iterated_tangent,
    tangent_chart,
    tangent_lift,
    tangent_name,
    tangent_of_atlas,
    tangent_of_map,
)

LINE = Chart([Coordinate("x", 0)])


def test_names_prepend_a_slot():
    assert tangent_name("x", 1) == "x@(1)"
    assert tangent_name("x@(1)", 0) == "x@(0,1)"
    assert tangent_name("x@(0,1)~1", 1) == "x@(1,0,1)~1"


def test_tangent_of_square():
    x = LINE.var(0)
    tm = tangent_of_map(PolynomialMap(LINE, LINE, [x * x]))
    x0, x1 = tm.domain.vars()
    assert list(tm.images) == [x0 * x0, 2 * (x0 * x1)]


def test_lift_of_euler_field():
    x = LINE.var(0)
    lifted = tangent_lift(Derivation(LINE, [x]), LINE)
    x0, x1 = lifted.chart.vars()
    assert list(lifted.components) == [x0, x1]


def test_second_tangent_of_cube():
    # y = x^3 seen on T^2: y, ydot, dy and d ydot
    target = Chart([Coordinate("y", 0)])
    x = LINE.var(0)
    f = PolynomialMap(LINE, target, [x * x * x])
    tc = tangent_chart(tangent_chart(LINE).chart)
    t2 = tangent_of_map(tangent_of_map(f), tc, tangent_chart(tangent_chart(target).chart))
    c = t2.domain
    assert [z.name for z in c] == ["x@(0,0)", "x@(0,1)", "x@(1,0)", "x@(1,1)"]
    x, xdot, dx, dxdot = c.vars()
    y, ydot, dy, dydot = t2.images
    assert y == x * x * x
    assert ydot == 3 * (x * x * xdot)
    assert dy == 3 * (x * x * dx)
    assert dydot == 3 * (x * x * dxdot) + 6 * (x * dx * xdot)


def test_odd_tangent_keeps_left_derivative_signs():
    c = Chart([Coordinate("s", 1), Coordinate("t", 1)])
    s, t = c.vars()
    tm = tangent_of_map(PolynomialMap(c, Chart([Coordinate("u", 0)]), [s * t]))
    s0, t0, s1, t1 = tm.domain.vars()
    assert tm.images[1] == s1 * t0 + s0 * t1


def test_flip_swaps_and_squares_to_identity():
    m = random_manifold_atlas(rng_for(3), 1, 1, n_charts=2)
    it = iterated_tangent(m, 2)
    kappa = it.flip_map(perms.parse("2 1"))
    names = [z.name for z in it.atlas.chart]
    images = [names[next(iter(p.variables()))] for p in kappa.images]
    for a, b in zip(names, images):
        if a.endswith("@(0,1)"):
            assert b == a.replace("@(0,1)", "@(1,0)")
        elif a.endswith("@(1,0)"):
            assert b == a.replace("@(1,0)", "@(0,1)")
        else:
            assert a == b
    assert kappa.compose(kappa) == PolynomialMap.identity(it.atlas.chart)


def test_flip_is_a_bundle_isomorphism():
    m = random_manifold_atlas(rng_for(11), 1, 1, n_charts=2)
    it = iterated_tangent(m, 3)
    assert validate_atlas(it.atlas).ok
    for sigma in perms.all_perms(3):
        rep = check_morphism(flip_action(it, sigma))
        assert rep.ok, str(rep)


def test_flip_group_law():
    m = random_manifold_atlas(rng_for(5), 1, 0, n_charts=2)
    it = iterated_tangent(m, 3)
    for s in perms.all_perms(3):
        for t in perms.all_perms(3):
            lhs = it.flip_map(t).compose(it.flip_map(s))
            assert lhs == it.flip_map(perms.compose(t, s))


def test_core_of_second_tangent_is_tangent():
    m = random_manifold_atlas(rng_for(8), 1, 1, n_charts=2)
    core = core_bundle(iterated_tangent(m, 2).atlas, 1, 2)
    tm = tangent_of_atlas(m)
    assert [(z.parity, z.weight) for z in core.chart] == [(z.parity, z.weight) for z in tm.chart]
    for t in tm.transitions:
        f = core.transition_map(t.source, t.target)
        # core coordinates x@(0,0) and x@(1,1) correspond to x@(0) and x@(1)
        assert [p.terms for p in f.images] == [p.terms for p in t.forward.images]


def test_second_euler_field_is_lift():
    m = random_manifold_atlas(rng_for(2), 1, 1, n_charts=2)
    tm = tangent_of_atlas(m)
    t2 = tangent_of_atlas(tm)
    lifted = tangent_lift(weight_derivation(tm), tm)
    assert lifted == weight_derivation(t2, 2)


@given(derivations(), derivations())
def test_lift_preserves_brackets(X, Y):
    assert bracket(tangent_lift(X, CHART), tangent_lift(Y, CHART)) == tangent_lift(bracket(X, Y), CHART)


@given(polynomials(0), polynomials(1), polynomials(0), polynomials(1))
def test_tangent_is_functorial(a, b, c, d):
    x, s, y, t, u = CHART.vars()
    f = PolynomialMap(CHART, CHART, [a, b, y, t, u])
    g = PolynomialMap(CHART, CHART, [x + c, s, c * y, d, u])
    assert tangent_of_map(f.compose(g)) == tangent_of_map(f).compose(tangent_of_map(g))
    assert tangent_of_map(PolynomialMap.identity(CHART)) == PolynomialMap.identity(tangent_chart(CHART).chart)


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_tangent_atlases_validate(seed):
    m = random_manifold_atlas(rng_for(seed), 1, 1, n_charts=3)
    t = tangent_of_atlas(m)
    assert t.kind.vector_slots == 1
    assert validate_atlas(t).ok
