"""Small hand-written atlases and seeded fixture families used by the law suites."""
from __future__ import annotations

from .bundle import Atlas, BundleKind, Transition
from .generators import random_automorphism, random_manifold_atlas, random_weighted_atlas, rng_for
from .superalg import Chart, Coordinate, PolynomialMap
from .symmetry import SYMMETRIC, ActionTable
from .tangent import iterated_tangent

CROSS_TERM = """\
atlas vector rank 2 nmanifold
coord x@(0,0) even @(0,0)
coord x@(1,0) odd @(1,0)
coord x@(0,1) odd @(0,1)
coord x@(1,1) even @(1,1)
chart U V
transition U -> V {
  x@(1,1)' = x@(1,1) + x@(1,0)*x@(0,1)
}
inverse {
  x@(1,1)' = x@(1,1) - x@(1,0)*x@(0,1)
}
"""

NMANIFOLD_DEG2 = """\
atlas weighted degree 2 nmanifold
coord x even @(0)
coord xi odd @(1)
coord eta odd @(1)
coord p even @(2)
chart U V
transition U -> V {
  x' = x + 1
  xi' = xi + x*eta
  p' = 2*p + xi*eta
}
inverse {
  x' = x - 1
  xi' = xi - x*eta + eta
  p' = 1/2*p - 1/2*xi*eta
}
"""


def cross_term_atlas() -> Atlas:
    """The double vector bundle with one nonlinear transition z' = z + x^(1,0) x^(0,1)."""
    c = Chart([
        Coordinate("x@(0,0)", 0, (0, 0)),
        Coordinate("x@(1,0)", 1, (1, 0)),
        Coordinate("x@(0,1)", 1, (0, 1)),
        Coordinate("x@(1,1)", 0, (1, 1)),
    ])
    z, a, b = c.var(3), c.var(1), c.var(2)
    fwd = PolynomialMap(c, c, [c.var(0), a, b, z + a * b])
    inv = PolynomialMap(c, c, [c.var(0), a, b, z - a * b])
    return Atlas(BundleKind.vector(2), c, ("U", "V"), (Transition("U", "V", fwd, inv),), (), True)


def conjugate_atlas(a: Atlas, psis: dict) -> Atlas:
    """Re-coordinatize each chart U by ``psis[U] = (forward, inverse)``."""
    ts = []
    for t in a.transitions:
        fs, is_ = psis[t.source]
        ft, it = psis[t.target]
        ts.append(Transition(t.source, t.target, ft.compose(t.forward).compose(is_), fs.compose(t.inverse).compose(it)))
    return a.replace(transitions=tuple(ts))


def symmetric_tangent_fixture(seed, k: int, n_even: int = 1, n_odd: int = 1, steps: int = 3,
                              conjugate: bool = True) -> tuple[Atlas, ActionTable]:
    """T^(k) of a random supermanifold with its flip action, optionally seen through
    random homogeneous coordinate changes so the action is no longer nice."""
    rng = rng_for(seed)
    m = random_manifold_atlas(rng, n_even, n_odd, n_charts=2)
    it = iterated_tangent(m, k)
    act = it.action()
    if not conjugate:
        return it.atlas, act
    e = it.atlas
    psis = {u: random_automorphism(rng, e.chart, steps) for u in e.chart_names}
    e2 = conjugate_atlas(e, psis)
    act2 = ActionTable(e2, act.entries, SYMMETRIC).conjugated(
        e2, {u: p[0] for u, p in psis.items()}, {u: p[1] for u, p in psis.items()}
    )
    return e2, act2


def weighted_fixture(seed, degree: int, nmanifold: bool | None = None, max_per_weight: int = 1) -> Atlas:
    rng = rng_for(seed)
    if nmanifold is None:
        nmanifold = rng.random() < 0.5
    return random_weighted_atlas(rng, degree, max_per_weight, n_charts=2, nmanifold=nmanifold)
