"""Parity reversion of n-vector bundles and the isomorphisms Phi^sigma.

Reversed coordinates keep their stem and gain a tag listing the reversed slots,
``z@(1,1)`` -> ``z@(1,1)~2`` -> ``z@(1,1)~1.2``.  Reversing a slot twice removes
it from the tag again.
"""
from __future__ import annotations

import re
from fractions import Fraction

from . import perms
from .bundle import Atlas, BundleMorphism, permute_atlas
from .superalg import Chart, Coordinate, InternalInvariantError, Polynomial, PolynomialMap

_TAG = re.compile(r"^(?P<stem>.*?)(?:~(?P<slots>\d+(?:\.\d+)*))?$")


def koszul_sign(alpha, sigma) -> int:
    """Sign collected when the 1-entries of ``alpha`` are rearranged into ``alpha o sigma``.

    Counts the pairs of 1-entries whose relative order is inverted by
    ``sigma^{-1}``; this is the convention for which the multiplicativity law
    ``sgn(a, s's) = sgn(a^{s'}, s) sgn(a, s')`` holds with ``a^s = a o s``.
    """
    alpha, sigma = tuple(alpha), tuple(sigma)
    if len(alpha) != len(sigma):
        raise ValueError(f"weight of length {len(alpha)} vs permutation of size {len(sigma)}")
    if not perms.is_perm(sigma):
        raise ValueError(f"{sigma} is not a permutation")
    inv = perms.inverse(sigma)
    ones = [i for i, x in enumerate(alpha) if x]
    s = 1
    for a, i in enumerate(ones):
        for j in ones[a + 1:]:
            if inv[j] < inv[i]:
                s = -s
    return s


def _retag(name: str, slot: int) -> str:
    m = _TAG.match(name)
    slots = set(int(x) for x in m.group("slots").split(".")) if m.group("slots") else set()
    slots ^= {slot}
    stem = m.group("stem")
    return stem + ("~" + ".".join(str(x) for x in sorted(slots)) if slots else "")


def reversed_chart(chart: Chart, slot: int) -> Chart:
    coords = []
    for c in chart:
        if c.weight[slot - 1]:
            coords.append(Coordinate(_retag(c.name, slot), 1 - c.parity, c.weight))
        else:
            coords.append(c)
    return Chart(coords)


def reverse_polynomial(p: Polynomial, new: Chart, slot: int) -> Polynomial:
    """Rewrite ``p`` for the slot-reversed chart ``new``.

    In each monomial the unique factor with a 1 in ``slot`` is moved to the front
    at the old parities, its parity is flipped, and it is moved back at the new
    parities.  Monomials without such a factor are renamed only.
    """
    old = p.chart
    k = slot - 1
    out: dict[tuple[int, ...], Fraction] = {}
    for mono, c in p._terms.items():
        carriers = [pos for pos, i in enumerate(mono) if old.coords[i].weight[k]]
        if len(carriers) > 1:
            raise InternalInvariantError(
                f"monomial has {len(carriers)} factors of weight 1 in slot {slot}"
            )
        if carriers:
            pos = carriers[0]
            f = mono[pos]
            before = sum(1 for i in mono[:pos] if old.coords[i].parity)
            to_front = before * old.coords[f].parity
            back = before * new.coords[f].parity
            if (to_front + back) & 1:
                c = -c
        out[mono] = c
    return Polynomial._raw(new, out)


def _reverse_map(m: PolynomialMap, dom: Chart, cod: Chart, slot: int) -> PolynomialMap:
    return PolynomialMap(dom, cod, [reverse_polynomial(p, dom, slot) for p in m.images])


def _check_vector(a: Atlas, slot: int | None = None) -> None:
    if not a.kind.is_vector:
        raise ValueError(f"parity reversion needs an n-vector atlas, got {a.kind.describe()}")
    if slot is not None and not 1 <= slot <= a.kind.vector_slots:
        raise ValueError(f"slot {slot} out of range 1..{a.kind.vector_slots}")


def _parity_rule(chart: Chart) -> bool:
    return all(c.parity == (0 if c.is_base else sum(c.weight) % 2) for c in chart)


def reverse_parity(a: Atlas, slot: int) -> Atlas:
    """Pi^slot: reverse the parity of the vector bundle structure ``slot``."""
    _check_vector(a, slot)
    chart = reversed_chart(a.chart, slot)
    out = a.map_transitions(lambda m: _reverse_map(m, chart, chart, slot), chart=chart)
    return out.replace(nmanifold=a.nmanifold and _parity_rule(chart))


def reverse_map(m: PolynomialMap, slot: int) -> PolynomialMap:
    """Pi^slot applied to a single map between n-vector charts."""
    return _reverse_map(m, reversed_chart(m.domain, slot), reversed_chart(m.codomain, slot), slot)


def reversion_slots(n: int, order=None) -> list[int]:
    """Slots in application order for Pi^{order(1)} o ... o Pi^{order(n)}."""
    order = perms.identity(n) if order is None else tuple(order)
    if len(order) != n or not perms.is_perm(order):
        raise ValueError(f"order must be a permutation of size {n}")
    return [order[k] + 1 for k in reversed(range(n))]


def total_reversion(a: Atlas, order=None) -> Atlas:
    """Pi^order; the default order gives Pi = Pi^1 o ... o Pi^n (slot n applied first)."""
    _check_vector(a)
    for s in reversion_slots(a.kind.vector_slots, order):
        a = reverse_parity(a, s)
    return a


def inverse_total_reversion(a: Atlas, order=None) -> Atlas:
    """Inverse of :func:`total_reversion` with the same ``order``."""
    _check_vector(a)
    for s in reversed(reversion_slots(a.kind.vector_slots, order)):
        a = reverse_parity(a, s)
    return a


def total_reversion_map(m: PolynomialMap, n: int, order=None) -> PolynomialMap:
    for s in reversion_slots(n, order):
        m = reverse_map(m, s)
    return m


def total_reversion_morphism(phi: BundleMorphism, order=None) -> BundleMorphism:
    """Pi(phi) between the reversed atlases."""
    src = total_reversion(phi.source, order)
    tgt = total_reversion(phi.target, order)
    n = phi.source.kind.vector_slots
    return BundleMorphism(src, tgt, {k: total_reversion_map(f, n, order) for k, f in phi.maps.items()})


def phi_iso(a: Atlas, sigma, source: Atlas | None = None, target: Atlas | None = None) -> BundleMorphism:
    """Phi^sigma : Pi(E^sigma) -> (Pi E)^sigma.

    Base coordinates are kept; the coordinate coming from ``z^A`` is multiplied by
    ``koszul_sign(w_A, sigma)`` where ``w_A`` is its weight in E.  ``source`` and
    ``target`` may be passed when the caller already has them.
    """
    _check_vector(a)
    sigma = tuple(sigma)
    if len(sigma) != a.kind.vector_slots:
        raise ValueError(f"permutation of size {len(sigma)} for {a.kind.vector_slots} slots")
    src = total_reversion(permute_atlas(a, sigma)) if source is None else source
    tgt = permute_atlas(total_reversion(a), sigma) if target is None else target
    imgs = [src.chart.var(k).scale(koszul_sign(c.weight, sigma)) for k, c in enumerate(a.chart)]
    m = PolynomialMap(src.chart, tgt.chart, imgs)
    return BundleMorphism.chartwise(src, tgt, lambda u: m)
