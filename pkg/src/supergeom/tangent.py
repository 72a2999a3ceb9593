"""Tangent functor, tangent lifts, iterated tangents and their flips.

The tangent of a chart keeps the original coordinates and appends dotted copies
in the same order.  Names carry weight tuples: ``x`` -> ``x@(0)``, ``x@(1)``; a
further application prepends its slot, ``x@(1)`` -> ``x@(0,1)``, ``x@(1,1)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from . import perms
from .bundle import Atlas, BundleKind, BundleMorphism, permute_atlas, rechart
from .superalg import (
    Chart,
    ChartMismatchError,
    Coordinate,
    Derivation,
    Polynomial,
    PolynomialMap,
    apply_derivation,
    restrict,
)

_NAME = re.compile(r"^(?P<stem>.*?)(?:@\((?P<w>\d+(?:,\d+)*)\))?(?P<rest>~[\d.]+)?$")

Keep = Callable[[Coordinate], bool]


def tangent_name(name: str, bit: int) -> str:
    m = _NAME.match(name)
    w = m.group("w")
    inner = f"{bit},{w}" if w else str(bit)
    return f"{m.group('stem')}@({inner}){m.group('rest') or ''}"


@dataclass(frozen=True)
class TangentChart:
    """Full tangent chart, the kept sub-chart and the monotone embedding between them."""

    base: Chart
    full: Chart
    chart: Chart
    kept: tuple[int, ...]

    @property
    def embed(self) -> dict[int, int]:
        return {old: new for new, old in enumerate(self.kept)}

    def dot(self) -> Derivation:
        """The even derivation x -> dx on the full tangent chart."""
        n = len(self.base)
        comps = [self.full.var(n + k) for k in range(n)] + [self.full.zero()] * n
        return Derivation(self.full, comps, 0)

    def lift_polynomial(self, p: Polynomial) -> tuple[Polynomial, Polynomial]:
        """(p, dp) on the full chart."""
        q = restrict(p, self.full, _identity)
        return q, apply_derivation(self.dot(), q)

    def cut(self, p: Polynomial) -> Polynomial:
        """Restrict a full-chart polynomial to the kept chart (dropped coordinates vanish)."""
        return restrict(p, self.chart, self.embed)


class _Identity(dict):
    def __missing__(self, key):
        return key


_identity = _Identity()


def tangent_chart(chart: Chart, keep: Keep | None = None) -> TangentChart:
    coords = [Coordinate(tangent_name(c.name, 0), c.parity, (0,) + c.weight) for c in chart]
    coords += [Coordinate(tangent_name(c.name, 1), c.parity, (1,) + c.weight) for c in chart]
    full = Chart(coords)
    kept = tuple(k for k, c in enumerate(coords) if keep is None or keep(c))
    sub = full if keep is None else Chart([coords[k] for k in kept])
    return TangentChart(chart, full, sub, kept)


def tangent_of_map(m: PolynomialMap, dom: TangentChart | None = None, cod: TangentChart | None = None) -> PolynomialMap:
    """T(m): images keep ``f`` and add its total differential ``sum_b dx^b df/dx^b``."""
    dom = tangent_chart(m.domain) if dom is None else dom
    cod = tangent_chart(m.codomain) if cod is None else cod
    lifted = [dom.lift_polynomial(p) for p in m.images]
    full_images = [q for q, _ in lifted] + [d for _, d in lifted]
    images = [dom.cut(full_images[k]) for k in cod.kept]
    return PolynomialMap(dom.chart, cod.chart, images)


def _tangent_kind(kind: BundleKind) -> BundleKind:
    return BundleKind(kind.vector_slots + 1, kind.degree)


def tangent_of_atlas(a: Atlas, keep: Keep | None = None) -> Atlas:
    """TE with one more vector slot (the new slot comes first)."""
    tc = tangent_chart(a.chart, keep)
    out = a.map_transitions(lambda m: tangent_of_map(m, tc, tc), chart=tc.chart, kind=_tangent_kind(a.kind))
    return out.replace(nmanifold=False)


def tangent_of_morphism(phi: BundleMorphism, source: Atlas | None = None, target: Atlas | None = None) -> BundleMorphism:
    src = tangent_of_atlas(phi.source) if source is None else source
    tgt = tangent_of_atlas(phi.target) if target is None else target
    dom, cod = tangent_chart(phi.source.chart), tangent_chart(phi.target.chart)
    return BundleMorphism(src, tgt, {k: tangent_of_map(f, dom, cod) for k, f in phi.maps.items()})


def tangent_lift(D: Derivation, a: Atlas | Chart) -> Derivation:
    """d_T D: components f^a on x^a and sum_b dx^b df^a/dx^b on the dotted x^a."""
    chart = a.chart if isinstance(a, Atlas) else a
    if D.chart != chart:
        raise ChartMismatchError("derivation is not on the atlas chart")
    tc = tangent_chart(chart)
    lifted = [tc.lift_polynomial(p) for p in D.components]
    return Derivation(tc.full, [q for q, _ in lifted] + [d for _, d in lifted], D.parity)


# -- iterated tangents --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IteratedTangentAtlas:
    """T^(k) of ``source``; ``labels[p] = (source coordinate index, alpha)``."""

    atlas: Atlas
    source: Atlas
    k: int
    labels: tuple[tuple[int, tuple[int, ...]], ...]

    def position(self, index: int, alpha) -> int:
        return self.labels.index((index, tuple(alpha)))

    def flip_map(self, sigma) -> PolynomialMap:
        sigma = tuple(sigma)
        if len(sigma) != self.k or not perms.is_perm(sigma):
            raise ValueError(f"need a permutation of size {self.k}, got {sigma}")
        pos = {lab: p for p, lab in enumerate(self.labels)}
        chart = self.atlas.chart
        images = [chart.var(pos[(i, perms.act(alpha, sigma))]) for i, alpha in self.labels]
        return PolynomialMap(chart, chart, images)

    def full_sigma(self, sigma) -> tuple[int, ...]:
        return perms.extend(tuple(sigma), self.atlas.kind.vector_slots)

    def action(self):
        """The flip action as an :class:`ActionTable` over all of S_k."""
        from .symmetry import SYMMETRIC, ActionTable

        entries = {}
        for s in perms.all_perms(self.k):
            m = self.flip_map(s)
            entries[self.full_sigma(s)] = {u: m for u in self.atlas.chart_names}
        return ActionTable(self.atlas, entries, SYMMETRIC)


def iterated_tangent(a: Atlas, k: int, keep: Keep | None = None) -> IteratedTangentAtlas:
    """T^(k) E by k applications of the tangent functor.

    ``keep`` may drop coordinates after each step; this is exact when the kept
    coordinates span a submanifold preserved by all transitions (the zero set of
    the dropped ones), which the caller guarantees.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    labels = [(i, ()) for i in range(len(a.chart))]
    out = a
    for _ in range(k):
        tc = tangent_chart(out.chart, keep)
        full_labels = [(i, (0,) + al) for i, al in labels] + [(i, (1,) + al) for i, al in labels]
        labels = [full_labels[p] for p in tc.kept]
        out = out.map_transitions(lambda m, tc=tc: tangent_of_map(m, tc, tc), chart=tc.chart,
                                  kind=_tangent_kind(out.kind)).replace(nmanifold=False)
    return IteratedTangentAtlas(out, a, k, tuple(labels))


def flip_action(it: IteratedTangentAtlas, sigma) -> BundleMorphism:
    """I^sigma : T^(k)E -> (T^(k)E)^sigma, the coordinate permutation alpha -> alpha o sigma."""
    m = it.flip_map(sigma)
    tgt = permute_atlas(it.atlas, it.full_sigma(sigma))
    return BundleMorphism.chartwise(it.atlas, tgt, lambda u: rechart(m, it.atlas.chart, tgt.chart))


def iterated_tangent_of_morphism(phi: BundleMorphism, k: int, keep: Keep | None = None) -> BundleMorphism:
    """T^(k) phi, with the same optional truncation on both sides."""
    src = iterated_tangent(phi.source, k, keep).atlas
    tgt = iterated_tangent(phi.target, k, keep).atlas
    maps = dict(phi.maps)
    dom_chart, cod_chart = phi.source.chart, phi.target.chart
    for _ in range(k):
        dom, cod = tangent_chart(dom_chart, keep), tangent_chart(cod_chart, keep)
        maps = {key: tangent_of_map(f, dom, cod) for key, f in maps.items()}
        dom_chart, cod_chart = dom.chart, cod.chart
    return BundleMorphism(src, tgt, maps)
