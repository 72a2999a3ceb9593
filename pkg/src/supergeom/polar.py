"""Polarization of N-weighted atlases, diagonalization and desuperization.

The polarization of a degree-n atlas lives inside T^(n)E: a coordinate ``z`` of
weight w survives as the copies ``z@(alpha)`` with ``|alpha| = w``; base
coordinates survive only as ``u@(0,...,0)``.  Coordinates that are dropped
vanish on a submanifold preserved by every transition, so they are cut away
after each tangent step instead of at the end.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable

from . import perms
from .bundle import (
    Atlas,
    BundleKind,
    BundleMorphism,
    ValidationError,
    ValidationReport,
    validate_atlas,
)
from .parity import total_reversion_morphism
from .superalg import Chart, Coordinate, PolynomialMap, monomial_weight, restrict, substitute
from .symmetry import SYMMETRIC, ActionTable, nice_coordinates, validate_action, xi_functor
from .tangent import iterated_tangent, tangent_chart, tangent_of_map


def _keep(c: Coordinate) -> bool:
    # weights are (new vector slots..., source weight)
    return sum(c.weight[:-1]) <= c.weight[-1]


@dataclass(frozen=True, eq=False)
class PolarizedAtlas:
    atlas: Atlas
    action: ActionTable
    source: Atlas
    degree: int
    labels: tuple[tuple[int, tuple[int, ...]], ...]   # (source coordinate index, alpha)

    def copies(self, index: int) -> list[int]:
        """Positions of the polarized copies of source coordinate ``index``."""
        return [p for p, (i, _) in enumerate(self.labels) if i == index]

    def position(self, index: int, alpha) -> int:
        return self.labels.index((index, tuple(alpha)))


def _final_cut(chart: Chart, labels, source: Chart):
    keep = [p for p, (i, alpha) in enumerate(labels) if sum(alpha) == sum(source[i].weight)]
    coords = [Coordinate(chart[p].name, chart[p].parity, tuple(labels[p][1])) for p in keep]
    return Chart(coords), {old: new for new, old in enumerate(keep)}, tuple(labels[p] for p in keep)


def _check_weighted(a: Atlas, n: int | None) -> int:
    if not a.kind.is_weighted:
        raise ValueError(f"polarization needs an N-weighted atlas, got {a.kind.describe()}")
    n = a.kind.degree if n is None else n
    if n < a.kind.degree:
        raise ValueError(f"cannot polarize a degree-{a.kind.degree} atlas at degree {n}")
    if n < 1:
        raise ValueError("degree must be at least 1")
    return n


def polarize(a: Atlas, n: int | None = None, check: bool = True) -> PolarizedAtlas:
    """P^(n) E as an n-vector atlas with the inherited symmetric flip action."""
    n = _check_weighted(a, n)
    if check:
        rep = validate_atlas(a)
        if not rep.ok:
            raise ValidationError(rep, "source atlas is invalid:\n" + str(rep))
    it = iterated_tangent(a, n, _keep)
    chart, index, labels = _final_cut(it.atlas.chart, it.labels, a.chart)

    def cut(m: PolynomialMap) -> PolynomialMap:
        return PolynomialMap(chart, chart, [restrict(m.images[k], chart, index) for k in index])

    out = it.atlas.map_transitions(cut, chart=chart, kind=BundleKind.vector(n)).replace(nmanifold=a.nmanifold)
    pos = {lab: p for p, lab in enumerate(labels)}
    entries = {}
    for s in perms.all_perms(n):
        m = PolynomialMap(chart, chart, [chart.var(pos[(i, perms.act(al, s))]) for i, al in labels])
        entries[s] = {u: m for u in out.chart_names}
    return PolarizedAtlas(out, ActionTable(out, entries, SYMMETRIC), a, n, labels)


def polarize_map(f: PolynomialMap, n: int) -> PolynomialMap:
    """The polarized form of one chart map between degree <= n weighted charts."""
    dom_chart, cod_chart = f.domain, f.codomain
    dom_labels = [(i, ()) for i in range(len(dom_chart))]
    cod_labels = [(i, ()) for i in range(len(cod_chart))]
    src_dom, src_cod = dom_chart, cod_chart
    for _ in range(n):
        dom, cod = tangent_chart(dom_chart, _keep), tangent_chart(cod_chart, _keep)
        f = tangent_of_map(f, dom, cod)
        dom_labels = _step_labels(dom_labels, dom.kept)
        cod_labels = _step_labels(cod_labels, cod.kept)
        dom_chart, cod_chart = dom.chart, cod.chart
    dchart, dindex, _ = _final_cut(dom_chart, dom_labels, src_dom)
    cchart, cindex, _ = _final_cut(cod_chart, cod_labels, src_cod)
    return PolynomialMap(dchart, cchart, [restrict(f.images[k], dchart, dindex) for k in cindex])


def _step_labels(labels, kept):
    full = [(i, (0,) + al) for i, al in labels] + [(i, (1,) + al) for i, al in labels]
    return [full[p] for p in kept]


def polarize_morphism(phi: BundleMorphism, n: int | None = None, source: PolarizedAtlas | None = None,
                      target: PolarizedAtlas | None = None) -> BundleMorphism:
    """phi^(n) between the polarizations."""
    n = max(phi.source.kind.degree, phi.target.kind.degree) if n is None else n
    src = polarize(phi.source, n, check=False) if source is None else source
    tgt = polarize(phi.target, n, check=False) if target is None else target
    maps = {k: polarize_map(f, n) for k, f in phi.maps.items()}
    return BundleMorphism(src.atlas, tgt.atlas, maps)


# -- diagonalization ------------------------------------------------------------

_WEIGHT_TAG = re.compile(r"@\([\d,]*\)")


@dataclass(frozen=True, eq=False)
class Diagonal:
    atlas: Atlas
    nice: object                      # NiceResult of the polarized atlas
    representatives: tuple[int, ...]  # nice-chart position kept for each diagonal coordinate
    collapse: dict                    # chart -> map nice chart -> diagonal chart restricted to fixed points


def diagonalize(p: PolarizedAtlas | tuple, check: bool = True) -> Diagonal:
    """Fixed points of the symmetric action, one coordinate per orbit, N-weight |alpha|."""
    atlas, act = (p.atlas, p.action) if isinstance(p, PolarizedAtlas) else p
    n = atlas.kind.vector_slots
    nice = nice_coordinates(atlas, act, check=check)
    chart = nice.atlas.chart
    groups: dict[tuple, list[int]] = {}
    for k, (key, alpha) in enumerate(nice.labels):
        groups.setdefault((key, sum(alpha)), []).append(k)
    reps = []
    rep_of = {}
    for (key, m), members in groups.items():
        r = min(members, key=lambda k: nice.labels[k][1])
        reps.append(r)
        for k in members:
            rep_of[k] = r
    reps.sort()
    names = [_WEIGHT_TAG.sub("", chart[r].name) for r in reps]
    if len(set(names)) != len(names):
        names = [chart[r].name for r in reps]
    dchart = Chart([Coordinate(nm, chart[r].parity, (sum(chart[r].weight),)) for nm, r in zip(names, reps)])
    dpos = {r: j for j, r in enumerate(reps)}
    # fixed-point embedding: every nice coordinate pulls back to its representative
    embed = PolynomialMap(dchart, chart, [dchart.var(dpos[rep_of[k]]) for k in range(len(chart))])

    def collapse(m: PolynomialMap) -> PolynomialMap:
        return PolynomialMap(dchart, dchart, [substitute(m.images[r], embed) for r in reps])

    out = nice.atlas.map_transitions(collapse, chart=dchart, kind=BundleKind.weighted(n))
    rule = all(c.parity == c.weight[0] % 2 for c in dchart)
    out = out.replace(nmanifold=atlas.nmanifold and rule)
    return Diagonal(out, nice, tuple(reps), {u: embed for u in atlas.chart_names})


NORMALIZATIONS: dict[str, Callable[[int], int]] = {
    "linear": lambda m: m,
    "factorial": factorial,
    "one": lambda m: 1,
}


def diag_embedding(a: Atlas, p: PolarizedAtlas, normalization: str = "linear") -> BundleMorphism:
    """E -> P^(n)E with ``z^{A,(alpha)} o diag = c(|alpha|) z^A``.

    ``normalization`` picks c: ``"linear"`` is c(m) = m, ``"factorial"`` is c(m) = m!.
    Only the factorial constant commutes with transitions mixing weights whose
    sum is 3 or more; the two agree up to weight 2.
    """
    if p.source is not a and (p.source.chart.signature != a.chart.signature):
        raise ValueError("polarized atlas does not come from this atlas")
    c = NORMALIZATIONS[normalization]
    imgs = [a.chart.var(i).scale(c(sum(alpha)) if sum(alpha) else 1) for i, alpha in p.labels]
    m = PolynomialMap(a.chart, p.atlas.chart, imgs)
    return BundleMorphism(a, p.atlas, {(u, u): m for u in a.chart_names})


def check_diag_embedding(diag: BundleMorphism) -> ValidationReport:
    """Total-weight homogeneity and transition compatibility of a diag embedding.

    The source is N-weighted and the target is an n-vector atlas, so weights are
    compared through the total weight |alpha|.
    """
    rep = ValidationReport()
    a, b = diag.source, diag.target
    for (u, v), f in diag.maps.items():
        bad = []
        for z, img in zip(b.chart, f.images):
            w = {monomial_weight(a.chart, mono)[-1] for mono, _ in img.terms}
            if w and w != {sum(z.weight)}:
                bad.append(z.name)
        rep.add("homogeneity", f"{u}->{v}", not bad, f"wrong total weight for {bad}" if bad else "")
    for (u, u2), f in diag.maps.items():
        for (v, v2), g in diag.maps.items():
            if u == v:
                continue
            gs, gt = a.transition_map(u, v), b.transition_map(u2, v2)
            if gs is None or gt is None:
                continue
            ok = gt.compose(f) == g.compose(gs)
            rep.add("transition", f"{u}->{v}", ok, "" if ok else "embedding does not commute with transitions")
    return rep


def roundtrip_isomorphism(a: Atlas, d: Diagonal, p: PolarizedAtlas, normalization: str = "factorial"):
    """E -> diagonalize(polarize(E)): diag embedding, nice coordinates, then the collapse.

    Returns the morphism and its inverse (diagonal coordinates are rescaled
    copies of the source ones, so the inverse is diagonal as well).
    """
    diag = diag_embedding(a, p, normalization)
    maps, inv = {}, {}
    for u in a.chart_names:
        f = d.nice.change.maps[(u, u)].compose(diag.maps[(u, u)])
        images = [f.images[r] for r in d.representatives]
        m = PolynomialMap(a.chart, d.atlas.chart, images)
        maps[(u, u)] = m
        inv[(u, u)] = _invert_diagonal(m)
    return BundleMorphism(a, d.atlas, maps), BundleMorphism(d.atlas, a, inv)


def _invert_diagonal(m: PolynomialMap) -> PolynomialMap:
    """Inverse of a map whose images are ``c * z`` for distinct source coordinates."""
    images = [None] * len(m.domain)
    for k, img in enumerate(m.images):
        ((mono, c),) = img.terms
        (i,) = mono
        images[i] = m.codomain.var(k).scale(Fraction(1) / c)
    if any(x is None for x in images):
        raise ValueError("map is not a coordinate rescaling")
    return PolynomialMap(m.codomain, m.domain, images)


# -- desuperization -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Desuperized:
    atlas: Atlas
    action: ActionTable
    polarized: PolarizedAtlas


def desuperize(a: Atlas, n: int | None = None, check: bool = True) -> Desuperized:
    """Xi o P^(n): a skew n-vector atlas, purely even for N-manifold input."""
    p = polarize(a, n, check=check)
    b, J = xi_functor(p.atlas, p.action, check=check)
    return Desuperized(b, J, p)


def desuperize_morphism(phi: BundleMorphism, n: int | None = None) -> BundleMorphism:
    return total_reversion_morphism(polarize_morphism(phi, n))
