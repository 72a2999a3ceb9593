"""Atlases of N-weighted bundles and n-vector bundles.

An :class:`Atlas` is a single model coordinate system (a :class:`Chart`) shared
by a set of named charts, plus polynomial transition maps between them.  Weight
tuples are laid out as ``(vector slots..., weighted slot)``: an N-weighted
bundle of degree d has weights ``(w,)``; an n-vector bundle has weights in
``{0,1}^n``; the tangent functor prepends one vector slot.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import perms
from .superalg import (
    ANY,
    Chart,
    ChartMismatchError,
    Coordinate,
    Derivation,
    GsaError,
    Polynomial,
    PolynomialMap,
    apply_derivation,
    bracket,
    monomial_weight,
    restrict,
    weight_and_parity,
)


class ValidationError(GsaError):
    def __init__(self, report: "ValidationReport", message: str = ""):
        self.report = report
        super().__init__(message or f"validation failed:\n{report}")


@dataclass(frozen=True)
class BundleKind:
    """Shape of the weight tuples.

    ``vector_slots`` slots take values in {0,1}; when ``degree`` is set a final
    N-valued slot bounded by ``degree`` follows.
    """

    vector_slots: int = 0
    degree: int | None = None

    @classmethod
    def weighted(cls, degree: int) -> BundleKind:
        return cls(0, degree)

    @classmethod
    def vector(cls, n: int) -> BundleKind:
        return cls(n, None)

    @classmethod
    def manifold(cls) -> BundleKind:
        return cls(0, None)

    @property
    def is_vector(self) -> bool:
        return self.degree is None and self.vector_slots > 0

    @property
    def is_weighted(self) -> bool:
        return self.degree is not None and self.vector_slots == 0

    @property
    def is_manifold(self) -> bool:
        return self.degree is None and self.vector_slots == 0

    @property
    def weight_length(self) -> int:
        return self.vector_slots + (self.degree is not None)

    def bounds(self) -> tuple[int, ...]:
        return (1,) * self.vector_slots + ((self.degree,) if self.degree is not None else ())

    def describe(self) -> str:
        if self.is_manifold:
            return "manifold"
        if self.is_vector:
            return f"{self.vector_slots}-vector"
        if self.is_weighted:
            return f"N-weighted of degree {self.degree}"
        return f"{self.vector_slots}-vector over N-weighted of degree {self.degree}"


@dataclass(frozen=True)
class Transition:
    """Change of coordinates from chart ``source`` to chart ``target``.

    ``forward.images`` are the target coordinates written in source coordinates;
    ``inverse`` is the declared inverse (never computed).
    """

    source: str
    target: str
    forward: PolynomialMap
    inverse: PolynomialMap


@dataclass(frozen=True, eq=False)
class Atlas:
    kind: BundleKind
    chart: Chart
    chart_names: tuple[str, ...]
    transitions: tuple[Transition, ...] = ()
    overlaps: tuple[tuple[str, str, str], ...] = ()
    nmanifold: bool = False

    def __post_init__(self):
        if len(set(self.chart_names)) != len(self.chart_names):
            raise ValueError("duplicate chart names")
        known = set(self.chart_names)
        for t in self.transitions:
            if t.source not in known or t.target not in known:
                raise ValueError(f"transition {t.source}->{t.target} refers to an unknown chart")
            for m in (t.forward, t.inverse):
                if m.domain != self.chart or m.codomain != self.chart:
                    raise ChartMismatchError("transition maps must live on the atlas chart")
        for tri in self.overlaps:
            if not set(tri) <= known:
                raise ValueError(f"overlap {tri} refers to an unknown chart")

    # -- lookups ----------------------------------------------------------

    def transition_map(self, source: str, target: str) -> PolynomialMap | None:
        if source == target:
            return PolynomialMap.identity(self.chart)
        for t in self.transitions:
            if t.source == source and t.target == target:
                return t.forward
            if t.source == target and t.target == source:
                return t.inverse
        return None

    def coordinate_weights(self) -> list[tuple[int, ...]]:
        return [c.weight for c in self.chart.coords]

    def replace(self, **changes) -> Atlas:
        fields = dict(
            kind=self.kind,
            chart=self.chart,
            chart_names=self.chart_names,
            transitions=self.transitions,
            overlaps=self.overlaps,
            nmanifold=self.nmanifold,
        )
        fields.update(changes)
        return Atlas(**fields)

    def map_transitions(self, fn, chart: Chart | None = None, **changes) -> Atlas:
        """New atlas whose transition maps are ``fn(map)`` (forward and inverse)."""
        chart = self.chart if chart is None else chart
        ts = tuple(Transition(t.source, t.target, fn(t.forward), fn(t.inverse)) for t in self.transitions)
        return self.replace(chart=chart, transitions=ts, **changes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Atlas):
            return NotImplemented
        return atlas_equal(self, other)

    __hash__ = None


def atlas_equal(a: Atlas, b: Atlas, *, names: bool = True, flags: bool = True) -> bool:
    """Exact equality of atlases.

    With ``names=False`` coordinates compare by position; ``flags=False`` ignores
    the N-manifold flag.
    """
    if a.kind != b.kind or (flags and a.nmanifold != b.nmanifold):
        return False
    if set(a.chart_names) != set(b.chart_names) or set(a.overlaps) != set(b.overlaps):
        return False
    if names:
        if a.chart.signature != b.chart.signature:
            return False
    elif [(c.parity, c.weight) for c in a.chart] != [(c.parity, c.weight) for c in b.chart]:
        return False
    ta = {(t.source, t.target): t for t in a.transitions}
    tb = {(t.source, t.target): t for t in b.transitions}
    if ta.keys() != tb.keys():
        return False
    for key, t in ta.items():
        u = tb[key]
        for m1, m2 in ((t.forward, u.forward), (t.inverse, u.inverse)):
            if [p.terms for p in m1.images] != [p.terms for p in m2.images]:
                return False
    return True


@dataclass(frozen=True, eq=False)
class BundleMorphism:
    """A morphism given chart by chart: ``maps[(U, V)]`` sends chart U of ``source``
    into chart V of ``target``."""

    source: Atlas
    target: Atlas
    maps: Mapping[tuple[str, str], PolynomialMap] = field(default_factory=dict)

    def compose(self, inner: BundleMorphism) -> BundleMorphism:
        """``self o inner``."""
        out = {}
        for (u, v), m in inner.maps.items():
            for (v2, w), n in self.maps.items():
                if v2 == v:
                    out[(u, w)] = n.compose(m)
        return BundleMorphism(inner.source, self.target, out)

    def on(self, chart: str) -> PolynomialMap:
        for (u, _), m in self.maps.items():
            if u == chart:
                return m
        raise KeyError(chart)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BundleMorphism):
            return NotImplemented
        if self.maps.keys() != other.maps.keys():
            return False
        return all(self.maps[k] == other.maps[k] for k in self.maps)

    __hash__ = None

    @classmethod
    def identity(cls, atlas: Atlas, target: Atlas | None = None) -> BundleMorphism:
        target = atlas if target is None else target
        return cls(atlas, target, {(u, u): PolynomialMap.identity(atlas.chart, target.chart) for u in atlas.chart_names})

    @classmethod
    def chartwise(cls, source: Atlas, target: Atlas, fn) -> BundleMorphism:
        """Same-named charts paired; ``fn(chart_name)`` gives the map."""
        return cls(source, target, {(u, u): fn(u) for u in source.chart_names})


# -- validation ---------------------------------------------------------------


@dataclass
class Check:
    name: str
    subject: str
    ok: bool
    detail: str = ""

    def __str__(self) -> str:
        mark = "ok  " if self.ok else "FAIL"
        return f"{mark} {self.name:<14} {self.subject}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, subject: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, subject, bool(ok), detail))
        return bool(ok)

    def extend(self, other: ValidationReport, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(c.name, prefix + c.subject, c.ok, c.detail))

    def raise_if_failed(self) -> None:
        if not self.ok:
            raise ValidationError(self)

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.checks)


def _check_kind(a: Atlas, rep: ValidationReport) -> None:
    bounds = a.kind.bounds()
    for c in a.chart:
        if len(c.weight) != len(bounds):
            rep.add("kind", c.name, False, f"weight {c.weight} has wrong length for {a.kind.describe()}")
            continue
        bad = [x for x, b in zip(c.weight, bounds) if x < 0 or x > b]
        rep.add("kind", c.name, not bad, f"weight {c.weight} outside bounds {bounds}" if bad else "")
    if a.nmanifold:
        for c in a.chart:
            if c.is_base:
                rep.add("nmanifold", c.name, c.parity == 0, "base coordinate must be even")
            else:
                total = sum(c.weight)
                rep.add("nmanifold", c.name, c.parity == total % 2, f"parity {c.parity} vs weight {total}")


def _map_problems(m: PolynomialMap) -> list[tuple[str, str, str]]:
    """(check, coordinate, detail) for every structural defect of a transition map."""
    out = []
    for z, img in zip(m.codomain.coords, m.images):
        w, e = weight_and_parity(img)
        if w is not ANY and w != z.weight:
            out.append(("homogeneity", z.name, f"image weight {w}, expected {z.weight}"))
        if e is not ANY and e != z.parity:
            out.append(("parity", z.name, f"image parity {e}, expected {z.parity}"))
        if z.is_base and not all(m.domain.coords[i].is_base for i in img.variables()):
            out.append(("base", z.name, "base coordinate image involves fiber coordinates"))
    return out


def validate_atlas(a: Atlas) -> ValidationReport:
    rep = ValidationReport()
    _check_kind(a, rep)
    ident = PolynomialMap.identity(a.chart)
    for t in a.transitions:
        subj = f"{t.source}->{t.target}"
        problems = _map_problems(t.forward) + [(c, n + " (inverse)", d) for c, n, d in _map_problems(t.inverse)]
        for check, name, detail in problems:
            rep.add(check, f"{subj}:{name}", False, detail)
        for check in ("homogeneity", "parity", "base"):
            if not any(p[0] == check for p in problems):
                rep.add(check, subj, True)
        rep.add("inverse", subj, t.forward.compose(t.inverse) == ident and t.inverse.compose(t.forward) == ident)
    for (u, v, w) in a.overlaps:
        g_vu, g_wv, g_wu = a.transition_map(u, v), a.transition_map(v, w), a.transition_map(u, w)
        if None in (g_vu, g_wv, g_wu):
            rep.add("cocycle", f"{u},{v},{w}", False, "missing transition on declared overlap")
            continue
        rep.add("cocycle", f"{u},{v},{w}", g_wu == g_wv.compose(g_vu))
    return rep


# -- weight fields and dilations ----------------------------------------------


def _slot_weights(a: Atlas, slot: int | None) -> list[int]:
    """Per-coordinate weight used by the field/dilation selected by ``slot`` (1-based)."""
    if slot is not None:
        if not 1 <= slot <= a.kind.weight_length:
            raise ValueError(f"slot {slot} out of range for {a.kind.describe()}")
        return [c.weight[slot - 1] for c in a.chart]
    if a.kind.degree is not None:
        return [c.weight[-1] for c in a.chart]
    return [sum(c.weight) for c in a.chart]


def weight_derivation(a: Atlas, slot: int | None = None) -> Derivation:
    ws = _slot_weights(a, slot)
    comps = [a.chart.var(i).scale(w) if w else a.chart.zero() for i, w in enumerate(ws)]
    return Derivation(a.chart, comps, 0)


def weight_vector_field(a: Atlas, slot: int | None = None) -> dict[str, Derivation]:
    """The weight (Euler) vector field on every chart.

    ``slot`` picks one Euler field of a multi-graded atlas; by default the
    N-weighted field, or the total field of an n-vector atlas.  Raises
    :class:`ValidationError` if some transition does not relate the field to itself.
    """
    D = weight_derivation(a, slot)
    ws = _slot_weights(a, slot)
    rep = ValidationReport()
    for t in a.transitions:
        for m, tag in ((t.forward, ""), (t.inverse, " inverse")):
            for k, img in enumerate(m.images):
                ok = apply_derivation(D, img) == img.scale(ws[k])
                if not ok:
                    rep.add("weight-field", f"{t.source}->{t.target}{tag}:{a.chart[k].name}", False)
    rep.raise_if_failed()
    return {u: D for u in a.chart_names}


def euler_fields_commute(a: Atlas) -> bool:
    fields = [weight_derivation(a, s) for s in range(1, a.kind.weight_length + 1)]
    return all(bracket(x, y).is_zero() for i, x in enumerate(fields) for y in fields[i + 1:])


def dilation(a: Atlas, t, slot: int | None = None) -> BundleMorphism:
    """``h_t``: every coordinate scaled by ``t`` to the power of its weight."""
    t = Fraction(t)
    ws = _slot_weights(a, slot)
    imgs = [a.chart.var(i).scale(t**w) for i, w in enumerate(ws)]
    m = PolynomialMap(a.chart, a.chart, imgs)
    return BundleMorphism.chartwise(a, a, lambda u: m)


def _dilate(p: Polynomial, ws: list[int], t: Fraction) -> Polynomial:
    """``p o h_t`` for the diagonal dilation with per-coordinate weights ``ws``."""
    out = {}
    for mono, c in p._terms.items():
        c = c * t ** sum(ws[i] for i in mono)
        if c:
            out[mono] = c
    return Polynomial._raw(p.chart, out)


def check_morphism(m: BundleMorphism) -> ValidationReport:
    """Weight/parity preservation, dilation intertwining and transition compatibility."""
    rep = ValidationReport()
    src, tgt = m.source, m.target
    if src.kind.weight_length != tgt.kind.weight_length:
        rep.add("kind", "morphism", False, "weight tuples of different lengths")
        return rep
    covered = {u for (u, _) in m.maps}
    for u in src.chart_names:
        rep.add("coverage", u, u in covered, "" if u in covered else "no map defined on this chart")
    for (u, v), f in m.maps.items():
        if f.domain != src.chart or f.codomain != tgt.chart:
            rep.add("charts", f"{u}->{v}", False, "map does not connect the atlas charts")
            continue
        bad = []
        for z, img in zip(tgt.chart.coords, f.images):
            w, _ = weight_and_parity(img)
            # parity is enforced by PolynomialMap itself
            if not (w is ANY or (w == z.weight and all(monomial_weight(src.chart, mono) == z.weight for mono, _ in img.terms))):
                bad.append(z.name)
        rep.add("homogeneity", f"{u}->{v}", not bad, f"non-homogeneous images for {bad}" if bad else "")
        # h_t o f = f o h_t; both dilations are diagonal, so compare term by term
        for slot in range(1, src.kind.weight_length + 1):
            ws_src, ws_tgt = _slot_weights(src, slot), _slot_weights(tgt, slot)
            for t in (Fraction(0), Fraction(2), Fraction(3)):
                for k, img in enumerate(f.images):
                    if img.scale(t ** ws_tgt[k]) != _dilate(img, ws_src, t):
                        rep.add("dilation", f"{u}->{v}", False, f"slot {slot}, t={t}")
                        break
    # compatibility with transitions on both sides
    for (u, u2), f in m.maps.items():
        for (v, v2), g in m.maps.items():
            if u == v:
                continue
            gs = src.transition_map(u, v)
            gt = tgt.transition_map(u2, v2)
            if gs is None or gt is None:
                continue
            rep.add("transition", f"{u}->{v}", gt.compose(f) == g.compose(gs))
    return rep


# -- derived bundles -----------------------------------------------------------


def _sub_atlas(a: Atlas, keep: list[int], new_coords: list[Coordinate], kind: BundleKind, **changes) -> Atlas:
    chart = Chart(new_coords)
    index_map = {old: new for new, old in enumerate(keep)}

    def cut(m: PolynomialMap) -> PolynomialMap:
        return PolynomialMap(chart, chart, [restrict(m.images[k], chart, index_map) for k in keep])

    return a.map_transitions(cut, chart=chart, kind=kind, **changes)


def restrict_to_weight(a: Atlas, alpha: Iterable[int]) -> Atlas:
    """The vector bundle E[alpha]: base coordinates plus those of weight ``alpha``."""
    alpha = tuple(alpha)
    if not a.kind.is_vector:
        raise ValueError("restrict_to_weight needs an n-vector atlas")
    if len(alpha) != a.kind.vector_slots or any(x not in (0, 1) for x in alpha):
        raise ValueError(f"weight {alpha} is not in {{0,1}}^{a.kind.vector_slots}")
    if not any(alpha):
        raise ValueError("alpha must be non-zero")
    keep = [i for i, c in enumerate(a.chart) if c.is_base or c.weight == alpha]
    coords = [Coordinate(a.chart[i].name, a.chart[i].parity, (0,) if a.chart[i].is_base else (1,)) for i in keep]
    return _sub_atlas(a, keep, coords, BundleKind.vector(1), nmanifold=False)


def core_bundle(a: Atlas, i: int, j: int) -> Atlas:
    """The (i,j)-core: coordinates with equal i-th and j-th weights, as a vector
    bundle over M_ij (fiber = weight 1 in both slots)."""
    if not a.kind.is_vector:
        raise ValueError("core_bundle needs an n-vector atlas")
    if i == j:
        raise ValueError("core needs two distinct slots")
    n = a.kind.vector_slots
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("slot out of range")
    keep = [k for k, c in enumerate(a.chart) if c.weight[i - 1] == c.weight[j - 1]]
    coords = [Coordinate(a.chart[k].name, a.chart[k].parity, (a.chart[k].weight[i - 1],)) for k in keep]
    return _sub_atlas(a, keep, coords, BundleKind.vector(1), nmanifold=False)


def core_indices(a: Atlas, i: int, j: int) -> list[int]:
    return [k for k, c in enumerate(a.chart) if c.weight[i - 1] == c.weight[j - 1]]


def restrict_map_to_core(m: PolynomialMap, a: Atlas, i: int, j: int) -> list:
    """Images of the core coordinates with all non-core coordinates set to zero.

    Returned as ``[(k, image)]`` with images still over ``m.domain``."""
    keep = set(core_indices(a, i, j))
    ident = {k: k for k in keep}
    return [(k, restrict(m.images[k], m.domain, ident)) for k in sorted(keep)]


def permute_atlas(a: Atlas, sigma: perms.Perm) -> Atlas:
    """E^sigma: same coordinates, vector-slot weights reindexed ``w -> w o sigma``."""
    n = a.kind.vector_slots
    sigma = tuple(sigma)
    if len(sigma) != n:
        raise ValueError(f"permutation of size {len(sigma)} for {n} vector slots")
    coords = []
    for c in a.chart:
        vec, rest = c.weight[:n], c.weight[n:]
        coords.append(Coordinate(c.name, c.parity, perms.act(vec, sigma) + rest))
    chart = Chart(coords)

    def move(m: PolynomialMap) -> PolynomialMap:
        return PolynomialMap(chart, chart, [restrict(p, chart, _ID) for p in m.images])

    return a.map_transitions(move, chart=chart)


def permute_morphism(m: BundleMorphism, sigma: perms.Perm) -> BundleMorphism:
    """P^sigma(phi): the same maps viewed between the permuted atlases."""
    src, tgt = permute_atlas(m.source, sigma), permute_atlas(m.target, sigma)
    return BundleMorphism(src, tgt, {k: rechart(f, src.chart, tgt.chart) for k, f in m.maps.items()})


class _Identity(dict):
    def __missing__(self, key):
        return key


_ID = _Identity()


def rechart(m: PolynomialMap, domain: Chart, codomain: Chart) -> PolynomialMap:
    """Same images, attached to structurally compatible charts (weights may differ)."""
    return PolynomialMap(domain, codomain, [restrict(p, domain, _ID) for p in m.images])


def redeclare_degree(a: Atlas, degree: int) -> Atlas:
    """View a degree-n N-weighted atlas as one of degree ``degree >= n``."""
    if not a.kind.is_weighted:
        raise ValueError("only N-weighted atlases carry a degree")
    top = max((c.weight[0] for c in a.chart), default=0)
    if degree < top:
        raise ValueError(f"atlas has weight {top} > {degree}")
    return a.replace(kind=BundleKind.weighted(degree))
