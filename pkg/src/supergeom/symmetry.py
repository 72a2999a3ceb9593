"""Symmetric group actions on n-vector atlases.

An :class:`ActionTable` stores, for each permutation sigma, the automorphism
I^sigma : E -> E^sigma chart by chart as a :class:`PolynomialMap` (pullbacks of
the coordinates).  Composition follows the maps: ``I^{s's} = I^{s'} o I^s``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Mapping

from . import perms
from .bundle import (
    Atlas,
    BundleMorphism,
    Transition,
    ValidationError,
    ValidationReport,
    check_morphism,
    core_indices,
    permute_atlas,
    rechart,
    validate_atlas,
    weight_derivation,
)
from .parity import (
    inverse_total_reversion,
    koszul_sign,
    phi_iso,
    reverse_map,
    total_reversion,
    total_reversion_map,
)
from .superalg import (
    Chart,
    Coordinate,
    GsaError,
    InternalInvariantError,
    Polynomial,
    PolynomialMap,
    apply_derivation,
    restrict,
    substitute,
)

SYMMETRIC, SKEW = "symmetric", "skew"


class ActionError(GsaError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ActionTable:
    atlas: Atlas
    entries: Mapping[tuple, Mapping[str, PolynomialMap]] = field(default_factory=dict)
    flavor: str = SYMMETRIC

    @property
    def n(self) -> int:
        return self.atlas.kind.vector_slots

    def is_complete(self) -> bool:
        return len(self.entries) == factorial(self.n) and all(
            set(e) == set(self.atlas.chart_names) for e in self.entries.values()
        )

    def map(self, sigma, chart: str) -> PolynomialMap:
        return self.entries[tuple(sigma)][chart]

    def morphism(self, sigma) -> BundleMorphism:
        """I^sigma as a morphism E -> E^sigma."""
        sigma = tuple(sigma)
        tgt = permute_atlas(self.atlas, sigma)
        maps = {(u, u): rechart(m, self.atlas.chart, tgt.chart) for u, m in self.entries[sigma].items()}
        return BundleMorphism(self.atlas, tgt, maps)

    def with_charts(self) -> ActionTable:
        """Fill missing chart entries by transport along transitions, I_V = g_VU o I_U o g_UV."""
        a = self.atlas
        out = {}
        for sigma, per_chart in self.entries.items():
            known = dict(per_chart)
            queue = deque(known)
            while queue:
                u = queue.popleft()
                for v in a.chart_names:
                    if v in known:
                        continue
                    g_vu, g_uv = a.transition_map(u, v), a.transition_map(v, u)
                    if g_vu is None or g_uv is None:
                        continue
                    known[v] = g_vu.compose(known[u]).compose(g_uv)
                    queue.append(v)
            out[sigma] = known
        return ActionTable(a, out, self.flavor)

    def completed(self) -> ActionTable:
        """Close the table under composition (generators are enough)."""
        table = self.with_charts()
        n = self.n
        entries = dict(table.entries)
        ident = perms.identity(n)
        if ident not in entries:
            entries[ident] = {u: PolynomialMap.identity(self.atlas.chart) for u in self.atlas.chart_names}
        gens = [s for s in entries if s != ident]
        queue = deque(entries)
        while queue and len(entries) < factorial(n):
            s = queue.popleft()
            for g in gens:
                t = perms.compose(s, g)
                if t in entries:
                    continue
                entries[t] = {u: entries[s][u].compose(entries[g][u]) for u in entries[s]}
                queue.append(t)
        return ActionTable(self.atlas, entries, self.flavor)

    def conjugated(self, atlas: Atlas, change: Mapping[str, PolynomialMap], inverse: Mapping[str, PolynomialMap]) -> ActionTable:
        """The same action seen through chart-wise coordinate changes ``change[U]``."""
        out = {}
        for sigma, per in self.entries.items():
            out[sigma] = {u: change[u].compose(m).compose(inverse[u]) for u, m in per.items()}
        return ActionTable(atlas, out, self.flavor)


def _core_report(act: ActionTable, rep: ValidationReport) -> None:
    a = act.atlas
    n = act.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            tau = perms.transposition(n, i, j)
            if tau not in act.entries:
                continue
            keep = core_indices(a, i, j)
            ident = {k: k for k in keep}
            for u, m in act.entries[tau].items():
                bad = []
                for k in keep:
                    img = restrict(m.images[k], a.chart, ident)
                    fiber = a.chart[k].weight[i - 1] == 1
                    sign = -1 if (fiber and act.flavor == SKEW) else 1
                    if img != a.chart.var(k).scale(sign):
                        bad.append(a.chart[k].name)
                detail = f"{act.flavor} core condition fails for {bad}" if bad else ""
                rep.add("core", f"({i} {j}) on {u}", not bad, detail)


def validate_action(a: Atlas, act: ActionTable) -> ValidationReport:
    """Morphism property, Euler-field permutation, group law and core condition."""
    rep = ValidationReport()
    if not a.kind.is_vector:
        rep.add("kind", "action", False, "actions need an n-vector atlas")
        return rep
    if act.flavor not in (SYMMETRIC, SKEW):
        rep.add("flavor", "action", False, f"unknown flavor {act.flavor!r}")
        return rep
    n = a.kind.vector_slots
    for sigma in act.entries:
        if len(sigma) != n or not perms.is_perm(sigma):
            rep.add("group", str(sigma), False, f"not a permutation of size {n}")
            return rep
    table = act.with_charts()
    ident = perms.identity(n)
    adj = perms.adjacent_transpositions(n)
    name = lambda s: "sigma(" + perms.format_perm(s) + ")"

    # defining relations among the given generators
    def entry(s, u):
        return table.entries[s][u]

    for u in a.chart_names:
        I = PolynomialMap.identity(a.chart)
        for k, s in enumerate(adj):
            if s not in table.entries or u not in table.entries[s]:
                continue
            rep.add("relation", f"{name(s)}^2 on {u}", entry(s, u).compose(entry(s, u)) == I)
            for t in adj[k + 1:]:
                if t not in table.entries or u not in table.entries[t]:
                    continue
                st = entry(s, u).compose(entry(t, u))
                power = 3 if adj.index(t) == k + 1 else 2
                acc = I
                for _ in range(power):
                    acc = acc.compose(st)
                rep.add("relation", f"({name(s)} {name(t)})^{power} on {u}", acc == I)
    full = table.completed()
    if not full.is_complete():
        rep.add("group", "action", False, "the entries do not generate a full table on every chart")
        return rep
    for u in a.chart_names:
        rep.add("group", f"identity on {u}", full.entries[ident][u] == PolynomialMap.identity(a.chart))
        for s in full.entries:
            for g in adj:
                lhs = full.entries[perms.compose(s, g)][u]
                rhs = full.entries[s][u].compose(full.entries[g][u])
                if lhs != rhs:
                    rep.add("group", f"{name(s)}*{name(g)} on {u}", False, "I^{s g} != I^s o I^g")
    rep.add("group", "law", not any(c.name == "group" and not c.ok for c in rep.checks))
    # each entry is an n-vector bundle morphism E -> E^sigma
    eulers = [weight_derivation(a, i) for i in range(1, n + 1)]
    for s in full.entries:
        sub = check_morphism(full.morphism(s))
        rep.add("morphism", name(s), sub.ok, "; ".join(f"{c.name} {c.subject}" for c in sub.failures))
        ok = True
        for u, m in full.entries[s].items():
            for k, img in enumerate(m.images):
                w = a.chart[k].weight
                for i in range(n):
                    if apply_derivation(eulers[i], img) != img.scale(w[s[i]]):
                        ok = False
        rep.add("euler", name(s), ok, "" if ok else "I^sigma does not push nabla^i to nabla^sigma(i)")
    _core_report(full, rep)
    return rep


def is_nice(act: ActionTable, labels) -> bool:
    """Check ``z_alpha o I^sigma = z_{alpha^sigma}`` for a labelling ``labels[k] = (key, alpha)``."""
    a = act.atlas
    pos = {lab: k for k, lab in enumerate(labels)}
    for s, per in act.entries.items():
        for m in per.values():
            for k, (key, alpha) in enumerate(labels):
                target = pos[(key, perms.act(alpha, s))]
                if m.images[k] != a.chart.var(target):
                    return False
    return True


# -- nice coordinates ---------------------------------------------------------

_WEIGHT_TAG = re.compile(r"@\([\d,]*\)")


def _stem(name: str) -> str:
    return _WEIGHT_TAG.sub("", name)


def _format_weight(alpha) -> str:
    return "@(" + ",".join(map(str, alpha)) + ")"


@dataclass(frozen=True, eq=False)
class NiceResult:
    atlas: Atlas
    action: ActionTable
    change: BundleMorphism      # old coordinates -> nice coordinates
    inverse: BundleMorphism
    labels: tuple               # (representative coordinate name, alpha) per position


def _nice_chart(a: Atlas) -> tuple[Chart, list, dict]:
    """Positions and names of the nice chart; returns (chart, labels, source) where
    ``source[k] = index of the representative coordinate y^A`` for fiber positions."""
    n = a.kind.vector_slots
    chart = a.chart
    by_weight: dict[tuple, list[int]] = {}
    for k, c in enumerate(chart):
        by_weight.setdefault(c.weight, []).append(k)
    coords = list(chart.coords)
    labels = [None] * len(chart)
    source = {}
    for k in chart.base_indices():
        labels[k] = (chart[k].name, chart[k].weight)
    for m in range(1, n + 1):
        beta = (1,) * m + (0,) * (n - m)
        omega = by_weight.get(beta, [])
        for alpha in {w for w in by_weight if sum(w) == m} | {beta}:
            positions = by_weight.get(alpha, [])
            for parity in (0, 1):
                reps = [k for k in omega if chart[k].parity == parity]
                slots = [k for k in positions if chart[k].parity == parity]
                if len(reps) != len(slots):
                    raise ActionError(
                        f"weight {alpha} has {len(slots)} coordinates of parity {parity}, weight {beta} has {len(reps)}"
                    )
                for k, r in zip(slots, reps):
                    coords[k] = Coordinate(_stem(chart[r].name) + _format_weight(alpha), parity, alpha)
                    labels[k] = (chart[r].name, alpha)
                    source[k] = r
        for alpha in (w for w in perms_weights(n, m) if w not in by_weight):
            if omega:
                raise ActionError(f"no coordinates of weight {alpha} but {len(omega)} of weight {beta}")
    names = [c.name for c in coords]
    if len(set(names)) != len(names):
        coords = [Coordinate(f"{c.name}#{k}", c.parity, c.weight) if not c.is_base else c for k, c in enumerate(coords)]
    return Chart(coords), labels, source


def perms_weights(n: int, m: int):
    for ones in combinations(range(n), m):
        yield tuple(1 if i in ones else 0 for i in range(n))


def _linear_split(p: Polynomial, chart: Chart):
    """Split ``p`` into {fiber index: left coefficient (base polynomial)} and the rest."""
    linear: dict[int, dict] = {}
    rest = {}
    for mono, c in p._terms.items():
        fib = [pos for pos, i in enumerate(mono) if not chart[i].is_base]
        if len(fib) == 1:
            pos = fib[0]
            f = mono[pos]
            after = sum(1 for i in mono[pos + 1:] if chart[i].parity)
            sign = -1 if (chart[f].parity and after & 1) else 1
            base = mono[:pos] + mono[pos + 1:]
            linear.setdefault(f, {})
            linear[f][base] = linear[f].get(base, 0) + sign * c
        else:
            rest[mono] = c
    return {f: Polynomial(chart, t) for f, t in linear.items()}, Polynomial(chart, rest)


def nice_coordinates(a: Atlas, act: ActionTable, check: bool = True) -> NiceResult:
    """Coordinates ``z^A_alpha`` with ``z^A_alpha o I^sigma = z^A_{alpha^sigma}``.

    Coordinates of weight beta = (1..1,0..0) are averaged over Stab(beta); the
    others are transported along the orbit.  The inverse change is found by
    iterating ``y = K(z - N(y))`` and then checked exactly.
    """
    if act.flavor != SYMMETRIC:
        raise ActionError("nice coordinates need a symmetric action")
    if check:
        rep = validate_action(a, act)
        if not rep.ok:
            raise ValidationError(rep, "action is not a valid symmetric action:\n" + str(rep))
    full = act.completed()
    n = a.kind.vector_slots
    new_chart, labels, source = _nice_chart(a)
    old = a.chart
    change, inverse = {}, {}
    for u in a.chart_names:
        I = full.entries
        # z_beta for every representative
        zbeta = {}
        for r in set(source.values()):
            beta = old[r].weight
            stab = perms.stabilizer(beta)
            acc = old.zero()
            for t in stab:
                acc = acc + substitute(old.var(r), I[t][u])
            zbeta[r] = acc.scale(Fraction(1, len(stab)))
        images = []
        for k, c in enumerate(new_chart):
            if k not in source:
                images.append(old.var(k))
                continue
            r = source[k]
            beta, alpha = old[r].weight, c.weight
            orbit = [s for s in perms.all_perms(n) if perms.act(beta, s) == alpha]
            acc = old.zero()
            for s in orbit:
                acc = acc + substitute(zbeta[r], I[s][u])
            images.append(acc.scale(Fraction(1, perms.stabilizer_order(beta))))
        C = PolynomialMap(old, new_chart, images)
        D = _invert_change(C, old, new_chart, source, I, u, n)
        ident_old, ident_new = PolynomialMap.identity(old), PolynomialMap.identity(new_chart)
        if D.compose(C) != ident_old or C.compose(D) != ident_new:
            raise InternalInvariantError(f"nice coordinate change on {u} could not be inverted")
        change[u], inverse[u] = C, D
    ts = []
    for t in a.transitions:
        f = change[t.target].compose(t.forward).compose(inverse[t.source])
        g = change[t.source].compose(t.inverse).compose(inverse[t.target])
        ts.append(Transition(t.source, t.target, f, g))
    b = a.replace(chart=new_chart, transitions=tuple(ts))
    new_act = ActionTable(b, full.entries, SYMMETRIC).conjugated(b, change, inverse)
    ch = BundleMorphism(a, b, {(u, u): change[u] for u in a.chart_names})
    inv = BundleMorphism(b, a, {(u, u): inverse[u] for u in a.chart_names})
    return NiceResult(b, new_act, ch, inv, tuple(labels))


def _invert_change(C: PolynomialMap, old: Chart, new: Chart, source, I, u, n) -> PolynomialMap:
    base = old.base_indices()
    base_map = {k: k for k in base}
    # K: y^B restricted to E[alpha], expressed through z^A_alpha
    K: dict[int, list] = {}
    for k, c in enumerate(old):
        if c.is_base:
            continue
        alpha = c.weight
        m = sum(alpha)
        beta = (1,) * m + (0,) * (n - m)
        s0 = next(s for s in perms.all_perms(n) if perms.act(beta, s) == alpha)
        pulled = substitute(old.var(k), I[perms.inverse(s0)][u])
        lin, _ = _linear_split(pulled, old)
        terms = []
        for r, coef in lin.items():
            # position of z^{A_r}_alpha in the new chart
            target = next(j for j, src in source.items() if src == r and new[j].weight == alpha)
            terms.append((restrict(coef, new, base_map), target))
        K[k] = terms
    nonlinear = {}
    for k in range(len(old)):
        if k in source:
            _, nonlinear[k] = _linear_split(C.images[k], old)
    y = [new.var(k) if old[k].is_base else new.zero() for k in range(len(old))]
    for _ in range(n + 2):
        est = PolynomialMap(new, old, y)
        z_minus = {}
        for j in source:
            z_minus[j] = new.var(j) - substitute(nonlinear[j], est)
        y_new = list(y)
        for k, terms in K.items():
            acc = new.zero()
            for coef, j in terms:
                acc = acc + coef * z_minus[j]
            y_new[k] = acc
        if y_new == y:
            break
        y = y_new
    return PolynomialMap(new, old, y)


# -- the equivalence functor ----------------------------------------------------


def xi_functor(a: Atlas, act: ActionTable, check: bool = True) -> tuple[Atlas, ActionTable]:
    """(Pi E, J) with ``J^sigma = Phi^sigma o Pi(I^sigma)``."""
    if act.flavor != SYMMETRIC:
        raise ActionError("xi_functor needs a symmetric action")
    if check:
        rep = validate_action(a, act)
        if not rep.ok:
            raise ValidationError(rep, "input action is not a valid symmetric action:\n" + str(rep))
    full = act.completed()
    n = a.kind.vector_slots
    pa = total_reversion(a)
    entries = {}
    for s, per in full.entries.items():
        es = permute_atlas(a, s)
        phi = phi_iso(a, s).on(a.chart_names[0])
        out = {}
        for u, m in per.items():
            pm = total_reversion_map(rechart(m, a.chart, es.chart), n)
            out[u] = rechart(phi.compose(pm), pa.chart, pa.chart)
        entries[s] = out
    return pa, ActionTable(pa, entries, SKEW)


def xi_inverse(b: Atlas, J: ActionTable) -> tuple[Atlas, ActionTable]:
    """Undo :func:`xi_functor`: strip the Koszul signs and reverse parities back."""
    if J.flavor != SKEW:
        raise ActionError("xi_inverse needs a skew action")
    full = J.completed()
    n = b.kind.vector_slots
    a = inverse_total_reversion(b)
    entries = {}
    for s, per in full.entries.items():
        es = permute_atlas(a, s)
        src = total_reversion(es)
        signs = [koszul_sign(c.weight, s) for c in a.chart]
        out = {}
        for u, m in per.items():
            undressed = PolynomialMap(b.chart, src.chart, [p.scale(x) for p, x in zip(m.images, signs)])
            back = undressed
            for slot in range(1, n + 1):
                back = reverse_map(back, slot)
            out[u] = rechart(back, a.chart, a.chart)
        entries[s] = out
    return a, ActionTable(a, entries, SYMMETRIC)
