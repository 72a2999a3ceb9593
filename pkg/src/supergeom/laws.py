"""Seeded invariant suites shared by ``gsa check-laws`` and the test-suite.

Every suite takes ``(seed, n_max, count)`` and returns :class:`LawResult` rows;
identical arguments give identical rows.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import perms
from .bundle import (
    Atlas,
    BundleKind,
    BundleMorphism,
    check_morphism,
    core_bundle,
    dilation,
    euler_fields_commute,
    permute_atlas,
    permute_morphism,
    restrict_map_to_core,
    restrict_to_weight,
    validate_atlas,
    weight_derivation,
)
from .dsl import emit_atlas, from_json, parse_atlas, to_json
from .fixtures import cross_term_atlas, symmetric_tangent_fixture, weighted_fixture
from .generators import (
    random_atlas_on,
    random_derivation,
    random_manifold_atlas,
    random_morphism_on,
    random_polynomial,
    random_vector_atlas,
    random_vector_chart,
    random_weighted_chart,
    rng_for,
)
from .parity import koszul_sign, phi_iso, total_reversion, total_reversion_morphism
from .polar import (
    check_diag_embedding,
    desuperize,
    desuperize_morphism,
    diag_embedding,
    diagonalize,
    polarize,
    roundtrip_isomorphism,
)
from .superalg import Chart, Coordinate, Polynomial, PolynomialMap, apply_derivation, bracket, parity_of, partial
from .symmetry import SKEW, is_nice, nice_coordinates, validate_action, xi_functor, xi_inverse
from .tangent import iterated_tangent, tangent_chart, tangent_lift, tangent_of_atlas, tangent_of_map


@dataclass
class LawResult:
    suite: str
    law: str
    cases: int = 0
    failures: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def record(self, ok: bool, detail: str = "") -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if detail and not self.detail:
                self.detail = detail

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status}  {self.suite:<11} {self.law:<38} {self.cases - self.failures}/{self.cases}"
        return out + (f"  ({self.detail})" if self.detail and not self.ok else "")


class _Rows:
    def __init__(self, suite: str):
        self.suite = suite
        self.rows: dict[str, LawResult] = {}

    def __call__(self, law: str) -> LawResult:
        if law not in self.rows:
            self.rows[law] = LawResult(self.suite, law)
        return self.rows[law]

    def done(self) -> list[LawResult]:
        return list(self.rows.values())


def _algebra_chart() -> Chart:
    return Chart([Coordinate(n, 0) for n in ("x", "y", "u")] + [Coordinate(n, 1) for n in ("s", "t", "r")])


def suite_algebra(seed: int, n_max: int = 3, count: int = 250) -> list[LawResult]:
    rows = _Rows("algebra")
    rng = rng_for(seed)
    c = _algebra_chart()
    for _ in range(count):
        pa, pb = rng.randint(0, 1), rng.randint(0, 1)
        a = random_polynomial(rng, c, pa, max_degree=3)
        b = random_polynomial(rng, c, pb, max_degree=3)
        d = random_polynomial(rng, c, max_degree=2)
        sign = -1 if (parity_of(a) == 1 and parity_of(b) == 1) else 1
        rows("supercommutativity").record(a * b == (b * a).scale(sign))
        rows("associativity").record((a * b) * d == a * (b * d))
        rows("distributivity").record(a * (b + d) == a * b + a * d)
        D = random_derivation(rng, c, rng.randint(0, 1))
        s = -1 if (D.parity and parity_of(a) == 1) else 1
        rows("leibniz").record(apply_derivation(D, a * b) == apply_derivation(D, a) * b + (a * apply_derivation(D, b)).scale(s))
        z = rng.randrange(len(c))
        sz = -1 if (c[z].parity and parity_of(a) == 1) else 1
        rows("partial leibniz").record(partial(a * b, z) == partial(a, z) * b + (a * partial(b, z)).scale(sz))
        again = Polynomial(c, dict(a.terms))
        rows("canonical form idempotent").record(again == a and again.terms == a.terms and (a * c.one()).terms == a.terms)
    return rows.done()


def _koszul_oracle(alpha, sigma) -> int:
    # labels of the 1-entries of alpha read off along alpha o sigma; sign of that word
    word = [sigma[k] for k in range(len(sigma)) if alpha[sigma[k]]]
    inversions = sum(1 for i, j in itertools.combinations(range(len(word)), 2) if word[i] > word[j])
    return -1 if inversions % 2 else 1


def suite_koszul(seed: int, n_max: int = 4, count: int | None = None) -> list[LawResult]:
    """Exhaustive over n <= n_max; ``seed`` and ``count`` are unused (deterministic by construction)."""
    rows = _Rows("koszul")
    for n in range(1, n_max + 1):
        group = perms.all_perms(n)
        ident = perms.identity(n)
        for alpha in itertools.product((0, 1), repeat=n):
            rows("sgn(a, id) = +1").record(koszul_sign(alpha, ident) == 1)
            for s in group:
                rows("independent oracle").record(koszul_sign(alpha, s) == _koszul_oracle(alpha, s))
                if all(alpha):
                    rows("full weight gives sgn(sigma)").record(koszul_sign(alpha, s) == perms.sign(s))
                for s1 in group:
                    lhs = koszul_sign(alpha, perms.compose(s1, s))
                    rhs = koszul_sign(perms.act(alpha, s1), s) * koszul_sign(alpha, s1)
                    rows(f"multiplicativity n={n}").record(lhs == rhs, f"alpha={alpha} s'={s1} s={s}")
    return rows.done()


def _vector_pair(rng, n: int, max_per_weight: int):
    kind = BundleKind.vector(n)
    c1 = random_vector_chart(rng, n, max_per_weight)
    c2 = random_vector_chart(rng, n, max_per_weight)
    a1, p1 = random_atlas_on(rng, kind, c1, n_charts=2, steps=2)
    a2, p2 = random_atlas_on(rng, kind, c2, n_charts=2, steps=2)
    return a1, a2, random_morphism_on(rng, a1, p1, a2, p2)


def suite_phi(seed: int, n_max: int = 3, count: int = 20) -> list[LawResult]:
    rows = _Rows("phi")
    rng = rng_for(seed)
    cross_term = cross_term_atlas()
    pi = total_reversion(cross_term)
    z = pi.chart.var(3)
    a, b = pi.chart.var(1), pi.chart.var(2)
    rows("cross-term transition").record(pi.transition_map("U", "V").images[3] == z - a * b)
    phi = phi_iso(cross_term, (1, 0)).on("U")
    src = phi.domain
    rows("cross-term Phi").record(phi.images == (src.var(0), src.var(1), src.var(2), -src.var(3)))
    n = min(3, n_max)
    group = perms.all_perms(n)
    for _ in range(count):
        e1, e2, f = _vector_pair(rng, n, 3 if rng.random() < 0.25 else 2)
        rows("random morphism valid").record(check_morphism(f).ok)
        # Pi(E^s) and (Pi E^s')^s are shared by many of the checks below
        pe = {s: permute_atlas(e1, s) for s in group}
        rev = {s: total_reversion(pe[s]) for s in group}
        rev_e1 = total_reversion(e1)
        pf = total_reversion_morphism(f)
        phis = {s: phi_iso(e1, s, rev[s], permute_atlas(rev_e1, s)) for s in group}
        for s in group:
            p = phis[s]
            rows("Phi is a morphism").record(check_morphism(p).ok)
            lhs = phi_iso(e2, s).compose(total_reversion_morphism(permute_morphism(f, s)))
            rhs = permute_morphism(pf, s).compose(p)
            rows("naturality").record(lhs == rhs, f"sigma={s}")
        for s1 in group:
            rev_s1 = rev[s1]
            for s in group:
                lhs = phis[perms.compose(s1, s)]
                inner = phi_iso(pe[s1], s, rev[perms.compose(s1, s)], permute_atlas(rev_s1, s))
                rhs = permute_morphism(phis[s1], s).compose(inner)
                rows("composition").record(lhs == rhs, f"s'={s1} s={s}")
    return rows.done()


def suite_flip(seed: int, n_max: int = 3, count: int = 3) -> list[LawResult]:
    rows = _Rows("flip")
    rng = rng_for(seed)
    for _ in range(count):
        m = random_manifold_atlas(rng, 1, 1, n_charts=2)
        tt = iterated_tangent(m, 2)
        kappa = tt.flip_map((1, 0))
        rows("kappa^2 = id").record(kappa.compose(kappa) == PolynomialMap.identity(tt.atlas.chart))
        k = min(3, n_max)
        it = iterated_tangent(m, k)
        act = it.action()
        group = perms.all_perms(k)
        for s in group:
            for s1 in group:
                rows("group law").record(act.entries[perms.compose(s1, s)]["U"] == act.entries[s1]["U"].compose(act.entries[s]["U"]))
        for i, j in itertools.combinations(range(1, k + 1), 2):
            tau = perms.transposition(k, i, j)
            m_tau = act.entries[tau]["U"]
            core = restrict_map_to_core(m_tau, it.atlas, i, j)
            rows("transposition is identity on core").record(all(img == it.atlas.chart.var(q) for q, img in core))
        rep = validate_action(it.atlas, act)
        rows("validate_action").record(rep.ok, "; ".join(f"{c.name} {c.subject}" for c in rep.failures[:3]))
    return rows.done()


def suite_nice(seed: int, n_max: int = 3, count: int = 10) -> list[LawResult]:
    rows = _Rows("nice")
    for case in range(count):
        k = 2 + case % max(1, min(n_max, 3) - 1)
        a, act = symmetric_tangent_fixture((seed, case), k)
        rows("fixture action is not nice").record(not is_nice(act, _tangent_labels(a, k)))
        res = nice_coordinates(a, act, check=False)
        rows("nice for every sigma").record(len(res.action.entries) == len(perms.all_perms(k)) and is_nice(res.action, res.labels))
        rows("change passes check_morphism").record(check_morphism(res.change).ok)
        rows("inverse passes check_morphism").record(check_morphism(res.inverse).ok)
        ident = all(res.inverse.on(u).compose(res.change.on(u)) == PolynomialMap.identity(a.chart) for u in a.chart_names)
        rows("inverse o change = id").record(ident)
        rows("new atlas valid").record(validate_atlas(res.atlas).ok)
    return rows.done()


def _tangent_labels(a: Atlas, k: int):
    # positions of T^(k) charts follow iterated_tangent; labels only need the (stem, alpha) pairs
    from .symmetry import _stem

    out = []
    for c in a.chart:
        out.append((_stem(c.name), c.weight[:k]))
    return out


def suite_xi(seed: int, n_max: int = 3, count: int = 6) -> list[LawResult]:
    rows = _Rows("xi")
    for case in range(count):
        if case % 2 == 0:
            k = 2 + (case // 2) % max(1, min(n_max, 3) - 1)
            a, act = symmetric_tangent_fixture((seed, case), k, conjugate=case % 4 == 0)
            graded = False
        else:
            degree = 2 + (case // 2) % 2 if n_max >= 3 else 2
            p = polarize(weighted_fixture((seed, case), degree, nmanifold=True), check=False)
            a, act = p.atlas, p.action
            graded = True
        b, J = xi_functor(a, act, check=False)
        rep = validate_action(b, J)
        rows("skew action validates").record(J.flavor == SKEW and rep.ok,
                                             "; ".join(f"{c.name} {c.subject}" for c in rep.failures[:3]))
        rows("reversed atlas valid").record(validate_atlas(b).ok)
        if graded:
            rows("[n]-vector input gives even output").record(all(c.parity == 0 for c in b.chart))
        a2, act2 = xi_inverse(b, J)
        full = act.completed()
        same = all(act2.entries[s][u] == full.entries[s][u] for s in full.entries for u in full.entries[s])
        rows("xi_inverse recovers the action").record(a2.chart == a.chart and same)
    return rows.done()


def suite_polar(seed: int, n_max: int = 3, count: int = 10) -> list[LawResult]:
    rows = _Rows("polar")
    top = max(1, min(n_max, 3))
    for case in range(count):
        degree = 1 + case % top
        a = weighted_fixture((seed, case), degree, max_per_weight=1 + (case // top) % 2)
        p = polarize(a, check=False)
        rows("polarization valid").record(validate_atlas(p.atlas).ok)
        rows("flip action valid").record(validate_action(p.atlas, p.action).ok)
        d = diagonalize(p, check=False)
        rows("diagonal atlas valid").record(validate_atlas(d.atlas).ok)
        iso, inv = roundtrip_isomorphism(a, d, p)
        rows("roundtrip isomorphism").record(check_morphism(iso).ok and check_morphism(inv).ok)
        ident = all(inv.on(u).compose(iso.on(u)) == PolynomialMap.identity(a.chart) for u in a.chart_names)
        rows("inverse o iso = id").record(ident)
        diag = diag_embedding(a, p, "factorial")
        rows("diag embedding commutes").record(check_diag_embedding(diag).ok)
        fixed = all(
            per[u].compose(diag.maps[(u, u)]) == diag.maps[(u, u)]
            for per in p.action.entries.values() for u in a.chart_names
        )
        rows("diag image fixed by flips").record(fixed)
    return rows.done()


def _nmanifold_triple(rng, degree: int):
    kind = BundleKind.weighted(degree)
    out = []
    for _ in range(3):
        c = random_weighted_chart(rng, degree, 1, n_base=1, nmanifold=True)
        out.append(random_atlas_on(rng, kind, c, n_charts=2, steps=2, nmanifold=True))
    (a1, p1), (a2, p2), (a3, p3) = out
    return (a1, a2, a3), random_morphism_on(rng, a1, p1, a2, p2), random_morphism_on(rng, a2, p2, a3, p3)


def suite_desuperize(seed: int, n_max: int = 3, count: int = 6) -> list[LawResult]:
    rows = _Rows("desuperize")
    rng = rng_for(seed)
    top = max(2, min(n_max, 3))
    for case in range(count):
        degree = 2 + case % (top - 1)
        a = weighted_fixture((seed, case), degree, nmanifold=True)
        ds = desuperize(a, check=False)
        rows("output purely even").record(all(c.parity == 0 for c in ds.atlas.chart))
        rows("output validates as skew").record(ds.action.flavor == SKEW and validate_action(ds.atlas, ds.action).ok)
        (a1, a2, a3), f, g = _nmanifold_triple(rng, degree)
        lf, lg = desuperize_morphism(f), desuperize_morphism(g)
        rows("functor preserves composition").record(desuperize_morphism(g.compose(f)) == lg.compose(lf))
        rows("image morphism valid").record(check_morphism(lf).ok)
    return rows.done()


def suite_tangent(seed: int, n_max: int = 3, count: int = 25) -> list[LawResult]:
    rows = _Rows("tangent")
    rng = rng_for(seed)
    c = Chart([Coordinate("x", 0), Coordinate("y", 0), Coordinate("s", 1), Coordinate("t", 1)])
    for _ in range(count):
        for px, py in itertools.product((0, 1), repeat=2):
            X = random_derivation(rng, c, px)
            Y = random_derivation(rng, c, py)
            ok = bracket(tangent_lift(X, c), tangent_lift(Y, c)) == tangent_lift(bracket(X, Y), c)
            rows("lift respects bracket").record(ok)
        f = random_polynomial(rng, c, rng.randint(0, 1), terms=3, max_degree=3)
        for i, j in itertools.combinations(range(len(c)), 2):
            sign = -1 if (c[i].parity and c[j].parity) else 1
            rows("graded Schwarz (partials)").record(partial(partial(f, i), j) == partial(partial(f, j), i).scale(sign))
        rows("graded Schwarz (T^2 flip)").record(_schwarz_t2(c, f))
    m = random_manifold_atlas(rng, 1, 1, n_charts=2)
    tm = tangent_of_atlas(m)
    ttm = tangent_of_atlas(tm)
    rows("lift of Euler field").record(tangent_lift(weight_derivation(tm, 1), tm) == weight_derivation(ttm, 2))
    return rows.done()


def _schwarz_t2(c: Chart, f: Polynomial) -> bool:
    """The second-order part of T^(2) f is symmetric under the canonical flip."""
    fc = Chart([Coordinate("f", parity_of(f) if parity_of(f) in (0, 1) else 0)])
    m = PolynomialMap(c, fc, [f])
    t1c, t1f = tangent_chart(c), tangent_chart(fc)
    m1 = tangent_of_map(m, t1c, t1f)
    t2c, t2f = tangent_chart(t1c.chart), tangent_chart(t1f.chart)
    m2 = tangent_of_map(m1, t2c, t2f)
    atlas = Atlas(BundleKind.manifold(), c, ("U",))
    kappa = iterated_tangent(atlas, 2).flip_map((1, 0))
    chart = kappa.domain
    from .bundle import rechart

    m2 = rechart(m2, chart, m2.codomain)
    pos = {z.name: k for k, z in enumerate(m2.codomain)}
    top = m2.images[pos["f@(1,1)"]]
    mixed = m2.images[pos["f@(1,0)"]]
    other = m2.images[pos["f@(0,1)"]]
    return kappa(top) == top and kappa(mixed) == other


def suite_bundle(seed: int, n_max: int = 3, count: int = 6) -> list[LawResult]:
    rows = _Rows("bundle")
    rng = rng_for(seed)
    for case in range(count):
        n = 1 + case % max(1, min(n_max, 3))
        a = random_vector_atlas(rng, n, 2, n_charts=3, steps=2)
        rows("random atlas valid").record(validate_atlas(a).ok)
        rows("Euler fields commute").record(euler_fields_commute(a))
        h2, h3, h6 = dilation(a, 2), dilation(a, 3), dilation(a, 6)
        rows("h_t o h_s = h_ts").record(h2.compose(h3) == h6)
        rows("h_1 = id").record(dilation(a, 1) == BundleMorphism.identity(a))
        for alpha in itertools.product((0, 1), repeat=n):
            if any(alpha):
                rows("restrict_to_weight valid").record(validate_atlas(restrict_to_weight(a, alpha)).ok)
        for i, j in itertools.combinations(range(1, n + 1), 2):
            rows("core bundle valid").record(validate_atlas(core_bundle(a, i, j)).ok)
    return rows.done()


def suite_dsl(seed: int, n_max: int = 3, count: int = 8) -> list[LawResult]:
    rows = _Rows("dsl")
    rng = rng_for(seed)
    for case in range(count):
        if case % 3 == 2:
            a = weighted_fixture((seed, case), 1 + case % 3)
            act = None
        elif case % 3 == 1:
            a, act = symmetric_tangent_fixture((seed, case), 2, conjugate=False)
        else:
            a = random_vector_atlas(rng, 1 + case % max(1, min(n_max, 3)), 2, steps=2)
            act = None
        text = emit_atlas(a, "dsl", act)
        doc = parse_atlas(text)
        rows("parse o emit = id").record(doc.atlas == a)
        rows("emit o parse o emit = emit").record(emit_atlas(doc.atlas, "dsl", doc.action) == text)
        j = from_json(to_json(a, act))
        rows("JSON mirror agrees with DSL").record(j.atlas == doc.atlas and emit_atlas(j.atlas, "dsl", j.action) == text)
    return rows.done()


SUITES = {
    "algebra": suite_algebra,
    "koszul": suite_koszul,
    "phi": suite_phi,
    "flip": suite_flip,
    "tangent": suite_tangent,
    "bundle": suite_bundle,
    "nice": suite_nice,
    "xi": suite_xi,
    "polar": suite_polar,
    "desuperize": suite_desuperize,
    "dsl": suite_dsl,
}


def run_suite(name: str, seed: int, n_max: int = 3, count: int | None = None) -> list[LawResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = SUITES[name]
    if name == "koszul":
        return fn(seed, n_max)
    return fn(seed, n_max) if count is None else fn(seed, n_max, count)
