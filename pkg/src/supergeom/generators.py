"""Seeded random atlases, morphisms and derivations for property checks.

Every random atlas is built from one reference coordinate system and a random
homogeneous automorphism ``psi_U`` per chart, with its inverse written down
step by step.  Transitions ``psi_V o psi_U^-1`` then satisfy every cocycle
condition exactly.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .bundle import Atlas, BundleKind, BundleMorphism, Transition
from .superalg import Chart, Coordinate, Derivation, Polynomial, PolynomialMap

_COEFFS = [Fraction(x) for x in (1, -1, 2, -2, 3)] + [Fraction(1, 2), Fraction(-1, 3)]


def rng_for(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    # composite seeds such as (seed, case) go through their repr
    return random.Random(repr(seed) if isinstance(seed, tuple) else seed)


def _coeff(rng: random.Random) -> Fraction:
    return rng.choice(_COEFFS)


def _add(w1, w2):
    return tuple(a + b for a, b in zip(w1, w2))


def _fits(w, target) -> bool:
    return all(a <= b for a, b in zip(w, target))


def fiber_monomials(chart: Chart, weight, allowed) -> list[tuple[int, ...]]:
    """All monomials in the ``allowed`` fiber coordinates of total weight ``weight``."""
    weight = tuple(weight)
    fibers = sorted(i for i in allowed if not chart[i].is_base)
    out = []

    def rec(start, acc, w):
        if w == weight:
            out.append(tuple(acc))
            return
        for pos in range(start, len(fibers)):
            i = fibers[pos]
            w2 = _add(w, chart[i].weight)
            if not _fits(w2, weight):
                continue
            nxt = pos + 1 if chart[i].parity else pos
            rec(nxt, acc + [i], w2)

    rec(0, [], tuple(0 for _ in weight))
    return out


def random_homogeneous(rng, chart: Chart, weight, parity: int, allowed, terms: int = 2, base_degree: int = 1) -> Polynomial:
    """Random polynomial of the given weight and parity in the ``allowed`` coordinates."""
    allowed = list(allowed)
    base = [i for i in allowed if chart[i].is_base]
    fibers = fiber_monomials(chart, weight, allowed)
    out = {}
    if not fibers:
        return chart.zero()
    for _ in range(terms):
        f = list(rng.choice(fibers))
        for _ in range(rng.randint(0, base_degree)):
            if base:
                f.append(rng.choice(base))
        par = sum(chart[i].parity for i in f) & 1
        if par != parity:
            odd_base = [i for i in base if chart[i].parity and i not in f]
            if not odd_base:
                continue
            f.append(rng.choice(odd_base))
        p = Polynomial(chart, {tuple(f): _coeff(rng)})
        for m, c in p.terms:
            out[m] = out.get(m, 0) + c
    return Polynomial(chart, out)


# -- charts ---------------------------------------------------------------


def vector_weights(n: int) -> list[tuple[int, ...]]:
    return [w for w in itertools.product((0, 1), repeat=n) if any(w)]


def random_vector_chart(rng, n: int, max_per_weight: int = 2, n_base: int | None = None, graded: bool = False,
                        odd_base: bool = False) -> Chart:
    """Random n-vector chart; ``graded`` forces parity = total weight mod 2 (an [n]-vector chart)."""
    rng = rng_for(rng)
    coords = []
    nb = rng.randint(1, 2) if n_base is None else n_base
    for k in range(nb):
        par = rng.randint(0, 1) if odd_base and not graded else 0
        coords.append(Coordinate(f"u{k + 1}", par, (0,) * n))
    for w in vector_weights(n):
        for k in range(rng.randint(0 if max_per_weight > 1 else 1, max_per_weight)):
            par = sum(w) % 2 if graded else rng.randint(0, 1)
            label = "".join(map(str, w))
            coords.append(Coordinate(f"z{label}_{k + 1}", par, w))
    return Chart(coords)


def random_weighted_chart(rng, degree: int, max_per_weight: int = 2, n_base: int | None = None,
                          nmanifold: bool = False) -> Chart:
    rng = rng_for(rng)
    coords = []
    nb = rng.randint(1, 2) if n_base is None else n_base
    for k in range(nb):
        coords.append(Coordinate(f"x{k + 1}", 0, (0,)))
    names = {1: "xi", 2: "z", 3: "w"}
    for w in range(1, degree + 1):
        lo = 1 if w == degree else 0
        for k in range(rng.randint(lo, max_per_weight)):
            par = w % 2 if nmanifold else rng.randint(0, 1)
            coords.append(Coordinate(f"{names.get(w, 'v' + str(w))}{k + 1}", par, (w,)))
    return Chart(coords)


# -- automorphisms --------------------------------------------------------


def random_automorphism(rng, chart: Chart, steps: int = 3, base_steps: bool = True) -> tuple[PolynomialMap, PolynomialMap]:
    """A random homogeneous automorphism of ``chart`` and its inverse.

    Built from elementary steps ``c -> lambda*c + h(others)``, each inverted explicitly.
    """
    rng = rng_for(rng)
    fwd = PolynomialMap.identity(chart)
    inv = PolynomialMap.identity(chart)
    n = len(chart)
    for _ in range(steps):
        c = rng.randrange(n)
        z = chart[c]
        if z.is_base and not base_steps:
            continue
        others = [i for i in range(n) if i != c]
        if z.is_base:
            others = [i for i in others if chart[i].is_base]
        h = random_homogeneous(rng, chart, z.weight, z.parity, others, terms=rng.randint(1, 2))
        lam = rng.choice([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)])
        imgs = list(chart.vars())
        imgs[c] = chart.var(c).scale(lam) + h
        step = PolynomialMap(chart, chart, imgs)
        back = list(chart.vars())
        back[c] = (chart.var(c) - h).scale(1 / lam)
        step_inv = PolynomialMap(chart, chart, back)
        fwd = step.compose(fwd)
        inv = inv.compose(step_inv)
    return fwd, inv


def atlas_from_charts(kind: BundleKind, chart: Chart, psis: dict, nmanifold: bool = False, triples: bool = True) -> Atlas:
    """Atlas whose chart U is ``psi_U`` applied to the reference coordinates."""
    names = tuple(psis)
    transitions = []
    for a, b in itertools.combinations(names, 2):
        fa, ia = psis[a]
        fb, ib = psis[b]
        transitions.append(Transition(a, b, fb.compose(ia), fa.compose(ib)))
    overlaps = tuple(itertools.combinations(names, 3)) if triples else ()
    return Atlas(kind, chart, names, tuple(transitions), overlaps, nmanifold)


def random_atlas_on(rng, kind: BundleKind, chart: Chart, n_charts: int = 3, steps: int = 3, nmanifold: bool = False):
    """Random atlas on a fixed reference chart; also returns the chart automorphisms."""
    rng = rng_for(rng)
    psis = {"U": (PolynomialMap.identity(chart),) * 2}
    for k in range(1, n_charts):
        psis["UVWXYZ"[k]] = random_automorphism(rng, chart, steps)
    return atlas_from_charts(kind, chart, psis, nmanifold), psis


def random_vector_atlas(rng, n: int, max_per_weight: int = 2, n_charts: int = 3, graded: bool = False, steps: int = 3) -> Atlas:
    rng = rng_for(rng)
    chart = random_vector_chart(rng, n, max_per_weight, graded=graded)
    return random_atlas_on(rng, BundleKind.vector(n), chart, n_charts, steps, nmanifold=graded)[0]


def random_weighted_atlas(rng, degree: int, max_per_weight: int = 2, n_charts: int = 3, nmanifold: bool = False,
                          steps: int = 3) -> Atlas:
    rng = rng_for(rng)
    chart = random_weighted_chart(rng, degree, max_per_weight, nmanifold=nmanifold)
    return random_atlas_on(rng, BundleKind.weighted(degree), chart, n_charts, steps, nmanifold=nmanifold)[0]


def random_manifold_atlas(rng, n_even: int = 1, n_odd: int = 1, n_charts: int = 3, steps: int = 3) -> Atlas:
    """A plain supermanifold atlas; all coordinates have weight ()."""
    rng = rng_for(rng)
    coords = [Coordinate(f"x{k + 1}", 0, ()) for k in range(n_even)]
    coords += [Coordinate(f"t{k + 1}", 1, ()) for k in range(n_odd)]
    chart = Chart(coords)
    psis = {"U": (PolynomialMap.identity(chart),) * 2}
    for k in range(1, n_charts):
        psis["UVWXYZ"[k]] = random_manifold_automorphism(rng, chart, steps)
    return atlas_from_charts(BundleKind.manifold(), chart, psis)


def random_manifold_automorphism(rng, chart: Chart, steps: int = 3):
    """Triangular polynomial automorphism of an unweighted chart (possibly nonlinear)."""
    rng = rng_for(rng)
    fwd = PolynomialMap.identity(chart)
    inv = PolynomialMap.identity(chart)
    n = len(chart)
    for k in range(steps):
        c = rng.randrange(n)
        others = [i for i in range(n) if i != c]
        # one quadratic step keeps transition degrees small after composition
        h = random_polynomial(rng, chart, chart[c].parity, others, terms=2, max_degree=2 if k == 0 else 1)
        lam = rng.choice([Fraction(1), Fraction(-1), Fraction(2)])
        imgs = list(chart.vars())
        imgs[c] = chart.var(c).scale(lam) + h
        back = list(chart.vars())
        back[c] = (chart.var(c) - h).scale(1 / lam)
        fwd = PolynomialMap(chart, chart, imgs).compose(fwd)
        inv = inv.compose(PolynomialMap(chart, chart, back))
    return fwd, inv


def random_polynomial(rng, chart: Chart, parity: int | None = None, allowed=None, terms: int = 3, max_degree: int = 3) -> Polynomial:
    """Random polynomial (weights ignored); ``parity`` restricts to one parity."""
    rng = rng_for(rng)
    allowed = list(range(len(chart))) if allowed is None else list(allowed)
    out = {}
    if not allowed:
        return chart.zero() if parity else chart.const(_coeff(rng))
    for _ in range(terms):
        mono = [rng.choice(allowed) for _ in range(rng.randint(0, max_degree))]
        if parity is not None and (sum(chart[i].parity for i in mono) & 1) != parity:
            odd = [i for i in allowed if chart[i].parity]
            if not odd:
                continue
            mono.append(rng.choice(odd))
        p = Polynomial(chart, {tuple(mono): _coeff(rng)})
        for m, c in p.terms:
            out[m] = out.get(m, 0) + c
    return Polynomial(chart, out)


def random_derivation(rng, chart: Chart, parity: int, terms: int = 2, max_degree: int = 2) -> Derivation:
    rng = rng_for(rng)
    comps = [random_polynomial(rng, chart, (z.parity + parity) & 1, terms=terms, max_degree=max_degree) for z in chart]
    return Derivation(chart, comps, parity)


# -- morphisms --------------------------------------------------------------


def random_chart_map(rng, source: Chart, target: Chart, terms: int = 2) -> PolynomialMap:
    """Random homogeneous map; base images use base coordinates only."""
    rng = rng_for(rng)
    imgs = []
    base = [i for i, c in enumerate(source) if c.is_base]
    everything = list(range(len(source)))
    for z in target:
        allowed = base if z.is_base else everything
        if z.is_base:
            # keep base maps simple: a coordinate of the same parity or a constant shift
            same = [i for i in base if source[i].parity == z.parity]
            p = source.var(rng.choice(same)) if same else source.zero()
            if not z.parity and rng.random() < 0.5:
                p = p + source.const(_coeff(rng))
            imgs.append(p)
            continue
        imgs.append(random_homogeneous(rng, source, z.weight, z.parity, allowed, terms=terms))
    return PolynomialMap(source, target, imgs)


def random_morphism_on(rng, src: Atlas, src_psis: dict, tgt: Atlas, tgt_psis: dict, ref: PolynomialMap | None = None) -> BundleMorphism:
    """Morphism ``psi2_U o ref o psi1_U^-1`` on each chart."""
    rng = rng_for(rng)
    ref = random_chart_map(rng, src.chart, tgt.chart) if ref is None else ref
    maps = {}
    for u in src.chart_names:
        f1, i1 = src_psis[u]
        f2, _ = tgt_psis[u]
        maps[(u, u)] = f2.compose(ref).compose(i1)
    return BundleMorphism(src, tgt, maps)
