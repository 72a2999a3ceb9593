"""Exact supercommutative polynomial arithmetic.

A :class:`Chart` is an ordered list of coordinates, each with a parity and a weight
tuple.  A :class:`Polynomial` over a chart stores monomials as sorted tuples of
coordinate positions mapped to :class:`fractions.Fraction` coefficients.  The sort
order is the chart's declaration order; every Koszul sign is realized while
sorting, and a monomial with a repeated odd factor is zero.

Derivatives are *left* derivatives: to differentiate with respect to ``z`` one
moves ``z`` to the front of the monomial first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

EVEN, ODD = 0, 1

Scalar = Union[int, Fraction]
Monomial = tuple[int, ...]


class GsaError(Exception):
    """Base class for errors raised by this package."""


class ChartMismatchError(GsaError, ValueError):
    pass


class ParityError(GsaError, ValueError):
    pass


class MissingAssignmentError(GsaError, ValueError):
    pass


class InternalInvariantError(GsaError, RuntimeError):
    """Raised when data that should be impossible by construction shows up."""


class _Marker:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


# zero polynomial: any weight, any parity
ANY = _Marker("ANY")
INHOMOGENEOUS = _Marker("INHOMOGENEOUS")
MIXED = _Marker("MIXED")


@dataclass(frozen=True)
class Coordinate:
    name: str
    parity: int
    weight: tuple[int, ...] = ()

    @property
    def is_base(self) -> bool:
        return not any(self.weight)


class Chart:
    """An ordered coordinate system.

    Two charts are compatible (``==``) when their coordinate names and parities
    agree position by position.  Weights are bundle-structure metadata: the
    permuted bundle E^sigma has the same supermanifold coordinates as E, so
    polynomials over either chart may be mixed freely.
    """

    __slots__ = ("coords", "name", "_index", "_odd", "_key", "_zero_weight")

    def __init__(self, coords: Iterable[Coordinate], name: str = ""):
        coords = tuple(coords)
        index = {}
        for i, c in enumerate(coords):
            if c.name in index:
                raise ValueError(f"duplicate coordinate {c.name!r}")
            if c.parity not in (EVEN, ODD):
                raise ValueError(f"bad parity {c.parity!r} for {c.name!r}")
            index[c.name] = i
        lengths = {len(c.weight) for c in coords}
        if len(lengths) > 1:
            raise ValueError("coordinate weights have different lengths")
        self.coords = coords
        self.name = name
        self._index = index
        self._odd = tuple(bool(c.parity) for c in coords)
        self._key = tuple((c.name, c.parity) for c in coords)
        self._zero_weight = (0,) * (lengths.pop() if lengths else 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Chart) and (self is other or self._key == other._key)

    def __hash__(self) -> int:
        return hash(self._key)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> Coordinate:
        return self.coords[i]

    def __repr__(self) -> str:
        inner = ", ".join(f"{c.name}:{'odd' if c.parity else 'even'}@{c.weight}" for c in self.coords)
        return f"Chart({inner})"

    @property
    def signature(self) -> tuple:
        return tuple((c.name, c.parity, c.weight) for c in self.coords)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coords)

    @property
    def weight_length(self) -> int:
        return len(self._zero_weight)

    def index(self, z) -> int:
        if isinstance(z, int):
            if not 0 <= z < len(self.coords):
                raise IndexError(z)
            return z
        if isinstance(z, Coordinate):
            z = z.name
        elif isinstance(z, Polynomial):
            return z.as_coordinate_index()
        try:
            return self._index[z]
        except KeyError:
            raise ChartMismatchError(f"unknown coordinate {z!r}") from None

    def coordinate(self, z) -> Coordinate:
        return self.coords[self.index(z)]

    def var(self, z) -> Polynomial:
        return Polynomial._raw(self, {(self.index(z),): Fraction(1)})

    def vars(self) -> tuple[Polynomial, ...]:
        return tuple(self.var(i) for i in range(len(self.coords)))

    def zero(self) -> Polynomial:
        return Polynomial._raw(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: Scalar) -> Polynomial:
        c = Fraction(c)
        return Polynomial._raw(self, {(): c} if c else {})

    def base_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.coords) if c.is_base]


def _canonical_monomial(mono: Iterable[int], odd: tuple[bool, ...]) -> tuple[int, Monomial | None]:
    """Sort factors into chart order; return (sign, monomial) or (0, None)."""
    lst = list(mono)
    sign = 1
    for k in range(1, len(lst)):
        x = lst[k]
        j = k - 1
        while j >= 0 and lst[j] > x:
            if odd[x] and odd[lst[j]]:
                sign = -sign
            lst[j + 1] = lst[j]
            j -= 1
        lst[j + 1] = x
    for a, b in zip(lst, lst[1:]):
        if a == b and odd[a]:
            return 0, None
    return sign, tuple(lst)


def _mono_mul(m1: Monomial, m2: Monomial, odd: tuple[bool, ...]) -> tuple[int, Monomial | None]:
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    if m1[-1] < m2[0]:
        return 1, m1 + m2
    out = []
    sign = 1
    i = j = 0
    n1, n2 = len(m1), len(m2)
    odd_left = sum(1 for x in m1 if odd[x])
    while i < n1 and j < n2:
        a, b = m1[i], m2[j]
        if a < b or (a == b and not odd[a]):
            out.append(a)
            if odd[a]:
                odd_left -= 1
            i += 1
        elif a == b:
            return 0, None
        else:
            if odd[b] and odd_left & 1:
                sign = -sign
            out.append(b)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return sign, tuple(out)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"unsupported scalar {c!r}")


class Polynomial:
    """Immutable supercommutative polynomial in canonical form."""

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[Iterable[int], Scalar] | None = None):
        acc: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            s, m = _canonical_monomial(mono, chart._odd)
            if not s:
                continue
            acc[m] = acc.get(m, Fraction(0)) + s * _as_fraction(c)
        self.chart = chart
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, chart: Chart, terms: dict[Monomial, Fraction]) -> Polynomial:
        p = object.__new__(cls)
        p.chart = chart
        p._terms = terms
        p._hash = None
        return p

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items())

    def coefficient(self, mono: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=-1)

    def variables(self) -> set[int]:
        return {i for m in self._terms for i in m}

    def as_coordinate_index(self) -> int:
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            if len(m) == 1 and c == 1:
                return m[0]
        raise ValueError(f"{self} is not a coordinate")

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.chart == other.chart and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return self._terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.chart != self.chart:
                raise ChartMismatchError("polynomials live on different charts")
            return other
        return self.chart.const(_as_fraction(other))

    def __add__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.chart, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def scale(self, c: Scalar) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return self.chart.zero()
        return Polynomial._raw(self.chart, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return normalize_mul(self, other)

    def __rmul__(self, other) -> Polynomial:
        # scalars are even and central
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = self.chart.one()
        for _ in range(k):
            out = out * self
        return out


def normalize_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Product in canonical form."""
    if a.chart != b.chart:
        raise ChartMismatchError("cannot multiply polynomials on different charts")
    odd = a.chart._odd
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in a._terms.items():
        for m2, c2 in b._terms.items():
            s, m = _mono_mul(m1, m2, odd)
            if not s:
                continue
            v = out.get(m, 0) + (c1 * c2 if s > 0 else -c1 * c2)
            if v:
                out[m] = v
            else:
                del out[m]
    return Polynomial._raw(a.chart, out)


def partial(p: Polynomial, z) -> Polynomial:
    """Left partial derivative of ``p`` with respect to coordinate ``z``."""
    k = p.chart.index(z)
    odd = p.chart._odd
    out: dict[Monomial, Fraction] = {}
    for mono, c in p._terms.items():
        if k not in mono:
            continue
        pos = mono.index(k)
        if odd[k]:
            passed = sum(1 for x in mono[:pos] if odd[x])
            c = -c if passed & 1 else c
        else:
            c = c * mono.count(k)
        m = mono[:pos] + mono[pos + 1:]
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return Polynomial._raw(p.chart, out)


def monomial_weight(chart: Chart, mono: Monomial) -> tuple[int, ...]:
    w = list(chart._zero_weight)
    for i in mono:
        for k, x in enumerate(chart.coords[i].weight):
            w[k] += x
    return tuple(w)


def monomial_parity(chart: Chart, mono: Monomial) -> int:
    return sum(1 for i in mono if chart._odd[i]) & 1


def weight_and_parity(p: Polynomial):
    """Common (weight, parity) of all terms, or INHOMOGENEOUS / MIXED; ANY for zero."""
    if p.is_zero():
        return ANY, ANY
    weights = {monomial_weight(p.chart, m) for m in p._terms}
    parities = {monomial_parity(p.chart, m) for m in p._terms}
    w = weights.pop() if len(weights) == 1 else INHOMOGENEOUS
    e = parities.pop() if len(parities) == 1 else MIXED
    return w, e


def parity_of(p: Polynomial):
    """Common parity of the terms, MIXED, or ANY for zero (cheaper than weight_and_parity)."""
    odd = p.chart._odd
    e = ANY
    for mono in p._terms:
        x = sum(1 for i in mono if odd[i]) & 1
        if e is ANY:
            e = x
        elif x != e:
            return MIXED
    return e


def is_homogeneous(p: Polynomial, weight: tuple[int, ...] | None = None, parity: int | None = None) -> bool:
    if p.is_zero():
        return True
    w, e = weight_and_parity(p)
    if weight is not None and w != tuple(weight):
        return False
    if parity is not None and e != parity:
        return False
    return w is not INHOMOGENEOUS and e is not MIXED


def restrict(p: Polynomial, chart: Chart, index_map: Mapping[int, int]) -> Polynomial:
    """Re-express ``p`` on ``chart``; coordinates missing from ``index_map`` become zero.

    ``index_map`` must be monotone so that canonical order (and signs) are kept.
    """
    out: dict[Monomial, Fraction] = {}
    for mono, c in p._terms.items():
        try:
            m = tuple(index_map[i] for i in mono)
        except KeyError:
            continue
        out[m] = out.get(m, 0) + c
    return Polynomial._raw(chart, {m: c for m, c in out.items() if c})


def reindex(p: Polynomial, chart: Chart, index_map: Mapping[int, int]) -> Polynomial:
    """Rename coordinates via an arbitrary (not necessarily monotone) injective map."""
    return Polynomial(chart, {tuple(index_map[i] for i in m): c for m, c in p._terms.items()})


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    """Deterministic rendering: terms in canonical order, reduced fractions.

    Within a term, fiber factors are written before base factors (linear
    coordinates first, coefficient functions to the right); the reordering sign
    is folded into the rational coefficient.
    """
    if p.is_zero():
        return "0"
    chart = p.chart
    odd = chart._odd
    pieces = []
    for mono, c in sorted(p._terms.items()):
        fiber = [i for i in mono if not chart.coords[i].is_base]
        base = [i for i in mono if chart.coords[i].is_base]
        # sign of moving the odd fiber factors in front of the odd base factors
        swaps = 0
        for i in fiber:
            if odd[i]:
                swaps += sum(1 for b in base if b < i and odd[b])
        if swaps & 1:
            c = -c
        factors = []
        for i in fiber + base:
            name = chart.coords[i].name
            if factors and factors[-1][0] == name:
                factors[-1][1] += 1
            else:
                factors.append([name, 1])
        factors = [name if k == 1 else f"{name}^{k}" for name, k in factors]
        mag = abs(c)
        if not factors:
            body = format_fraction(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = format_fraction(mag) + "*" + "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, body in pieces[1:]:
        out += f" {s} {body}"
    return out


class Derivation:
    """A derivation ``D = sum_A D(z^A) d/dz^A`` acting by the graded Leibniz rule."""

    __slots__ = ("chart", "components", "parity")

    def __init__(self, chart: Chart, components: Iterable[Polynomial], parity: int | None = None):
        comps = tuple(components)
        if len(comps) != len(chart):
            raise ValueError("one component per coordinate is required")
        for c in comps:
            if c.chart != chart:
                raise ChartMismatchError("derivation component on a foreign chart")
        found = set()
        for z, c in zip(chart.coords, comps):
            e = parity_of(c)
            if e is MIXED:
                raise ParityError(f"component for {z.name} is not parity-homogeneous")
            if e is not ANY:
                found.add((e + z.parity) & 1)
        if len(found) > 1:
            raise ParityError("derivation components have inconsistent parity")
        if found:
            inferred = found.pop()
            if parity is not None and parity != inferred:
                raise ParityError("declared derivation parity disagrees with components")
            parity = inferred
        self.chart = chart
        self.components = comps
        self.parity = parity or 0

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping, parity: int | None = None) -> Derivation:
        out = [chart.zero()] * len(chart)
        for k, v in comps.items():
            out[chart.index(k)] = v if isinstance(v, Polynomial) else chart.const(v)
        return cls(chart, out, parity)

    @classmethod
    def zero(cls, chart: Chart, parity: int = 0) -> Derivation:
        return cls(chart, [chart.zero()] * len(chart), parity)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_derivation(self, p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.chart, self.components))

    def __add__(self, other: Derivation) -> Derivation:
        if other.chart != self.chart:
            raise ChartMismatchError("derivations on different charts")
        return Derivation(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: Derivation) -> Derivation:
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> Derivation:
        return Derivation(self.chart, [x.scale(c) for x in self.components], self.parity)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c})*d/d{z.name}" for z, c in zip(self.chart.coords, self.components) if c
        )
        return f"Derivation({body or '0'})"


def apply_derivation(D: Derivation, p: Polynomial) -> Polynomial:
    if D.chart != p.chart:
        raise ChartMismatchError("derivation and polynomial on different charts")
    out = p.chart.zero()
    for k, comp in enumerate(D.components):
        if comp:
            dp = partial(p, k)
            if dp:
                out = out + comp * dp
    return out


def bracket(D1: Derivation, D2: Derivation) -> Derivation:
    """Graded commutator ``D1 D2 - (-1)^{|D1||D2|} D2 D1``."""
    if D1.chart != D2.chart:
        raise ChartMismatchError("derivations on different charts")
    sgn = -1 if (D1.parity and D2.parity) else 1
    comps = []
    for a, b in zip(D1.components, D2.components):
        comps.append(apply_derivation(D1, b) - apply_derivation(D2, a).scale(sgn))
    return Derivation(D1.chart, comps, (D1.parity + D2.parity) & 1)


class PolynomialMap:
    """A map between charts given by pullbacks of the codomain coordinates.

    ``images[k]`` is the codomain's k-th coordinate written as a polynomial over
    the domain chart.  Images must match the parity of the coordinate they replace.
    """

    __slots__ = ("domain", "codomain", "images", "_hash")

    def __init__(self, domain: Chart, codomain: Chart, images: Iterable[Polynomial]):
        images = tuple(images)
        if len(images) != len(codomain):
            raise MissingAssignmentError(
                f"expected {len(codomain)} images, got {len(images)}"
            )
        for z, img in zip(codomain.coords, images):
            if img.chart != domain:
                raise ChartMismatchError(f"image of {z.name} is not over the domain chart")
            e = parity_of(img)
            if e is MIXED or (e is not ANY and e != z.parity):
                raise ParityError(f"image of {z.name} does not have parity {z.parity}")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self._hash = None

    @classmethod
    def from_assignment(cls, domain: Chart, codomain: Chart, assignment: Mapping) -> PolynomialMap:
        images = []
        for z in codomain.coords:
            if z.name not in assignment:
                raise MissingAssignmentError(f"no image given for coordinate {z.name!r}")
            v = assignment[z.name]
            images.append(v if isinstance(v, Polynomial) else domain.const(v))
        extra = set(assignment) - set(codomain.names)
        if extra:
            raise ChartMismatchError(f"assignment mentions unknown coordinates {sorted(extra)}")
        return cls(domain, codomain, images)

    @classmethod
    def identity(cls, chart: Chart, codomain: Chart | None = None) -> PolynomialMap:
        codomain = chart if codomain is None else codomain
        if len(codomain) != len(chart):
            raise ChartMismatchError("identity between charts of different sizes")
        return cls(chart, codomain, chart.vars())

    def __call__(self, p: Polynomial) -> Polynomial:
        return substitute(p, self)

    def image(self, z) -> Polynomial:
        return self.images[self.codomain.index(z)]

    def compose(self, inner: PolynomialMap) -> PolynomialMap:
        """``self o inner``: first ``inner``, then ``self``."""
        if inner.codomain != self.domain:
            raise ChartMismatchError("composition of maps with mismatched charts")
        return PolynomialMap(inner.domain, self.codomain, [substitute(p, inner) for p in self.images])

    def is_identity(self) -> bool:
        return self.domain == self.codomain and self.images == self.domain.vars()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolynomialMap):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.domain, self.codomain, self.images))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{z.name} -> {p}" for z, p in zip(self.codomain.coords, self.images))
        return f"PolynomialMap({body})"


def substitute(p: Polynomial, m: PolynomialMap) -> Polynomial:
    """Pull ``p`` (over ``m.codomain``) back along ``m`` to a polynomial over ``m.domain``."""
    if p.chart != m.codomain:
        raise ChartMismatchError("polynomial is not over the map's codomain")
    dom = m.domain
    out = dom.zero()
    cache: dict[Monomial, Polynomial] = {(): dom.one()}
    for mono, c in p._terms.items():
        k = len(mono)
        while mono[:k] not in cache:
            k -= 1
        prod = cache[mono[:k]]
        for j in range(k, len(mono)):
            prod = prod * m.images[mono[j]]
            cache[mono[: j + 1]] = prod
            if prod.is_zero():
                break
        if prod:
            out = out + prod.scale(c)
    return out
