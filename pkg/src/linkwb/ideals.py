"""Graded rings ``P/I``, ideals, and the ideal-theoretic operations built on
Groebner bases: membership, sum, product, intersection, colon, elimination and
Hilbert series.

Computations over ``R = P/I`` happen in ``P`` with the relations of ``R``
adjoined; an ideal of ``R`` is represented by its preimage in ``P``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .gb import GroebnerBuilder, Space
from .poly import (
    MonomialOrder,
    Polynomial,
    PolyRing,
    StructuralError,
    as_poly,
    degree_check,
    Inhomogeneous,
)


class Extended(enum.Enum):
    """Sentinels for infinite dimensions and grades."""

    INFINITY = "inf"
    NEG_INFINITY = "-inf"

    def __str__(self):
        return "∞" if self is Extended.INFINITY else "-∞"


INF = Extended.INFINITY
NEG_INF = Extended.NEG_INFINITY


def is_finite(v) -> bool:
    return not isinstance(v, Extended)


class NotHomogeneousError(ValueError):
    pass


def _require_homogeneous(polys: Iterable[Polynomial], what: str):
    for f in polys:
        if isinstance(degree_check(f), Inhomogeneous):
            raise NotHomogeneousError(f"{what} must be homogeneous, got {f}")


class GradedRing:
    """``P = k[x_1..x_n]`` or a quotient ``R = P/I`` by homogeneous relations."""

    def __init__(self, base: PolyRing, relations: Sequence[Polynomial | str] = ()):
        self.base = base
        rels = [as_poly(base, f) for f in relations]
        _require_homogeneous(rels, "ring relations")
        self.relations = tuple(f for f in rels if f)
        self._spaces: dict = {}

    @classmethod
    def poly(cls, names: Sequence[str] | str, degrees: Sequence[int] | None = None,
             p: int | None = None, order: str = "grevlex") -> GradedRing:
        if isinstance(names, str):
            names = [s for s in names.replace(",", " ").split() if s]
        kw = {} if p is None else {"p": p}
        return cls(PolyRing(names, degrees, order=order, **kw))

    # --- identity -------------------------------------------------------
    @property
    def names(self):
        return self.base.names

    @property
    def nvars(self):
        return self.base.nvars

    @property
    def p(self):
        return self.base.p

    @property
    def degrees(self):
        return self.base.degrees

    def __eq__(self, other):
        return (isinstance(other, GradedRing) and self.base == other.base
                and self.gb_of_relations == other.gb_of_relations)

    def __hash__(self):
        return hash((self.base, tuple(self.gb_of_relations)))

    def __repr__(self):
        if not self.relations:
            return f"k[{','.join(self.names)}]"
        return f"k[{','.join(self.names)}]/({', '.join(map(str, self.gb_of_relations))})"

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.gb_of_relations

    @cached_property
    def ambient(self) -> GradedRing:
        return GradedRing(self.base) if self.relations else self

    def quotient(self, polys: Iterable[Polynomial | str]) -> GradedRing:
        extra = [as_poly(self.base, f) for f in polys]
        return GradedRing(self.base, tuple(self.gb_of_relations) + tuple(extra))

    def __truediv__(self, ideal):
        if isinstance(ideal, IdealHandle):
            return self.quotient(ideal.generators)
        return self.quotient(ideal)

    # --- engine glue ----------------------------------------------------
    @cached_property
    def gb_of_relations(self) -> tuple[Polynomial, ...]:
        if not self.relations:
            return ()
        return tuple(buchberger(self.relations, self.base.order, self.base))

    def space(self, twists: Sequence[int]) -> Space:
        key = tuple(twists)
        sp = self._spaces.get(key)
        if sp is None:
            sp = Space(self.base, key)
            if len(self._spaces) < 256:
                self._spaces[key] = sp
        return sp

    def rel_vectors(self, space: Space, comps: Iterable[int] | None = None) -> list[list]:
        """Ring relations placed in each component of ``space``."""
        if comps is None:
            comps = range(space.rank)
        return [space.from_poly(g, c) for c in comps for g in self.gb_of_relations]

    @cached_property
    def _rel_builder(self) -> GroebnerBuilder:
        sp = self.space((0,))
        b = GroebnerBuilder(sp)
        b.add([sp.from_poly(g) for g in self.gb_of_relations], rel=True)
        b.run()
        return b

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form modulo the ring relations."""
        if not self.gb_of_relations or not f:
            return f
        sp = self._rel_builder.space
        return sp.to_poly(self._rel_builder.reduce(sp.from_poly(f)), self.base)

    def element(self, x) -> Polynomial:
        return self.reduce(as_poly(self.base, x))

    def var(self, name) -> Polynomial:
        return self.base.var(name)

    def parse(self, text: str) -> Polynomial:
        return self.base.parse(text)

    def ideal(self, *gens) -> IdealHandle:
        if len(gens) == 1 and isinstance(gens[0], (list, tuple)):
            gens = tuple(gens[0])
        if len(gens) == 1 and isinstance(gens[0], str) and "," in gens[0]:
            from .poly import parse_polys
            gens = tuple(parse_polys(gens[0], self.base))
        return IdealHandle(self, gens)

    def zero_ideal(self) -> IdealHandle:
        return IdealHandle(self, ())

    def unit_ideal(self) -> IdealHandle:
        return IdealHandle(self, (self.base.one(),))

    def maximal_ideal(self) -> IdealHandle:
        return IdealHandle(self, tuple(self.base.gens()))

    @cached_property
    def dim(self) -> int:
        return hilbert_data(self.zero_ideal()).krull_dim


class IdealHandle:
    """An ideal of a :class:`GradedRing`, with a cached reduced GB of its preimage."""

    def __init__(self, ring: GradedRing, generators: Sequence, check_homogeneous: bool = True):
        self.ring = ring
        gens = [as_poly(ring.base, g) for g in generators]
        if check_homogeneous:
            _require_homogeneous(gens, "ideal generators")
        self.generators = tuple(g for g in gens if g)

    def __repr__(self):
        return f"IdealHandle({self})"

    def __str__(self):
        gens = self.mingens()
        return "(" + ", ".join(str(g) for g in gens) + ")" if gens else "(0)"

    @cached_property
    def gb(self) -> tuple[Polynomial, ...]:
        """Reduced Groebner basis of generators + ring relations in ``P``."""
        return tuple(buchberger(tuple(self.ring.gb_of_relations) + self.generators,
                                self.ring.base.order, self.ring.base,
                                rel_count=len(self.ring.gb_of_relations)))

    @cached_property
    def _builder(self) -> GroebnerBuilder:
        sp = self.ring.space((0,))
        b = GroebnerBuilder(sp)
        b.add([sp.from_poly(g) for g in self.gb])
        b.run()
        return b

    def normal_form(self, f) -> Polynomial:
        f = as_poly(self.ring.base, f)
        if not f:
            return f
        sp = self._builder.space
        return sp.to_poly(self._builder.reduce(sp.from_poly(f)), self.ring.base)

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    __contains__ = contains

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        if self.ring != other.ring:
            raise StructuralError("ideals of different rings")
        return self.gb == other.gb

    def __hash__(self):
        return hash(self.gb)

    def __add__(self, other: IdealHandle) -> IdealHandle:
        return ideal_ops("sum", self, other)

    def __mul__(self, other: IdealHandle) -> IdealHandle:
        return ideal_ops("product", self, other)

    def is_unit(self) -> bool:
        return any(not any(e) for g in self.gb for e, _ in g.terms[:1])

    def is_zero(self) -> bool:
        return all(self.ring.reduce(g).is_zero() for g in self.generators)

    def issubset(self, other: IdealHandle) -> bool:
        return all(other.contains(g) for g in self.generators)

    def mingens(self) -> list[Polynomial]:
        """Minimal homogeneous generators in ``R``, each reduced modulo the relations."""
        return _minimal_ideal_generators(self)

    def quotient_ring(self) -> GradedRing:
        return self.ring.quotient(self.generators)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder | str | None = None,
               ring: PolyRing | None = None, rel_count: int = 0) -> list[Polynomial]:
    """Reduced Groebner basis of ``gens`` (zero generators are dropped).

    The first ``rel_count`` generators may be flagged as an existing Groebner
    basis (ring relations); this only skips redundant pairs.
    """
    gens = [g for g in gens if g]
    if ring is None:
        if not gens:
            return []
        ring = gens[0].ring
    if isinstance(order, str):
        order = MonomialOrder(order)
    sp = Space(ring, (0,), order or ring.order)
    b = GroebnerBuilder(sp)
    b.add([sp.from_poly(g) for g in gens[:rel_count]], rel=True)
    b.add([sp.from_poly(g) for g in gens[rel_count:]])
    b.run()
    out = [sp.to_poly(v, ring) for v in b.basis()]
    return out


def normal_form(f, ideal: IdealHandle) -> Polynomial:
    return ideal.normal_form(f)


def ideal_ops(op: str, I: IdealHandle, J: IdealHandle):
    if I.ring != J.ring:
        raise StructuralError("ideals of different rings")
    if op == "sum":
        return IdealHandle(I.ring, I.generators + J.generators)
    if op == "product":
        return IdealHandle(I.ring, [f * g for f in I.generators for g in J.generators])
    if op == "equality":
        return I == J
    raise ValueError(f"unknown ideal operation {op!r}")


# --- elimination-based operations ----------------------------------------

def _elim_ring(base: PolyRing, aux: str = "_t") -> PolyRing:
    name = aux
    while name in base.names:
        name += "_"
    return base.extend([name], [0], MonomialOrder("elim", (base.nvars,)))


def _intersect_in_P(base: PolyRing, A: Sequence[Polynomial], B: Sequence[Polynomial],
                    common: Sequence[Polynomial] = ()) -> list[Polynomial]:
    """Generators of ``(A + C) ∩ (B + C)`` in ``P`` via ``t*A + (1-t)*B + C``.

    The auxiliary variable ``t`` has degree 0, which keeps every generator
    homogeneous in the original grading.
    """
    if not A or not B:
        return list(common)
    E = _elim_ring(base)
    n = base.nvars
    imap = list(range(n))
    t = E.var(n)
    one_minus_t = E.one() - t
    gens = [t * f.change_ring(E, imap) for f in A] + [one_minus_t * g.change_ring(E, imap) for g in B]
    rels = [c.change_ring(E, imap) for c in common]
    sp = Space(E, (0,))
    b = GroebnerBuilder(sp)
    b.add([sp.from_poly(c) for c in rels], rel=True)
    b.add([sp.from_poly(g) for g in gens])
    b.run()
    out = []
    for v in b.basis():
        f = sp.to_poly(v, E)
        if all(e[n] == 0 for e, _ in f.terms):
            out.append(Polynomial.from_dict(base, {e[:n]: c for e, c in f.terms}))
    return out


def ideal_intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    if I.ring != J.ring:
        raise StructuralError("ideals of different rings")
    R = I.ring
    gens = _intersect_in_P(R.base, I.generators, J.generators, R.gb_of_relations)
    return IdealHandle(R, gens)


def _exact_divide(g: Polynomial, f: Polynomial) -> Polynomial:
    """Quotient ``g / f`` in ``P``; raises if ``f`` does not divide ``g``."""
    ring = g.ring
    q = ring.zero()
    r = g
    le, lc = f.terms[0]
    inv = pow(lc, -1, ring.p)
    while r:
        e, c = r.terms[0]
        d = tuple(a - b for a, b in zip(e, le))
        if min(d) < 0:
            raise ArithmeticError("inexact division")
        m = ring.monomial(d, c * inv)
        q = q + m
        r = r - f * m
    return q


def ideal_colon(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """``(I : J) = {r : rJ ⊆ I}``; ``(I : 0)`` is the unit ideal."""
    if I.ring != J.ring:
        raise StructuralError("ideals of different rings")
    R = I.ring
    result: IdealHandle | None = None
    pre_I = list(I.generators) + list(R.gb_of_relations)
    for f in J.generators:
        f = R.reduce(f)
        if not f:
            continue
        if I.contains(f):
            continue
        inter = _intersect_in_P(R.base, pre_I, [f])
        quot = [_exact_divide(g, f) for g in inter]
        piece = IdealHandle(R, quot)
        result = piece if result is None else ideal_intersection(result, piece)
    if result is None:
        return R.unit_ideal()
    return result


def eliminate(I: IdealHandle | Sequence[Polynomial], variables: Iterable[str | int]) -> IdealHandle:
    """``I ∩ k[remaining variables]``, as an ideal of the polynomial subring."""
    if isinstance(I, IdealHandle):
        base = I.ring.base
        gens = list(I.generators) + list(I.ring.gb_of_relations)
    else:
        gens = list(I)
        base = gens[0].ring
    idx = sorted({base.names.index(v) if isinstance(v, str) else v for v in variables})
    keep = [i for i in range(base.nvars) if i not in idx]
    sub = PolyRing([base.names[i] for i in keep], [base.degrees[i] for i in keep], base.p,
                   base.order)
    if not idx:
        return IdealHandle(GradedRing(sub), [g.change_ring(sub) for g in gens],
                           check_homogeneous=False)
    order = MonomialOrder("elim", tuple(idx))
    sp = Space(base, (0,), order)
    b = GroebnerBuilder(sp)
    b.add([sp.from_poly(g) for g in gens])
    b.run()
    out = []
    for v in b.basis():
        f = sp.to_poly(v, base)
        if not (f.variables_used() & set(idx)):
            out.append(Polynomial.from_dict(sub, {tuple(e[i] for i in keep): c for e, c in f.terms}))
    return IdealHandle(GradedRing(sub), out, check_homogeneous=False)


# --- Hilbert series -------------------------------------------------------

def _poly_sub(a: dict, b: dict, shift: int = 0, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k + shift] = out.get(k + shift, 0) - sign * v
    return {k: v for k, v in out.items() if v}


def _minimize_monomials(mons: Iterable[tuple]) -> tuple:
    mons = sorted(set(mons), key=lambda m: (sum(m), m))
    out = []
    for m in mons:
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return tuple(sorted(out))


@lru_cache(maxsize=65536)
def _hs_numerator(gens: tuple, weights: tuple) -> tuple:
    """Numerator N(t) of the Hilbert series of ``P/L`` as sorted (deg, coeff) pairs."""
    if not gens:
        return ((0, 1),)
    if any(not any(g) for g in gens):
        return ()
    deg = lambda m: sum(w * a for w, a in zip(weights, m))
    # pairwise coprime generators: the numerator is a product
    support = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    if all(not (support[i] & support[j]) for i in range(len(gens)) for j in range(i)):
        num = {0: 1}
        for g in gens:
            d = deg(g)
            num = _poly_sub(num, num, shift=d)
        return tuple(sorted(num.items()))
    # pivot on the last generator: N(L) = N(L') - t^deg(m) N(L' : m)
    *rest, m = gens
    rest = tuple(rest)
    colon = _minimize_monomials(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest)
    n1 = dict(_hs_numerator(rest, weights))
    n2 = dict(_hs_numerator(colon, weights))
    num = _poly_sub(n1, n2, shift=deg(m))
    return tuple(sorted(num.items()))


def hilbert_numerator(lead_monomials: Iterable[tuple], weights: Sequence[int]) -> dict:
    gens = _minimize_monomials(lead_monomials)
    return dict(_hs_numerator(gens, tuple(weights)))


def _order_at_one(num: dict) -> tuple[int, list[int]]:
    """Multiplicity of t=1 as a root of ``num`` and the cofactor's coefficients."""
    if not num:
        return -1, []
    lo = min(num)
    coeffs = [num.get(i, 0) for i in range(lo, max(num) + 1)]
    k = 0
    while coeffs and sum(coeffs) == 0:
        # divide by (1 - t): running prefix sums
        q = []
        acc = 0
        for c in coeffs[:-1]:
            acc += c
            q.append(acc)
        coeffs = q
        k += 1
    return k, coeffs


class HilbertData:
    def __init__(self, numerator: dict, weights: Sequence[int]):
        self.numerator = numerator
        self.weights = tuple(weights)
        n = len(self.weights)
        if not numerator:
            self.krull_dim = -1
            self.multiplicity = 0
            return
        k, h = _order_at_one(numerator)
        self.krull_dim = n - k
        denom = 1
        for w in self.weights:
            denom *= max(w, 1)
        m = Fraction(sum(h), denom)
        self.multiplicity = int(m) if m.denominator == 1 else m

    def series_coefficients(self, lo: int, hi: int) -> list[int]:
        """Hilbert function values for degrees ``lo..hi`` (inclusive)."""
        if not self.numerator:
            return [0] * (hi - lo + 1)
        # expand 1/prod(1 - t^w) up to degree hi - min(numerator)
        start = min(self.numerator)
        top = hi - start
        if top < 0:
            return [0] * (hi - lo + 1)
        series = [0] * (top + 1)
        series[0] = 1
        for w in self.weights:
            if w <= 0:
                raise ValueError("Hilbert function needs positive weights")
            for i in range(w, top + 1):
                series[i] += series[i - w]
        out = []
        for d in range(lo, hi + 1):
            s = 0
            for e, c in self.numerator.items():
                j = d - e
                if 0 <= j <= top:
                    s += c * series[j]
            out.append(s)
        return out

    def __repr__(self):
        return f"HilbertData(dim={self.krull_dim}, multiplicity={self.multiplicity})"


def leading_monomials(I: IdealHandle) -> list[tuple]:
    return [g.terms[0][0] for g in I.gb]


def hilbert_data(I: IdealHandle) -> HilbertData:
    """Hilbert series numerator, Krull dimension and multiplicity of ``R/I``."""
    return HilbertData(hilbert_numerator(leading_monomials(I), I.ring.degrees), I.ring.degrees)


def _minimal_ideal_generators(I: IdealHandle) -> list[Polynomial]:
    from .modules import minimal_generators_vectors

    R = I.ring
    gens = [R.reduce(g) for g in I.generators]
    gens = [g for g in gens if g]
    if not gens:
        return []
    sp = R.space((0,))
    kept = minimal_generators_vectors(R, sp, [sp.from_poly(g) for g in gens])
    out = [R.reduce(sp.to_poly(v, R.base)).monic() for v in kept]
    # canonical order: by degree, then leading term descending
    out.sort(key=lambda f: (f.degree(), -sp.from_poly(f)[0][0]))
    return out
