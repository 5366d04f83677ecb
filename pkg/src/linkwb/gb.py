"""Buchberger's algorithm for submodules of graded free modules over k[x].

A vector in ``P^r`` is a list of ``(key, E, c)`` triples (see ``kernels``).
:class:`Space` owns the encoding: it fixes the monomial order on the ring, the
module order on components, and the packing of exponents.  Every key is a
linear function of the exponent vector plus a per-component offset, so
multiplying by a monomial is integer addition and the module order is
automatically compatible with multiplication.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from . import kernels
from .poly import MonomialOrder, Polynomial, PolyRing, StructuralError

FIELD_BITS = 16
_B = 1 << FIELD_BITS
TIE = 1 << 40
_TIE_LO = 1 << 20
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1


class Space:
    """Encoding context for a graded free module ``P^r`` with a module order.

    ``mode`` is ``"top"`` (degree, then term, then position), ``"pot"``
    (position first) or ``"custom"`` in which case ``offsets`` gives the
    per-component key offsets directly (used for elimination and Schreyer
    orders, built by :meth:`block_space`).
    """

    def __init__(self, ring: PolyRing, twists: Sequence[int], order: MonomialOrder | None = None,
                 mode: str = "top", offsets: Sequence[int] | None = None):
        self.ring = ring
        self.p = ring.p
        self.nv = ring.nvars
        self.weights = ring.degrees
        self.twists = tuple(int(t) for t in twists)
        self.rank = len(self.twists)
        self.order = order or ring.order
        self.shift_bits = FIELD_BITS * self.nv
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(self.nv))
        self.vk, self.deg_scale = _variable_keys(self.order, self.weights, self.nv)
        self.huge = TIE * _B ** (2 * self.nv + 6)
        if mode == "custom":
            if offsets is None or len(offsets) != self.rank:
                raise ValueError("custom mode needs one offset per component")
            self.offsets = tuple(offsets)
        elif mode == "top":
            self.offsets = tuple(self.top_offset(c) for c in range(self.rank))
        elif mode == "pot":
            self.offsets = tuple((self.rank - c) * self.huge + self.top_offset(c)
                                 for c in range(self.rank))
        else:
            raise ValueError(f"unknown module order {mode!r}")
        self.mode = mode
        self._mono_cache: dict = {}

    def top_offset(self, c: int, level: int = 1) -> int:
        tie = (_TIE_LO - 1 - c)
        if level == 1:
            tie <<= 20
        return TIE * self.twists[c] * self.deg_scale + tie

    # --- monomials ------------------------------------------------------
    def mono(self, exps: Sequence[int]) -> tuple[int, int]:
        """Packed ``(key increment, E increment)`` of a ring monomial."""
        exps = tuple(exps)
        r = self._mono_cache.get(exps)
        if r is None:
            if exps and max(exps) > MAX_EXPONENT:
                raise OverflowError("exponent too large for packed representation")
            k = 0
            E = 0
            for i, a in enumerate(exps):
                if a:
                    k += a * self.vk[i]
                    E += a << (FIELD_BITS * i)
            r = (TIE * k, E)
            self._mono_cache[exps] = r
        return r

    def unpack(self, E: int) -> tuple[int, tuple[int, ...]]:
        """Component and exponent vector of a packed term."""
        mask = _B - 1
        exps = tuple((E >> (FIELD_BITS * i)) & mask for i in range(self.nv))
        return E >> self.shift_bits, exps

    def term(self, comp: int, exps: Sequence[int], c: int) -> tuple:
        k, E = self.mono(exps)
        return (k + self.offsets[comp], E + (comp << self.shift_bits), c % self.p)

    def term_degree(self, E: int) -> int:
        comp, exps = self.unpack(E)
        return sum(w * a for w, a in zip(self.weights, exps)) + self.twists[comp]

    def vector_degree(self, f: list) -> int:
        """Largest degree of a term (the sugar of ``f``)."""
        return max(self.term_degree(t[1]) for t in f)

    # --- conversion -----------------------------------------------------
    def from_column(self, column: Sequence[Polynomial]) -> list:
        if len(column) != self.rank:
            raise StructuralError(f"column of length {len(column)} in a rank {self.rank} module")
        out = []
        for comp, f in enumerate(column):
            if f.ring != self.ring and f.terms:
                f = f.change_ring(self.ring)
            for e, c in f.terms:
                out.append(self.term(comp, e, c))
        out.sort(reverse=True)
        return out

    def from_poly(self, f: Polynomial, comp: int = 0) -> list:
        col = [self.ring.zero()] * self.rank
        col[comp] = f
        return self.from_column(col)

    def to_column(self, f: list, ring: PolyRing | None = None) -> list[Polynomial]:
        ring = ring or self.ring
        parts: list[dict] = [dict() for _ in range(self.rank)]
        for _, E, c in f:
            comp, exps = self.unpack(E)
            parts[comp][exps[: ring.nvars]] = c
        return [Polynomial.from_dict(ring, d) for d in parts]

    def to_poly(self, f: list, ring: PolyRing | None = None) -> Polynomial:
        return self.to_column(f, ring)[0]

    def lead_comp(self, f: list) -> int:
        return f[0][1] >> self.shift_bits

    def monic(self, f: list) -> list:
        c = f[0][2]
        if c == 1:
            return f
        inv = pow(c, -1, self.p)
        return kernels.shift(f, 0, 0, inv, self.p)

    def scale(self, f: list, c: int) -> list:
        c %= self.p
        if not c:
            return []
        return kernels.shift(f, 0, 0, c, self.p)

    def add(self, f: list, g: list, c: int = 1) -> list:
        """``f + c*g``."""
        c %= self.p
        if not c:
            return list(f)
        return kernels.axpy(f, 0, g, 0, c, 0, 0, self.p)

    def mul_mono(self, f: list, exps: Sequence[int], c: int = 1) -> list:
        k, E = self.mono(exps)
        return kernels.shift(f, k, E, c % self.p, self.p)

    def mul_poly(self, f: list, g: Polynomial) -> list:
        out: list = []
        for e, c in g.terms:
            k, E = self.mono(e)
            out = kernels.axpy(out, 0, f, 0, c, k, E, self.p)
        return out

    def divides(self, a: int, b: int) -> bool:
        """Whether packed term ``a`` divides packed term ``b`` (same component)."""
        if a >> self.shift_bits != b >> self.shift_bits:
            return False
        return ((b | self.guard) - a) & self.guard == self.guard


def _variable_keys(order: MonomialOrder, weights: Sequence[int], nv: int):
    B = _B
    if order.kind == "lex":
        return [B ** (nv - 1 - i) for i in range(nv)], 0
    if order.kind == "grevlex":
        return [w * B ** nv - B ** i for i, w in enumerate(weights)], B ** nv
    scale = B ** (nv + 2)
    vk = []
    for i, w in enumerate(weights):
        if i in order.block:
            vk.append((B ** nv - B ** i) * scale)
        else:
            vk.append(w * B ** nv - B ** i)
    return vk, B ** nv


def block_space(ring: PolyRing, twists: Sequence[int], nfirst: int,
                schreyer_leads: Sequence[list] | None = None,
                order: MonomialOrder | None = None) -> Space:
    """Space whose first ``nfirst`` components dominate the rest.

    Any vector with a nonzero entry among the first components has its leading
    term there, so a Groebner basis restricted to vectors supported on the
    remaining components generates the intersection with that block.  When
    ``schreyer_leads`` is given, component ``nfirst + j`` is ordered by the
    leading term ``schreyer_leads[j]`` of the image of ``e_j`` (Schreyer's
    induced order); a zero image falls back to the degree order.
    """
    probe = Space(ring, twists, order)
    offsets = []
    for c in range(len(twists)):
        if c < nfirst:
            offsets.append(probe.huge + probe.top_offset(c, level=1))
        else:
            j = c - nfirst
            lead = schreyer_leads[j] if schreyer_leads is not None else None
            if lead:
                k, E, _ = lead[0]
                offsets.append(k - probe.huge + j)
            else:
                offsets.append(probe.top_offset(c, level=1) - (1 << 19) + j)
    return Space(ring, twists, order, mode="custom", offsets=offsets)


class _Elem:
    __slots__ = ("vec", "lead_key", "lead_E", "lead_exps", "comp", "sugar", "rel")

    def __init__(self, space: Space, vec: list, sugar: int, rel: bool):
        self.vec = vec
        self.lead_key = vec[0][0]
        self.lead_E = vec[0][1]
        self.comp, self.lead_exps = space.unpack(self.lead_E)
        self.sugar = sugar
        self.rel = rel


class GroebnerBuilder:
    """Incremental Buchberger with normal strategy and Gebauer-Moeller pruning.

    Generators can be added at any time; :meth:`run` processes every pending
    generator and S-pair up to an optional degree bound, so a degree-truncated
    basis can be extended later without redoing work.  Elements flagged
    ``rel`` (multiples of the ring relations, which are already a Groebner
    basis of the relation ideal) never form S-pairs among themselves in the
    same component.
    """

    def __init__(self, space: Space, product_criterion: bool | None = None):
        self.space = space
        self.p = space.p
        self.elems: list[_Elem] = []
        self.active: list[int] = []
        self.reducers: dict[int, list] = {}
        self.pairs: list = []  # heap of (sugar, lcm_key, i, j)
        self.queue: list = []  # heap of (sugar, lead_key, seq, vec, rel)
        self._seq = 0
        if product_criterion is None:
            product_criterion = space.rank == 1
        self.product_criterion = product_criterion
        self.done_degree: int | None = None
        self.stats = {"pairs": 0, "reductions_to_zero": 0, "elements": 0}

    # --- input ----------------------------------------------------------
    def add(self, vecs: Iterable[list], rel: bool = False):
        for v in vecs:
            if not v:
                continue
            sug = self.space.vector_degree(v)
            heapq.heappush(self.queue, (sug, -v[0][0], self._seq, v, rel))
            self._seq += 1
        self.done_degree = None

    def reduce(self, f: list, full: bool = True) -> list:
        if not f:
            return f
        return kernels.reduce_vector(f, self.reducers, self.space.shift_bits,
                                     self.space.guard, self.p, full)

    # --- main loop ------------------------------------------------------
    def run(self, max_degree: int | None = None):
        sp = self.space
        while self.pairs or self.queue:
            dp = self.pairs[0][0] if self.pairs else None
            dq = self.queue[0][0] if self.queue else None
            if dq is not None and (dp is None or dq <= dp):
                if max_degree is not None and dq > max_degree:
                    break
                sug, _, _, v, rel = heapq.heappop(self.queue)
                h = self.reduce(v)
                if h:
                    # a relation multiple stays flagged only if nothing reduced it
                    self._insert(sp.monic(h), sug, rel and h == v)
                continue
            if max_degree is not None and dp > max_degree:
                break
            sug, _, i, j = heapq.heappop(self.pairs)
            self.stats["pairs"] += 1
            s = self._spoly(i, j)
            h = self.reduce(s)
            if h:
                self._insert(sp.monic(h), sug, False)
            else:
                self.stats["reductions_to_zero"] += 1
        self.done_degree = max_degree
        return self

    def _spoly(self, i: int, j: int) -> list:
        sp = self.space
        a, b = self.elems[i], self.elems[j]
        lcm = tuple(max(x, y) for x, y in zip(a.lead_exps, b.lead_exps))
        ma = tuple(x - y for x, y in zip(lcm, a.lead_exps))
        mb = tuple(x - y for x, y in zip(lcm, b.lead_exps))
        ka, Ea = sp.mono(ma)
        kb, Eb = sp.mono(mb)
        # both monic: the leading terms cancel
        fs = kernels.shift(a.vec, ka, Ea, 1, self.p)
        return kernels.axpy(fs, 1, b.vec, 1, self.p - 1, kb, Eb, self.p)

    def _lcm_E(self, a: _Elem, b: _Elem) -> int:
        E = a.comp << self.space.shift_bits
        for i, (x, y) in enumerate(zip(a.lead_exps, b.lead_exps)):
            E += max(x, y) << (FIELD_BITS * i)
        return E

    def _insert(self, vec: list, sugar: int, rel: bool):
        sp = self.space
        divides = sp.divides
        h = _Elem(sp, vec, sugar, rel)
        hi = len(self.elems)
        self.elems.append(h)
        self.stats["elements"] += 1

        # Gebauer-Moeller: new pairs (h, g)
        cands = []
        for gi in self.active:
            g = self.elems[gi]
            if g.comp != h.comp:
                continue
            lcm = self._lcm_E(h, g)
            coprime = self.product_criterion and all(
                not (x and y) for x, y in zip(h.lead_exps, g.lead_exps))
            known_zero = coprime or (h.rel and g.rel)
            cands.append([lcm, gi, known_zero])
        kept = []
        for idx, c in enumerate(cands):
            if c[2]:
                kept.append(c)
                continue
            redundant = False
            for other in cands[idx + 1:]:
                if divides(other[0], c[0]):
                    redundant = True
                    break
            if not redundant:
                for other in kept:
                    if divides(other[0], c[0]):
                        redundant = True
                        break
            if not redundant:
                kept.append(c)
        new_pairs = [(lcm, gi) for lcm, gi, known_zero in kept if not known_zero]

        # prune old pairs that h makes redundant
        hE = h.lead_E
        old = []
        for entry in self.pairs:
            _, _, i, j = entry
            a, b = self.elems[i], self.elems[j]
            if a.comp == h.comp:
                lij = self._lcm_E(a, b)
                if divides(hE, lij) and lij != self._lcm_E(a, h) and lij != self._lcm_E(b, h):
                    continue
            old.append(entry)
        for lcm, gi in new_pairs:
            g = self.elems[gi]
            _, exps = sp.unpack(lcm)
            sug = max(h.sugar + _deg_diff(sp, exps, h.lead_exps),
                      g.sugar + _deg_diff(sp, exps, g.lead_exps))
            key = sp.mono(exps)[0] + sp.offsets[h.comp]
            old.append((sug, key, gi, hi))
        heapq.heapify(old)
        self.pairs = old

        # drop basis elements whose leading term h divides
        keep = []
        for gi in self.active:
            g = self.elems[gi]
            if g.comp == h.comp and divides(hE, g.lead_E):
                continue
            keep.append(gi)
        keep.append(hi)
        self.active = keep
        self._rebuild_reducers(h.comp)

    def _rebuild_reducers(self, comp: int):
        lst = []
        for gi in self.active:
            g = self.elems[gi]
            if g.comp == comp:
                lst.append((g.lead_E, g.lead_key, g.vec))
        # prefer short reducers; ties by insertion order
        lst.sort(key=lambda t: len(t[2]))
        self.reducers[comp] = lst

    # --- output ---------------------------------------------------------
    def basis(self) -> list[list]:
        """Reduced Groebner basis, sorted by ascending leading term."""
        if self.queue or self.pairs:
            if self.done_degree is None:
                self.run()
        elems = [self.elems[i] for i in self.active]
        elems.sort(key=lambda e: e.lead_key)
        out = []
        for e in elems:
            tail = self.reduce(e.vec[1:], full=True) if len(e.vec) > 1 else []
            v = [e.vec[0]] + tail
            out.append(v)
        # interreduced tails may change reducers; rebuild so later NFs use them
        for e, v in zip(elems, out):
            e.vec = v
        for comp in {e.comp for e in elems}:
            self._rebuild_reducers(comp)
        return out

    def leading_terms(self) -> list[int]:
        return sorted(self.elems[i].lead_E for i in self.active)


def _deg_diff(sp: Space, lcm_exps, lead_exps) -> int:
    return sum(w * (x - y) for w, x, y in zip(sp.weights, lcm_exps, lead_exps))


def groebner(space: Space, vecs: Iterable[list], rel_vecs: Iterable[list] = ()) -> list[list]:
    b = GroebnerBuilder(space)
    b.add(rel_vecs, rel=True)
    b.add(vecs)
    b.run()
    return b.basis()
