"""Finitely presented graded modules over ``R = P/I``.

A module is ``coker(A: F1 -> F0)`` where ``A`` is a :class:`Matrix` whose
columns are the relations; ``row_twists`` are the generator degrees.  Kernels
are computed in ``P`` from a Groebner basis of the augmented columns
``(A_j ; e_j)`` under an order where the image block dominates, with the ring
relations adjoined to every image component.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels
from .gb import GroebnerBuilder, Space, block_space
from .ideals import (
    INF,
    NEG_INF,
    GradedRing,
    HilbertData,
    IdealHandle,
    NotHomogeneousError,
    hilbert_numerator,
    ideal_intersection,
    is_finite,
)
from .poly import Polynomial, StructuralError, as_poly


class InvariantViolation(AssertionError):
    """An internal consistency check on computed homology failed."""


class PreconditionError(ValueError):
    pass


# Every resolution built in this process is checked and tallied here.
AUDIT_LOCK = threading.Lock()
AUDIT = {"resolutions": 0, "differentials_checked": 0, "entries_checked": 0,
         "auslander_buchsbaum": 0, "auslander_bridger": 0, "violations": []}


def _audit(key: str, n: int = 1):
    with AUDIT_LOCK:
        AUDIT[key] += n


def _violation(msg: str):
    with AUDIT_LOCK:
        AUDIT["violations"].append(msg)
    raise InvariantViolation(msg)


# --- matrices -------------------------------------------------------------

def _entry_degree(f: Polynomial):
    if not f:
        return None
    d = f.degree()
    if not f.is_homogeneous():
        raise NotHomogeneousError(f"matrix entry {f} is not homogeneous")
    return d


class Matrix:
    """Homogeneous map ``F(col_degrees) -> G(row_twists)`` over a graded ring.

    Stored column-major; entries are kept reduced modulo the ring relations.
    Entry ``(i, j)`` has degree ``col_degrees[j] - row_twists[i]``.
    """

    __slots__ = ("ring", "row_twists", "col_degrees", "cols")

    def __init__(self, ring: GradedRing, cols: Sequence[Sequence], row_twists: Sequence[int],
                 col_degrees: Sequence[int] | None = None, reduce: bool = True):
        self.ring = ring
        self.row_twists = tuple(int(t) for t in row_twists)
        n = len(self.row_twists)
        out = []
        for col in cols:
            if len(col) != n:
                raise StructuralError(f"column of length {len(col)}, expected {n}")
            c = [as_poly(ring.base, f) for f in col]
            if reduce:
                c = [ring.reduce(f) for f in c]
            out.append(tuple(c))
        self.cols = tuple(out)
        if col_degrees is None:
            degs = []
            for j, col in enumerate(self.cols):
                d = None
                for i, f in enumerate(col):
                    e = _entry_degree(f)
                    if e is None:
                        continue
                    if d is None:
                        d = e + self.row_twists[i]
                    elif d != e + self.row_twists[i]:
                        raise NotHomogeneousError(f"column {j} is not homogeneous")
                if d is None:
                    raise StructuralError(f"zero column {j} needs an explicit degree")
                degs.append(d)
            col_degrees = degs
        self.col_degrees = tuple(int(d) for d in col_degrees)
        if len(self.col_degrees) != len(self.cols):
            raise StructuralError("one degree per column required")
        for j, col in enumerate(self.cols):
            for i, f in enumerate(col):
                e = _entry_degree(f)
                if e is not None and e != self.col_degrees[j] - self.row_twists[i]:
                    raise NotHomogeneousError(
                        f"entry ({i},{j}) = {f} has degree {e}, expected "
                        f"{self.col_degrees[j] - self.row_twists[i]}")

    @classmethod
    def from_rows(cls, ring: GradedRing, rows: Sequence[Sequence], row_twists=None) -> Matrix:
        """Build from row-major entries, inferring twists when not given."""
        rows = [[as_poly(ring.base, f) for f in r] for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise StructuralError("ragged matrix")
        rows = [[ring.reduce(f) for f in r] for r in rows]
        if row_twists is None:
            row_twists, col_degrees = _infer_twists(rows, nr, nc)
        else:
            col_degrees = None
            if any(not any(rows[i][j] for i in range(nr)) for j in range(nc)):
                _, inferred = _infer_twists(rows, nr, nc, list(row_twists))
                col_degrees = inferred
        cols = [[rows[i][j] for i in range(nr)] for j in range(nc)]
        return cls(ring, cols, row_twists, col_degrees, reduce=False)

    @property
    def nrows(self) -> int:
        return len(self.row_twists)

    @property
    def ncols(self) -> int:
        return len(self.cols)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.cols[j][i]

    def rows(self) -> list[list[Polynomial]]:
        return [[self.cols[j][i] for j in range(self.ncols)] for i in range(self.nrows)]

    def is_zero(self) -> bool:
        return all(not f for col in self.cols for f in col)

    def transpose(self) -> Matrix:
        """The dual map ``G* -> F*``."""
        cols = [[self.cols[j][i] for j in range(self.ncols)] for i in range(self.nrows)]
        return Matrix(self.ring, cols, [-d for d in self.col_degrees],
                      [-t for t in self.row_twists], reduce=False)

    def compose(self, other: Matrix) -> Matrix:
        """``self ∘ other``."""
        if other.nrows != self.ncols:
            raise StructuralError("incompatible matrix sizes")
        zero = self.ring.base.zero()
        cols = []
        for col in other.cols:
            acc = [zero] * self.nrows
            for k, g in enumerate(col):
                if not g:
                    continue
                for i in range(self.nrows):
                    f = self.cols[k][i]
                    if f:
                        acc[i] = acc[i] + f * g
            cols.append(acc)
        return Matrix(self.ring, cols, self.row_twists, other.col_degrees)

    def select_columns(self, idx: Iterable[int]) -> Matrix:
        idx = list(idx)
        return Matrix(self.ring, [self.cols[j] for j in idx], self.row_twists,
                      [self.col_degrees[j] for j in idx], reduce=False)

    def to_json(self) -> dict:
        return {"rows": [[str(f) for f in r] for r in self.rows()],
                "row_twists": list(self.row_twists), "col_degrees": list(self.col_degrees)}

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.row_twists == other.row_twists
                and self.col_degrees == other.col_degrees and self.cols == other.cols)

    def __hash__(self):
        return hash((self.row_twists, self.col_degrees, self.cols))

    def __repr__(self):
        return f"Matrix({self.to_json()['rows']})"


def _infer_twists(rows, nr, nc, fixed_rows=None):
    """Solve ``deg(a_ij) = c_j - r_i`` over connected row/column components."""
    r: list = list(fixed_rows) if fixed_rows is not None else [None] * nr
    c: list = [None] * nc
    edges = [(i, j, _entry_degree(rows[i][j])) for i in range(nr) for j in range(nc)
             if rows[i][j]]
    adj_r = [[] for _ in range(nr)]
    adj_c = [[] for _ in range(nc)]
    for i, j, d in edges:
        adj_r[i].append((j, d))
        adj_c[j].append((i, d))
    order = [i for i in range(nr) if r[i] is not None] + [i for i in range(nr) if r[i] is None]
    for start in order:
        if r[start] is None:
            r[start] = 0
        stack = [("r", start)]
        while stack:
            kind, k = stack.pop()
            if kind == "r":
                for j, d in adj_r[k]:
                    want = r[k] + d
                    if c[j] is None:
                        c[j] = want
                        stack.append(("c", j))
                    elif c[j] != want:
                        raise NotHomogeneousError("matrix admits no consistent grading")
            else:
                for i, d in adj_c[k]:
                    want = c[k] - d
                    if r[i] is None:
                        r[i] = want
                        stack.append(("r", i))
                    elif r[i] != want:
                        raise NotHomogeneousError("matrix admits no consistent grading")
    c = [0 if v is None else v for v in c]
    return r, c


# --- vector helpers -------------------------------------------------------

def _echelon_insert(pivots: dict, v: list, p: int) -> bool:
    """Reduce ``v`` against a k-linear echelon basis; insert it if independent."""
    while v:
        hit = None
        for idx, t in enumerate(v):
            piv = pivots.get(t[0])
            if piv is not None:
                hit = (idx, t, piv)
                break
        if hit is None:
            break
        _, t, piv = hit
        v = kernels.axpy(v, 0, piv, 0, p - t[2], 0, 0, p)
    if not v:
        return False
    inv = pow(v[0][2], -1, p)
    v = kernels.shift(v, 0, 0, inv, p)
    pivots[v[0][0]] = v
    return True


def minimal_generators_vectors(R: GradedRing, sp: Space, vecs: Sequence[list]) -> list[list]:
    """A minimal generating subset of the submodule of ``R^r`` spanned by ``vecs``.

    Works degree by degree: a vector is kept iff its normal form modulo the
    lower-degree generators (plus relations) is linearly independent of the
    normal forms of the same-degree vectors already kept.
    """
    vecs = [v for v in vecs if v]
    if not vecs:
        return []
    by_deg: dict[int, list] = {}
    for v in vecs:
        by_deg.setdefault(sp.vector_degree(v), []).append(v)
    b = GroebnerBuilder(sp)
    b.add(R.rel_vectors(sp), rel=True)
    kept = []
    for d in sorted(by_deg):
        b.run(max_degree=d)
        pivots: dict = {}
        new = []
        for v in by_deg[d]:
            h = b.reduce(v)
            if h and _echelon_insert(pivots, h, sp.p):
                new.append(v)
        kept.extend(new)
        b.add(new)
    return kept


def _columns_to_vectors(sp: Space, A: Matrix) -> list[list]:
    return [sp.from_column(col) for col in A.cols]


def minimal_generators(A: Matrix) -> Matrix:
    """Columns of ``A`` forming a minimal generating set of its image."""
    R = A.ring
    sp = R.space(A.row_twists)
    keep_ids = []
    vecs = _columns_to_vectors(sp, A)
    kept = minimal_generators_vectors(R, sp, vecs)
    ids = {id(v): j for j, v in enumerate(vecs)}
    keep_ids = sorted(ids[id(v)] for v in kept)
    # canonical order: by degree, then original position
    keep_ids.sort(key=lambda j: (A.col_degrees[j], j))
    return A.select_columns(keep_ids)


def _kernel_lifts(A: Matrix) -> list[tuple[list[Polynomial], int]]:
    """Generators (not necessarily minimal) of ``ker_R(A)`` with their degrees."""
    R = A.ring
    n, m = A.nrows, A.ncols
    base = R.base
    if m == 0:
        return []
    if n == 0 or A.is_zero():
        out = []
        for j in range(m):
            col = [base.zero()] * m
            col[j] = base.one()
            out.append((col, A.col_degrees[j]))
        return out
    twists = A.row_twists + A.col_degrees
    probe = block_space(base, twists, n)
    leads = []
    for col in A.cols:
        v = probe.from_column(list(col) + [base.zero()] * m)
        leads.append(v[:1] if v else None)
    sp = block_space(base, twists, n, schreyer_leads=leads)
    gens = []
    for j, col in enumerate(A.cols):
        full = list(col) + [base.zero()] * m
        full[n + j] = base.one()
        gens.append(sp.from_column(full))
    b = GroebnerBuilder(sp, product_criterion=False)
    b.add(R.rel_vectors(sp), rel=True)
    b.add(gens)
    b.run()
    out = []
    for v in b.basis():
        if sp.lead_comp(v) < n:
            continue
        col = sp.to_column(v, base)[n:]
        col = [R.reduce(f) for f in col]
        if any(col):
            out.append((col, sp.vector_degree(v)))
    return out


def syzygy_matrix(A: Matrix) -> Matrix:
    """Minimal generators of ``ker(A)`` over the ring of ``A``."""
    R = A.ring
    lifts = _kernel_lifts(A)
    if not lifts:
        return Matrix(R, [], A.col_degrees, [])
    K = Matrix(R, [c for c, _ in lifts], A.col_degrees, [d for _, d in lifts])
    return minimal_generators(K)


kernel = syzygy_matrix


class SpanMembership:
    """Membership test for the column span of a matrix (plus relations)."""

    def __init__(self, ring: GradedRing, twists: Sequence[int], cols: Iterable[Sequence]):
        self.ring = ring
        self.space = ring.space(tuple(twists))
        self.builder = GroebnerBuilder(self.space)
        self.builder.add(ring.rel_vectors(self.space), rel=True)
        self.builder.add([self.space.from_column(list(c)) for c in cols])
        self.builder.run()

    def contains(self, col: Sequence) -> bool:
        v = self.space.from_column(list(col))
        return not self.builder.reduce(v)


# --- modules --------------------------------------------------------------

@dataclass(frozen=True)
class BettiTable:
    """``betti[(i, j)]``: number of degree-``j`` generators of the ``i``-th free module."""

    entries: dict = field(default_factory=dict)
    length: int = 0

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.entries.items() if a == i)

    def totals(self) -> list[int]:
        return [self.total(i) for i in range(self.length + 1)]

    def to_json(self) -> dict:
        return {"totals": self.totals(),
                "graded": [[i, j, v] for (i, j), v in sorted(self.entries.items())]}

    def __str__(self):
        if not self.entries:
            return "0"
        js = sorted({j - i for i, j in self.entries})
        head = "      " + " ".join(f"{i:>4}" for i in range(self.length + 1))
        lines = [head, "total:" + " ".join(f"{t:>4}" for t in self.totals())]
        for s in js:
            vals = []
            for i in range(self.length + 1):
                v = self.entries.get((i, i + s), 0)
                vals.append(f"{v if v else '.':>4}")
            lines.append(f"{s:>5}:" + " ".join(vals))
        return "\n".join(lines)


class Resolution:
    """Minimal free resolution computed lazily up to a homological bound."""

    def __init__(self, module: FPModule):
        self.module = module
        self.ring = module.ring
        M = module.minimal()
        self.twists: list[tuple[int, ...]] = [M.row_twists]
        self.differentials: list[Matrix] = []
        self.minimal = True
        self.bound = 0
        self._complete = False
        self._lock = threading.Lock()
        if M.matrix.ncols:
            self.differentials.append(M.matrix)
            self.twists.append(M.matrix.col_degrees)
            self.bound = 1
            _check_minimal(M.matrix)
        else:
            self._complete = True
        _audit("resolutions")

    def extend(self, bound: int) -> Resolution:
        with self._lock:
            while self.bound < bound and not self._complete:
                d = self.differentials[-1]
                nxt = syzygy_matrix(d)
                if nxt.ncols == 0:
                    self._complete = True
                    break
                _check_minimal(nxt)
                _check_composition(d, nxt)
                self.differentials.append(nxt)
                self.twists.append(nxt.col_degrees)
                self.bound += 1
        return self

    @property
    def complete(self) -> bool:
        """True once a zero kernel was reached (finite projective dimension)."""
        return self._complete

    def free_twists(self, i: int) -> tuple[int, ...]:
        self.extend(i)
        return self.twists[i] if i < len(self.twists) else ()

    def d(self, i: int) -> Matrix | None:
        """Differential ``F_i -> F_{i-1}`` (``i >= 1``), or None if zero."""
        self.extend(i)
        if 1 <= i <= len(self.differentials):
            return self.differentials[i - 1]
        return None

    def betti(self, bound: int | None = None) -> BettiTable:
        if bound is None:
            bound = self.bound
        self.extend(bound)
        entries = {}
        top = 0
        for i in range(min(bound, len(self.twists) - 1) + 1):
            for j in self.twists[i]:
                entries[(i, j)] = entries.get((i, j), 0) + 1
            if self.twists[i]:
                top = i
        return BettiTable(entries, top)

    def betti_numbers(self, bound: int) -> list[int]:
        return [len(self.free_twists(i)) for i in range(bound + 1)]


def _check_minimal(A: Matrix):
    n = 0
    for j, col in enumerate(A.cols):
        for i, f in enumerate(col):
            n += 1
            if f and f.is_constant():
                _violation(f"non-minimal differential: unit entry at ({i},{j})")
    _audit("entries_checked", n)


def _check_composition(d: Matrix, e: Matrix):
    prod = d.compose(e)
    if not prod.is_zero():
        _violation("differentials do not compose to zero")
    _audit("differentials_checked")


class FPModule:
    """``coker(matrix)`` with generator degrees ``matrix.row_twists``."""

    def __init__(self, ring: GradedRing, matrix: Matrix, minimal: bool = False):
        if matrix.ring != ring:
            raise StructuralError("matrix over a different ring")
        self.ring = ring
        self.matrix = matrix
        self._is_minimal = minimal
        self._resolution: Resolution | None = None
        self._lock = threading.Lock()

    # construction
    @classmethod
    def coker(cls, ring: GradedRing, rows, row_twists=None) -> FPModule:
        if isinstance(rows, Matrix):
            return cls(ring, rows)
        return cls(ring, Matrix.from_rows(ring, rows, row_twists))

    @classmethod
    def free(cls, ring: GradedRing, twists: Sequence[int] | int = 1) -> FPModule:
        if isinstance(twists, int):
            twists = [0] * twists
        return cls(ring, Matrix(ring, [], twists, []), minimal=True)

    @classmethod
    def zero(cls, ring: GradedRing) -> FPModule:
        return cls.free(ring, [])

    @classmethod
    def quotient(cls, ideal: IdealHandle) -> FPModule:
        """``R/I`` as a cyclic module."""
        R = ideal.ring
        gens = [R.reduce(g) for g in ideal.generators]
        gens = [g for g in gens if g]
        return cls(R, Matrix(R, [[g] for g in gens], [0], [g.degree() for g in gens]))

    @classmethod
    def residue_field(cls, ring: GradedRing) -> FPModule:
        return cls.quotient(ring.maximal_ideal())

    @classmethod
    def ideal_as_module(cls, ideal: IdealHandle) -> FPModule:
        """``I`` as a module, presented by the syzygies of its generators."""
        R = ideal.ring
        gens = ideal.mingens()
        if not gens:
            return cls.zero(R)
        row = Matrix(R, [[g] for g in gens], [0], [g.degree() for g in gens])
        return image_module(row)

    # basic data
    @property
    def row_twists(self) -> tuple[int, ...]:
        return self.matrix.row_twists

    @property
    def ngens(self) -> int:
        return self.matrix.nrows

    def __repr__(self):
        M = self.matrix
        return f"FPModule(gens={M.nrows}, relations={M.ncols})"

    def minimal(self) -> FPModule:
        if self._is_minimal:
            return self
        with self._lock:
            m = getattr(self, "_min_cache", None)
            if m is None:
                m = minimal_presentation(self)
                self._min_cache = m
        return m

    def is_zero(self) -> bool:
        return self.minimal().ngens == 0

    def is_free(self) -> bool:
        return self.minimal().matrix.ncols == 0

    def resolution(self, bound: int | None = None) -> Resolution:
        M = self.minimal()
        if M is not self:
            return M.resolution(bound)
        with self._lock:
            if self._resolution is None:
                self._resolution = Resolution(self)
        if bound is not None:
            self._resolution.extend(bound)
        return self._resolution

    def betti(self, bound: int | None = None) -> BettiTable:
        if bound is None:
            bound = self.ring.dim + 2
        return self.resolution(bound).betti(bound)

    def hilbert(self) -> HilbertData:
        return _module_hilbert(self)

    def to_json(self) -> dict:
        return {"presentation": self.matrix.to_json()}


def image_module(A: Matrix) -> FPModule:
    """The image of ``A`` presented on the columns of ``A`` (made minimal)."""
    G = minimal_generators(A)
    K = syzygy_matrix(G)
    return minimal_presentation(FPModule(A.ring, Matrix(A.ring, K.cols, G.col_degrees,
                                                        K.col_degrees, reduce=False)))


def minimal_presentation(M: FPModule) -> FPModule:
    """Strip unit entries by Gaussian elimination, then prune redundant relations."""
    if M._is_minimal:
        return M
    R = M.ring
    A = M.matrix
    twists = list(A.row_twists)
    cols = [list(c) for c in A.cols]
    degs = list(A.col_degrees)
    keep = [j for j, c in enumerate(cols) if any(c)]
    cols = [cols[j] for j in keep]
    degs = [degs[j] for j in keep]
    while True:
        pivot = None
        for j, col in enumerate(cols):
            for i, f in enumerate(col):
                if f and f.is_constant():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        pc = cols[j]
        inv = pow(pc[i].constant_coeff(), -1, R.p)
        new_cols, new_degs = [], []
        for l, col in enumerate(cols):
            if l == j:
                continue
            a = col[i]
            if a:
                factor = a.scale(inv)
                col = [R.reduce(col[k] - factor * pc[k]) if pc[k] else col[k]
                       for k in range(len(col))]
            col = col[:i] + col[i + 1:]
            if any(col):
                new_cols.append(col)
                new_degs.append(degs[l])
        cols, degs = new_cols, new_degs
        twists = twists[:i] + twists[i + 1:]
    B = Matrix(R, cols, twists, degs, reduce=False)
    if B.ncols:
        B = minimal_generators(B)
    out = FPModule(R, B, minimal=True)
    return out


# --- homology -------------------------------------------------------------

def subquotient(ring: GradedRing, twists: Sequence[int], gens: Sequence[Sequence],
                gen_degs: Sequence[int], rels: Sequence[Sequence],
                rel_degs: Sequence[int]) -> FPModule:
    """``(im gens + im rels) / im rels`` inside the free module ``F(twists)``."""
    if not gens:
        return FPModule.zero(ring)
    big = Matrix(ring, list(gens) + list(rels), twists, list(gen_degs) + list(rel_degs),
                 reduce=False)
    K = syzygy_matrix(big)
    g = len(gens)
    pres = [col[:g] for col in K.cols]
    M = FPModule(ring, Matrix(ring, pres, gen_degs, K.col_degrees, reduce=False))
    return minimal_presentation(M)


def _kernel_projection(ring, twists, first_cols, first_degs, second_cols, second_degs):
    """Projection onto the first block of ``ker [first | second]``."""
    if not first_cols:
        return [], []
    zero = ring.base.zero()
    if not second_cols:
        A = Matrix(ring, first_cols, twists, first_degs, reduce=False)
        K = syzygy_matrix(A)
        return [list(c) for c in K.cols], list(K.col_degrees)
    A = Matrix(ring, list(first_cols) + list(second_cols), twists,
               list(first_degs) + list(second_degs), reduce=False)
    K = syzygy_matrix(A)
    f = len(first_cols)
    cols, degs = [], []
    for col, d in zip(K.cols, K.col_degrees):
        c = list(col[:f])
        if any(c):
            cols.append(c)
            degs.append(d)
    del zero
    return cols, degs


def _neg(f: Polynomial) -> Polynomial:
    return -f


def ext(i: int, M: FPModule, N: FPModule) -> FPModule:
    """``Ext^i_R(M, N)`` as the cohomology of ``Hom(F_•, N)``."""
    if i < 0:
        raise ValueError("i must be non-negative")
    if M.ring != N.ring:
        raise StructuralError("modules over different rings")
    R = M.ring
    zero = R.base.zero()
    res = M.resolution(i + 1)
    a = res.free_twists(i)
    a_next = res.free_twists(i + 1)
    a_prev = res.free_twists(i - 1) if i >= 1 else ()
    d_next = res.d(i + 1)
    d_cur = res.d(i) if i >= 1 else None
    Nm = N.minimal()
    B = Nm.matrix
    b = B.row_twists
    c = B.col_degrees
    nb = len(b)
    if not a or not nb:
        return FPModule.zero(R)
    # Hom(F_i, G0): component (u, v) -> index u*nb + v, twist b_v - a_u
    tw = [bv - au for au in a for bv in b]
    tw_next = [bv - aw for aw in a_next for bv in b]

    # d_{i+1}^*: Hom(F_i,G0) -> Hom(F_{i+1},G0)
    first, first_deg = [], []
    for u, au in enumerate(a):
        for v, bv in enumerate(b):
            col = [zero] * len(tw_next)
            if d_next is not None:
                for w in range(len(a_next)):
                    col[w * nb + v] = d_next.cols[w][u]
            first.append(col)
            first_deg.append(bv - au)
    # -B_*: Hom(F_{i+1},G1) -> Hom(F_{i+1},G0)
    second, second_deg = [], []
    for w, aw in enumerate(a_next):
        for s, cs in enumerate(c):
            col = [zero] * len(tw_next)
            for v in range(nb):
                col[w * nb + v] = -B.cols[s][v]
            second.append(col)
            second_deg.append(cs - aw)
    if tw_next:
        gens, gen_degs = _kernel_projection(R, tw_next, first, first_deg, second, second_deg)
    else:
        gens = []
        for k in range(len(tw)):
            col = [zero] * len(tw)
            col[k] = R.base.one()
            gens.append(col)
        gen_degs = list(tw)
    rels, rel_degs = [], []
    if d_cur is not None:
        for x, ax in enumerate(a_prev):
            for v, bv in enumerate(b):
                col = [zero] * len(tw)
                for u in range(len(a)):
                    col[u * nb + v] = d_cur.cols[u][x]
                rels.append(col)
                rel_degs.append(bv - ax)
    for u, au in enumerate(a):
        for s, cs in enumerate(c):
            col = [zero] * len(tw)
            for v in range(nb):
                col[u * nb + v] = B.cols[s][v]
            rels.append(col)
            rel_degs.append(cs - au)
    return subquotient(R, tw, gens, gen_degs, rels, rel_degs)


def hom_module(M: FPModule, N: FPModule) -> FPModule:
    return ext(0, M, N)


def dual(M: FPModule) -> FPModule:
    return hom_module(M, FPModule.free(M.ring, [0]))


def tor(i: int, M: FPModule, N: FPModule) -> FPModule:
    """``Tor_i^R(M, N)`` as the homology of ``F_• ⊗ N`` (first argument resolved)."""
    if i < 0:
        raise ValueError("i must be non-negative")
    if M.ring != N.ring:
        raise StructuralError("modules over different rings")
    R = M.ring
    zero = R.base.zero()
    res = M.resolution(i + 1)
    a = res.free_twists(i)
    a_next = res.free_twists(i + 1)
    a_prev = res.free_twists(i - 1) if i >= 1 else ()
    d_next = res.d(i + 1)
    d_cur = res.d(i) if i >= 1 else None
    Nm = N.minimal()
    B = Nm.matrix
    b = B.row_twists
    c = B.col_degrees
    nb = len(b)
    if not a or not nb:
        return FPModule.zero(R)
    tw = [au + bv for au in a for bv in b]
    tw_prev = [ax + bv for ax in a_prev for bv in b]
    if d_cur is not None and tw_prev:
        first, first_deg = [], []
        for u, au in enumerate(a):
            for v, bv in enumerate(b):
                col = [zero] * len(tw_prev)
                for x in range(len(a_prev)):
                    col[x * nb + v] = d_cur.cols[u][x]
                first.append(col)
                first_deg.append(au + bv)
        second, second_deg = [], []
        for x, ax in enumerate(a_prev):
            for s, cs in enumerate(c):
                col = [zero] * len(tw_prev)
                for v in range(nb):
                    col[x * nb + v] = -B.cols[s][v]
                second.append(col)
                second_deg.append(ax + cs)
        gens, gen_degs = _kernel_projection(R, tw_prev, first, first_deg, second, second_deg)
    else:
        gens = []
        for k in range(len(tw)):
            col = [zero] * len(tw)
            col[k] = R.base.one()
            gens.append(col)
        gen_degs = list(tw)
    rels, rel_degs = [], []
    if d_next is not None:
        for w, aw in enumerate(a_next):
            for v, bv in enumerate(b):
                col = [zero] * len(tw)
                for u in range(len(a)):
                    col[u * nb + v] = d_next.cols[w][u]
                rels.append(col)
                rel_degs.append(aw + bv)
    for u, au in enumerate(a):
        for s, cs in enumerate(c):
            col = [zero] * len(tw)
            for v in range(nb):
                col[u * nb + v] = B.cols[s][v]
            rels.append(col)
            rel_degs.append(au + cs)
    return subquotient(R, tw, gens, gen_degs, rels, rel_degs)


def tensor(M: FPModule, N: FPModule) -> FPModule:
    return tor(0, M, N)


# --- ideals attached to modules -------------------------------------------

def annihilator(M: FPModule) -> IdealHandle:
    """``Ann(M) = ∩_i (U : e_i)`` with ``U`` the relation span."""
    R = M.ring
    Mm = M.minimal()
    A = Mm.matrix
    if A.nrows == 0:
        return R.unit_ideal()
    result = None
    for i, ti in enumerate(A.row_twists):
        e = [R.base.zero()] * A.nrows
        e[i] = R.base.one()
        big = Matrix(R, [e] + [list(c) for c in A.cols], A.row_twists,
                     [ti] + list(A.col_degrees), reduce=False)
        K = syzygy_matrix(big)
        gens = [col[0] for col in K.cols if col[0]]
        piece = IdealHandle(R, gens)
        result = piece if result is None else ideal_intersection(result, piece)
    return result


@dataclass
class StabilityResult:
    trace: IdealHandle
    stable: bool
    free_rank: int
    stable_part: FPModule


def dual_generators(M: FPModule) -> Matrix:
    """Columns generating ``M* ⊆ F0*`` (the kernel of the transposed presentation)."""
    Mm = M.minimal()
    A = Mm.matrix
    R = M.ring
    if A.nrows == 0:
        return Matrix(R, [], [], [])
    if A.ncols == 0:
        cols = []
        for i in range(A.nrows):
            e = [R.base.zero()] * A.nrows
            e[i] = R.base.one()
            cols.append(e)
        return Matrix(R, cols, [-t for t in A.row_twists], [-t for t in A.row_twists])
    return syzygy_matrix(A.transpose())


def trace_and_stability(M: FPModule) -> StabilityResult:
    R = M.ring
    Mm = M.minimal()
    K = dual_generators(Mm)
    trace = IdealHandle(R, [f for col in K.cols for f in col if f])
    unit = None
    for j, col in enumerate(K.cols):
        for i, f in enumerate(col):
            if f and f.is_constant():
                unit = (i, j)
                break
        if unit:
            break
    if unit is None:
        return StabilityResult(trace, True, 0, Mm)
    # a split surjection onto R hits generator i; split it off and repeat
    i, _ = unit
    A = Mm.matrix
    cols = [list(c[:i]) + list(c[i + 1:]) for c in A.cols]
    rest = FPModule(R, Matrix(R, cols, A.row_twists[:i] + A.row_twists[i + 1:],
                              A.col_degrees, reduce=False))
    sub = trace_and_stability(rest)
    return StabilityResult(trace, False, sub.free_rank + 1, sub.stable_part)


def split_free_summands(M: FPModule) -> tuple[int, FPModule]:
    r = trace_and_stability(M)
    return r.free_rank, r.stable_part


# --- numerics -------------------------------------------------------------

def _module_hilbert(M: FPModule) -> HilbertData:
    R = M.ring
    Mm = M.minimal()
    A = Mm.matrix
    weights = R.degrees
    if A.nrows == 0:
        return HilbertData({}, weights)
    sp = Space(R.base, A.row_twists)
    b = GroebnerBuilder(sp)
    b.add(R.rel_vectors(sp), rel=True)
    b.add([sp.from_column(list(c)) for c in A.cols])
    b.run()
    leads: dict[int, list] = {c: [] for c in range(A.nrows)}
    for E in b.leading_terms():
        comp, exps = sp.unpack(E)
        leads[comp].append(exps)
    num: dict[int, int] = {}
    for comp, mons in leads.items():
        part = hilbert_numerator(mons, weights)
        for d, v in part.items():
            k = d + A.row_twists[comp]
            num[k] = num.get(k, 0) + v
    num = {k: v for k, v in num.items() if v}
    return HilbertData(num, weights)


@dataclass
class ModuleNumerics:
    values: dict
    krull_dim: int
    length: int | None
    finite_length: bool
    certified: bool

    def to_json(self):
        return {"values": {str(k): v for k, v in sorted(self.values.items())},
                "krull_dim": self.krull_dim, "length": self.length,
                "finite_length": self.finite_length, "certified": self.certified}


def module_numerics(M: FPModule, degree_range: tuple[int, int] | None = None) -> ModuleNumerics:
    """Hilbert function on a degree window and the length when it is finite.

    Without a window the full support is used whenever the module has finite
    length.  A window that misses part of the support leaves the length
    undetermined (``certified`` is False).
    """
    H = _module_hilbert(M)
    dim = H.krull_dim
    finite = dim <= 0
    if not H.numerator:
        lo, hi = degree_range or (0, 0)
        vals = {d: 0 for d in range(lo, hi + 1)}
        return ModuleNumerics(vals, -1, 0, True, True)
    nlo, nhi = min(H.numerator), max(H.numerator)
    if degree_range is None:
        degree_range = (nlo, nhi if finite else nhi + 3)
    lo, hi = degree_range
    vals = dict(zip(range(lo, hi + 1), H.series_coefficients(lo, hi)))
    if not finite:
        return ModuleNumerics(vals, dim, None, False, True)
    full = H.series_coefficients(nlo, nhi)
    length = sum(full)
    support = [d for d, v in zip(range(nlo, nhi + 1), full) if v]
    covered = not support or (lo <= support[0] and support[-1] <= hi)
    return ModuleNumerics(vals, dim, length if covered else None, True, covered)


def module_length(M: FPModule) -> int | None:
    return module_numerics(M).length


def hilbert_function(M: FPModule, lo: int, hi: int) -> list[int]:
    return _module_hilbert(M).series_coefficients(lo, hi)


def is_cyclic(M: FPModule) -> bool:
    return M.minimal().ngens == 1


# --- depth, grade, dimensions ---------------------------------------------

def _ext_nonzero(i: int, M: FPModule, N: FPModule) -> bool:
    return not ext(i, M, N).is_zero()


def grade_of(X) -> int:
    """Least ``i`` with ``Ext^i(M, R) != 0`` (``M = R/I`` for an ideal)."""
    if isinstance(X, IdealHandle):
        if X.is_unit():
            return INF
        M = FPModule.quotient(X)
    else:
        M = X
    R = M.ring
    if M.is_zero():
        return INF
    Rmod = FPModule.free(R, [0])
    for i in range(R.dim + 1):
        if _ext_nonzero(i, M, Rmod):
            return i
    raise InvariantViolation("no nonvanishing Ext up to dim R")


def depth_of(M: FPModule) -> int:
    """Least ``i`` with ``Ext^i(k, M) != 0``."""
    R = M.ring
    if M.is_zero():
        return INF
    k = FPModule.residue_field(R)
    i = 0
    limit = R.dim
    while i <= limit:
        if _ext_nonzero(i, k, M):
            return i
        i += 1
    raise InvariantViolation("depth exceeds the Krull dimension")


def ring_depth(R: GradedRing) -> int:
    d = getattr(R, "_depth_cache", None)
    if d is None:
        d = depth_of(FPModule.free(R, [0]))
        R._depth_cache = d
    return d


def pd_or_infinite(M: FPModule):
    """Projective dimension, decided by whether ``F_{depth R + 1}`` vanishes."""
    R = M.ring
    if M.is_zero():
        return NEG_INF
    dR = ring_depth(R)
    res = M.resolution(dR + 1)
    if res.free_twists(dR + 1):
        return INF
    pd = max(i for i in range(dR + 1) if res.free_twists(i))
    dM = depth_of(M)
    if pd + dM != dR:
        _violation(f"Auslander-Buchsbaum fails: pd {pd} + depth {dM} != {dR}")
    _audit("auslander_buchsbaum")
    return pd


@dataclass
class ReflexivityResult:
    totally_reflexive: bool
    bidual_injective: bool
    bidual_surjective: bool
    ext_vanishing: bool
    dual_ext_vanishing: bool


def syzygy_module(M: FPModule, n: int) -> FPModule:
    """``Ω^n M``: the image of ``d_n``, presented by ``d_{n+1}``."""
    if n == 0:
        return M.minimal()
    R = M.ring
    res = M.resolution(n + 1)
    tw = res.free_twists(n)
    if not tw:
        return FPModule.zero(R)
    d = res.d(n + 1)
    if d is None:
        return FPModule(R, Matrix(R, [], tw, []), minimal=True)
    return FPModule(R, d, minimal=True)


def totally_reflexive(M: FPModule) -> ReflexivityResult:
    R = M.ring
    Mm = M.minimal()
    A = Mm.matrix
    if A.nrows == 0:
        return ReflexivityResult(True, True, True, True, True)
    K = dual_generators(Mm)  # M* = image of K in F0*
    Q = syzygy_matrix(K) if K.ncols else Matrix(R, [], [], [])
    # bidual map F0 -> (R^s)*, e_i -> row i of K
    theta = K.transpose() if K.ncols else None
    if theta is None:
        injective = False
        surjective = True
    else:
        kt = syzygy_matrix(theta)
        span = SpanMembership(R, A.row_twists, A.cols)
        injective = all(span.contains(col) for col in kt.cols)
        if Q.ncols:
            bidual = syzygy_matrix(Q.transpose())
        else:
            s = K.ncols
            cols = []
            for j in range(s):
                e = [R.base.zero()] * s
                e[j] = R.base.one()
                cols.append(e)
            bidual = Matrix(R, cols, [-d for d in K.col_degrees], [-d for d in K.col_degrees])
        img = SpanMembership(R, theta.row_twists, theta.cols)
        surjective = all(img.contains(col) for col in bidual.cols)
    top = R.dim + 1
    Rmod = FPModule.free(R, [0])
    ext_ok = all(not _ext_nonzero(i, Mm, Rmod) for i in range(1, top + 1))
    Mdual = FPModule(R, Q if K.ncols else Matrix(R, [], [], []))
    if K.ncols:
        Mdual = FPModule(R, Matrix(R, Q.cols, K.col_degrees, Q.col_degrees, reduce=False))
    dual_ok = all(not _ext_nonzero(i, Mdual, Rmod) for i in range(1, top + 1))
    return ReflexivityResult(injective and surjective and ext_ok and dual_ok,
                             injective, surjective, ext_ok, dual_ok)


@dataclass
class GdimResult:
    totally_reflexive: bool
    gdim: object


def gdim_suite(M: FPModule) -> GdimResult:
    R = M.ring
    if M.is_zero():
        return GdimResult(True, NEG_INF)
    tr = totally_reflexive(M).totally_reflexive
    dR = ring_depth(R)
    g = INF
    if tr:
        g = 0
    else:
        # least n with a totally reflexive n-th syzygy; n <= depth R suffices
        for n in range(1, dR + 1):
            syz = syzygy_module(M, n)
            if syz.is_zero() or totally_reflexive(syz).totally_reflexive:
                g = n
                break
    if is_finite(g):
        dM = depth_of(M)
        if g + dM != dR:
            _violation(f"Auslander-Bridger fails: gdim {g} + depth {dM} != {dR}")
        _audit("auslander_bridger")
    return GdimResult(tr, g)


def canonical_module(R: GradedRing) -> FPModule:
    """``Ext^c_P(R, P)`` with ``c`` the codimension, viewed as an ``R``-module."""
    dim = R.dim
    if ring_depth(R) != dim:
        raise PreconditionError("canonical module requires CM")
    P = R.ambient
    c = R.nvars - dim
    rels = list(R.gb_of_relations)
    RP = FPModule(P, Matrix(P, [[g] for g in rels], [0], [g.degree() for g in rels]))
    W = ext(c, RP, FPModule.free(P, [0])).minimal()
    A = W.matrix
    return minimal_presentation(FPModule(R, Matrix(R, A.cols, A.row_twists, A.col_degrees)))


def is_gorenstein_ring(R: GradedRing) -> bool:
    try:
        w = canonical_module(R)
    except PreconditionError:
        return False
    return is_cyclic(w) and w.is_free()


def module_direct_sum(M: FPModule, N: FPModule) -> FPModule:
    R = M.ring
    A, B = M.matrix, N.matrix
    zero = R.base.zero()
    cols = [list(c) + [zero] * B.nrows for c in A.cols] + \
           [[zero] * A.nrows + list(c) for c in B.cols]
    return FPModule(R, Matrix(R, cols, A.row_twists + B.row_twists,
                              A.col_degrees + B.col_degrees, reduce=False))


def change_ring(M: FPModule, S: GradedRing) -> FPModule:
    """The same presentation read over ``S`` (same polynomial ring, more relations)."""
    A = M.matrix
    return FPModule(S, Matrix(S, A.cols, A.row_twists, A.col_degrees))
