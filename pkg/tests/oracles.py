"""Independent dense linear-algebra oracles used by the tests.

Nothing here calls the package's Groebner or kernel code: graded pieces of
ideals are spanned explicitly by monomial multiples and row-reduced with a
small Gaussian elimination written for the tests.
"""

from __future__ import annotations

import itertools


def monomials(nvars: int, d: int, weights=None) -> list[tuple]:
    weights = weights or (1,) * nvars
    out = []
    for e in itertools.product(*[range(d // w + 1) for w in weights]):
        if sum(a * w for a, w in zip(e, weights)) == d:
            out.append(tuple(e))
    return out


def echelon(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Fully reduced row echelon form; returns (rows, pivot columns)."""
    rows = [[x % p for x in r] for r in rows]
    out: list[list[int]] = []
    piv: list[int] = []
    for r in rows:
        for b, c in zip(out, piv):
            if r[c]:
                f = r[c]
                r = [(x - f * y) % p for x, y in zip(r, b)]
        lead = next((i for i, x in enumerate(r) if x), None)
        if lead is None:
            continue
        inv = pow(r[lead], p - 2, p)
        r = [x * inv % p for x in r]
        for k, b in enumerate(out):
            if b[lead]:
                f = b[lead]
                out[k] = [(x - f * y) % p for x, y in zip(b, r)]
        out.append(r)
        piv.append(lead)
    return out, piv


def rank(rows, p) -> int:
    return len(echelon(rows, p)[1])


class GradedPiece:
    """The degree-``d`` part of the ideal generated by ``polys`` in ``k[x]``.

    Columns are the degree-``d`` monomials sorted descending in the ring's
    order, so the echelon form reduces onto standard monomials.
    """

    def __init__(self, ring, polys, d: int):
        self.ring = ring
        self.p = ring.p
        self.cols = sorted(monomials(ring.nvars, d, ring.degrees), key=ring.key, reverse=True)
        self.index = {m: i for i, m in enumerate(self.cols)}
        rows = []
        for f in polys:
            if not f.terms:
                continue
            e = f.degree()
            if e is None or e > d:
                continue
            for m in monomials(ring.nvars, d - e, ring.degrees):
                rows.append(self.vector(f.mul_monomial(m)))
        self.rows, self.pivots = echelon(rows, self.p)

    def vector(self, f) -> list[int]:
        v = [0] * len(self.cols)
        for e, c in f.terms:
            v[self.index[e]] = c % self.p
        return v

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def codim(self) -> int:
        return len(self.cols) - self.dim

    def remainder(self, f) -> dict:
        v = self.vector(f)
        for b, c in zip(self.rows, self.pivots):
            if v[c]:
                k = v[c]
                v = [(x - k * y) % self.p for x, y in zip(v, b)]
        return {self.cols[i]: x for i, x in enumerate(v) if x}

    def contains(self, f) -> bool:
        return not self.remainder(f)


def hilbert_function(ring, polys, d: int) -> int:
    return GradedPiece(ring, polys, d).codim


def intersection_dim(ring, A, B, d: int) -> int:
    a, b = GradedPiece(ring, A, d), GradedPiece(ring, B, d)
    s = rank(a.rows + b.rows, ring.p)
    return a.dim + b.dim - s


def staircase_dim(lead_exps: list[tuple], nvars: int) -> int:
    """Largest coordinate subspace avoided by every leading monomial."""
    best = -1 if any(sum(e) == 0 for e in lead_exps) else 0
    if best < 0:
        return -1
    for k in range(nvars, 0, -1):
        for S in itertools.combinations(range(nvars), k):
            if all(any(e[i] for i in range(nvars) if i not in S) for e in lead_exps):
                return k
    return best


# --- Ext / Tor over k[x]/(x^m) ---------------------------------------------

def _mult_matrix(src: int, dst: int, power: int, p: int) -> list[list[int]]:
    """k-matrix of multiplication by x^power from k[x]/(x^src) to k[x]/(x^dst)
    (entries used only for ranks: columns are basis x^j of the source)."""
    rows = [[0] * src for _ in range(dst)]
    for j in range(src):
        if j + power < dst:
            rows[j + power][j] = 1
    return rows


def _periodic_resolution(m: int, a: int, top: int) -> list[int]:
    """Exponents of the differentials d_1..d_top resolving k[x]/(x^a) over k[x]/(x^m)."""
    if a >= m:
        return []
    return [a if i % 2 == 1 else m - a for i in range(1, top + 1)]


def _homology_length(maps_in, maps_out, dims, p) -> int:
    kernel = dims - (rank(maps_out, p) if maps_out is not None else 0)
    image = rank(maps_in, p) if maps_in is not None else 0
    return kernel - image


def ext_length(m: int, a: int, b: int, i: int, p: int = 32003) -> int:
    """length Ext^i(R/x^a, R/x^b) over R = k[x]/(x^m) by dense linear algebra.

    Hom(R, R/x^b) = R/x^b, and d_j^* is multiplication by the same power of x.
    """
    if b <= 0 or a <= 0:
        return 0
    b = min(b, m)
    d = _periodic_resolution(m, a, i + 1)
    if a >= m:
        return b if i == 0 else 0
    # cochain C^j = R/x^b; delta^j = x^{d_{j+1}}: C^j -> C^{j+1}
    out = _mult_matrix(b, b, d[i], p) if i < len(d) else None
    inn = _mult_matrix(b, b, d[i - 1], p) if i >= 1 else None
    return _homology_length(inn, out, b, p)


def tor_length(m: int, a: int, b: int, i: int, p: int = 32003) -> int:
    """length Tor_i(R/x^a, R/x^b) over R = k[x]/(x^m) by dense linear algebra."""
    if b <= 0 or a <= 0:
        return 0
    b = min(b, m)
    if a >= m:
        return b if i == 0 else 0
    d = _periodic_resolution(m, a, i + 1)
    # chain C_j = R/x^b; d_j: C_j -> C_{j-1} is multiplication by x^{d_j}
    out = _mult_matrix(b, b, d[i - 1], p) if i >= 1 else None
    inn = _mult_matrix(b, b, d[i], p)
    return _homology_length(inn, out, b, p)
