"""Pure-Python reference kernels.

Vectors are lists of ``(key, E, c)`` triples sorted strictly descending by
``key``.  ``key`` is an integer sort key that is additive under multiplication
by a monomial, ``E`` packs the exponent vector (plus the component index in
its top field) and ``c`` is a nonzero residue mod ``p``.  The compiled module
``_speedups`` implements the same functions with identical results.
"""

BACKEND = "python"


def shift(f, mkey, mE, c, p):
    """Return ``c * m * f`` for a monomial with packed data ``(mkey, mE)``."""
    if c == 1:
        return [(k + mkey, E + mE, a) for k, E, a in f]
    return [(k + mkey, E + mE, a * c % p) for k, E, a in f]


def axpy(f, fstart, g, gstart, c, mkey, mE, p):
    """Return ``f[fstart:] + c * m * g[gstart:]`` merged, zero terms dropped."""
    out = []
    append = out.append
    i = fstart
    nf = len(f)
    j = gstart
    ng = len(g)
    while i < nf and j < ng:
        fk = f[i][0]
        gk, gE, ga = g[j]
        gk += mkey
        if fk > gk:
            append(f[i])
            i += 1
        elif fk < gk:
            append((gk, gE + mE, ga * c % p))
            j += 1
        else:
            s = (f[i][2] + ga * c) % p
            if s:
                append((fk, f[i][1], s))
            i += 1
            j += 1
    while i < nf:
        append(f[i])
        i += 1
    while j < ng:
        gk, gE, ga = g[j]
        append((gk + mkey, gE + mE, ga * c % p))
        j += 1
    return out


def reduce_vector(f, reducers, shift_bits, guard, p, full):
    """Normal form of ``f`` against monic reducers grouped by component.

    ``reducers`` maps a component index to a list of ``(leadE, leadkey, g)``.
    With ``full`` false only the leading term is reduced (top reduction).
    """
    result = []
    i = 0
    while i < len(f):
        k, E, c = f[i]
        cands = reducers.get(E >> shift_bits)
        red = None
        if cands:
            Eg = E | guard
            for cand in cands:
                if (Eg - cand[0]) & guard == guard:
                    red = cand
                    break
        if red is None:
            if not full:
                return f[i:] if i else f
            result.append(f[i])
            i += 1
            continue
        lE, lk, g = red
        # g is monic: subtracting c*m*g cancels f[i]; terms before i are final
        f = axpy(f, i + 1, g, 1, p - c, k - lk, E - lE, p)
        i = 0
    return result


def rref(rows, ncols, p):
    """Reduced row echelon form of a dense matrix mod ``p``.

    Returns ``(basis_rows, pivot_columns)``; input rows are not modified.
    """
    mat = [[x % p for x in r] for r in rows]
    pivots = []
    basis = []
    for row in mat:
        # eliminate existing pivots from the incoming row
        for b, pc in zip(basis, pivots):
            a = row[pc]
            if a:
                for t in range(pc, ncols):
                    if b[t]:
                        row[t] = (row[t] - a * b[t]) % p
        lead = -1
        for t in range(ncols):
            if row[t]:
                lead = t
                break
        if lead < 0:
            continue
        inv = pow(row[lead], -1, p)
        row = [x * inv % p for x in row]
        for b in basis:
            a = b[lead]
            if a:
                for t in range(lead, ncols):
                    if row[t]:
                        b[t] = (b[t] - a * row[t]) % p
        basis.append(row)
        pivots.append(lead)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [basis[i] for i in order], [pivots[i] for i in order]


def rank(rows, ncols, p):
    return len(rref(rows, ncols, p)[1])
