# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``.

Sort keys and packed exponents are arbitrary-precision Python ints and stay
Python objects here; coefficients and the dense elimination run in C.
"""

from libc.stdlib cimport malloc, free

BACKEND = "cython"


def shift(list f, object mkey, object mE, long long c, long long p):
    cdef list out = []
    cdef tuple t
    if c == 1:
        for t in f:
            out.append((t[0] + mkey, t[1] + mE, t[2]))
    else:
        for t in f:
            out.append((t[0] + mkey, t[1] + mE, (<long long>t[2]) * c % p))
    return out


cdef list _axpy(list f, Py_ssize_t i, list g, Py_ssize_t j, long long c,
                object mkey, object mE, long long p):
    cdef list out = []
    cdef Py_ssize_t nf = len(f), ng = len(g)
    cdef tuple ft, gt
    cdef object fk, gk
    cdef long long s
    while i < nf and j < ng:
        ft = <tuple>f[i]
        gt = <tuple>g[j]
        fk = ft[0]
        gk = gt[0] + mkey
        if fk > gk:
            out.append(ft)
            i += 1
        elif fk < gk:
            out.append((gk, gt[1] + mE, (<long long>gt[2]) * c % p))
            j += 1
        else:
            s = ((<long long>ft[2]) + (<long long>gt[2]) * c) % p
            if s:
                out.append((fk, ft[1], s))
            i += 1
            j += 1
    while i < nf:
        out.append(f[i])
        i += 1
    while j < ng:
        gt = <tuple>g[j]
        out.append((gt[0] + mkey, gt[1] + mE, (<long long>gt[2]) * c % p))
        j += 1
    return out


def axpy(list f, Py_ssize_t fstart, list g, Py_ssize_t gstart, long long c,
         object mkey, object mE, long long p):
    return _axpy(f, fstart, g, gstart, c, mkey, mE, p)


def reduce_vector(list f, dict reducers, int shift_bits, object guard, long long p, bint full):
    cdef list result = []
    cdef Py_ssize_t i = 0
    cdef tuple t, cand, red
    cdef object E, Eg, k, cands
    cdef long long c
    cdef list g
    while i < len(f):
        t = <tuple>f[i]
        k = t[0]
        E = t[1]
        c = t[2]
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
            result.append(t)
            i += 1
            continue
        g = <list>red[2]
        f = _axpy(f, i + 1, g, 1, p - c, k - red[1], E - red[0], p)
        i = 0
    return result


def rref(rows, Py_ssize_t ncols, long long p):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r, t, b, lead, nb = 0
    cdef long long a, inv
    cdef long long *mat
    cdef Py_ssize_t *piv
    if nrows == 0 or ncols == 0:
        return [], []
    mat = <long long *>malloc(nrows * ncols * sizeof(long long))
    piv = <Py_ssize_t *>malloc(nrows * sizeof(Py_ssize_t))
    if mat == NULL or piv == NULL:
        free(mat)
        free(piv)
        raise MemoryError()
    try:
        for r in range(nrows):
            row = rows[r]
            for t in range(ncols):
                a = row[t] % p
                if a < 0:
                    a += p
                mat[r * ncols + t] = a
        # basis rows are compacted into the first nb slots
        for r in range(nrows):
            if r != nb:
                for t in range(ncols):
                    mat[nb * ncols + t] = mat[r * ncols + t]
            for b in range(nb):
                a = mat[nb * ncols + piv[b]]
                if a:
                    for t in range(piv[b], ncols):
                        if mat[b * ncols + t]:
                            mat[nb * ncols + t] = (mat[nb * ncols + t] - a * mat[b * ncols + t]) % p
                            if mat[nb * ncols + t] < 0:
                                mat[nb * ncols + t] += p
            lead = -1
            for t in range(ncols):
                if mat[nb * ncols + t]:
                    lead = t
                    break
            if lead < 0:
                continue
            inv = pow(mat[nb * ncols + lead], -1, p)
            for t in range(lead, ncols):
                mat[nb * ncols + t] = mat[nb * ncols + t] * inv % p
            for b in range(nb):
                a = mat[b * ncols + lead]
                if a:
                    for t in range(lead, ncols):
                        if mat[nb * ncols + t]:
                            mat[b * ncols + t] = (mat[b * ncols + t] - a * mat[nb * ncols + t]) % p
                            if mat[b * ncols + t] < 0:
                                mat[b * ncols + t] += p
            piv[nb] = lead
            nb += 1
        order = sorted(range(nb), key=lambda i: piv[i])
        basis = [[mat[i * ncols + t] for t in range(ncols)] for i in order]
        pivots = [piv[i] for i in order]
        return basis, pivots
    finally:
        free(mat)
        free(piv)


def rank(rows, Py_ssize_t ncols, long long p):
    return len(rref(rows, ncols, p)[1])
