# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in :mod:`affcell._kernels_py`.

Same raw representations and semantics.  Coefficients stay Python ints so
arithmetic is exact; the speedup comes from typed dict access and loops.
"""

IMPLEMENTATION = "cython"


cdef inline void _padd(dict dst, dict src, object scale, long shift):
    cdef object e, c, v
    for e, c in src.items():
        e = e + shift
        v = dst.get(e, 0) + scale * c
        if v:
            dst[e] = v
        else:
            dst.pop(e, None)


def padd(dict dst, dict src, scale=1, long shift=0):
    """dst += scale * v**shift * src, in place."""
    _padd(dst, src, scale, shift)


def pmul(dict p, dict q):
    cdef dict out = {}
    cdef object e1, c1, e2, c2, e
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


cdef void _axpy(dict dst, dict coeff, dict src):
    cdef object w, p, k, a, e, c
    cdef dict d, pd
    cdef long kk
    if len(coeff) == 1:
        for k, a in coeff.items():
            kk = k
        for w, p in src.items():
            pd = <dict>p
            d = dst.get(w)
            if d is None:
                dst[w] = {e + kk: a * c for e, c in pd.items()}
            else:
                for e, c in pd.items():
                    e = e + kk
                    c = d.get(e, 0) + a * c
                    if c:
                        d[e] = c
                    else:
                        del d[e]
                if not d:
                    del dst[w]
        return
    for w, p in src.items():
        pd = <dict>p
        d = dst.get(w)
        if d is None:
            d = {}
            dst[w] = d
        for k, a in coeff.items():
            kk = k
            for e, c in pd.items():
                e = e + kk
                c = d.get(e, 0) + a * c
                if c:
                    d[e] = c
                else:
                    del d[e]
        if not d:
            del dst[w]


def axpy(dict dst, dict coeff, dict src):
    """dst += coeff * src for Hecke elements; coeff is a polynomial."""
    _axpy(dst, coeff, src)


def gen_mult(dict h, table, length, long weight):
    """Multiply a T-basis element by T_s on one side (see the Python version)."""
    cdef dict out = {}
    cdef dict d, pd
    cdef object p
    cdef Py_ssize_t w, u
    for w, p in h.items():
        pd = <dict>p
        u = table[w]
        if u < 0:
            raise IndexError(w)
        d = out.get(u)
        if d is None:
            out[u] = dict(pd)
        else:
            _padd(d, pd, 1, 0)
            if not d:
                del out[u]
        if length[u] < length[w]:
            d = out.get(w)
            if d is None:
                d = {}
                out[w] = d
            _padd(d, pd, 1, weight)
            _padd(d, pd, -1, -weight)
            if not d:
                del out[w]
    return out


def kl_reduce(dict E, Py_ssize_t top, C):
    """Turn a bar-invariant E = T_top + ... into C_top in place; returns corrections."""
    cdef dict corrections = {}
    cdef dict m, p
    cdef Py_ssize_t y
    cdef object e, c
    for y in range(top - 1, -1, -1):
        p = E.get(y)
        if p is None or max(p) < 0:
            continue
        m = {}
        for e, c in p.items():
            if e > 0:
                m[e] = c
                m[-e] = c
            elif e == 0:
                m[0] = c
        corrections[y] = m
        _axpy(E, {e: -c for e, c in m.items()}, C[y])
    return corrections


def t_to_c(dict h, C):
    """Convert T-coordinates to C-coordinates (unitriangular back-substitution)."""
    cdef dict out = {}
    cdef dict p
    cdef Py_ssize_t y
    if not h:
        return out
    h = {w: dict(q) for w, q in h.items()}
    for y in range(max(h), -1, -1):
        p = h.get(y)
        if p is None:
            continue
        out[y] = dict(p)
        _axpy(h, {e: -c for e, c in p.items()}, C[y])
    return out


def c_to_t(dict hc, C):
    cdef dict out = {}
    for y, p in hc.items():
        _axpy(out, p, C[y])
    return out


def c_gen_mult(dict hc, M):
    """C_s * h for h in C-coordinates, with ``M[w]`` the C-expansion of C_s C_w."""
    cdef dict out = {}
    for w, p in hc.items():
        row = M[w]
        if row is None:
            raise IndexError(w)
        _axpy(out, p, row)
    return out
