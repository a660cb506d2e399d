"""Pure-Python hot kernels.

Raw representations used throughout the engine:

* polynomial: ``dict[int, int]`` exponent -> nonzero coefficient
* Hecke element: ``dict[int, dict[int, int]]`` ball index -> polynomial

Ball indices are ordered by (length, ShortLex), so every basis change is a
single sweep in decreasing index order.  :mod:`affcell._ckernels` compiles the
same functions; :mod:`affcell.kernels` picks one at import.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def padd(dst, src, scale=1, shift=0):
    """dst += scale * v**shift * src, in place."""
    for e, c in src.items():
        e += shift
        c = dst.get(e, 0) + scale * c
        if c:
            dst[e] = c
        else:
            dst.pop(e, None)


def pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def axpy(dst, coeff, src):
    """dst += coeff * src for Hecke elements; coeff is a polynomial."""
    if len(coeff) == 1:
        ((k, a),) = coeff.items()
        for w, p in src.items():
            d = dst.get(w)
            if d is None:
                dst[w] = {e + k: a * c for e, c in p.items()}
            else:
                for e, c in p.items():
                    e += k
                    c = d.get(e, 0) + a * c
                    if c:
                        d[e] = c
                    else:
                        del d[e]
                if not d:
                    del dst[w]
        return
    for w, p in src.items():
        d = dst.get(w)
        if d is None:
            d = {}
            dst[w] = d
        for k, a in coeff.items():
            for e, c in p.items():
                e += k
                c = d.get(e, 0) + a * c
                if c:
                    d[e] = c
                else:
                    del d[e]
        if not d:
            del dst[w]


def gen_mult(h, table, length, weight):
    """Multiply a T-basis element by T_s on one side.

    ``table`` is ``lmul[s]`` (left) or ``rmul[s]`` (right).  Raises
    IndexError when a product leaves the ball.
    """
    out = {}
    for w, p in h.items():
        u = table[w]
        if u < 0:
            raise IndexError(w)
        d = out.get(u)
        if d is None:
            out[u] = dict(p)
        else:
            padd(d, p)
            if not d:
                del out[u]
        if length[u] < length[w]:
            d = out.get(w)
            if d is None:
                d = {}
                out[w] = d
            padd(d, p, 1, weight)
            padd(d, p, -1, -weight)
            if not d:
                del out[w]
    return out


def kl_reduce(E, top, C):
    """Turn a bar-invariant E = T_top + ... into C_top in place.

    Sweeps E in decreasing index order; whenever a coefficient has a
    non-negative-degree term, subtracts its symmetric head times C_y.
    Returns the corrections ``{y: m_y}``.
    """
    corrections = {}
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
        axpy(E, {e: -c for e, c in m.items()}, C[y])
    return corrections


def t_to_c(h, C):
    """Convert T-coordinates to C-coordinates (unitriangular back-substitution)."""
    out = {}
    if not h:
        return out
    h = {w: dict(p) for w, p in h.items()}
    for y in range(max(h), -1, -1):
        p = h.get(y)
        if p is None:
            continue
        out[y] = dict(p)
        axpy(h, {e: -c for e, c in p.items()}, C[y])
    return out


def c_to_t(hc, C):
    out = {}
    for y, p in hc.items():
        axpy(out, p, C[y])
    return out


def c_gen_mult(hc, M):
    """C_s * h for h in C-coordinates, with ``M[w]`` the C-expansion of C_s C_w."""
    out = {}
    for w, p in hc.items():
        row = M[w]
        if row is None:
            raise IndexError(w)
        axpy(out, p, row)
    return out
