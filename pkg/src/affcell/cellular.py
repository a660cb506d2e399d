"""Affine cellular structure of the cell ideals M_Gamma.

For a two-sided cell Gamma = {z_i^-1 tau w z_j} the module M_Gamma (the span
of the classes [C_x], x in Gamma, modulo lower cells) is compared with the
generalized matrix algebra A(V, B, phi) = V (x) B (x) V:

* ``P(y)`` is the T-basis element with ``P(y) C_w = C_{yw}``; it is solved by
  triangular elimination against ``{T_x C_w : x in X}``;
* ``phi(v_j, v_k)`` expands ``[C_{w z_j}][C_{z_k^-1 w}]`` in the basis
  ``[P(tau) C_w]``;
* ``Phi(v_i (x) tau (x) v_j) = [P(z_i^-1) P(tau) C_w P_R(z_j)]`` with
  ``P_R(y^-1) = flat(P(y))``.

Every identity is checked exactly inside the ball of the KL cache; products
that could leave the ball are never formed.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import kernels as K
from .cells import CheckResult, cell_partition, strip_construction, strip_left_cells
from .celldata import CellDescriptor, TauKind, ZoneTable, classify_case
from .coxeter import GroupElement
from .hecke import HeckeElement, TruncationError
from .klbasis import KLCache
from .laurent import LaurentPoly

__all__ = [
    "BaseRing",
    "BElement",
    "FormMatrix",
    "CellAlgebraElement",
    "ConstructionError",
    "CellContext",
    "a_mult",
    "check_I1_I5",
    "verify_theorem",
    "finite_cells_g2",
    "simple_module_report",
    "g2_finite_matrix_expected",
]

log = logging.getLogger(__name__)


class ConstructionError(AssertionError):
    """An elimination left a residual or a projection met a higher cell."""


# ---------------------------------------------------------------------------
# base rings


_VARIANTS = {"free2": "poly2", "free1": "poly1", "order2": "quad", "trivial": "scalar"}


@dataclass(frozen=True)
class BaseRing:
    """``A[t1,t2]``, ``A[t]``, ``A[t]/(t^2-1)`` or ``A``; monomials are exponent tuples."""

    variant: str

    @classmethod
    def from_tau(cls, tau: TauKind) -> "BaseRing":
        return cls(_VARIANTS[tau.variant])

    @property
    def nvars(self) -> int:
        return {"poly2": 2, "poly1": 1, "quad": 1, "scalar": 0}[self.variant]

    def one(self) -> tuple:
        return (0,) * self.nvars

    def normalize(self, mon: tuple) -> tuple:
        if len(mon) != self.nvars:
            raise ValueError(f"monomial {mon} does not fit {self.variant}")
        if self.variant == "quad":
            return (mon[0] % 2,)
        return tuple(mon)

    def mul(self, a: tuple, b: tuple) -> tuple:
        return self.normalize(tuple(x + y for x, y in zip(a, b)))

    def describe(self) -> str:
        return {"poly2": "A[t1,t2]", "poly1": "A[t]", "quad": "A[t]/(t^2-1)", "scalar": "A"}[self.variant]

    def mon_str(self, mon: tuple) -> str:
        names = ("t1", "t2") if self.nvars == 2 else ("t",)
        parts = []
        for n, e in zip(names, mon):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts) or "1"


class BElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: BaseRing, terms: Optional[dict] = None):
        self.ring = ring
        clean: dict[tuple, LaurentPoly] = {}
        for mon, p in (terms or {}).items():
            mon = ring.normalize(mon)
            if isinstance(p, int):
                p = LaurentPoly.monomial(0, p)
            q = clean.get(mon, LaurentPoly.zero()) + p
            if q:
                clean[mon] = q
            else:
                clean.pop(mon, None)
        self.terms = clean

    @classmethod
    def zero(cls, ring: BaseRing) -> "BElement":
        return cls(ring)

    @classmethod
    def monomial(cls, ring: BaseRing, mon: tuple, coeff=1) -> "BElement":
        return cls(ring, {mon: coeff})

    def __add__(self, other: "BElement") -> "BElement":
        out = dict(self.terms)
        for m, p in other.terms.items():
            out[m] = out.get(m, LaurentPoly.zero()) + p
        return BElement(self.ring, out)

    def __sub__(self, other: "BElement") -> "BElement":
        return self + other.scale(-1)

    def scale(self, c) -> "BElement":
        if isinstance(c, int):
            c = LaurentPoly.monomial(0, c)
        return BElement(self.ring, {m: c * p for m, p in self.terms.items()})

    def __mul__(self, other: "BElement") -> "BElement":
        out: dict = {}
        for m1, p1 in self.terms.items():
            for m2, p2 in other.terms.items():
                m = self.ring.mul(m1, m2)
                out[m] = out.get(m, LaurentPoly.zero()) + p1 * p2
        return BElement(self.ring, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, mon: tuple) -> LaurentPoly:
        return self.terms.get(self.ring.normalize(mon), LaurentPoly.zero())

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def evaluate_t(self, point: tuple) -> LaurentPoly:
        """Substitute scalar values for the t-variables."""
        out = LaurentPoly.zero()
        for mon, p in self.terms.items():
            k = 1
            for x, e in zip(point, mon):
                k *= x**e
            out = out + p * k
        return out

    def to_json(self) -> list:
        return [{"monomial": list(m), "coeff": p.to_json()} for m, p in sorted(self.terms.items())]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mon in sorted(self.terms):
            p = self.terms[mon]
            ms = self.ring.mon_str(mon)
            ps = p.to_text()
            if ms == "1":
                parts.append(ps)
            elif p == 1:
                parts.append(ms)
            else:
                parts.append(f"({ps})*{ms}")
        return " + ".join(parts)

    __repr__ = __str__


@dataclass
class FormMatrix:
    ring: BaseRing
    entries: list[list[Optional[BElement]]]  # None: not computable inside the ball

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def complete(self) -> bool:
        return all(e is not None for row in self.entries for e in row)

    def __getitem__(self, jk: tuple[int, int]) -> BElement:
        e = self.entries[jk[0]][jk[1]]
        if e is None:
            raise TruncationError(f"phi(v_{jk[0] + 1}, v_{jk[1] + 1}) lies outside the verified ball")
        return e

    def is_symmetric(self) -> bool:
        for j, k in itertools.combinations(range(self.m), 2):
            a, b = self.entries[j][k], self.entries[k][j]
            if a is not None and b is not None and a != b:
                return False
        return True

    def to_json(self) -> list:
        return [[None if e is None else e.to_json() for e in row] for row in self.entries]

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join("?" if e is None else str(e) for e in row) + "]" for row in self.entries)


class CellAlgebraElement:
    """Element of ``V (x) B (x) V``: ``{(i, monomial, j): coefficient}`` with 0-based i, j."""

    __slots__ = ("ring", "m", "terms")

    def __init__(self, ring: BaseRing, m: int, terms: Optional[dict] = None):
        self.ring = ring
        self.m = m
        clean: dict = {}
        for (i, mon, j), p in (terms or {}).items():
            if not (0 <= i < m and 0 <= j < m):
                raise IndexError(f"index out of range 0..{m - 1}: {(i, j)}")
            key = (i, ring.normalize(mon), j)
            if isinstance(p, int):
                p = LaurentPoly.monomial(0, p)
            q = clean.get(key, LaurentPoly.zero()) + p
            if q:
                clean[key] = q
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def basis(cls, ring: BaseRing, m: int, i: int, mon: tuple, j: int) -> "CellAlgebraElement":
        return cls(ring, m, {(i, mon, j): 1})

    def __add__(self, other: "CellAlgebraElement") -> "CellAlgebraElement":
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out.get(k, LaurentPoly.zero()) + p
        return CellAlgebraElement(self.ring, self.m, out)

    def scale(self, c) -> "CellAlgebraElement":
        if isinstance(c, int):
            c = LaurentPoly.monomial(0, c)
        return CellAlgebraElement(self.ring, self.m, {k: c * p for k, p in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellAlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({p.to_text()}) v{i + 1}*{self.ring.mon_str(mon)}*v{j + 1}" for (i, mon, j), p in sorted(self.terms.items())
        )


def a_mult(x: CellAlgebraElement, y: CellAlgebraElement, form: FormMatrix) -> CellAlgebraElement:
    """``(v_i b v_j)(v_k b' v_l) = v_i b phi(v_j, v_k) b' v_l``, extended bilinearly."""
    if x.m != y.m or x.m != form.m:
        raise ValueError("dimension mismatch")
    ring = x.ring
    out: dict = {}
    for (i, b1, j), p in x.terms.items():
        for (k, b2, l), q in y.terms.items():
            f = form[j, k]
            pq = p * q
            for mon, c in f.terms.items():
                key = (i, ring.mul(ring.mul(b1, mon), b2), l)
                out[key] = out.get(key, LaurentPoly.zero()) + pq * c
    return CellAlgebraElement(ring, x.m, out)


# ---------------------------------------------------------------------------
# raw helpers (index -> {exp: coeff})


def _neg(p: dict) -> dict:
    return {e: -c for e, c in p.items()}


def _is_negative(p: dict) -> bool:
    return max(p) < 0


def _flat(h: dict, inv: list[int]) -> dict:
    return {inv[w]: p for w, p in h.items()}


def _describe(ball, h: dict, limit: int = 4) -> str:
    items = sorted(h.items(), key=lambda kv: -kv[0])[:limit]
    s = " + ".join(f"({LaurentPoly.from_dict(p).to_text()})*C[{ball.elements[w]}]" for w, p in items)
    return s + (" + ..." if len(h) > limit else "") if s else "0"


# ---------------------------------------------------------------------------
# the construction for one cell


class CellContext:
    """All data attached to one descriptor cell inside a KL cache.

    ``strips`` (the strip partition of the ball) decides membership in Gamma
    and which coefficients may be dropped by the projection.
    """

    def __init__(self, cache: KLCache, table: ZoneTable, cname: str, strips: Optional[dict] = None):
        if cname.startswith("c~"):
            cname = "c" + cname[2:]
        if cname not in table.descriptors:
            raise KeyError(f"{cname} has no (w, T, Z) descriptor in zone {table.zone}")
        self.cache = cache
        self.table = table
        self.desc: CellDescriptor = table.descriptors[cname]
        self.ring = BaseRing.from_tau(self.desc.tau)
        ball = self.ball = cache.ball
        self.strips = strips if strips is not None else strip_construction(table, ball)
        self.label: list[Optional[str]] = [None] * len(ball)
        for name, blk in self.strips.items():
            for i in blk:
                self.label[i] = name
        system = cache.system
        self.a_of = {name: table.a_value("c" + name[2:], system) for name in self.strips}
        self.name = self.desc.name
        self.a = self.a_of[self.name]
        grp = ball.group
        w = self.desc.w_gamma
        self.w = w
        self.w_idx = ball.idx(w)
        self.case, self.parabolic, self.s = classify_case(w)
        self._w_inv = ball.idx(grp.inverse(w))
        self.z = list(self.desc.z_set)
        self.zinv = [grp.inverse(z) for z in self.z]
        cache.ensure(min(cache.radius, ball.radius))
        self._txc: dict[int, dict] = {0: cache.c_raw(self.w_idx)}
        self._P: dict[int, dict] = {}
        self._ptau: dict[tuple, dict] = {}
        self._ytau: dict[tuple, dict] = {}
        self._left: dict[tuple, dict] = {}
        self._phi: dict[tuple, dict] = {}
        self._tau_of: dict[int, tuple] = {}
        self._tau_basis: dict[tuple, dict] = {}

    @property
    def radius(self) -> int:
        return self.cache.radius

    # -- admissible set X ----------------------------------------------------

    def in_X_prime(self, x: int) -> bool:
        """No right descent in the parabolic (a product leaving the ball is longer)."""
        b = self.ball
        for s in self.parabolic:
            u = b.rmul[s][x]
            if u >= 0 and b.length[u] < b.length[x]:
                return False
        return True

    def in_X(self, x: int) -> bool:
        if self.in_X_prime(x):
            return True
        if self.case != "s-times-longest":
            return False
        b = self.ball
        xp = b.rmul[self.s][x]
        return xp >= 0 and b.length[xp] < b.length[x] and self.in_X_prime(xp)

    def t_x_c(self, x: int) -> dict:
        """``T_x C_w`` in T-coordinates (memoized along the ShortLex word of x)."""
        hit = self._txc.get(x)
        if hit is not None:
            return hit
        b = self.ball
        s = b.words[x][0]
        inner = self.t_x_c(b.lmul[s][x])
        try:
            h = K.gen_mult(inner, b.lmul[s], b.length, self.cache.system.L[s])
        except IndexError:
            raise TruncationError(f"T_x C_w leaves the ball for x = {b.elements[x]}") from None
        self._txc[x] = h
        return h

    def expand_on_X(self, h: dict) -> dict:
        """Write h (T-coordinates) as ``sum_x p_x T_x C_w`` over x in X.

        Greedy on the longest support element g = x w; raises
        ConstructionError if g is not of that form or a residual remains.
        """
        b = self.ball
        R = {w: dict(p) for w, p in h.items()}
        out: dict[int, dict] = {}
        lw = b.length[self.w_idx]
        while R:
            g = max(R)
            x = b.mul_idx(g, self._w_inv)
            if x < 0 or b.length[x] + lw != b.length[g] or not self.in_X(x):
                raise ConstructionError(
                    f"{self.name}: residual term at {b.elements[g]} is not x*w with x admissible"
                )
            c = R[g]
            out[x] = dict(c)
            K.axpy(R, _neg(c), self.t_x_c(x))
            if g in R:  # pragma: no cover - leading coefficient of T_x C_w is 1
                raise ConstructionError("elimination did not clear the leading term")
        return out

    # -- P elements ------------------------------------------------------------

    def p_element_raw(self, y: GroupElement) -> dict:
        b = self.ball
        yi = b.idx(y)
        hit = self._P.get(yi)
        if hit is not None:
            return hit
        grp = b.group
        yw = grp.multiply(y, self.w)
        if yw.length != y.length + self.w.length:
            raise ConstructionError(f"{self.name}: y*w not reduced for y = {y}")
        if yw.length > self.radius:
            raise TruncationError(f"P({y}) needs length {yw.length} > radius {self.radius}")
        P = self.expand_on_X(self.cache.c_raw(b.idx(yw)))
        if P.get(yi) != {0: 1}:
            raise ConstructionError(f"P({y}) has leading coefficient {P.get(yi)}")
        for x, p in P.items():
            if x != yi and not _is_negative(p):
                raise ConstructionError(f"P({y}) coefficient at {b.elements[x]} is not in A_<0")
        self._P[yi] = P
        return P

    def p_element(self, y: GroupElement) -> HeckeElement:
        return self.cache.to_hecke(self.p_element_raw(y))

    def p_right_raw(self, y: GroupElement) -> dict:
        """``P_R(y) = flat(P(y^-1))``."""
        return _flat(self.p_element_raw(self.ball.group.inverse(y)), self.ball.inv)

    def tau_element(self, mon: tuple) -> GroupElement:
        if not any(mon):
            return self.ball.group.identity()
        return self.desc.tau_element(mon)

    def tau_length(self, mon: tuple) -> int:
        return sum(g.length * n for g, n in zip(self.desc.tau.gens, mon))

    def p_tau_raw(self, mon: tuple) -> dict:
        """``P(t1)^n P(t2)^m`` (or ``P(t)^n``)."""
        mon = tuple(mon)
        hit = self._ptau.get(mon)
        if hit is not None:
            return hit
        if not any(mon):
            out = {0: {0: 1}}
        else:
            k = max(i for i, e in enumerate(mon) if e)
            prev = list(mon)
            prev[k] -= 1
            out = self.cache.t_mult(self.p_tau_raw(tuple(prev)), self.p_element_raw(self.desc.tau.gens[k]))
        self._ptau[mon] = out
        return out

    def y_tau(self, mon: tuple) -> dict:
        """``P(tau) C_w`` in T-coordinates."""
        hit = self._ytau.get(mon)
        if hit is None:
            hit = self.cache.t_mult(self.p_tau_raw(mon), self.cache.c_raw(self.w_idx))
            self._ytau[mon] = hit
        return hit

    # -- projection onto the cell ---------------------------------------------

    def project(self, hc: dict) -> dict:
        """Drop coefficients on strictly lower cells; refuse anything higher."""
        out = {}
        for z, p in hc.items():
            lab = self.label[z]
            if lab == self.name:
                out[z] = p
            elif self.a_of[lab] <= self.a:
                raise ConstructionError(
                    f"{self.name}: coefficient on {self.ball.elements[z]} in cell {lab} which is not below"
                )
        return out

    # -- tau basis and phi -----------------------------------------------------

    def tau_monomials(self, max_len: int) -> list[tuple]:
        """Monomials tau with ``l(tau) + l(w) <= max_len``."""
        tau = self.desc.tau
        lw = self.w.length
        if tau.variant == "trivial":
            return [()] if lw <= max_len else []
        if tau.variant == "order2":
            return [m for m in [(0,), (1,)] if self.tau_length(m) + lw <= max_len]
        out = []
        shortest = min(g.length for g in tau.gens)
        for deg in range(max(0, (max_len - lw)) // shortest + 1):
            for mon in tau.monomials(deg):
                if sum(mon) == deg and self.tau_length(mon) + lw <= max_len:
                    out.append(mon)
        return out

    def m_tau_basis(self, max_len: Optional[int] = None) -> dict[tuple, dict]:
        """``{tau: [P(tau) C_w]}`` (projected C-coordinates), unitriangular to ``[C_{tau w}]``."""
        max_len = self.radius if max_len is None else max_len
        b = self.ball
        for mon in self.tau_monomials(max_len):
            if mon in self._tau_basis:
                continue
            tw = b.idx(self.ball.group.multiply(self.tau_element(mon), self.w))
            hc = self.project(self.cache.t_to_c(self.y_tau(mon)))
            if max(hc) != tw or hc[tw] != {0: 1}:
                raise ConstructionError(f"{self.name}: [P({mon})C_w] is not unitriangular to C_(tau w)")
            self._tau_basis[mon] = hc
            self._tau_of[tw] = mon
        return {m: self._tau_basis[m] for m in self.tau_monomials(max_len)}

    def solve_tau(self, hc: dict) -> BElement:
        """Coordinates of a projected element in the basis ``[P(tau) C_w]``."""
        self.m_tau_basis()
        R = {w: dict(p) for w, p in hc.items()}
        out: dict = {}
        while R:
            g = max(R)
            mon = self._tau_of.get(g)
            if mon is None:
                raise ConstructionError(
                    f"{self.name}: residual at {self.ball.elements[g]} outside the span of [P(tau)C_w]"
                )
            c = R[g]
            out[mon] = LaurentPoly.from_dict(c)
            K.axpy(R, _neg(c), self._tau_basis[mon])
        return BElement(self.ring, out)

    def phi_entry(self, j: int, k: int) -> Optional[BElement]:
        """``phi(v_j, v_k)`` from ``[C_{w z_j}][C_{z_k^-1 w}]``; None when out of reach."""
        grp = self.ball.group
        left = grp.multiply(self.w, self.z[j])
        right = grp.multiply(self.zinv[k], self.w)
        if left.length + right.length > self.radius:
            return None
        prod = self.cache.c_mult_raw(self.ball.idx(left), self.ball.idx(right))
        return self.solve_tau(self.project(prod))

    def phi_form(self) -> FormMatrix:
        m = len(self.z)
        return FormMatrix(self.ring, [[self.phi_entry(j, k) for k in range(m)] for j in range(m)])

    # -- Phi -------------------------------------------------------------------

    def element_of(self, i: int, mon: tuple, j: int) -> GroupElement:
        grp = self.ball.group
        return grp.element(self.zinv[i].word + self.tau_element(mon).word + self.w.word + self.z[j].word)

    def phi_basis(self, i: int, mon: tuple, j: int) -> dict:
        """``[P(z_i^-1) P(tau) C_w P_R(z_j)]`` in C-coordinates."""
        mon = self.ring.normalize(tuple(mon))
        key = (i, mon, j)
        hit = self._phi.get(key)
        if hit is not None:
            return hit
        lk = (i, mon)
        left = self._left.get(lk)
        if left is None:
            left = self.cache.t_mult(self.p_element_raw(self.zinv[i]), self.y_tau(mon))
            self._left[lk] = left
        full = self.cache.t_mult(left, self.p_right_raw(self.z[j]))
        hc = self.project(self.cache.t_to_c(full))
        self._phi[key] = hc
        return hc

    def phi_map(self, x: CellAlgebraElement) -> dict:
        out: dict = {}
        for (i, mon, j), p in x.terms.items():
            K.axpy(out, p.as_dict(), self.phi_basis(i, mon, j))
        return out

    def phi_map_hecke(self, x: CellAlgebraElement) -> HeckeElement:
        return self.cache.to_hecke(self.phi_map(x), "C")

    def basis_keys(self, max_len: Optional[int] = None) -> list[tuple]:
        """All (i, tau, j) whose element has length <= max_len."""
        max_len = self.radius if max_len is None else max_len
        out = []
        lw = self.w.length
        for mon in self.tau_monomials(max_len):
            lt = self.tau_length(mon) + lw
            for i, zi in enumerate(self.z):
                for j, zj in enumerate(self.z):
                    if zi.length + lt + zj.length <= max_len:
                        out.append((i, mon, j))
        return out

    def tau_degree_bound(self) -> int:
        """Largest d with every degree-d tau fitting as ``tau w`` in the ball (-1: none)."""
        tau = self.desc.tau
        if tau.variant == "trivial":
            return 0
        if tau.variant == "order2":
            return 1 if self.tau_length((1,)) + self.w.length <= self.radius else 0
        d = 0
        while all(self.tau_length(m) + self.w.length <= self.radius for m in tau.monomials(d + 1) if sum(m) == d + 1):
            d += 1
        return d


# ---------------------------------------------------------------------------
# generalized induction conditions


def check_I1_I5(ctx: CellContext, slice_radius: int = 6) -> list[CheckResult]:
    """I1-I5 for U = {w} and X = X' u X's on ``l(x) <= slice_radius``."""
    b = ctx.ball
    lw = ctx.w.length
    cap = min(slice_radius, ctx.radius - lw - 1)
    X = [x for x in range(b.layer_start[cap + 1]) if ctx.in_X(x)]
    res = []
    res.append(CheckResult("I1", ctx.in_X(0)))
    bad = [x for x in X if b.mul_idx(x, ctx.w_idx) < 0 or b.length[b.mul_idx(x, ctx.w_idx)] != b.length[x] + lw]
    res.append(CheckResult("I2", not bad, None if not bad else f"x = {b.elements[bad[0]]}"))
    images = [b.mul_idx(x, ctx.w_idx) for x in X]
    res.append(CheckResult("I3", len(set(images)) == len(images)))
    wit = None
    try:
        for x in X:
            for s in range(3):
                h = K.gen_mult(ctx.t_x_c(x), b.lmul[s], b.length, ctx.cache.system.L[s])
                ctx.expand_on_X(h)
    except (ConstructionError, IndexError) as e:
        wit = f"T_s T_x C_w for x = {b.elements[x]}, s = s{s + 1}: {e}"
    res.append(CheckResult("I4", wit is None, wit))
    wit = None
    for x, xw in zip(X, images):
        h = ctx.t_x_c(x)
        if h.get(xw) != {0: 1} or any(not _is_negative(p) for u, p in h.items() if u != xw):
            wit = f"x = {b.elements[x]}"
            break
    res.append(CheckResult("I5", wit is None, wit))
    for r in res:
        r.detail["slice"] = len(X)
    return res


# ---------------------------------------------------------------------------
# theorem verification


@dataclass
class Report:
    cell: str
    radius: int
    tau_degree_bound: int
    checks: list[CheckResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """No check failed (inconclusive checks are listed separately)."""
        return all(c.passed is not False for c in self.checks)

    @property
    def inconclusive(self) -> list[str]:
        return [c.name for c in self.checks if c.passed is None]

    def to_json(self) -> dict:
        out = {
            "cell": self.cell,
            "checks": [c.to_json() for c in self.checks],
            "tau_degree_bound": self.tau_degree_bound,
            "radius": self.radius,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
        }
        out.update({k: v for k, v in self.info.items() if not k.startswith("_")})
        return out


def _run(name: str, fn) -> CheckResult:
    try:
        out = fn()
    except ConstructionError as e:
        return CheckResult(name, False, str(e))
    except TruncationError as e:
        # the identity could not be evaluated inside the ball: not a failure
        return CheckResult(name, None, str(e))
    if isinstance(out, CheckResult):
        return out
    ok, wit = out if isinstance(out, tuple) else (bool(out), None)
    return CheckResult(name, ok, wit)


def _pairs_for(ctx: CellContext, keys: list[tuple], budget: Optional[int], seed: int) -> list:
    b = ctx.ball
    length = {k: ctx.element_of(*k).length for k in keys}
    pairs = [(x, y) for x in keys for y in keys if length[x] + length[y] <= ctx.radius]
    if budget is None or len(pairs) <= budget:
        return pairs
    # always keep the pairs with the largest combined tau-degree
    pairs.sort(key=lambda p: (-(sum(p[0][1]) + sum(p[1][1])), p))
    head = pairs[: budget // 4]
    rng = random.Random(seed)
    tail = rng.sample(pairs[budget // 4:], budget - len(head))
    del b
    return head + tail


def verify_theorem(ctx: CellContext, sample_budget: Optional[int] = 400, seed: int = 0,
                   i_slice: int = 6) -> Report:
    """Run every identity of the affine cellular structure for one cell."""
    b = ctx.ball
    cache = ctx.cache
    report = Report(ctx.name, ctx.radius, ctx.tau_degree_bound())
    report.info.update(
        case=ctx.case,
        base_ring=ctx.ring.describe(),
        w=str(ctx.w),
        m=len(ctx.z),
    )
    checks = report.checks
    grp = b.group

    def p_checks():
        ys = [y for y in ctx.zinv] + list(ctx.desc.tau.gens)
        for y in ys:
            if y.length + ctx.w.length > ctx.radius:
                continue
            P = ctx.p_element_raw(y)
            # C_w P_R(y^-1) = C_{w y^-1}
            right = cache.t_mult(cache.c_raw(ctx.w_idx), _flat(P, b.inv))
            target = cache.c_raw(b.idx(grp.multiply(ctx.w, grp.inverse(y))))
            if right != target:
                return False, f"C_w P_R({grp.inverse(y)}) != C_(w {grp.inverse(y)})"
        return True, None

    checks.append(_run("P elements", p_checks))
    if ctx.case == "s-times-longest":
        checks.extend(check_I1_I5(ctx, i_slice))

    def tau_basis():
        basis = ctx.m_tau_basis()
        for mon in basis:
            # left-right switch: P(tau) C_w = C_w P_R(tau^-1) = C_w flat(P(tau))
            lhs = ctx.y_tau(mon)
            rhs = cache.t_mult(cache.c_raw(ctx.w_idx), _flat(ctx.p_tau_raw(mon), b.inv))
            if ctx.project(cache.t_to_c(lhs)) != ctx.project(cache.t_to_c(rhs)):
                return False, f"[P(tau)C_w] != [C_w P_R(tau^-1)] at tau = {ctx.ring.mon_str(mon)}"
        return True, None

    checks.append(_run("tau basis", tau_basis))

    form_box: dict = {}

    def form_check():
        form = ctx.phi_form()
        form_box["form"] = form
        report.info["form_complete"] = form.complete
        if not form.is_symmetric():
            return False, "phi is not symmetric"
        return True, None

    checks.append(_run("phi symmetric", form_check))

    keys = ctx.basis_keys()
    report.info["basis_elements"] = len(keys)

    def unitri():
        for key in keys:
            x = b.idx(ctx.element_of(*key))
            hc = ctx.phi_basis(*key)
            if max(hc) != x or hc[x] != {0: 1}:
                return False, f"Phi{key} leading term is not C_{b.elements[x]}"
            for z in hc:
                if z != x and not b.bruhat_leq(z, x):
                    return False, f"Phi{key} contains C_{b.elements[z]} not below {b.elements[x]}"
        return True, None

    checks.append(_run("unitriangular", unitri))

    def flat_check():
        for (i, mon, j) in keys:
            if _flat(ctx.phi_basis(i, mon, j), b.inv) != ctx.phi_basis(j, mon, i):
                return False, f"Phi(v{i + 1} {ctx.ring.mon_str(mon)} v{j + 1}) flat mismatch"
        return True, None

    checks.append(_run("flat", flat_check))

    tau = ctx.desc.tau
    if tau.variant == "free2":
        def commute():
            t1, t2 = (ctx.p_element_raw(g) for g in tau.gens)
            need = sum(g.length for g in tau.gens) + ctx.w.length
            if need > ctx.radius:
                raise TruncationError(f"commutation needs radius {need}")
            Cw = cache.c_raw(ctx.w_idx)
            a = ctx.project(cache.t_to_c(cache.t_mult(t1, cache.t_mult(t2, Cw))))
            c = ctx.project(cache.t_to_c(cache.t_mult(t2, cache.t_mult(t1, Cw))))
            if a != c:
                return False, f"{_describe(b, a)} vs {_describe(b, c)}"
            return True, None

        checks.append(_run("commutation", commute))
    if tau.variant == "order2":
        checks.append(_run("quad relation", lambda: quad_relation(ctx)))

    def mult():
        form = form_box.get("form")
        if form is None:
            return False, "phi unavailable"
        pairs = _pairs_for(ctx, keys, sample_budget, seed)
        report.info["product_pairs"] = len(pairs)
        m = len(ctx.z)
        for x, y in pairs:
            X = CellAlgebraElement.basis(ctx.ring, m, *x)
            Y = CellAlgebraElement.basis(ctx.ring, m, *y)
            lhs = ctx.project(cache.c_product(ctx.phi_basis(*x), ctx.phi_basis(*y)))
            rhs = ctx.phi_map(a_mult(X, Y, form))
            if lhs != rhs:
                return False, f"Phi({X})Phi({Y}) != Phi(product): {_describe(b, lhs)} vs {_describe(b, rhs)}"
        return True, None

    checks.append(_run("multiplicativity", mult))
    report.info["form"] = form_box["form"].to_json() if "form" in form_box else None
    return report


def quad_relation(ctx: CellContext) -> tuple[bool, Optional[str]]:
    """``[P(t)^2 C_w] = [C_w]``."""
    cache = ctx.cache
    t = ctx.desc.tau.gens[0]
    P = ctx.p_element_raw(t)
    h = cache.t_mult(P, cache.t_mult(P, cache.c_raw(ctx.w_idx)))
    got = ctx.project(cache.t_to_c(h))
    if got != {ctx.w_idx: {0: 1}}:
        return False, _describe(ctx.ball, got)
    return True, None


# ---------------------------------------------------------------------------
# the finite G2 cells meeting <s2, s3>

# Left cells of the a < b case, as printed.
G2_FINITE_LEFT_CELLS = (
    ("s3", "s2s3", "s1s2s3", "s2s1s2s3", "s3s2s1s2s3", "s1s2s1s2s3"),
    ("s2", "s3s2", "s1s2", "s2s1s2", "s3s2s1s2", "s1s2s1s2"),
    ("s2s1", "s3s2s1", "s1s2s1", "s2s1s2s1", "s3s2s1s2s1", "s1s2s1s2s1"),
)


def g2_finite_matrix_expected(a: int, b: int) -> list[list[BElement]]:
    """The 3x3 form of the a < b finite cell, entry by entry."""
    ring = BaseRing("quad")
    v = LaurentPoly.monomial
    a1 = v(b) + v(-b)
    a2 = v(a - b) + v(b - a)
    a3 = v(-b) + v(2 * a - b) + v(b - 2 * a) + v(b)
    a4 = v(-a) + v(a)
    E = lambda c0, c1=0: BElement(ring, {(0,): c0, (1,): c1})
    return [
        [E(a1), E(a2, 1), E(1)],
        [E(a2, 1), E(a3, a4), E(0)],
        [E(1), E(0), E(a1)],
    ]


def finite_cells_g2(cache: KLCache, table: ZoneTable, strips: Optional[dict] = None) -> Report:
    """The finite G2 cell meeting <s2, s3>: form, Phi and (a < b) the printed matrix."""
    if cache.system.kind != "g2":
        raise ValueError("finite_cells_g2 needs a G2 system")
    ((cname, _),) = table.special.items()
    ball = cache.ball
    strips = strips if strips is not None else strip_construction(table, ball)
    name = "c~" + cname[1:]
    cell = strips[name]
    grp = ball.group
    a, bw = cache.system.weights
    report = Report(name, cache.radius, 0)
    checks = report.checks
    a_of = {n: table.a_value("c" + n[2:], cache.system) for n in strips}
    label = {i: n for n, blk in strips.items() for i in blk}
    my_a = a_of[name]

    def project(hc):
        out = {}
        for z, p in hc.items():
            if label[z] == name:
                out[z] = p
            elif a_of[label[z]] <= my_a:
                raise ConstructionError(f"coefficient on {ball.elements[z]} in {label[z]}, not below {name}")
        return out

    if max(ball.length[i] for i in cell) * 2 > cache.radius:
        raise TruncationError(f"radius {cache.radius} too small for products inside {name}")
    kl_left = cell_partition(cache, "left", margin=0)
    kl_blocks = {frozenset(blk & cell) for blk in kl_left.blocks if blk & cell}
    strip_blocks = set(strip_left_cells(cell, ball))
    checks.append(CheckResult("left cells", kl_blocks == strip_blocks))
    if a > bw:
        lefts = sorted(strip_blocks, key=lambda blk: min(ball.elements[i].sort_key() for i in blk))
        ring = BaseRing("scalar")
        mons = [()]
    else:
        lefts = [frozenset(ball.idx(grp.parse(x)) for x in row) for row in G2_FINITE_LEFT_CELLS]
        checks.append(CheckResult("printed left cells", set(lefts) == strip_blocks))
        ring = BaseRing("quad")
        mons = [(0,), (1,)]
    m = len(lefts)
    inv = ball.inv
    # elt[i][j]: sorted by length the elements of (Gamma_i)^-1 cap Gamma_j
    elt = [[sorted((x for x in lefts[j] if inv[x] in lefts[i]), key=lambda x: (ball.length[x], x)) for j in range(m)]
           for i in range(m)]
    sizes = {len(elt[i][j]) for i in range(m) for j in range(m)}
    checks.append(CheckResult("intersections", sizes == {len(mons)}, None if sizes == {len(mons)} else f"sizes {sizes}"))
    if sizes != {len(mons)}:
        return report
    if len(mons) == 2:
        ok = all(ball.length[elt[i][j][0]] < ball.length[elt[i][j][1]] for i in range(m) for j in range(m))
        checks.append(CheckResult("min/max distinct", ok))
    basis = {(i, mon, j): elt[i][j][k] for i in range(m) for j in range(m) for k, mon in enumerate(mons)}
    base = {elt[0][0][k]: mon for k, mon in enumerate(mons)}

    entries = []
    wit = None
    for j in range(m):
        row = []
        for k in range(m):
            prod = project(cache.c_mult_raw(basis[(0, mons[0], j)], basis[(k, mons[0], 0)]))
            extra = [z for z in prod if z not in base]
            if extra and wit is None:
                wit = f"[C_w(1,{j + 1})][C_w({k + 1},1)] leaves the span at {ball.elements[extra[0]]}"
            row.append(BElement(ring, {base[z]: LaurentPoly.from_dict(p) for z, p in prod.items() if z in base}))
        entries.append(row)
    checks.append(CheckResult("phi solvable", wit is None, wit))
    form = FormMatrix(ring, entries)
    checks.append(CheckResult("phi symmetric", form.is_symmetric()))

    def mult():
        for x, y in itertools.product(basis, repeat=2):
            lhs = project(cache.c_mult_raw(basis[x], basis[y]))
            prod = a_mult(CellAlgebraElement.basis(ring, m, *x), CellAlgebraElement.basis(ring, m, *y), form)
            rhs: dict = {}
            for key, p in prod.terms.items():
                K.axpy(rhs, p.as_dict(), {basis[key]: {0: 1}})
            if lhs != rhs:
                return False, f"Phi{x} Phi{y} mismatch"
        return True, None

    checks.append(_run("multiplicativity", mult))
    flat_ok = all(inv[basis[(i, mon, j)]] == basis[(j, mon, i)] for (i, mon, j) in basis)
    checks.append(CheckResult("flat", flat_ok))
    if a < bw:
        expected = g2_finite_matrix_expected(a, bw)
        same = lambda p: all(form.entries[p[j]][p[k]] == expected[j][k] for j in range(3) for k in range(3))
        # The printed matrix and the printed numbering of the left cells do not
        # line up; record the literal comparison and accept exactly one relabelling.
        report.info["printed_labelling_match"] = same((0, 1, 2))
        perms = [p for p in itertools.permutations(range(3)) if same(p)]
        report.info["matching_labellings"] = [[f"Gamma_{i + 1}" for i in p] for p in perms]
        wit = None
        if len(perms) == 1:
            wit = "v1, v2, v3 = " + ", ".join(f"Gamma_{i + 1}" for i in perms[0])
        elif not perms:
            wit = "no labelling of the printed left cells reproduces the printed matrix"
        else:
            wit = f"{len(perms)} labellings match; the comparison is not conclusive"
        checks.append(CheckResult("printed matrix", len(perms) == 1, wit))
    report.tau_degree_bound = 1 if ring.variant == "quad" else 0
    report.info.update(
        base_ring=ring.describe(),
        m=m,
        left_cells=[[str(ball.elements[i]) for i in sorted(blk)] for blk in lefts],
        form=form.to_json(),
        form_text=str(form),
    )
    report.info["_form"] = form
    return report


# ---------------------------------------------------------------------------
# simple modules


def simple_module_report(ring: BaseRing, form: Optional[FormMatrix] = None) -> dict:
    """Parameter space of simple modules and, for finite B, the nonvanishing test."""
    params = {
        "poly2": "pairs (x, y) in C(v)^2",
        "poly1": "x in C(v)",
        "quad": "t = +1 or t = -1",
        "scalar": "a single point",
    }[ring.variant]
    out: dict = {"base_ring": ring.describe(), "parameters": params}
    if form is None or ring.variant in ("poly1", "poly2"):
        return out
    points = [(1,), (-1,)] if ring.variant == "quad" else [()]
    evals = []
    for pt in points:
        nz = any(e is not None and not e.evaluate_t(pt).is_zero() for row in form.entries for e in row)
        evals.append({"point": list(pt) or None, "form_nonzero": nz})
    out["points"] = evals
    return out
