"""Kazhdan-Lusztig basis, KL polynomials and structure constants on a ball.

The cache stores the T-coordinates of every ``C_w`` with ``l(w) <= radius``,
built layer by layer: for ``w = s w'`` with ``s`` the first letter of the
normal form, ``E = C_s C_{w'}`` is bar-invariant and is corrected by
subtracting ``m_y C_y`` (largest y first) until every non-leading coefficient
lies in ``v^-1 Z[v^-1]``.

Everything internal is keyed by ball index (see :class:`affcell.coxeter.Ball`)
and uses the raw dict representation of :mod:`affcell.kernels`.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import kernels as K
from .coxeter import Ball, CoxeterSystem, GroupElement
from .hecke import HeckeElement, TruncationError
from .laurent import LaurentPoly

__all__ = ["KLCache", "CacheError", "HeaderMismatchError", "BarInvarianceError"]

log = logging.getLogger(__name__)


class CacheError(ValueError):
    pass


class HeaderMismatchError(CacheError):
    pass


class BarInvarianceError(AssertionError):
    pass


def _neg(p: dict) -> dict:
    return {e: -c for e, c in p.items()}


def _poly_json(p: dict) -> list:
    return [[e, str(p[e])] for e in sorted(p)]


class KLCache:
    """KL basis of ``system`` on the ball of the given radius."""

    def __init__(self, system: CoxeterSystem, radius: int):
        self.system = system
        self.radius = radius
        self.ball: Ball = system.group.ball(radius)
        n = len(self.ball)
        self.C: list[Optional[dict]] = [None] * n
        self.C[0] = {0: {0: 1}}
        self.built_upto = 0  # every layer <= built_upto is complete
        # _rows[s][w]: C-coordinates of C_s C_w
        self._rows: list[dict[int, dict]] = [{} for _ in range(3)]
        self._inv_T: dict[int, dict] = {0: {0: {0: 1}}}

    # -- construction ---------------------------------------------------------

    def _check_len(self, length: int, what: str = "element"):
        if length > self.radius:
            raise TruncationError(f"{what} of length {length} exceeds cache radius {self.radius}")

    def build(self, upto: Optional[int] = None, *, on_layer: Optional[Callable[[int, list[int]], None]] = None):
        """Compute every C_w with ``l(w) <= upto`` (default: the radius)."""
        upto = self.radius if upto is None else upto
        self._check_len(upto)
        b = self.ball
        L = self.system.L
        for n in range(self.built_upto + 1, upto + 1):
            layer = list(b.layer(n))
            for i in layer:
                s = b.words[i][0]
                j = b.lmul[s][i]
                Cj = self.C[j]
                E = K.gen_mult(Cj, b.lmul[s], b.length, L[s])
                K.axpy(E, {-L[s]: 1}, Cj)
                corr = K.kl_reduce(E, i, self.C)
                lead = E.get(i)
                if lead != {0: 1}:  # pragma: no cover - internal bug trap
                    raise BarInvarianceError(f"leading coefficient of C_{b.elements[i]} is {lead}")
                self.C[i] = E
                row = {i: {0: 1}}
                row.update(corr)
                self._rows[s][j] = row
            self.built_upto = n
            if on_layer is not None:
                on_layer(n, layer)
        return self

    def extend(self, radius: int) -> "KLCache":
        """Grow the ball; indices of existing elements are unchanged."""
        if radius <= self.radius:
            return self
        ball = self.system.group.ball(radius)
        assert ball.words[: len(self.ball)] == self.ball.words
        self.C.extend([None] * (len(ball) - len(self.ball)))
        self.ball = ball
        self.radius = radius
        return self

    def truncate(self, radius: int) -> "KLCache":
        """A cache on the smaller ball sharing the computed C_w (rows are rebuilt lazily)."""
        if radius >= self.radius:
            return self
        out = KLCache.__new__(KLCache)
        out.system = self.system
        out.radius = radius
        out.ball = self.ball.truncate(radius)
        out.C = self.C[: len(out.ball)]
        out.built_upto = min(self.built_upto, radius)
        out._rows = [{} for _ in range(3)]
        out._inv_T = {0: {0: {0: 1}}}
        return out

    def ensure(self, length: int):
        if length > self.radius:
            raise TruncationError(f"length {length} exceeds cache radius {self.radius}")
        if length > self.built_upto:
            self.build(length)

    # -- raw access -----------------------------------------------------------

    def c_raw(self, i: int) -> dict:
        self.ensure(self.ball.length[i])
        return self.C[i]

    def row(self, s: int, i: int) -> dict:
        """C-coordinates of ``C_s C_{w_i}`` (the left-action matrix of C_s)."""
        rows = self._rows[s]
        r = rows.get(i)
        if r is not None:
            return r
        b = self.ball
        L = self.system.L[s]
        u = b.lmul[s][i]
        if u >= 0 and b.length[u] < b.length[i]:
            r = {i: {L: 1, -L: 1}}
        else:
            self.ensure(b.length[i] + 1)
            r = rows.get(i)
            if r is None:
                Ci = self.C[i]
                E = K.gen_mult(Ci, b.lmul[s], b.length, L)
                K.axpy(E, {-L: 1}, Ci)
                r = K.t_to_c(E, self.C)
        rows[i] = r
        return r

    def t_to_c(self, h: dict) -> dict:
        if h:
            self.ensure(max(self.ball.length[w] for w in h))
        return K.t_to_c(h, self.C)

    def c_to_t(self, hc: dict) -> dict:
        if hc:
            self.ensure(max(self.ball.length[w] for w in hc))
        return K.c_to_t(hc, self.C)

    def t_left(self, i: int, h: dict) -> dict:
        """``T_{w_i} * h`` (T-coordinates)."""
        b = self.ball
        L = self.system.L
        try:
            for s in reversed(b.words[i]):
                h = K.gen_mult(h, b.lmul[s], b.length, L[s])
        except IndexError:
            raise TruncationError("T-basis product leaves the ball") from None
        return h

    def t_right(self, h: dict, i: int) -> dict:
        """``h * T_{w_i}`` (T-coordinates)."""
        b = self.ball
        L = self.system.L
        try:
            for s in b.words[i]:
                h = K.gen_mult(h, b.rmul[s], b.length, L[s])
        except IndexError:
            raise TruncationError("T-basis product leaves the ball") from None
        return h

    def t_mult(self, x: dict, y: dict) -> dict:
        """Product of two T-basis elements (raw)."""
        self._guard(x, y)
        out: dict = {}
        for u, p in x.items():
            K.axpy(out, p, self.t_left(u, y))
        return out

    def _guard(self, x: dict, y: dict):
        lx = max((self.ball.length[w] for w in x), default=0)
        ly = max((self.ball.length[w] for w in y), default=0)
        if lx + ly > self.radius:
            raise TruncationError(f"product of lengths {lx}+{ly} exceeds radius {self.radius}")

    def c_left_mult(self, i: int, V: dict, memo: Optional[dict] = None) -> dict:
        """``C_{w_i} * V`` with V and the result in C-coordinates.

        Uses ``C_w = C_s C_{sw} - sum_z m_z C_z`` recursively, so only the
        left-action rows of the generators are needed.
        """
        if memo is None:
            memo = {}
        return self._c_left(i, V, memo)

    def _c_left(self, i: int, V: dict, memo: dict) -> dict:
        if i == 0:
            return V
        hit = memo.get(i)
        if hit is not None:
            return hit
        b = self.ball
        s = b.words[i][0]
        j = b.lmul[s][i]
        inner = self._c_left(j, V, memo)
        R = K.c_gen_mult(inner, _RowView(self, s))
        for z, m in self.row(s, j).items():
            if z != i:
                K.axpy(R, _neg(m), self._c_left(z, V, memo))
        memo[i] = R
        return R

    def c_mult_raw(self, i: int, j: int, method: str = "C") -> dict:
        b = self.ball
        if b.length[i] + b.length[j] > self.radius:
            raise TruncationError(
                f"C_x C_y with l(x)+l(y) = {b.length[i] + b.length[j]} exceeds radius {self.radius}"
            )
        if method == "C":
            return self.c_left_mult(i, {j: {0: 1}})
        if method == "T":
            Cy = self.c_raw(j)
            out: dict = {}
            for u, p in self.c_raw(i).items():
                K.axpy(out, p, self.t_left(u, Cy))
            return self.t_to_c(out)
        raise ValueError(method)

    def c_product(self, X: dict, Y: dict) -> dict:
        """Product of two elements given in C-coordinates (raw)."""
        self._guard(X, Y)
        out: dict = {}
        memo: dict = {}  # C_u * Y for every u met in the recursion
        for x, p in X.items():
            K.axpy(out, p, self._c_left(x, Y, memo))
        return out

    # -- bar involution (indexed) ---------------------------------------------

    def inv_T_raw(self, i: int) -> dict:
        """``T_{w_i}^{-1}`` in T-coordinates."""
        hit = self._inv_T.get(i)
        if hit is not None:
            return hit
        b = self.ball
        # w = s w'  =>  T_w^{-1} = T_{w'}^{-1} T_s^{-1}
        s = b.words[i][0]
        j = b.lmul[s][i]
        base = self.inv_T_raw(j)
        L = self.system.L[s]
        h = K.gen_mult(base, b.rmul[s], b.length, L)
        K.axpy(h, {-L: 1, L: -1}, base)
        self._inv_T[i] = h
        return h

    def bar_raw(self, h: dict) -> dict:
        out: dict = {}
        inv = self.ball.inv
        for w, p in h.items():
            K.axpy(out, {-e: c for e, c in p.items()}, self.inv_T_raw(inv[w]))
        return out

    # -- public API -----------------------------------------------------------

    def idx(self, w: GroupElement) -> int:
        i = self.ball.idx(w)
        return i

    def to_hecke(self, raw: dict, basis: str = "T") -> HeckeElement:
        els = self.ball.elements
        return HeckeElement(self.system, {els[w]: LaurentPoly.from_dict(p) for w, p in raw.items()}, basis)

    def from_hecke(self, h: HeckeElement) -> dict:
        return {self.idx(w): p.as_dict() for w, p in h.terms.items()}

    def c_element(self, w: GroupElement) -> HeckeElement:
        """T-coordinates of C_w."""
        self._check_len(w.length)
        return self.to_hecke(self.c_raw(self.idx(w)))

    def kl_poly(self, y: GroupElement, w: GroupElement) -> LaurentPoly:
        self._check_len(max(y.length, w.length))
        p = self.c_raw(self.idx(w)).get(self.idx(y))
        return LaurentPoly.from_dict(p) if p else LaurentPoly.zero()

    def c_mult(self, x: GroupElement, y: GroupElement, method: str = "C") -> dict[GroupElement, LaurentPoly]:
        """Structure constants ``{z: h_{x,y,z}}`` of ``C_x C_y``."""
        raw = self.c_mult_raw(self.idx(x), self.idx(y), method)
        els = self.ball.elements
        return {els[z]: LaurentPoly.from_dict(p) for z, p in raw.items()}

    def __len__(self) -> int:
        return self.ball.layer_start[self.built_upto + 1]

    # -- persistence ----------------------------------------------------------

    def header(self) -> dict:
        return {"type": self.system.kind, "weights": list(self.system.weights), "radius": self.radius}

    def _record(self, i: int) -> str:
        words = self.ball.words
        C = self.C[i]
        coords = [[list(words[y]), _poly_json(C[y])] for y in sorted(C)]
        return json.dumps({"w": list(words[i]), "coords": coords}, separators=(",", ":"))

    def save(self, path) -> Path:
        """Write the whole cache atomically (header line + one record per element)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(self.header()) + "\n")
            for i in range(1, len(self)):
                fh.write(self._record(i) + "\n")
        os.replace(tmp, path)
        return path

    def append_layer(self, path, layer: Iterable[int]):
        with open(path, "a") as fh:
            for i in layer:
                fh.write(self._record(i) + "\n")

    @classmethod
    def load(cls, path, system: CoxeterSystem, radius: Optional[int] = None) -> "KLCache":
        """Load a cache file; the header must match ``system``.

        Records may stop mid-layer (an interrupted build); the incomplete layer
        is dropped and rebuilt on demand.  A record that does not parse raises
        :class:`CacheError` naming the line.
        """
        path = Path(path)
        with open(path) as fh:
            first = fh.readline()
            try:
                header = json.loads(first)
            except json.JSONDecodeError as exc:
                raise CacheError(f"{path}:1: corrupt header ({exc})") from None
            if header.get("type") != system.kind or tuple(header.get("weights", ())) != system.weights:
                raise HeaderMismatchError(
                    f"{path}: cache is for {header.get('type')} {header.get('weights')}, "
                    f"requested {system.kind} {list(system.weights)}"
                )
            r = max(int(header.get("radius", 0)), radius or 0)
            cache = cls(system, r)
            b = cache.ball
            g = system.group
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    i = b.index[tuple(rec["w"])]
                    C = {b.index[tuple(w)]: {int(e): int(c) for e, c in poly} for w, poly in rec["coords"]}
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise CacheError(f"{path}:{lineno}: corrupt record ({type(exc).__name__}: {exc})") from None
                cache.C[i] = C
        done = 0
        for n in range(1, cache.radius + 1):
            if all(cache.C[i] is not None for i in b.layer(n)):
                done = n
            else:
                break
        for i in range(b.layer_start[done + 1], len(b)):
            cache.C[i] = None
        cache.built_upto = done
        return cache


class _RowView:
    """Lazy ``M[w]`` mapping for :func:`kernels.c_gen_mult`."""

    __slots__ = ("cache", "s")

    def __init__(self, cache: KLCache, s: int):
        self.cache = cache
        self.s = s

    def __getitem__(self, w: int) -> dict:
        return self.cache.row(self.s, w)
