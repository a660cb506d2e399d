"""The Hecke algebra of an affine Weyl group over Z[v, v^-1].

:class:`HeckeElement` is the readable, GroupElement-keyed representation used
by the public API and by tests as an independent route against the indexed
engine in :mod:`affcell.klbasis`.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional, Union

from .coxeter import CoxeterSystem, GroupElement, format_word
from .laurent import LaurentPoly, quantum

__all__ = [
    "HeckeElement",
    "TruncationError",
    "BasisMismatchError",
    "mult_gen_left",
    "mult_gen_right",
    "mult",
    "invert_T",
    "bar_element",
    "flat",
    "in_H_lt0",
]


class TruncationError(RuntimeError):
    """A product could leave the verified ball."""


class BasisMismatchError(TypeError):
    pass


Coeff = Union[LaurentPoly, int]


class HeckeElement:
    __slots__ = ("system", "terms", "basis")

    def __init__(self, system: CoxeterSystem, terms: Optional[Mapping[GroupElement, Coeff]] = None, basis: str = "T"):
        if basis not in ("T", "C"):
            raise ValueError("basis must be 'T' or 'C'")
        self.system = system
        self.basis = basis
        clean: dict[GroupElement, LaurentPoly] = {}
        for w, p in (terms or {}).items():
            if isinstance(p, int):
                p = LaurentPoly.monomial(0, p)
            if p:
                clean[w] = p
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def T(cls, system: CoxeterSystem, w: GroupElement | str) -> "HeckeElement":
        if isinstance(w, str):
            w = system.group.parse(w)
        return cls(system, {w: LaurentPoly.one()}, "T")

    @classmethod
    def basis_element(cls, system: CoxeterSystem, w: GroupElement, basis: str) -> "HeckeElement":
        return cls(system, {w: LaurentPoly.one()}, basis)

    @classmethod
    def zero(cls, system: CoxeterSystem, basis: str = "T") -> "HeckeElement":
        return cls(system, {}, basis)

    @classmethod
    def one(cls, system: CoxeterSystem) -> "HeckeElement":
        return cls.T(system, system.group.identity())

    # -- linear structure -----------------------------------------------------

    def _check(self, other: "HeckeElement"):
        if other.basis != self.basis:
            raise BasisMismatchError(f"cannot combine {self.basis}-basis with {other.basis}-basis")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        out = dict(self.terms)
        for w, p in other.terms.items():
            out[w] = out.get(w, LaurentPoly.zero()) + p
        return HeckeElement(self.system, out, self.basis)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.system, {w: -p for w, p in self.terms.items()}, self.basis)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c: Coeff) -> "HeckeElement":
        if isinstance(c, int):
            c = LaurentPoly.monomial(0, c)
        return HeckeElement(self.system, {w: c * p for w, p in self.terms.items()}, self.basis)

    def __rmul__(self, c):
        if isinstance(c, (LaurentPoly, int)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        if isinstance(other, HeckeElement):
            return mult(self, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def __hash__(self):
        return hash((self.basis, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, w: GroupElement) -> LaurentPoly:
        return self.terms.get(w, LaurentPoly.zero())

    def support(self) -> list[GroupElement]:
        return sorted(self.terms, key=GroupElement.sort_key)

    def max_length(self) -> int:
        return max((w.length for w in self.terms), default=0)

    # -- algebra operations ---------------------------------------------------

    def mult_gen_left(self, s: int) -> "HeckeElement":
        return mult_gen_left(s, self)

    def mult_gen_right(self, s: int) -> "HeckeElement":
        return mult_gen_right(self, s)

    def bar(self) -> "HeckeElement":
        return bar_element(self)

    def flat(self) -> "HeckeElement":
        return flat(self)

    def in_H_lt0(self) -> bool:
        return in_H_lt0(self)

    # -- encodings ------------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [{"word": w.to_json(), "poly": self.terms[w].to_json()} for w in self.support()]

    @classmethod
    def from_json(cls, system: CoxeterSystem, data: Iterable[Mapping], basis: str = "T") -> "HeckeElement":
        g = system.group
        return cls(system, {g.element(r["word"]): LaurentPoly.from_json(r["poly"]) for r in data}, basis)

    def __repr__(self) -> str:
        if not self.terms:
            return f"0[{self.basis}]"
        parts = [f"({self.terms[w]})*{self.basis}[{format_word(w.word)}]" for w in reversed(self.support())]
        return " + ".join(parts)


def _require_T(h: HeckeElement):
    if h.basis != "T":
        raise BasisMismatchError("operation is defined on T-basis coordinates")


def mult_gen_left(s: int, h: HeckeElement) -> HeckeElement:
    """``T_s * h`` by the two-case rule."""
    _require_T(h)
    g = h.system.group
    q = quantum(h.system.L[s])
    out: dict[GroupElement, LaurentPoly] = {}
    zero = LaurentPoly.zero()
    for w, p in h.terms.items():
        sw, up = g.mul_gen(w, s, "left")
        out[sw] = out.get(sw, zero) + p
        if not up:
            out[w] = out.get(w, zero) + q * p
    return HeckeElement(h.system, out, "T")


def mult_gen_right(h: HeckeElement, s: int) -> HeckeElement:
    """``h * T_s`` by the mirrored rule."""
    _require_T(h)
    g = h.system.group
    q = quantum(h.system.L[s])
    out: dict[GroupElement, LaurentPoly] = {}
    zero = LaurentPoly.zero()
    for w, p in h.terms.items():
        ws, up = g.mul_gen(w, s, "right")
        out[ws] = out.get(ws, zero) + p
        if not up:
            out[w] = out.get(w, zero) + q * p
    return HeckeElement(h.system, out, "T")


def mult(x: HeckeElement, y: HeckeElement, radius_guard: Optional[int] = None) -> HeckeElement:
    """Product of two T-basis elements.

    With ``radius_guard`` set, refuses inputs whose product could contain an
    element longer than the guard.
    """
    _require_T(x)
    _require_T(y)
    if radius_guard is not None and x.max_length() + y.max_length() > radius_guard:
        raise TruncationError(
            f"product of lengths {x.max_length()} + {y.max_length()} exceeds guard {radius_guard}"
        )
    out = HeckeElement.zero(x.system)
    for u, p in x.terms.items():
        h = y
        for s in reversed(u.word):
            h = mult_gen_left(s, h)
        out = out + h.scale(p)
    return out


def invert_T(system: CoxeterSystem, w: GroupElement) -> HeckeElement:
    """``T_w^{-1}`` in T-coordinates, using ``T_s^{-1} = T_s + (v^-L - v^L) T_e``."""
    h = HeckeElement.one(system)
    for s in w.word:
        q = quantum(system.L[s])
        h = mult_gen_left(s, h) - h.scale(q)
    return h


def bar_element(h: HeckeElement) -> HeckeElement:
    _require_T(h)
    out = HeckeElement.zero(h.system)
    for w, p in h.terms.items():
        out = out + invert_T(h.system, w.inverse()).scale(p.bar())
    return out


def flat(h: HeckeElement) -> HeckeElement:
    """The anti-involution ``T_w -> T_{w^-1}`` (``C_w -> C_{w^-1}`` in the C-basis)."""
    return HeckeElement(h.system, {w.inverse(): p for w, p in h.terms.items()}, h.basis)


def in_H_lt0(h: HeckeElement) -> bool:
    _require_T(h)
    return all(p.is_strictly_negative() for p in h.terms.values())
