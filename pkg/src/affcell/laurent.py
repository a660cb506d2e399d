"""Exact Laurent polynomials in one variable ``v`` with integer coefficients.

Values are immutable. Terms are kept as a tuple of ``(exponent, coefficient)``
pairs sorted by increasing exponent, with no zero coefficients, so equal
polynomials hash and iterate identically.

The hot loops of the package do not go through this class; they work on plain
``{exponent: coefficient}`` dicts (see :mod:`affcell.kernels`).  Use
:meth:`LaurentPoly.as_dict` and :meth:`LaurentPoly.from_dict` at the boundary.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "NotBarSymmetricError",
    "add",
    "mul",
    "bar",
    "is_strictly_negative",
    "symmetric_head",
]


class NotBarSymmetricError(ValueError):
    pass


_TERM_RE = re.compile(r"^\s*([+-]?\s*\d+)\s*(?:\*\s*v\s*(?:\^\s*([+-]?\d+))?)?\s*$")


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[int, int], Iterable[tuple[int, int]], None] = None):
        acc: dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                if c:
                    acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _from_sorted(cls, terms: tuple) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "LaurentPoly":
        return cls._from_sorted(tuple(sorted((e, c) for e, c in d.items() if c)))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._from_sorted(((exponent, coeff),) if coeff else ())

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._from_sorted(())

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.monomial(0)

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def as_dict(self) -> dict[int, int]:
        return dict(self._terms)

    def coeff(self, exponent: int) -> int:
        for e, c in self._terms:
            if e == exponent:
                return c
        return 0

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        return self._terms[-1][0]

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("valuation of the zero polynomial")
        return self._terms[0][0]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        return LaurentPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._from_sorted(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._terms) == 1 and self._terms[0][1] in (1, -1):
                e, c = self._terms[0]
                return LaurentPoly.monomial(e * n, c ** (-n))
            raise ValueError("only signed monomials are invertible")
        out = LaurentPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        return LaurentPoly._from_sorted(tuple((e + k, c) for e, c in self._terms))

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._from_sorted(tuple((-e, c) for e, c in reversed(self._terms)))

    def is_bar_symmetric(self) -> bool:
        return self == self.bar()

    def is_strictly_negative(self) -> bool:
        return not self._terms or self._terms[-1][0] <= -1

    def symmetric_head(self, *, check: bool = True) -> tuple["LaurentPoly", "LaurentPoly"]:
        """Split ``p = m + r`` with ``m`` bar-symmetric and ``r`` in ``v^-1 Z[v^-1]``.

        ``m`` collects the coefficients of ``p`` in degrees ``>= 0`` and mirrors
        them, so ``m = c_0 + sum_{i>0} c_i (v^i + v^-i)``.  With ``check=True``
        the input must itself be bar-symmetric.  The KL correction step feeds
        arbitrary coefficients and passes ``check=False``.
        """
        if check and not self.is_bar_symmetric():
            raise NotBarSymmetricError(f"{self} is not bar-symmetric")
        m: dict[int, int] = {}
        for e, c in self._terms:
            if e > 0:
                m[e] = c
                m[-e] = c
            elif e == 0:
                m[0] = c
        head = LaurentPoly.from_dict(m)
        return head, self - head

    def evaluate(self, v):
        return sum(c * v**e for e, c in self._terms)

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == (((0, other),) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- encodings ------------------------------------------------------------

    def to_text(self) -> str:
        """Text form ``c0*v^e0 + c1*v^e1 + ...`` with decreasing exponents."""
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*v^{e}" for e, c in reversed(self._terms))

    @classmethod
    def from_text(cls, text: str) -> "LaurentPoly":
        text = text.strip()
        if text == "0":
            return cls.zero()
        # normalise "a - b" into "a + -b"
        text = re.sub(r"(?<=[\dv\s])-\s*(?=\d)", "+ -", text)
        acc: dict[int, int] = {}
        for chunk in text.split("+"):
            if not chunk.strip():
                continue
            m = _TERM_RE.match(chunk)
            if m is None:
                raise ValueError(f"cannot parse term {chunk!r}")
            c = int(m.group(1).replace(" ", ""))
            if m.group(2) is not None:
                e = int(m.group(2))
            else:
                e = 1 if "v" in chunk else 0
            acc[e] = acc.get(e, 0) + c
        return cls(acc)

    def to_json(self) -> list[list]:
        """JSON form: list of ``[exponent, "coefficient"]`` pairs."""
        return [[e, str(c)] for e, c in self._terms]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls((int(e), int(c)) for e, c in data)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.monomial(0, x)
    return NotImplemented


v = LaurentPoly.monomial(1)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def bar(p: LaurentPoly) -> LaurentPoly:
    return p.bar()


def is_strictly_negative(p: LaurentPoly) -> bool:
    return p.is_strictly_negative()


def symmetric_head(p: LaurentPoly, *, check: bool = True) -> tuple[LaurentPoly, LaurentPoly]:
    return p.symmetric_head(check=check)


def quantum(k: int) -> LaurentPoly:
    """``v^k - v^-k``; the quadratic-relation coefficient for a generator of weight k."""
    return LaurentPoly({k: 1, -k: -1})
