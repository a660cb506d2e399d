"""Cell data for generic parameters: parabolic classes, a-values, zone orderings
and the (w, T, Z) descriptors of two-sided cells.

The tables are transcribed verbatim as small set expressions so they can be
diffed against the printed tables:

* ``W12``, ``W23``, ``W13``: standard parabolic subgroups
* ``w12``, ``w23``, ``w13``: their longest elements
* ``C``: the union of all proper standard parabolic subgroups
* ``hat(x)``: prefixes of reduced expressions of x
* ``{x, y}``: explicit sets; ``A - B`` and ``A u B`` combine sets

Class order lists are processing orders (highest a-value first); a tuple
inside the list is a pair written ``ci <-> cj`` whose relative order does not
matter.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .coxeter import CoxeterGroup, CoxeterSystem, GroupElement, group

__all__ = [
    "AValueForm",
    "TauKind",
    "ParabolicClass",
    "CellDescriptor",
    "ZoneTable",
    "NonGenericError",
    "ZoneError",
    "DescriptorDataError",
    "zones",
    "descriptors_for",
    "genericity_check",
    "sample_weights",
    "enumerate_cell",
    "eval_set",
    "with_overrides",
]


class NonGenericError(ValueError):
    pass


class ZoneError(ValueError):
    pass


class DescriptorDataError(AssertionError):
    """A descriptor violates length additivity or injectivity."""


# ---------------------------------------------------------------------------
# a-value linear forms


_FORM_RE = re.compile(r"([+-]?)(\d*)([abc]?)")


@dataclass(frozen=True)
class AValueForm:
    a: int = 0
    b: int = 0
    c: int = 0

    @classmethod
    def parse(cls, text: str) -> "AValueForm":
        text = text.replace(" ", "")
        if text == "0":
            return cls()
        coeffs = {"a": 0, "b": 0, "c": 0}
        pos = 0
        while pos < len(text):
            m = _FORM_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"bad a-value form {text!r}")
            sign, num, var = m.groups()
            if not var:
                raise ValueError(f"constant term in a-value form {text!r}")
            k = int(num) if num else 1
            coeffs[var] += -k if sign == "-" else k
            pos = m.end()
        return cls(**coeffs)

    def evaluate(self, abc: Sequence[int]) -> int:
        a, b, c = abc
        return self.a * a + self.b * b + self.c * c

    def __str__(self) -> str:
        parts = []
        for k, var in ((self.a, "a"), (self.b, "b"), (self.c, "c")):
            if k:
                coef = "" if abs(k) == 1 else str(abs(k))
                parts.append(("-" if k < 0 else "+") + coef + var)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------------------
# set expressions


def _named(grp: CoxeterGroup, name: str) -> GroupElement:
    longest = {"w12": (0, 1), "w23": (1, 2), "w13": (0, 2)}
    if name in longest:
        return grp.longest_element(longest[name])
    return grp.parse(name)


def eval_set(grp: CoxeterGroup, expr: str) -> frozenset[GroupElement]:
    """Evaluate a table set expression (see module docstring)."""
    tokens = re.findall(r"hat\([^)]*\)|\{[^}]*\}|W\d\d|\bC\b|\bu\b|-|[^\s{}()]+", expr)
    result: Optional[set] = None
    op = "u"
    for tok in tokens:
        if tok in ("u", "-"):
            op = tok
            continue
        if tok.startswith("hat("):
            val = grp.prefix_set(_named(grp, tok[4:-1]))
        elif tok.startswith("{"):
            inner = tok[1:-1].strip()
            val = {_named(grp, x.strip()) for x in inner.split(",")} if inner else set()
        elif re.fullmatch(r"W\d\d", tok):
            val = set(grp.parabolic((int(tok[1]) - 1, int(tok[2]) - 1)))
        elif tok == "C":
            val = set()
            for pair in ((0, 1), (1, 2), (0, 2)):
                val |= set(grp.parabolic(pair))
        else:
            val = {_named(grp, tok)}
        if result is None:
            result = set(val)
        elif op == "u":
            result |= val
        else:
            result -= val
    return frozenset(result or ())


# ---------------------------------------------------------------------------
# transcribed tables

# (class name) -> (set expression, a-value form)
_G2_CLASSES_R_GT_1 = {
    "c6": ("{e}", "0"),
    "c5": ("W23 - {w23, e}", "b"),
    "c4": ("{w23}", "3b"),
    "c3": ("W12 - {e, s2, s1s2s1s2s1, w12}", "a"),
    "c2": ("{w13}", "a+b"),
    "c1": ("{s1s2s1s2s1}", "3a-2b"),
    "c0": ("{w12}", "3a+3b"),
}

_G2_CLASSES_R_LT_1 = {
    "c6": ("{e}", "0"),
    "c5": ("{s1}", "a"),
    "c4": ("C - {e, s1, s2s1s2s1s2, w12, w13, w23}", "b"),
    "c3": ("{w13}", "a+b"),
    "c2": ("{s2s1s2s1s2}", "3b-2a"),
    "c1": ("{w23}", "3b"),
    "c0": ("{w12}", "3a+3b"),
}

_B2_CLASSES_A = {
    "c8": ("{e}", "0"),
    "c7": ("{s3}", "c"),
    "c6": ("{s2, s3s2, s2s3, s3s2s3}", "b"),
    "c5": ("{s2s3s2}", "2b-c"),
    "c4": ("{s2s3s2s3}", "2b+2c"),
    "c3": ("{s1, s2s1, s1s2, s2s1s2}", "a"),
    "c2": ("{s1s3}", "a+c"),
    "c1": ("{s1s2s1}", "2a-b"),
    "c0": ("{w12}", "2a+2b"),
}

_B2_CLASSES_B = {
    "c8": ("{e}", "0"),
    "c7": ("{s3}", "c"),
    "c6": ("{s1}", "a"),
    "c5": ("{s1s3}", "a+c"),
    "c4": ("{s2, s1s2, s2s1, s1s2s1, s3s2, s2s3, s3s2s3}", "b"),
    "c3": ("{s2s1s2}", "2b-a"),
    "c2": ("{s2s3s2}", "2b-c"),
    "c1": ("{w23}", "2b+2c"),
    "c0": ("{w12}", "2a+2b"),
}

_B2_CLASSES_C = {
    "c8": ("{e}", "0"),
    "c7": ("{s2}", "b"),
    "c6": ("{s3, s2s3, s3s2, s2s3s2}", "c"),
    "c5": ("{s3s2s3}", "2c-b"),
    "c4": ("{s2s3s2s3}", "2b+2c"),
    "c3": ("{s1, s2s1, s1s2, s2s1s2}", "a"),
    "c2": ("{s1s3}", "a+c"),
    "c1": ("{s1s2s1}", "2a-b"),
    "c0": ("{w12}", "2a+2b"),
}

_ORDERS = {
    ("g2", "r>2"): ["c0", "c1", "c2", ("c3", "c4"), "c5", "c6"],
    ("g2", "2>r>3/2"): ["c0", ("c1", "c4"), "c2", "c3", "c5", "c6"],
    ("g2", "3/2>r>1"): ["c0", "c4", "c2", "c1", "c3", "c5", "c6"],
    ("g2", "r<1"): ["c0", "c1", ("c2", "c3"), "c4", "c5", "c6"],
    ("b2", "A1"): ["c0", "c1", "c2", ("c3", "c4"), "c5", "c6", "c7", "c8"],
    ("b2", "A2"): ["c0", "c1", "c4", "c2", "c3", "c5", "c6", "c7", "c8"],
    ("b2", "A3"): ["c0", ("c1", "c4"), "c2", "c5", "c3", "c6", "c7", "c8"],
    ("b2", "A4"): ["c0", "c4", "c2", "c1", "c5", "c3", "c6", "c7", "c8"],
    ("b2", "A5"): ["c0", "c4", "c2", "c1", "c3", "c5", "c6", "c7", "c8"],
    ("b2", "B2"): ["c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"],
    ("b2", "B1"): ["c0", "c1", "c2", ("c3", "c5"), "c4", "c6", "c7", "c8"],
    ("b2", "C1"): ["c0", "c4", "c2", "c1", "c3", "c5", "c6", "c7", "c8"],
    ("b2", "C2"): ["c0", ("c1", "c4"), "c2", "c3", "c5", "c6", "c7", "c8"],
    ("b2", "C3"): ["c0", "c1", "c2", ("c3", "c4"), "c5", "c6", "c7", "c8"],
}

_CLASS_TABLES = {
    ("g2", "r>2"): _G2_CLASSES_R_GT_1,
    ("g2", "2>r>3/2"): _G2_CLASSES_R_GT_1,
    ("g2", "3/2>r>1"): _G2_CLASSES_R_GT_1,
    ("g2", "r<1"): _G2_CLASSES_R_LT_1,
    **{("b2", z): _B2_CLASSES_A for z in ("A1", "A2", "A3", "A4", "A5")},
    **{("b2", z): _B2_CLASSES_B for z in ("B1", "B2")},
    **{("b2", z): _B2_CLASSES_C for z in ("C1", "C2", "C3")},
}

# Descriptor cells: name -> (w_c, T, Z).  T is "{e}", "{e,t}" or "<t>";
# "<t1,t2>" is the two-generator monoid of the lowest cell.  "finite-g2"
# marks the G2 finite cell meeting <s2, s3>, handled separately.
_E = ("e", "{e}", "{e}")
_G2_LOWEST = ("w12", "<s2s1s2s1s2s3, s1s2s1s2s3s1s2s1s2s3>", "derived")
_B2_LOWEST = ("s1s2s1s2", "<s2s1s2s3, s1s2s1s3s2s3>", "hat(s3s2s1s3s2s3)")

_DESCRIPTORS = {
    ("g2", "r>2"): {
        "c0": _G2_LOWEST,
        "c1": ("s1s2s1s2s1", "<s1s2s1s2s3>", "hat(s3s2s1s2s3)"),
        "c2": ("s1s3", "<s1s3s2>", "hat(s2s1s2s3) u {s2s3}"),
        "c3": ("s1", "{e, s1s2}", "hat(s2s3)"),
        "c4": ("s2s3s2", "{e}", "{e}"),
        "c5": "finite-g2",
        "c6": _E,
    },
    ("g2", "2>r>3/2"): {
        "c0": _G2_LOWEST,
        # printed as <s2s2s1s2s3>; s2s2 = e, read as s1s2s1s2s3 as in the r>2 column
        "c1": ("s1s2s1s2s1", "<s1s2s1s2s3>", "hat(s3s2s1s2s3)"),
        "c2": ("s1s3", "{e}", "hat(s2s1s2s3)"),
        "c3": ("s1", "{e, s1s2}", "hat(s2s3)"),
        "c4": ("s2s3s2", "<s3s2s1>", "hat(s1s2s1s2s3)"),
        "c5": "finite-g2",
        "c6": _E,
    },
    ("g2", "3/2>r>1"): {
        "c0": _G2_LOWEST,
        "c1": ("s1s2s1s2s1", "{e}", "{e}"),
        "c2": ("s1s3", "<s1s3s2s1s2>", "hat(s2s1s2s1) u {s2s1s2s3}"),
        "c3": ("s1", "{e, s1s2}", "hat(s2s3)"),
        "c4": ("s2s3s2", "<s3s2s1>", "hat(s1s2s1s2s3)"),
        "c5": "finite-g2",
        "c6": _E,
    },
    ("g2", "r<1"): {
        "c0": _G2_LOWEST,
        "c1": ("s2s3s2", "<s3s2s1>", "hat(s1s2s1s2s3)"),
        "c2": ("s2s1s2s1s2", "{e}", "hat(s3)"),
        "c3": ("s1s3", "<s1s3s2s1s2>", "hat(s2s1s2s1) u {s2s1s2s3}"),
        "c4": "finite-g2",
        "c5": ("s1", "{e}", "{e}"),
        "c6": _E,
    },
}


def _b2_zone(z: str) -> dict:
    A = ("A1", "A2", "A3", "A4", "A5")
    if z in A:
        k = A.index(z)
        return {
            "c0": _B2_LOWEST,
            "c1": ("s1s2s1", "<s1s2s3>", "hat(s3s2s3)") if k < 3 else ("s1s2s1", "{e}", "{e}"),
            "c2": [
                ("s1s3", "<s1s2s3s2>", "hat(s2s3s2)"),
                ("s1s3", "{e}", "hat(s2s3)"),
                ("s1s3", "{e}", "hat(s2s3)"),
                ("s1s3", "<s1s3s2>", "hat(s2s1) u {s2s3}"),
                ("s1s3", "<s1s3s2>", "hat(s2s1) u {s2s3}"),
            ][k],
            "c3": [
                ("s1", "<s1s2s3s2>", "hat(s2s3s2)"),
                ("s1", "<s1s2s3s2>", "hat(s2s3s2)"),
                ("s1", "{e}", "hat(s2s3)"),
                ("s1", "{e}", "hat(s2s3)"),
                ("s1", "<s1s2s3s2>", "hat(s2s3s2)"),
            ][k],
            "c4": ("s2s3s2s3", "{e}", "{e}") if k == 0 else ("s2s3s2s3", "<s2s3s2s1>", "hat(s1s2s3)"),
            "c5": ("s2s3s2", "<s2s3s2s1>", "hat(s1s2s3)") if k in (2, 3) else ("s2s3s2", "{e}", "{e}"),
            "c6": ("s2", "{e}", "hat(s3)"),
            "c7": ("s3", "{e}", "{e}"),
            "c8": _E,
        }
    if z in ("B1", "B2"):
        b1 = z == "B1"
        return {
            "c0": _B2_LOWEST,
            "c1": ("s2s3s2s3", "<s2s3s2s1>", "hat(s1s2s3)"),
            "c2": ("s2s3s2", "<s2s3s2s1>", "hat(s1s2s3)"),
            "c3": ("s2s1s2", "{e}", "hat(s3)"),
            "c4": ("s2", "{e}", "{e, s1, s3}") if b1 else ("s2", "<s2s1s3>", "hat(s1s3)"),
            "c5": ("s1s3", "<s1s3s2>", "hat(s2s1) u {s2s3}") if b1 else ("s1s3", "{e}", "{e}"),
            "c6": ("s1", "{e}", "{e}"),
            "c7": ("s3", "{e}", "{e}"),
            "c8": _E,
        }
    C = ("C1", "C2", "C3")
    if z in C:
        k = C.index(z)
        return {
            "c0": _B2_LOWEST,
            "c1": ("s1s2s1", "{e}", "{e}") if k == 0 else ("s1s2s1", "<s1s2s3>", "hat(s3s2s3)"),
            "c2": [
                ("s1s3", "<s1s3s2>", "hat(s2s1) u {s2s3}"),
                ("s1s3", "{e}", "hat(s2s3)"),
                ("s1s3", "<s1s2s3s2>", "hat(s2s3s2)"),
            ][k],
            "c3": ("s1", "<s1s2s3s2>", "hat(s2s3s2)"),
            "c4": ("s2s3s2s3", "<s2s3s2s1>", "hat(s1s2s3)") if k < 2 else ("s2s3s2s3", "{e}", "{e}"),
            "c5": ("s3s2s3", "{e}", "{e}"),
            "c6": ("s3", "{e}", "hat(s2)"),
            "c7": ("s2", "{e}", "{e}"),
            "c8": _E,
        }
    raise ZoneError(z)


for _z in ("A1", "A2", "A3", "A4", "A5", "B1", "B2", "C1", "C2", "C3"):
    _DESCRIPTORS[("b2", _z)] = _b2_zone(_z)


def zones(kind: str) -> list[str]:
    return [z for (k, z) in _ORDERS if k == kind.lower()]


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class TauKind:
    """The translation part T of a cell: ``free2``, ``free1``, ``order2`` or ``trivial``."""

    variant: str
    gens: tuple[GroupElement, ...] = ()

    def __post_init__(self):
        expected = {"free2": 2, "free1": 1, "order2": 1, "trivial": 0}
        if self.variant not in expected or len(self.gens) != expected[self.variant]:
            raise ValueError(f"bad TauKind {self.variant} with {len(self.gens)} generators")

    @property
    def is_finite(self) -> bool:
        return self.variant in ("order2", "trivial")

    def monomials(self, max_degree: int) -> list[tuple[int, ...]]:
        """Exponent tuples of monomials of total degree <= max_degree."""
        if self.variant == "trivial":
            return [()]
        if self.variant == "order2":
            return [(0,), (1,)][: max_degree + 1]
        if self.variant == "free1":
            return [(n,) for n in range(max_degree + 1)]
        return [(n, m) for d in range(max_degree + 1) for n in range(d, -1, -1) for m in [d - n]]

    def element(self, exps: tuple[int, ...]) -> GroupElement:
        if self.variant == "trivial":
            raise ValueError("trivial T has no generators") if exps else None
        grp = self.gens[0].group if self.gens else None
        if not exps:
            raise ValueError("missing exponents")
        word: tuple = ()
        for g, n in zip(self.gens, exps):
            word += g.word * n
        return grp.element(word)

    def describe(self) -> str:
        if self.variant == "trivial":
            return "{e}"
        if self.variant == "order2":
            return "{e, %s}" % self.gens[0]
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


@dataclass(frozen=True)
class ParabolicClass:
    name: str
    expr: str
    elements: frozenset[GroupElement]
    a_form: AValueForm


@dataclass(frozen=True)
class CellDescriptor:
    name: str  # "c~3" style name of the two-sided cell
    class_name: str  # "c3"
    w_gamma: GroupElement
    tau: TauKind
    z_set: tuple[GroupElement, ...]
    a_form: AValueForm
    z_expr: str = ""

    @property
    def m(self) -> int:
        return len(self.z_set)

    @property
    def case_tag(self) -> str:
        return classify_case(self.w_gamma)[0]

    def tau_element(self, exps: tuple[int, ...]) -> GroupElement:
        if self.tau.variant == "trivial":
            return self.w_gamma.group.identity()
        return self.tau.element(exps)


@dataclass
class ZoneTable:
    kind: str
    zone: str
    classes: dict[str, ParabolicClass]
    order: list  # processing order; tuples are <-> pairs
    descriptors: dict[str, CellDescriptor]
    special: dict[str, str] = field(default_factory=dict)  # class -> "finite-g2"

    def flat_order(self, swap_pairs: bool = False) -> list[str]:
        out = []
        for item in self.order:
            if isinstance(item, tuple):
                out.extend(reversed(item) if swap_pairs else item)
            else:
                out.append(item)
        return out

    def a_value(self, name: str, system: CoxeterSystem) -> int:
        return self.classes[name].a_form.evaluate(system.abc)


def classify_case(w: GroupElement) -> tuple[str, tuple[int, ...], Optional[int]]:
    """Decide how w sits in its parabolic subgroup.

    Returns ``("longest-element", S', None)`` when w is the longest element of
    ``W_{S'}`` (S' = support of w), or ``("s-times-longest", S', s)`` when
    ``w = s w'`` with w' longest in ``W_{S'}`` and ``w^2 = e``.
    """
    grp = w.group
    support = tuple(sorted(set(w.word)))
    if len(support) < 3 and grp.longest_element(support) == w:
        return ("longest-element", support, None)
    for extra in range(3):
        sub = tuple(sorted(set(support) | {extra}))
        if len(sub) >= 3:
            continue
        w0 = grp.longest_element(sub)
        s_el = grp.multiply(w, grp.inverse(w0))
        if s_el.length == 1 and s_el.word[0] in sub and (w * w).length == 0:
            return ("s-times-longest", sub, s_el.word[0])
    raise DescriptorDataError(f"{w} is neither longest nor s times longest in a parabolic")


def _parse_tau(grp: CoxeterGroup, text: str) -> TauKind:
    text = text.strip()
    if text == "{e}":
        return TauKind("trivial")
    if text.startswith("{"):
        inner = [x.strip() for x in text[1:-1].split(",")]
        assert inner[0] == "e" and len(inner) == 2, text
        return TauKind("order2", (grp.parse(inner[1]),))
    assert text.startswith("<") and text.endswith(">"), text
    gens = tuple(grp.parse(x) for x in text[1:-1].split(","))
    return TauKind("free2" if len(gens) == 2 else "free1", gens)


def derive_lowest_z(grp: CoxeterGroup, w: GroupElement, gens: Sequence[GroupElement], radius: int = 24) -> tuple[GroupElement, ...]:
    """Z for the lowest cell: y with ``w y`` reduced and no reduced prefix ``t^-1``.

    Elements ``w y`` (l(wy) = l(w) + l(y)) factor uniquely as ``w tau^-1 z``;
    Z collects the y that admit no ``t^-1`` prefix for a generator t.
    """
    out = []
    for y in grp.ball(radius):
        if not grp.is_reduced_product(w, y):
            continue
        if any(grp.multiply(t, y).length == y.length - t.length for t in gens):
            continue
        out.append(y)
    if out and max(y.length for y in out) > radius - 4:
        raise DescriptorDataError("derived Z touches the search radius")
    return tuple(out)


def _z_sort(grp: CoxeterGroup, zs: Iterable[GroupElement]) -> tuple[GroupElement, ...]:
    zs = sorted(set(zs), key=GroupElement.sort_key)
    assert zs and zs[0].length == 0, "Z must contain e"
    return tuple(zs)


@lru_cache(maxsize=None)
def descriptors_for(kind: str, zone: str) -> ZoneTable:
    """Resolved cell data for one parameter zone."""
    kind = kind.lower()
    if (kind, zone) not in _ORDERS:
        raise ZoneError(f"unknown zone {zone!r} for {kind}; known: {zones(kind)}")
    grp = group(kind)
    classes = {
        name: ParabolicClass(name, expr, eval_set(grp, expr), AValueForm.parse(form))
        for name, (expr, form) in _CLASS_TABLES[(kind, zone)].items()
    }
    descs: dict[str, CellDescriptor] = {}
    special: dict[str, str] = {}
    for cname, row in _DESCRIPTORS[(kind, zone)].items():
        if isinstance(row, str):
            special[cname] = row
            continue
        wexpr, texpr, zexpr = row
        w = _named(grp, wexpr)
        tau = _parse_tau(grp, texpr)
        if zexpr == "derived":
            z = derive_lowest_z(grp, w, tau.gens)
        else:
            z = eval_set(grp, zexpr)
        descs[cname] = CellDescriptor(
            name="c~" + cname[1:],
            class_name=cname,
            w_gamma=w,
            tau=tau,
            z_set=_z_sort(grp, z),
            a_form=classes[cname].a_form,
            z_expr=zexpr,
        )
    return ZoneTable(kind, zone, classes, list(_ORDERS[(kind, zone)]), descs, special)


# ---------------------------------------------------------------------------
# genericity


def _g2_zone(a: int, b: int) -> str:
    r = Fraction(a, b)
    if r in (1, Fraction(3, 2), 2):
        raise NonGenericError(f"G2 parameters ({a},{b}) are not generic: a/b = {r}")
    if r > 2:
        return "r>2"
    if r > Fraction(3, 2):
        return "2>r>3/2"
    if r > 1:
        return "3/2>r>1"
    return "r<1"


def _violations(table: ZoneTable, system: CoxeterSystem) -> list[tuple[str, int, str, int]]:
    vals = {n: table.a_value(n, system) for n in table.classes}
    groups = [item if isinstance(item, tuple) else (item,) for item in table.order]
    bad = []
    for hi, lo in itertools.combinations(range(len(groups)), 2):
        for x in groups[hi]:
            for y in groups[lo]:
                if not vals[x] > vals[y]:
                    bad.append((x, vals[x], y, vals[y]))
    return bad


def ordering_violations(table: ZoneTable, system: CoxeterSystem) -> list[str]:
    """Pairs of classes whose a-values contradict the zone ordering."""
    return [f"a({x})={vx} must exceed a({y})={vy}" for x, vx, y, vy in _violations(table, system)]


def genericity_check(system: CoxeterSystem, zone: Optional[str] = None) -> str:
    """Return the zone of ``system`` or raise for non-generic/inconsistent input.

    G2: classified from a/b.  B2: the caller names the zone and the a-value
    order at these weights must match that zone's ordering table strictly
    (ties are tolerated only inside a ``<->`` pair).  Weights strictly inside
    another zone give ZoneError; weights inside no zone are non-generic.
    """
    if system.kind == "g2":
        z = _g2_zone(*system.weights)
        if zone is not None and zone != z:
            raise ZoneError(f"weights {system.weights} lie in zone {z}, not {zone}")
        bad = ordering_violations(descriptors_for("g2", z), system)
        if bad:  # pragma: no cover - the ratio test already implies the order
            raise ZoneError("; ".join(bad))
        return z
    if zone is None:
        raise ZoneError("B2 needs an explicit zone (A1-A5, B1, B2, C1-C3)")
    table = descriptors_for("b2", zone)
    bad = ordering_violations(table, system)
    if bad:
        fits = [z for z in zones("b2") if not _violations(descriptors_for("b2", z), system)]
        if not fits:
            # no zone contains the weights strictly: they sit on a wall
            raise NonGenericError(f"weights {system.weights} lie in no open zone: " + "; ".join(bad))
        raise ZoneError(f"weights {system.weights} lie in zone {'/'.join(fits)}, not {zone}: " + "; ".join(bad))
    return zone


def with_overrides(table: ZoneTable, classes: Optional[dict] = None, order: Optional[list] = None) -> ZoneTable:
    """A copy of ``table`` with some class expressions or the order replaced.

    Used to run the cell comparison against hand-edited tables.
    """
    grp = group(table.kind)
    new = dict(table.classes)
    for name, expr in (classes or {}).items():
        if name not in new:
            raise ZoneError(f"unknown class {name!r}")
        new[name] = ParabolicClass(name, expr, eval_set(grp, expr), new[name].a_form)
    if order is not None:
        order = [tuple(x) if isinstance(x, list) else x for x in order]
        if sorted(ZoneTable(table.kind, table.zone, new, order, {}).flat_order()) != sorted(new):
            raise ZoneError("order must list every class exactly once")
    return ZoneTable(table.kind, table.zone, new, list(order or table.order), table.descriptors, table.special)


def sample_weights(kind: str, zone: str, bound: int = 20) -> tuple[int, ...]:
    """Smallest weights (by sum, then lexicographic) lying strictly inside a zone.

    Ties are avoided even inside ``<->`` pairs.
    """
    table = descriptors_for(kind, zone)
    nvars = 2 if kind == "g2" else 3
    cands = itertools.product(range(1, bound + 1), repeat=nvars)
    for w in sorted(cands, key=lambda t: (sum(t), t)):
        system = CoxeterSystem(kind, w)
        if kind == "g2":
            try:
                if _g2_zone(*w) != zone:
                    continue
            except NonGenericError:
                continue
        if ordering_violations(table, system):
            continue
        vals = [table.a_value(n, system) for n in table.classes]
        if len(set(vals)) != len(vals):
            continue
        return w
    raise ZoneError(f"no weights <= {bound} inside zone {zone}")


# ---------------------------------------------------------------------------
# cells from descriptors


def _tau_candidates(desc: CellDescriptor, radius: int):
    tau = desc.tau
    if tau.variant == "trivial":
        yield ()
        return
    if tau.variant == "order2":
        yield (0,)
        yield (1,)
        return
    budget = radius - desc.w_gamma.length
    shortest = min(g.length for g in tau.gens)
    for deg in range(budget // shortest + 1):
        for exps in tau.monomials(deg):
            if sum(exps) == deg:
                yield exps


def enumerate_cell(desc: CellDescriptor, radius: int) -> dict[tuple, GroupElement]:
    """All ``z_i^-1 tau w z_j`` of length <= radius, keyed by ``(i, exps, j)``.

    Asserts length additivity and injectivity; a violation points at a
    transcription error in the tables.
    """
    grp = desc.w_gamma.group
    w = desc.w_gamma
    out: dict[tuple, GroupElement] = {}
    seen: dict[GroupElement, tuple] = {}
    zinv = [grp.inverse(z) for z in desc.z_set]
    for exps in _tau_candidates(desc, radius):
        expected = sum(g.length * n for g, n in zip(desc.tau.gens, exps))
        if expected + w.length > radius:
            continue
        tau = desc.tau_element(exps) if any(exps) else grp.identity()
        if tau.length != expected:
            raise DescriptorDataError(f"{desc.name}: tau {exps} has length {tau.length}, expected {expected}")
        tw = grp.multiply(tau, w)
        if tw.length != tau.length + w.length:
            raise DescriptorDataError(f"{desc.name}: tau*w not reduced for tau={tau}")
        for i, zi in enumerate(zinv):
            for j, zj in enumerate(desc.z_set):
                total = zi.length + tw.length + zj.length
                if total > radius:
                    continue
                x = grp.element(zi.word + tw.word + zj.word)
                if x.length != total:
                    raise DescriptorDataError(
                        f"{desc.name}: l(z_{i+1}^-1 tau w z_{j+1}) = {x.length} != {total} (tau={tau})"
                    )
                key = (i, exps, j)
                if x in seen:
                    raise DescriptorDataError(f"{desc.name}: {x} reached by {seen[x]} and {key}")
                seen[x] = key
                out[key] = x
    return out
