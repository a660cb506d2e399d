"""Word arithmetic in the affine Weyl groups of type G2~ and B2~.

Generators are indexed 0, 1, 2 and printed ``s1``, ``s2``, ``s3``.  Elements are
stored as their ShortLex normal form (the lexicographically least reduced word
for the order s1 < s2 < s3).  Length changes are decided exactly through the
integral root-lattice representation attached to the affine Cartan matrix:
``l(ws) > l(w)`` iff ``w(alpha_s)`` is a positive root.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

__all__ = [
    "CoxeterGroup",
    "CoxeterSystem",
    "GroupElement",
    "Ball",
    "group",
    "parse_word",
    "format_word",
]

RANK = 3

# Coxeter matrices, generators s1, s2, s3.
COXETER_MATRICES = {
    "g2": ((1, 6, 2), (6, 1, 3), (2, 3, 1)),
    "b2": ((1, 4, 2), (4, 1, 4), (2, 4, 1)),
}

# Generalised Cartan matrices a_ij = <alpha_i^vee, alpha_j>.  Off-diagonal
# products a_ij * a_ji equal 4 cos^2(pi / m_ij).
CARTAN_MATRICES = {
    "g2": ((2, -1, 0), (-3, 2, -1), (0, -1, 2)),
    "b2": ((2, -2, 0), (-1, 2, -1), (0, -2, 2)),
}

KINDS = tuple(COXETER_MATRICES)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "e"
    return "*".join(f"s{i + 1}" for i in word)


def parse_word(text: str) -> tuple[int, ...]:
    """Parse ``s1*s2*s1``, ``s1s2s1`` or ``e`` into a tuple of generator indices."""
    text = text.strip().replace(" ", "").replace("*", "")
    if text in ("", "e", "1"):
        return ()
    if not text.startswith("s"):
        raise ValueError(f"bad word {text!r}")
    out = []
    for tok in text.split("s")[1:]:
        if not tok.isdigit() or not 1 <= int(tok) <= RANK:
            raise ValueError(f"bad generator s{tok} in {text!r}")
        out.append(int(tok) - 1)
    return tuple(out)


def _mat_mul(a: tuple, b: tuple) -> tuple:
    return (
        a[0] * b[0] + a[1] * b[3] + a[2] * b[6],
        a[0] * b[1] + a[1] * b[4] + a[2] * b[7],
        a[0] * b[2] + a[1] * b[5] + a[2] * b[8],
        a[3] * b[0] + a[4] * b[3] + a[5] * b[6],
        a[3] * b[1] + a[4] * b[4] + a[5] * b[7],
        a[3] * b[2] + a[4] * b[5] + a[5] * b[8],
        a[6] * b[0] + a[7] * b[3] + a[8] * b[6],
        a[6] * b[1] + a[7] * b[4] + a[8] * b[7],
        a[6] * b[2] + a[7] * b[5] + a[8] * b[8],
    )


_IDENTITY = (1, 0, 0, 0, 1, 0, 0, 0, 1)


def _column_positive(m: tuple, j: int) -> bool:
    # images of simple roots are roots: all coordinates share a sign
    return m[j] + m[3 + j] + m[6 + j] > 0


@dataclass(frozen=True, eq=True, order=False)
class GroupElement:
    word: tuple[int, ...]
    group: "CoxeterGroup" = field(compare=False, hash=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.group.multiply(self, other)

    def inverse(self) -> "GroupElement":
        return self.group.inverse(self)

    def sort_key(self) -> tuple:
        return (len(self.word), self.word)

    def __lt__(self, other: "GroupElement") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return format_word(self.word)

    def __repr__(self) -> str:
        return f"<{self.group.kind}:{format_word(self.word)}>"

    def to_json(self) -> list[int]:
        return list(self.word)


class CoxeterGroup:
    """One of the two supported affine Weyl groups; use :func:`group` to get it."""

    def __init__(self, kind: str):
        kind = kind.lower()
        if kind not in COXETER_MATRICES:
            raise ValueError(f"unsupported type {kind!r}; expected one of {KINDS}")
        self.kind = kind
        self.coxeter_matrix = COXETER_MATRICES[kind]
        self.cartan = CARTAN_MATRICES[kind]
        self.generators = tuple(range(RANK))
        self._gen = tuple(self._reflection(i) for i in range(RANK))
        self._nf_by_inverse: dict[tuple, tuple[int, ...]] = {_IDENTITY: ()}
        self._balls: dict[int, Ball] = {}

    def __repr__(self) -> str:
        return f"CoxeterGroup({self.kind!r})"

    def __reduce__(self):
        return (group, (self.kind,))

    def _reflection(self, i: int) -> tuple:
        # s_i(alpha_j) = alpha_j - a_ij alpha_i ; column j holds the image of alpha_j
        m = [[int(r == c) for c in range(RANK)] for r in range(RANK)]
        for j in range(RANK):
            m[i][j] -= self.cartan[i][j]
        return tuple(x for row in m for x in row)

    def matrix(self, word: Iterable[int]) -> tuple:
        m = _IDENTITY
        for s in word:
            m = _mat_mul(m, self._gen[s])
        return m

    def root_image(self, word: Sequence[int], s: int) -> tuple[int, int, int]:
        """Coordinates of ``w(alpha_s)`` in the basis of simple roots."""
        m = self.matrix(word)
        return (m[s], m[3 + s], m[6 + s])

    # -- normal forms ---------------------------------------------------------

    def _normal_form_from_inverse(self, minv: tuple) -> tuple[int, ...]:
        cached = self._nf_by_inverse.get(minv)
        if cached is not None:
            return cached
        word = []
        m = minv
        while m != _IDENTITY:
            for s in self.generators:
                if not _column_positive(m, s):
                    break
            else:  # pragma: no cover - impossible for a faithful representation
                raise AssertionError("non-identity element without descent")
            word.append(s)
            m = _mat_mul(m, self._gen[s])
        nf = tuple(word)
        self._nf_by_inverse[minv] = nf
        return nf

    def normal_form(self, word: Iterable[int]) -> tuple[int, ...]:
        minv = _IDENTITY
        for s in word:
            minv = _mat_mul(self._gen[s], minv)
        return self._normal_form_from_inverse(minv)

    def element(self, word: Iterable[int] | str = ()) -> GroupElement:
        if isinstance(word, str):
            word = parse_word(word)
        word = tuple(word)
        for s in word:
            if s not in self.generators:
                raise ValueError(f"generator index {s} out of range")
        return GroupElement(self.normal_form(word), self)

    def identity(self) -> GroupElement:
        return GroupElement((), self)

    def gen(self, s: int) -> GroupElement:
        return GroupElement((s,), self)

    def parse(self, text: str) -> GroupElement:
        return self.element(parse_word(text))

    # -- products -------------------------------------------------------------

    def mul_gen(self, w: GroupElement, s: int, side: str = "left") -> tuple[GroupElement, bool]:
        """Return ``(sw, l(sw) > l(w))`` (or ``ws`` for ``side="right"``)."""
        if s not in self.generators:
            raise ValueError(f"{s} is not a generator")
        if side == "left":
            # l(sw) > l(w)  iff  w^-1(alpha_s) > 0
            inv = self.matrix(reversed(w.word))
            up = _column_positive(inv, s)
            return self.element((s,) + w.word), up
        if side == "right":
            up = _column_positive(self.matrix(w.word), s)
            return self.element(w.word + (s,)), up
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")

    def is_left_descent(self, w: GroupElement, s: int) -> bool:
        return not _column_positive(self.matrix(reversed(w.word)), s)

    def is_right_descent(self, w: GroupElement, s: int) -> bool:
        return not _column_positive(self.matrix(w.word), s)

    def left_descents(self, w: GroupElement) -> tuple[int, ...]:
        inv = self.matrix(reversed(w.word))
        return tuple(s for s in self.generators if not _column_positive(inv, s))

    def right_descents(self, w: GroupElement) -> tuple[int, ...]:
        m = self.matrix(w.word)
        return tuple(s for s in self.generators if not _column_positive(m, s))

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.element(x.word + y.word)

    def inverse(self, w: GroupElement) -> GroupElement:
        return self.element(reversed(w.word))

    def power(self, w: GroupElement, n: int) -> GroupElement:
        if n < 0:
            return self.power(self.inverse(w), -n)
        return self.element(w.word * n)

    def is_reduced_product(self, *factors: GroupElement) -> bool:
        total = sum(f.length for f in factors)
        word = tuple(s for f in factors for s in f.word)
        return len(self.normal_form(word)) == total

    # -- Bruhat order ---------------------------------------------------------

    def bruhat_leq(self, x: GroupElement, w: GroupElement) -> bool:
        return self._bruhat(x.word, w.word)

    @functools.lru_cache(maxsize=None)
    def _bruhat(self, x: tuple, w: tuple) -> bool:
        if len(x) > len(w):
            return False
        if x == w:
            return True
        if len(x) == len(w):
            return False
        s = w[0]  # s w < w for the first letter of a reduced word
        sw = w[1:]
        sx = self.normal_form((s,) + x)
        if len(sx) < len(x):
            return self._bruhat(sx, sw)
        return self._bruhat(x, sw)

    # -- parabolic data -------------------------------------------------------

    def parabolic(self, subset: Iterable[int]) -> list[GroupElement]:
        """All elements of the (finite) standard parabolic subgroup ``W_I``."""
        subset = tuple(sorted(set(subset)))
        if len(subset) >= RANK:
            raise ValueError("the full affine group is infinite")
        seen = {(): self.identity()}
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for w in frontier:
                for s in subset:
                    u, up = self.mul_gen(w, s, "right")
                    if up and u.word not in seen:
                        seen[u.word] = u
                        nxt.append(u)
            frontier = nxt
        return sorted(seen.values(), key=GroupElement.sort_key)

    def longest_element(self, subset: Iterable[int]) -> GroupElement:
        subset = tuple(sorted(set(subset)))
        if len(subset) >= RANK:
            raise ValueError("no longest element: W_S is infinite")
        return max(self.parabolic(subset), key=GroupElement.sort_key)

    def coset_reps(self, subset: Iterable[int], side: str = "left") -> Callable[[GroupElement], bool]:
        """Membership test for minimal-length coset representatives of ``W_I``.

        ``side="left"`` gives X' (cosets ``xW_I``: ``l(xs) > l(x)`` for s in I);
        ``side="right"`` gives ``Y' = X'^{-1}`` (cosets ``W_I x``).
        """
        subset = frozenset(subset)
        if len(subset) >= RANK:
            raise ValueError("coset representatives need a proper subset of S")
        if side == "left":
            return lambda x: not any(self.is_right_descent(x, s) for s in subset)
        if side == "right":
            return lambda x: not any(self.is_left_descent(x, s) for s in subset)
        raise ValueError(side)

    def coset_decomposition(self, w: GroupElement, subset: Iterable[int]) -> tuple[GroupElement, GroupElement]:
        """``w = x u`` with x in X', u in W_I and lengths adding."""
        subset = frozenset(subset)
        x, u = w, self.identity()
        while True:
            for s in sorted(subset):
                if self.is_right_descent(x, s):
                    x = self.element(x.word + (s,))
                    u = self.element((s,) + u.word)
                    break
            else:
                return x, u

    def prefix_set(self, t: GroupElement) -> set[GroupElement]:
        """All ``w`` with ``l(w^-1 t) = l(t) - l(w)``: prefixes of reduced words of t."""
        out = {self.identity()}
        frontier = {self.identity()}
        while frontier:
            nxt = set()
            for w in frontier:
                rest = self.element(tuple(reversed(w.word)) + t.word)
                for s in self.left_descents(rest):
                    ws = self.element(w.word + (s,))
                    if ws not in out:
                        out.add(ws)
                        nxt.add(ws)
            frontier = nxt
        return out

    # -- balls ----------------------------------------------------------------

    def ball(self, radius: int) -> "Ball":
        if radius < 0:
            raise ValueError("radius must be non-negative")
        for r, b in self._balls.items():
            if r >= radius:
                return b if r == radius else b.truncate(radius)
        b = Ball(self, radius)
        self._balls[radius] = b
        return b


@functools.lru_cache(maxsize=None)
def group(kind: str) -> CoxeterGroup:
    return CoxeterGroup(kind.lower())


@dataclass(frozen=True)
class CoxeterSystem:
    """An affine Weyl group together with a positive weight function.

    ``weights`` are the user-facing parameters: ``(a, b)`` for G2~ (diagram
    weights a, b, b) and ``(a, b, c)`` for B2~.
    """

    kind: str
    weights: tuple[int, ...]

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "weights", tuple(int(x) for x in self.weights))
        if kind not in COXETER_MATRICES:
            raise ValueError(f"unsupported type {self.kind!r}")
        expected = 2 if kind == "g2" else 3
        if len(self.weights) != expected:
            raise ValueError(f"{kind} needs {expected} weights, got {self.weights}")
        if any(x <= 0 for x in self.weights):
            raise ValueError("weights must be positive integers")

    @property
    def group(self) -> CoxeterGroup:
        return group(self.kind)

    @property
    def L(self) -> tuple[int, int, int]:
        """Weight of each generator s1, s2, s3."""
        if self.kind == "g2":
            a, b = self.weights
            return (a, b, b)
        return tuple(self.weights)  # type: ignore[return-value]

    def weight(self, w: GroupElement) -> int:
        L = self.L
        return sum(L[s] for s in w.word)

    @property
    def abc(self) -> tuple[int, int, int]:
        """Parameters as an (a, b, c) triple for evaluating a-value forms."""
        if self.kind == "g2":
            return (self.weights[0], self.weights[1], 0)
        return tuple(self.weights)  # type: ignore[return-value]


class Ball:
    """All elements of length at most ``radius``, indexed by (length, ShortLex).

    Index order is a linear extension of the Bruhat order, which the triangular
    solvers rely on.  ``lmul[s][i]`` / ``rmul[s][i]`` give the index of ``s*w_i``
    / ``w_i*s`` or -1 when that product leaves the ball.
    """

    def __init__(self, grp: CoxeterGroup, radius: int, *, _data=None):
        self.group = grp
        self.radius = radius
        if _data is not None:
            self.words, minvs, mats = _data
        else:
            self.words, minvs, mats = self._enumerate(grp, radius)
        self.elements = [GroupElement(w, grp) for w in self.words]
        self.index = {w: i for i, w in enumerate(self.words)}
        self.length = [len(w) for w in self.words]
        n = len(self.words)
        self.layer_start = [0] * (radius + 2)
        for L in range(radius + 2):
            self.layer_start[L] = next((i for i in range(n) if self.length[i] >= L), n)
        key_to_idx = {m: i for i, m in enumerate(mats)}
        self._mats = mats
        self._minvs = minvs
        self.lmul = [[-1] * n for _ in range(RANK)]
        self.rmul = [[-1] * n for _ in range(RANK)]
        gens = grp._gen
        for i in range(n):
            for s in range(RANK):
                self.lmul[s][i] = key_to_idx.get(_mat_mul(gens[s], mats[i]), -1)
                self.rmul[s][i] = key_to_idx.get(_mat_mul(mats[i], gens[s]), -1)
        self.inv = [key_to_idx[minvs[i]] for i in range(n)]
        self._bruhat_memo: dict[tuple[int, int], bool] = {}

    @staticmethod
    def _enumerate(grp: CoxeterGroup, radius: int):
        gens = grp._gen
        words: list[tuple] = [()]
        mats: list[tuple] = [_IDENTITY]
        minvs: list[tuple] = [_IDENTITY]
        layer = [0]
        for _ in range(radius):
            found: dict[tuple, tuple] = {}
            for i in layer:
                m, minv = mats[i], minvs[i]
                for s in range(RANK):
                    if not _column_positive(m, s):
                        continue
                    mm = _mat_mul(m, gens[s])
                    if mm in found:
                        continue
                    mi = _mat_mul(gens[s], minv)
                    found[mm] = (grp._normal_form_from_inverse(mi), mi)
            new = sorted(found.items(), key=lambda kv: kv[1][0])
            start = len(words)
            for mm, (w, mi) in new:
                words.append(w)
                mats.append(mm)
                minvs.append(mi)
            layer = list(range(start, len(words)))
        return words, minvs, mats

    def truncate(self, radius: int) -> "Ball":
        if radius > self.radius:
            raise ValueError("cannot enlarge a ball by truncation")
        n = self.layer_start[radius + 1]
        return Ball(self.group, radius, _data=(self.words[:n], self._minvs[:n], self._mats[:n]))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, w: GroupElement) -> bool:
        return w.word in self.index

    def idx(self, w) -> int:
        if isinstance(w, GroupElement):
            w = w.word
        try:
            return self.index[w]
        except KeyError:
            raise KeyError(f"{format_word(w)} is outside the ball of radius {self.radius}") from None

    def layer(self, L: int) -> range:
        return range(self.layer_start[L], self.layer_start[L + 1])

    def mul_idx(self, i: int, j: int) -> int:
        """Index of ``w_i w_j`` (-1 if outside the ball)."""
        k = i
        for s in self.words[j]:
            k = self.rmul[s][k]
            if k < 0:
                return -1
        return k

    def bruhat_leq(self, i: int, j: int) -> bool:
        if self.length[i] > self.length[j]:
            return False
        if i == j:
            return True
        if self.length[i] == self.length[j]:
            return False
        key = (i, j)
        hit = self._bruhat_memo.get(key)
        if hit is not None:
            return hit
        s = self.words[j][0]
        sj = self.lmul[s][j]
        si = self.lmul[s][i]
        if self.length[si] < self.length[i]:
            res = self.bruhat_leq(si, sj)
        else:
            res = self.bruhat_leq(i, sj)
        self._bruhat_memo[key] = res
        return res
