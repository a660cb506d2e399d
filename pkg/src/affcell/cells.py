"""Kazhdan-Lusztig cells inside a finite ball, and the strip construction.

The left preorder is generated by edges ``y -> z`` whenever ``C_z`` occurs in
``C_s C_y``; right edges come from inversion (``C_y C_s`` contains ``C_z`` iff
``C_s C_{y^-1}`` contains ``C_{z^-1}``).  Cells are the strongly connected
components.  Elements near the boundary of the ball lack outgoing edges, so
only the interior ``l(w) <= radius - margin`` is certified.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .celldata import ZoneTable, enumerate_cell
from .coxeter import Ball, GroupElement
from .klbasis import KLCache

__all__ = [
    "CheckResult",
    "Partition",
    "left_edges",
    "right_edges",
    "default_margin",
    "cell_partition",
    "strip_construction",
    "strip_left_cells",
    "compare_partitions",
    "descriptor_check",
    "parabolic_class_check",
    "lusztig_star_check",
]

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: Optional[bool]  # None: inconclusive (needs a larger radius)
    witness: Optional[str] = None
    detail: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return {True: "pass", False: "fail", None: "inconclusive"}[self.passed]

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Partition:
    kind: str
    ball: Ball
    blocks: list[frozenset[int]]
    certified: int  # elements of length <= certified are trustworthy
    names: list[Optional[str]] = field(default_factory=list)

    def __post_init__(self):
        if not self.names:
            self.names = [None] * len(self.blocks)
        self._of = {}
        for k, b in enumerate(self.blocks):
            for i in b:
                self._of[i] = k

    def block_of(self, i: int) -> int:
        return self._of[i]

    def same(self, i: int, j: int) -> bool:
        return self._of[i] == self._of[j]

    def restricted(self, certified: Optional[int] = None) -> list[frozenset[int]]:
        """Blocks intersected with the certified interior (empty ones dropped)."""
        cut = self.certified if certified is None else certified
        length = self.ball.length
        out = []
        for b in self.blocks:
            r = frozenset(i for i in b if length[i] <= cut)
            if r:
                out.append(r)
        return out

    def elements(self, k: int) -> list[GroupElement]:
        return [self.ball.elements[i] for i in sorted(self.blocks[k])]

    def to_json(self, certified_only: bool = True) -> dict:
        cut = self.certified if certified_only else self.ball.radius
        blocks = []
        for name, b in zip(self.names, self.blocks):
            els = [self.ball.elements[i].to_json() for i in sorted(b) if self.ball.length[i] <= cut]
            if not els:
                continue
            rec = {"elements": els}
            if name is not None:
                rec = {"name": name, **rec}
            blocks.append(rec)
        return {"kind": self.kind, "radius": cut, "blocks": blocks}


# ---------------------------------------------------------------------------
# preorder graphs


def left_edges(cache: KLCache) -> list[set[int]]:
    """``out[y]`` = indices z with ``C_z`` in ``C_s C_y`` for some s (z != y).

    Only rows with ``l(y) < radius`` are available; boundary elements get no
    outgoing edges.
    """
    ball = cache.ball
    cache.ensure(ball.radius)
    out: list[set[int]] = [set() for _ in range(len(ball))]
    top = ball.layer_start[ball.radius]
    for y in range(top):
        for s in range(3):
            for z in cache.row(s, y):
                if z != y:
                    out[y].add(z)
    return out


def right_edges(cache: KLCache, left: Optional[list[set[int]]] = None) -> list[set[int]]:
    left = left_edges(cache) if left is None else left
    inv = cache.ball.inv
    out: list[set[int]] = [set() for _ in range(len(left))]
    for y, zs in enumerate(left):
        for z in zs:
            out[inv[y]].add(inv[z])
    return out


def _scc(edges: list[set[int]]) -> list[frozenset[int]]:
    n = len(edges)
    rows = [y for y, zs in enumerate(edges) for _ in zs]
    cols = [z for zs in edges for z in zs]
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="strong")
    groups: dict[int, set[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), set()).add(i)
    blocks = [frozenset(g) for g in groups.values()]
    blocks.sort(key=min)
    return blocks


def default_margin(table: Optional[ZoneTable]) -> int:
    if table is None or not table.descriptors:
        return 7
    return 1 + max(d.w_gamma.length for d in table.descriptors.values())


def cell_partition(cache: KLCache, kind: str = "two-sided", margin: int = 7,
                   _edges: Optional[tuple] = None) -> Partition:
    """Left, right or two-sided KL cells of the ball."""
    left = _edges[0] if _edges else left_edges(cache)
    if kind == "left":
        edges = left
    elif kind == "right":
        edges = _edges[1] if _edges else right_edges(cache, left)
    elif kind == "two-sided":
        right = _edges[1] if _edges else right_edges(cache, left)
        edges = [a | b for a, b in zip(left, right)]
    else:
        raise ValueError(f"unknown cell kind {kind!r}")
    certified = cache.ball.radius - margin
    if certified < 0:
        raise ValueError(f"margin {margin} exceeds radius {cache.ball.radius}")
    return Partition(kind, cache.ball, _scc(edges), certified)


# ---------------------------------------------------------------------------
# strip construction


def _closure(ball: Ball, seeds: Iterable[int]) -> set[int]:
    """Everything reachable from seeds by length-increasing s*w or w*s."""
    seen = set(seeds)
    todo = deque(seen)
    length = ball.length
    while todo:
        i = todo.popleft()
        for s in range(3):
            for tbl in (ball.lmul, ball.rmul):
                j = tbl[s][i]
                if j >= 0 and length[j] > length[i] and j not in seen:
                    seen.add(j)
                    todo.append(j)
    return seen


def strip_construction(table: ZoneTable, ball: Ball, swap_pairs: bool = False) -> dict[str, frozenset[int]]:
    """Partition the ball by processing parabolic classes highest a-value first.

    Each class c yields the cell ``c~``: all reduced products ``x u y`` with
    u in c, minus elements already claimed by earlier classes.
    """
    claimed: set[int] = set()
    out: dict[str, frozenset[int]] = {}
    for cname in table.flat_order(swap_pairs):
        seeds = [ball.idx(u) for u in table.classes[cname].elements if u.length <= ball.radius]
        block = _closure(ball, seeds) - claimed
        claimed |= block
        out["c~" + cname[1:]] = frozenset(block)
    missing = set(range(len(ball))) - claimed
    if missing:
        raise AssertionError(f"strip construction left {len(missing)} elements unassigned")
    return out


def strip_left_cells(block: frozenset[int], ball: Ball) -> list[frozenset[int]]:
    """Components of a strip cell under w ~ s*w (staying inside the cell)."""
    parent = {i: i for i in block}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in block:
        for s in range(3):
            j = ball.lmul[s][i]
            if j >= 0 and j in parent:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    comps: dict[int, set[int]] = {}
    for i in block:
        comps.setdefault(find(i), set()).add(i)
    return sorted((frozenset(c) for c in comps.values()), key=min)


def compare_partitions(a: Iterable[frozenset[int]], b: Iterable[frozenset[int]], ball: Ball, certified: int) -> list[str]:
    """Differences between two partitions on the certified interior."""
    cut = lambda blocks: {frozenset(i for i in x if ball.length[i] <= certified) for x in blocks} - {frozenset()}
    A, B = cut(a), cut(b)
    diffs = []
    for x in sorted(A - B, key=min):
        diffs.append("only in first: {" + ", ".join(str(ball.elements[i]) for i in sorted(x)[:6]) + (", ...}" if len(x) > 6 else "}"))
    for x in sorted(B - A, key=min):
        diffs.append("only in second: {" + ", ".join(str(ball.elements[i]) for i in sorted(x)[:6]) + (", ...}" if len(x) > 6 else "}"))
    return diffs


def descriptor_check(table: ZoneTable, strips: dict[str, frozenset[int]], ball: Ball, certified: int) -> list[CheckResult]:
    """Each descriptor enumerates exactly its strip cell on the certified interior."""
    out = []
    for cname, desc in table.descriptors.items():
        want = {ball.idx(x) for x in enumerate_cell(desc, certified).values()}
        have = {i for i in strips[desc.name] if ball.length[i] <= certified}
        ok = want == have
        wit = None
        if not ok:
            extra = sorted(want - have)[:3]
            miss = sorted(have - want)[:3]
            wit = f"descriptor-only {[str(ball.elements[i]) for i in extra]}, strip-only {[str(ball.elements[i]) for i in miss]}"
        out.append(CheckResult(f"descriptor {desc.name}", ok, wit))
    return out


# ---------------------------------------------------------------------------
# parabolic classes and Lusztig's property


def parabolic_cells(cache: KLCache, subset: tuple[int, ...]) -> list[frozenset[int]]:
    """Two-sided cells of the finite parabolic W_I, as ball indices."""
    ball = cache.ball
    grp = ball.group
    members = [ball.idx(u) for u in grp.parabolic(subset)]
    if max(ball.length[i] for i in members) >= ball.radius:
        raise ValueError(f"radius {ball.radius} too small for W_{subset}")
    pos = {i: k for k, i in enumerate(members)}
    edges: list[set[int]] = [set() for _ in members]
    inv = ball.inv
    for i in members:
        for s in subset:
            for z in cache.row(s, i):
                if z != i:
                    edges[pos[i]].add(pos[z])
    # right edges by inversion
    right: list[set[int]] = [set() for _ in members]
    for y, zs in enumerate(edges):
        for z in zs:
            right[pos[inv[members[y]]]].add(pos[inv[members[z]]])
    both = [a | b for a, b in zip(edges, right)]
    return [frozenset(members[k] for k in blk) for blk in _scc(both)]


def parabolic_class_check(cache: KLCache, table: ZoneTable) -> CheckResult:
    """Join the two-sided cells of W12, W23, W13 and compare with the class table."""
    ball = cache.ball
    parent: dict[int, int] = {}

    def find(i):
        parent.setdefault(i, i)
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for subset in ((0, 1), (1, 2), (0, 2)):
        for blk in parabolic_cells(cache, subset):
            it = iter(blk)
            first = next(it)
            find(first)
            for j in it:
                ri, rj = find(first), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, set[int]] = {}
    for i in list(parent):
        groups.setdefault(find(i), set()).add(i)
    joined = {frozenset(g) for g in groups.values()}
    expected = {frozenset(ball.idx(u) for u in c.elements) for c in table.classes.values()}
    if joined == expected:
        return CheckResult("parabolic classes", True, detail={"classes": len(joined)})
    bad = sorted(joined ^ expected, key=min)[0]
    wit = "{" + ", ".join(str(ball.elements[i]) for i in sorted(bad)) + "}"
    return CheckResult("parabolic classes", False, f"mismatched class {wit}")


def lusztig_star_check(cache: KLCache, margin: int, partitions: Optional[tuple[Partition, Partition]] = None) -> CheckResult:
    """``x <=_L y`` and ``x ~_LR y`` imply ``x ~_L y`` on the certified interior."""
    left = left_edges(cache)
    if partitions is None:
        right = right_edges(cache, left)
        lp = cell_partition(cache, "left", margin, _edges=(left, right))
        tp = cell_partition(cache, "two-sided", margin, _edges=(left, right))
    else:
        lp, tp = partitions
    ball = cache.ball
    cut = ball.radius - margin
    checked = 0
    for y in range(len(ball)):
        if ball.length[y] > cut:
            continue
        # everything reachable from y in the left graph is <=_L y
        seen = {y}
        todo = [y]
        while todo:
            u = todo.pop()
            for z in left[u]:
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        for x in seen:
            if ball.length[x] > cut or x == y:
                continue
            if tp.same(x, y):
                checked += 1
                if not lp.same(x, y):
                    return CheckResult(
                        "lusztig star", False,
                        f"{ball.elements[x]} <=_L {ball.elements[y]} in one two-sided cell but different left cells",
                    )
    return CheckResult("lusztig star", True, detail={"pairs": checked})
