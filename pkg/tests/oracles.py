"""Independent brute-force oracles (no use of the package internals).

Words are tuples over 0, 1, 2.  Equality of words is decided by Tits'
solution of the word problem: braid moves plus deletion of ``ss``.
"""

from itertools import combinations

COXETER = {
    "g2": {(0, 1): 6, (1, 2): 3, (0, 2): 2},
    "b2": {(0, 1): 4, (1, 2): 4, (0, 2): 2},
}


def _m(kind, s, t):
    return COXETER[kind][(min(s, t), max(s, t))]


def braid_class(kind, word):
    """All words reachable from ``word`` by braid moves."""
    seen = {word}
    todo = [word]
    while todo:
        w = todo.pop()
        n = len(w)
        for i in range(n):
            for j in range(i + 2, n + 1):
                seg = w[i:j]
                s, t = seg[0], seg[1] if len(seg) > 1 else None
                if t is None or s == t:
                    continue
                m = _m(kind, s, t)
                if j - i != m:
                    continue
                alt = tuple(s if k % 2 == 0 else t for k in range(m))
                if seg != alt:
                    continue
                new = w[:i] + tuple(t if k % 2 == 0 else s for k in range(m)) + w[j:]
                if new not in seen:
                    seen.add(new)
                    todo.append(new)
    return seen


def reduce_word(kind, word):
    """A reduced word for the same element."""
    word = tuple(word)
    while True:
        cls = braid_class(kind, word)
        hit = None
        for w in cls:
            for i in range(len(w) - 1):
                if w[i] == w[i + 1]:
                    hit = w[:i] + w[i + 2:]
                    break
            if hit is not None:
                break
        if hit is None:
            return word
        word = hit


def normal_form(kind, word):
    """Lexicographically least reduced word."""
    return min(braid_class(kind, reduce_word(kind, word)))


def subword_products(kind, word):
    """{x : x <= w} via the subword property."""
    out = set()
    n = len(word)
    for k in range(n + 1):
        for idx in combinations(range(n), k):
            out.add(normal_form(kind, tuple(word[i] for i in idx)))
    return out
