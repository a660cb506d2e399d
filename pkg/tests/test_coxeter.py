import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from affcell.coxeter import CoxeterSystem, format_word, group, parse_word

from oracles import normal_form, subword_products

G = group("g2")
B = group("b2")
e = G.identity()


def test_parse_format():
    assert parse_word("s1*s2*s1") == (0, 1, 0)
    assert parse_word("s1s2s3") == (0, 1, 2)
    assert parse_word("e") == ()
    assert format_word((0, 2)) == "s1*s3"
    with pytest.raises(ValueError):
        parse_word("s4")


def test_mul_gen_examples():
    assert G.mul_gen(e, 0, "left") == (G.gen(0), True)
    assert G.mul_gen(G.gen(0), 0, "left") == (e, False)
    w, up = G.mul_gen(G.parse("s1s2s1s2s1"), 1, "right")
    assert up and w == G.longest_element((0, 1)) and w.length == 6
    assert w.word == (0, 1, 0, 1, 0, 1)


def test_multiply_inverse_examples():
    x = G.parse("s1s2s3s1")
    assert G.multiply(x, e) == x
    assert G.multiply(x, x.inverse()) == e
    assert B.multiply(B.parse("s2s1"), B.parse("s1s2")) == B.identity()
    assert G.parse("s1s2").inverse() == G.parse("s2s1")
    assert e.inverse() == e
    assert G.parse("s2s3s2").inverse() == G.parse("s2s3s2")


def test_bruhat_examples():
    assert G.bruhat_leq(e, G.parse("s1s2s3s2"))
    assert not G.bruhat_leq(G.gen(0), G.parse("s2s3"))


@pytest.mark.parametrize("kind", ["g2", "b2"])
def test_bruhat_matches_subword_oracle(kind):
    grp = group(kind)
    ball = grp.ball(6)
    for w in ball:
        below = subword_products(kind, w.word)
        for x in ball:
            assert grp.bruhat_leq(x, w) == (x.word in below), (x, w)


@pytest.mark.parametrize("kind", ["g2", "b2"])
def test_normal_form_matches_rewriting(kind):
    grp = group(kind)
    rng = random.Random(7)
    for _ in range(150):
        n = rng.randint(0, 12)
        word = tuple(rng.randrange(3) for _ in range(n))
        assert grp.normal_form(word) == normal_form(kind, word), word


def test_ball_sizes():
    assert [str(x) for x in G.ball(0)] == ["e"]
    assert sorted(str(x) for x in G.ball(1)) == ["e", "s1", "s2", "s3"]
    brute = {normal_form("g2", w) for n in range(7) for w in itertools.product(range(3), repeat=n)}
    assert len(G.ball(6)) == len(brute)
    assert {x.word for x in G.ball(6)} == brute


def test_ball_order_and_tables():
    ball = B.ball(8)
    keys = [(len(w), w) for w in ball.words]
    assert keys == sorted(keys)
    for i, x in enumerate(ball.elements):
        for s in range(3):
            sx, _ = B.mul_gen(x, s, "left")
            j = ball.lmul[s][i]
            assert (j < 0) == (sx.length > 8)
            if j >= 0:
                assert ball.elements[j] == sx
        assert ball.elements[ball.inv[i]] == x.inverse()


def test_coset_reps_and_decomposition():
    for grp in (G, B):
        for sub in [(0, 1), (1, 2), (0, 2)]:
            inX = grp.coset_reps(sub, "left")
            assert inX(grp.identity())
            assert not any(inX(grp.gen(s)) for s in sub)
            W = set(grp.parabolic(sub))
            for w in grp.ball(8):
                x, u = grp.coset_decomposition(w, sub)
                assert inX(x) and u in W
                assert grp.multiply(x, u) == w and x.length + u.length == w.length
                # uniqueness: no other u' in W with w u'^-1 a reduced left coset rep
                others = [u2 for u2 in W if u2 != u and inX(grp.multiply(w, u2.inverse()))]
                assert not others


def test_prefix_set():
    assert {str(x) for x in B.prefix_set(B.parse("s1s3"))} == {"e", "s1", "s3", "s1*s3"}
    assert {str(x) for x in B.prefix_set(B.parse("s1s2s3"))} == {"e", "s1", "s1*s2", "s1*s2*s3"}
    assert B.prefix_set(B.identity()) == {B.identity()}


def test_longest_elements():
    w = G.longest_element((0, 1))
    assert w.length == 6 and len(G.parabolic((0, 1))) == 12
    assert str(G.longest_element((0, 2))) == "s1*s3"
    w = B.longest_element((1, 2))
    assert w.length == 4 and len(B.parabolic((1, 2))) == 8
    with pytest.raises(ValueError):
        G.longest_element((0, 1, 2))


def test_weights():
    S = CoxeterSystem("g2", (5, 2))
    assert S.L == (5, 2, 2)
    assert S.weight(G.parse("s1s2s3")) == 9
    T = CoxeterSystem("b2", (7, 2, 1))
    assert T.L == (7, 2, 1)
    with pytest.raises(ValueError):
        CoxeterSystem("g2", (0, 2))


words = st.lists(st.integers(0, 2), max_size=14).map(tuple)


@settings(max_examples=200)
@given(words, words)
def test_group_laws(a, b):
    x, y = G.element(a), G.element(b)
    assert G.multiply(x, y).inverse() == G.multiply(y.inverse(), x.inverse())
    assert G.multiply(x, x.inverse()) == e
    assert G.element(a + b) == G.multiply(x, y)
    # normal form is reduced and lex-least among its braid moves
    assert len(x.word) == x.length
    assert G.normal_form(x.word) == x.word
