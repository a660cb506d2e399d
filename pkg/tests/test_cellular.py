import pytest
from hypothesis import given, settings, strategies as st

from affcell.cellular import (
    BaseRing,
    BElement,
    CellAlgebraElement,
    CellContext,
    FormMatrix,
    a_mult,
    check_I1_I5,
    finite_cells_g2,
    g2_finite_matrix_expected,
    simple_module_report,
    verify_theorem,
)
from affcell.cells import strip_construction
from affcell.hecke import HeckeElement, TruncationError
from affcell.laurent import LaurentPoly

from conftest import kl_cache, table_for

v = LaurentPoly.monomial


def ctx_for(kind, weights, cname, radius, zone=None):
    cache = kl_cache(kind, weights, radius)
    table = table_for(kind, weights, zone)
    return CellContext(cache, table, cname, strip_construction(table, cache.ball))


# -- base ring and the algebra A(V, B, phi) -----------------------------------


def test_base_rings():
    q = BaseRing("quad")
    t = BElement.monomial(q, (1,))
    assert t * t == BElement.monomial(q, (0,))
    p2 = BaseRing("poly2")
    t1, t2 = BElement.monomial(p2, (1, 0)), BElement.monomial(p2, (0, 1))
    assert (t1 * t2).degree() == 2
    assert (t1 + t2).evaluate_t((2, 3)) == 5
    assert str(BElement.monomial(q, (1,), v(2) + 1)) == "(1*v^2 + 1*v^0)*t"
    assert BElement(q, {(0,): 3}) - BElement(q, {(2,): 3}) == BElement.zero(q)
    with pytest.raises(ValueError):
        q.normalize((1, 1))


def test_a_mult_units_and_zero():
    ring = BaseRing("scalar")
    f = FormMatrix(ring, [[BElement(ring, {(): v(1) + v(-1)}), BElement.zero(ring)],
                          [BElement.zero(ring), BElement(ring, {(): 1})]])
    x = CellAlgebraElement.basis(ring, 2, 0, (), 0)
    y = CellAlgebraElement.basis(ring, 2, 0, (), 1)
    assert a_mult(x, y, f) == CellAlgebraElement(ring, 2, {(0, (), 1): v(1) + v(-1)})
    z = CellAlgebraElement.basis(ring, 2, 1, (), 1)
    assert a_mult(x, z, f) == CellAlgebraElement(ring, 2, {})
    assert a_mult(z, z, f) == z
    with pytest.raises(IndexError):
        CellAlgebraElement.basis(ring, 2, 2, (), 0)


rings = st.sampled_from(["poly2", "poly1", "quad", "scalar"]).map(BaseRing)


def _belts(ring):
    mon = st.tuples(*[st.integers(0, 2)] * ring.nvars)
    coeff = st.dictionaries(st.integers(-3, 3), st.integers(-2, 2), max_size=2).map(LaurentPoly.from_dict)
    return st.dictionaries(mon, coeff, max_size=2).map(lambda d: BElement(ring, d))


@st.composite
def algebra_triples(draw):
    ring = draw(rings)
    m = draw(st.integers(1, 3))
    form = FormMatrix(ring, [[draw(_belts(ring)) for _ in range(m)] for _ in range(m)])

    def elt():
        terms = {}
        for _ in range(draw(st.integers(0, 3))):
            i, j = draw(st.integers(0, m - 1)), draw(st.integers(0, m - 1))
            b = draw(_belts(ring))
            for mon, p in b.terms.items():
                terms[(i, mon, j)] = p
        return CellAlgebraElement(ring, m, terms)

    return form, elt(), elt(), elt()


@settings(max_examples=60, deadline=None)
@given(algebra_triples())
def test_a_mult_associative(data):
    form, x, y, z = data
    assert a_mult(a_mult(x, y, form), z, form) == a_mult(x, a_mult(y, z, form), form)


# -- P elements and the induction conditions ----------------------------------


def test_p_of_identity():
    ctx = ctx_for("g2", (5, 2), "c2", 12)
    G = ctx.ball.group
    assert ctx.p_element(G.identity()) == HeckeElement.T(ctx.cache.system, G.identity())
    assert ctx.phi_basis(0, ctx.ring.one(), 0) == {ctx.w_idx: {0: 1}}
    tb = ctx.m_tau_basis(ctx.w.length)
    assert tb == {ctx.ring.one(): {ctx.w_idx: {0: 1}}}


@pytest.mark.parametrize("kind,w,zone", [("g2", (5, 2), None), ("b2", (7, 2, 1), "A1")])
def test_case2_base_identity(kind, w, zone):
    """T_s C_w = C_{sw} - v^{-L(s)} C_w for the s-times-longest representative."""
    ctx = ctx_for(kind, w, "c1", 12, zone)
    cache, G = ctx.cache, ctx.ball.group
    assert ctx.case == "s-times-longest"
    assert G.mul_gen(ctx.w, ctx.s, "left")[0] == G.longest_element(ctx.parabolic)
    for t in range(3):
        sw, up = G.mul_gen(ctx.w, t, "left")
        if up:
            lhs = cache.c_element(ctx.w).mult_gen_left(t)
            assert lhs == cache.c_element(sw) - cache.c_element(ctx.w).scale(v(-cache.system.L[t]))


@pytest.mark.parametrize("kind,w,zone,cname", [
    ("g2", (5, 2), None, "c1"),
    ("b2", (7, 2, 1), "A1", "c1"),
])
def test_I1_I5_case2(kind, w, zone, cname):
    ctx = ctx_for(kind, w, cname, 14, zone)
    assert ctx.case == "s-times-longest"
    res = check_I1_I5(ctx)
    assert {r.name for r in res} >= {"I1", "I5"}
    assert all(r.passed for r in res), [(r.name, r.witness) for r in res if not r.passed]


def test_quad_diagonal_entry():
    ctx = ctx_for("g2", (5, 2), "c3", 12)
    a = ctx.cache.system.L[0]
    phi11 = ctx.phi_entry(0, 0)
    assert phi11.coeff((0,)) == v(a) + v(-a)


# -- the theorem --------------------------------------------------------------


def test_verify_quad_cell():
    rep = verify_theorem(ctx_for("g2", (5, 2), "c3", 14), sample_budget=100)
    names = {c.name: c.status for c in rep.checks}
    assert names["quad relation"] == "pass"
    assert rep.passed and not rep.inconclusive
    assert rep.to_json()["tau_degree_bound"] == 1


def test_verify_b2_lowest_cell():
    rep = verify_theorem(ctx_for("b2", (7, 2, 1), "c0", 14, "A1"), sample_budget=60)
    status = {c.name: c.status for c in rep.checks}
    assert status["commutation"] == "pass"
    assert rep.passed, [(c.name, c.witness) for c in rep.checks if not c.passed]


def test_truncation_is_inconclusive_not_failure():
    rep = verify_theorem(ctx_for("b2", (7, 2, 1), "c0", 12, "A1"), sample_budget=30)
    status = {c.name: c.status for c in rep.checks}
    assert status["commutation"] == "inconclusive"
    assert rep.passed and rep.inconclusive == ["commutation"]


def test_finite_cell_a_less_than_b():
    a, b = 4, 7
    cache = kl_cache("g2", (a, b), 14)
    rep = finite_cells_g2(cache, table_for("g2", (a, b)))
    assert rep.passed, [(c.name, c.witness) for c in rep.checks if not c.passed]
    form = rep.info["_form"]
    # under the matching labelling the printed (1,3) entry is 1 and (2,3) is 0
    (perm,) = [[int(g[-1]) - 1 for g in lab] for lab in rep.info["matching_labellings"]]
    exp = g2_finite_matrix_expected(a, b)
    assert exp[0][2] == BElement(form.ring, {(0,): 1}) and not exp[1][2]
    assert form.entries[perm[0]][perm[2]] == exp[0][2]
    assert not form.entries[perm[1]][perm[2]]
    rpt = simple_module_report(form.ring, form)
    assert rpt["parameters"] == "t = +1 or t = -1"
    assert all(p["form_nonzero"] for p in rpt["points"])


def test_finite_cell_a_greater_than_b():
    cache = kl_cache("g2", (5, 2), 14)
    rep = finite_cells_g2(cache, table_for("g2", (5, 2)))
    assert rep.passed
    form = rep.info["_form"]
    # a_{1,1} is the coefficient of C_w in C_w^2 for w the first basis element
    w = cache.ball.group.parse(rep.info["left_cells"][0][0])
    sq = cache.c_mult(w, w)
    assert form.entries[0][0].coeff(()) == sq[w]
    assert simple_module_report(form.ring, form)["parameters"] == "a single point"


def test_finite_cell_needs_radius():
    with pytest.raises(TruncationError):
        finite_cells_g2(kl_cache("g2", (5, 2), 3), table_for("g2", (5, 2)))
