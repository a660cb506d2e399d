import pytest

from affcell.celldata import (
    AValueForm,
    DescriptorDataError,
    NonGenericError,
    ZoneError,
    classify_case,
    descriptors_for,
    enumerate_cell,
    eval_set,
    genericity_check,
    sample_weights,
    with_overrides,
    zones,
)
from affcell.coxeter import CoxeterSystem, group

G, B = group("g2"), group("b2")
names = lambda xs: {str(x).replace("*", "") for x in xs}


def test_set_language():
    assert names(eval_set(B, "hat(s1s3)")) == {"e", "s1", "s3", "s1s3"}
    assert names(eval_set(B, "hat(s1s2s3)")) == {"e", "s1", "s1s2", "s1s2s3"}
    c5 = eval_set(G, "W23 - {w23, e}")
    assert names(c5) == {"s2", "s3", "s2s3", "s3s2"}
    assert len(eval_set(G, "W12")) == 12
    assert names(eval_set(B, "{s2} u {s3}")) == {"s2", "s3"}


def test_a_value_forms():
    f = AValueForm.parse("2a-b")
    assert f.evaluate((5, 2, 2)) == 8
    assert AValueForm.parse("2b+2c").evaluate((7, 2, 1)) == 6
    assert AValueForm.parse("0").evaluate((1, 1, 1)) == 0


def test_descriptor_examples():
    t = descriptors_for("g2", "r>2")
    c2 = t.descriptors["c2"]
    assert str(c2.w_gamma) == "s1*s3"
    assert [str(g) for g in c2.tau.gens] == ["s1*s3*s2"]
    assert names(c2.z_set) == names(eval_set(G, "hat(s2s1s2s3)")) | {"s2s3"}
    c3 = t.descriptors["c3"]
    assert c3.tau.variant == "order2" and names(c3.z_set) == {"e", "s2", "s2s3"}
    for z in zones("g2"):
        c0 = descriptors_for("g2", z).descriptors["c0"]
        assert c0.w_gamma == G.longest_element((0, 1))
        assert list(c0.tau.gens) == [G.parse("s2s1s2s1s2s3"), G.parse("s1s2s1s2s3s1s2s1s2s3")]
        assert len(c0.z_set) == 12
    for z in zones("b2"):
        c0 = descriptors_for("b2", z).descriptors["c0"]
        assert str(c0.w_gamma).replace("*", "") == "s1s2s1s2"
        assert set(c0.tau.gens) == {B.parse("s2s1s2s3"), B.parse("s1s2s1s3s2s3")}
        assert names(c0.z_set) == names(eval_set(B, "hat(s3s2s1s3s2s3)"))


def test_derived_lowest_z_rule_reproduces_b2():
    """The rule used to derive the G2 lowest-cell Z gives the printed B2 set."""
    from affcell.celldata import derive_lowest_z

    c0 = descriptors_for("b2", "A1").descriptors["c0"]
    assert set(derive_lowest_z(B, c0.w_gamma, c0.tau.gens)) == set(c0.z_set)


def test_descriptor_invariants():
    for kind in ("g2", "b2"):
        grp = group(kind)
        for z in zones(kind):
            for d in descriptors_for(kind, z).descriptors.values():
                assert d.z_set[0] == grp.identity()
                assert len({s for s in d.w_gamma.word}) < 3
                case, _, _ = classify_case(d.w_gamma)
                if case == "s-times-longest":
                    assert grp.multiply(d.w_gamma, d.w_gamma) == grp.identity()
                for t in d.tau.gens:
                    # tau w = w tau^-1
                    assert grp.multiply(t, d.w_gamma) == grp.multiply(d.w_gamma, t.inverse())


def test_case_classification():
    assert classify_case(G.parse("s1s2s1s2s1s2"))[0] == "longest-element"
    assert classify_case(G.parse("s1s3"))[0] == "longest-element"
    assert classify_case(G.parse("s1s2s1s2s1"))[0] == "s-times-longest"
    assert classify_case(B.parse("s1s2s1"))[0] == "s-times-longest"
    assert classify_case(B.parse("s2s3s2"))[0] == "s-times-longest"


def test_genericity():
    assert genericity_check(CoxeterSystem("g2", (5, 2))) == "r>2"
    assert genericity_check(CoxeterSystem("g2", (2, 5))) == "r<1"
    for w in [(3, 2), (2, 2), (4, 2)]:
        with pytest.raises(NonGenericError):
            genericity_check(CoxeterSystem("g2", w))
    with pytest.raises(ZoneError):
        genericity_check(CoxeterSystem("g2", (5, 2)), "r<1")
    with pytest.raises(ZoneError):
        genericity_check(CoxeterSystem("b2", (7, 2, 1)))
    with pytest.raises(ZoneError, match="zone A1"):
        genericity_check(CoxeterSystem("b2", (7, 2, 1)), "C3")
    # (1,5,1): a(c0) = a(c4) ties, and no zone contains the point strictly
    for w in [(1, 5, 1), (1, 1, 1)]:
        with pytest.raises(NonGenericError):
            genericity_check(CoxeterSystem("b2", w), "A1")
    with pytest.raises(ZoneError):
        descriptors_for("b2", "Z9")


@pytest.mark.parametrize("kind", ["g2", "b2"])
def test_sample_weights_are_strictly_inside(kind):
    for z in zones(kind):
        w = sample_weights(kind, z)
        S = CoxeterSystem(kind, w)
        assert genericity_check(S, z) == z
        t = descriptors_for(kind, z)
        vals = [t.a_value(n, S) for n in t.classes]
        assert len(set(vals)) == len(vals)


def test_enumerate_cell():
    t = descriptors_for("g2", "r>2")
    cells = enumerate_cell(t.descriptors["c3"], 20)
    assert len(cells) == 18
    assert cells[(0, (0,), 0)] == G.gen(0)
    assert [str(x) for x in enumerate_cell(t.descriptors["c4"], 20).values()] == ["s2*s3*s2"]
    c0 = enumerate_cell(t.descriptors["c0"], 12)
    assert c0[(0, (0, 0), 0)] == G.longest_element((0, 1))


def test_enumerate_cell_rejects_bad_data():
    import dataclasses

    d = descriptors_for("g2", "r>2").descriptors["c3"]
    bad = dataclasses.replace(d, z_set=d.z_set + (G.parse("s3"),))
    with pytest.raises(DescriptorDataError):
        enumerate_cell(bad, 12)


def test_overrides():
    t = descriptors_for("g2", "r>2")
    t2 = with_overrides(t, {"c4": "{s2s3s2, s3}"})
    assert names(t2.classes["c4"].elements) == {"s2s3s2", "s3"}
    assert t.classes["c4"].elements != t2.classes["c4"].elements
    with pytest.raises(ZoneError):
        with_overrides(t, {"c9": "{e}"})
    with pytest.raises(ZoneError):
        with_overrides(t, order=["c0", "c1"])
