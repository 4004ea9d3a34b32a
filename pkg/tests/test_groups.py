import random

import pytest

from treeperm.catalog import builders
from treeperm.groups import (
    AbelianBase,
    Lamplighter,
    LabelOracle,
    ProductGroup,
    SplitGroup,
    TRIVIAL_BASE,
    ZZ,
    trivial_labels,
)


def random_element(G, rng, length=6):
    gens = list(G.generators.values())
    out = G.identity
    for _ in range(rng.randint(0, length)):
        g = rng.choice(gens)
        out = G.mul(out, g if rng.random() < 0.5 else G.inv(g))
    return out


def _groups():
    zz = Lamplighter(0)
    c2 = Lamplighter(2, "a", "x")
    top = ProductGroup(zz, 2)
    split = SplitGroup(top, (trivial_labels(zz),) * 2, ZZ)
    c2top = ProductGroup(c2, 2)
    first, second = builders.c2wrz_labels()
    labelled = SplitGroup(c2top, (first, second), AbelianBase.of(0, (2,)))
    return {"zwrz": zz, "c2wrz": c2, "zwrz^2": top, "split": split, "labelled": labelled}


GROUPS = _groups()


@pytest.mark.parametrize("name", list(GROUPS))
def test_group_axioms(name):
    G = GROUPS[name]
    rng = random.Random(name)
    for _ in range(60):
        a, b, c = (random_element(G, rng) for _ in range(3))
        assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
        assert G.mul(a, G.inv(a)) == G.identity == G.mul(G.inv(a), a)
        assert G.mul(a, G.identity) == a
        assert G.normal_form(a) == a


def test_lamplighter_conventions():
    G = Lamplighter(0)
    y, x = G.gen("y"), G.gen("x")
    # the lamp at n is y^(x^n) = x^-n y x^n
    assert G.conj(y, G.power(x, 3)) == G.element({3: 1})
    assert G.comm(y, x) == G.element({0: -1, 1: 1})
    assert G.power(x, -2) == ((), -2)
    assert G.lamp_sum(G.mul(y, G.conj(y, x))) == 2
    c2 = Lamplighter(2, "a", "x")
    a = c2.gen("a")
    assert c2.mul(a, a) == c2.identity
    assert c2.comm(a, c2.gen("x")) == c2.element({0: 1, 1: 1})


def test_abelian_base():
    b = AbelianBase.of(2, (2, 3))
    assert b.rank == 2 and b.torsion == (2, 3) and b.order is None
    assert b.add((1, 1, 1, 2), (0, -3, 1, 2)) == (1, -2, 0, 1)
    f = AbelianBase.of(0, (2, 3))
    assert f.order == 6 and len(f.elements()) == 6 and f.elements()[0] == (0, 0)
    assert f.elements()[1] == (1, 0)
    assert TRIVIAL_BASE.elements() == [()]
    assert (ZZ + f).moduli == (0, 2, 3)
    with pytest.raises(ValueError):
        AbelianBase.of(0, (1,))
    with pytest.raises(ValueError):
        ZZ.elements()


def test_split_group_conjugation_moves_labels():
    S = GROUPS["split"]
    lamp, x1 = S.gen("a"), S.gen("x1")
    moved = S.conj(lamp, x1)
    G = S.top.factor
    assert moved.coords == (((G.gen("x"), G.identity), (1,)),)
    assert S.coord_sum(S.mul(lamp, moved)) == (2,)


def test_labelled_cosets_are_canonical():
    first, second = builders.c2wrz_labels()
    G = builders.c2wrz_group()
    a, x = G.gen("a"), G.gen("x")
    rng = random.Random(3)
    for _ in range(50):
        g = random_element(G, rng)
        for lab in (first, second):
            for h in lab.generators:
                assert lab.label(G.mul(h, g)) == lab.label(g)
                assert lab.label(G.mul(G.inv(h), g)) == lab.label(g)
    assert first.label(a) != first.label(G.identity)
    assert second.label(G.prod(a, x, a)) == second.label(G.identity)


def test_label_oracle_repr():
    assert "trivial" in repr(trivial_labels(GROUPS["zwrz"]))
    assert isinstance(LabelOracle(lambda g: g), LabelOracle)
