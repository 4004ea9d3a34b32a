import pytest
from hypothesis import given, strategies as st

from treeperm.perm import Perm, compose_all


def perms(m):
    return st.permutations(list(range(m))).map(Perm)


def test_cycles_round_trip():
    p = Perm.from_cycles("(1 8)(2 7)(3 6)(4 5)", 10)
    assert p(1) == 8 and p(9) == 9
    assert p.to_cycles() == "(1 8)(2 7)(3 6)(4 5)"
    assert Perm.from_cycles("id", 3).is_identity()
    assert Perm.from_cycles("()", 3).to_cycles() == "id"


@pytest.mark.parametrize("bad", ["(1 4)", "(1 2)(2 3)", "(1 2", "1 2"])
def test_bad_cycles(bad):
    with pytest.raises(ValueError):
        Perm.from_cycles(bad, 3)


def test_product_is_left_to_right():
    a = Perm.from_cycles("(1 2)", 3)
    b = Perm.from_cycles("(2 3)", 3)
    assert (a * b)(1) == b(a(1)) == 3


@given(perms(5), perms(5), perms(5))
def test_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()
    assert Perm.from_cycles(a.to_cycles(), 5) == a
    assert compose_all([a, b, c], 5) == a * b * c


def test_from_images_is_one_based():
    assert Perm.from_images([2, 1, 3]).to_cycles() == "(1 2)"
    with pytest.raises(ValueError):
        Perm((0, 0))
