import itertools
import random

import pytest
from hypothesis import given, strategies as st

from helpers import all_words, odometer, random_word, zwrz3
from treeperm import catalog
from treeperm.automata import (
    Exceeded,
    MachineFormatError,
    MealyMachine,
    act,
    bisimilar,
    compose,
    equal,
    from_recursion,
    identity,
    inverse,
    is_trivial,
    machine_of,
    minimize,
    order_bounded,
    parse_machine,
    portrait,
    section,
    states,
)
from treeperm.perm import Perm

GAMMA, ALPHA = zwrz3()


def recursion(a):
    """(activity, sections) with sections compared through ``equal``."""
    return a.activity(), a.sections()


def same(a, b):
    return equal(a, b) is True


# -- act ---------------------------------------------------------------------

def test_act_examples():
    assert act(ALPHA, (1, 2)) == (2, 2)
    assert act(identity(3), (3, 1, 2)) == (3, 1, 2)
    assert act(ALPHA, (2, 1)) == (1, 2)
    assert act(ALPHA, ()) == ()


def test_act_rejects_bad_letters():
    with pytest.raises(ValueError):
        act(ALPHA, (4,))
    with pytest.raises(ValueError):
        act(ALPHA, (0, 1))


def test_act_prefix_compatible():
    for w in all_words(3, 4):
        img = act(GAMMA * ALPHA, w)
        for k in range(len(w)):
            assert act(GAMMA * ALPHA, w[:k]) == img[:k]


# -- section -----------------------------------------------------------------

def test_section_examples():
    assert same(section(GAMMA, (3,)), ALPHA)
    assert same(section(GAMMA, (1, 1)), GAMMA)
    assert is_trivial(section(identity(3), (2, 3, 1)))
    assert same(section(GAMMA, ()), GAMMA)


def test_section_composes():
    for u in all_words(3, 2):
        for v in all_words(3, 2):
            assert section(section(GAMMA * ALPHA, u), v) == section(GAMMA * ALPHA, u + v)


# -- compose and inverse -----------------------------------------------------

def test_square_of_alpha():
    a2 = compose(ALPHA, ALPHA)
    assert a2.activity().is_identity()
    s = a2.sections()
    assert same(s[0], ALPHA) and same(s[1], ALPHA) and is_trivial(s[2])
    assert same(compose(GAMMA, identity(3)), GAMMA)


def test_gamma_alpha_against_sequential_action():
    ga = GAMMA * ALPHA
    for w in itertools.product((1, 2, 3), repeat=2):
        assert ga.act(w) == ALPHA.act(GAMMA.act(w))


def test_inverse_examples():
    inv = inverse(ALPHA)
    assert inv.activity() == Perm.from_cycles("(1 2)", 3)
    s = inv.sections()
    assert same(s[0], ALPHA.inverse()) and is_trivial(s[1]) and is_trivial(s[2])
    assert is_trivial(inverse(identity(3)))
    t = odometer()
    ti = inverse(t)
    assert ti.activity() == Perm.from_cycles("(1 2)", 2)
    assert same(ti.section((1,)), t.inverse()) and is_trivial(ti.section((2,)))


def test_degree_mismatch():
    with pytest.raises(ValueError):
        compose(ALPHA, odometer())
    with pytest.raises(ValueError):
        equal(ALPHA, odometer())


# -- states, triviality, equality -------------------------------------------

def test_state_closures():
    assert len(states(ALPHA)) == 2
    assert len(states(identity(3))) == 1
    assert len(states(GAMMA)) == 3
    assert len(states(odometer())) == 2


def test_states_limit_is_a_value():
    big = GAMMA * ALPHA * GAMMA * ALPHA.inverse()
    res = states(big, 2)
    assert isinstance(res, Exceeded) and res == Exceeded(7)
    with pytest.raises(TypeError):
        bool(res)


def test_triviality_examples():
    assert is_trivial(GAMMA.inverse() * GAMMA.conj(ALPHA ** 2).inverse() * GAMMA * GAMMA.conj(ALPHA ** 2))
    assert is_trivial(GAMMA) is False
    assert section(GAMMA, (3,)).activity() != Perm.identity(3)
    assert is_trivial(identity(3)) is True


def test_equal_examples():
    alt = from_recursion(3, {"a": (["e", "a", "e"], "(1 2)"), "b": (["a", "a", "e"], "id")})
    # b is (alpha, alpha, e), built from an independent copy of alpha
    assert equal(ALPHA * ALPHA, alt.element("b")) is True
    assert equal(GAMMA, ALPHA) is False
    assert equal(GAMMA, GAMMA) is True


def test_portrait_examples():
    p = portrait(identity(3), 2)
    assert len(p) == 4 and all(x.is_identity() for x in p.values())
    p = portrait(ALPHA, 2)
    assert p[()].to_cycles() == "(1 2)"
    assert [p[(i,)].to_cycles() for i in (1, 2, 3)] == ["id", "(1 2)", "id"]
    assert portrait(GAMMA, 1)[()].is_identity()


def test_order_bounded_examples():
    beta1 = catalog.load("c2-ext-16").machine.element("beta1")
    assert order_bounded(beta1, 4) == 2
    assert order_bounded(identity(2), 1) == 1
    assert order_bounded(GAMMA, 32) is None


# -- machines ----------------------------------------------------------------

def test_minimize_examples():
    loops = MealyMachine(2, (Perm.identity(2),) * 2, ((0, 1), (1, 0)), ("p", "q"), (0,))
    assert len(minimize(loops)) == 1
    m = machine_of({"z": ALPHA * ALPHA.inverse()})
    assert len(m) == 1 and m.outputs[0].is_identity()
    g = machine_of({"gamma": GAMMA})
    assert len(g) == 3 and g.names == ("gamma", "e", "q0")


def test_minimize_renumbers_breadth_first():
    # states listed in a scrambled order
    m = MealyMachine(3, (Perm.from_cycles("(1 2)", 3), Perm.identity(3), Perm.identity(3), Perm.identity(3)),
                     ((1, 0, 1), (1, 1, 1), (2, 1, 0), (3, 3, 3)), ("alpha", "e", "gamma", "junk"), (2, 0))
    mm = minimize(m)
    assert mm.names == ("gamma", "e", "alpha")
    assert mm.to_text() == machine_of({"gamma": GAMMA, "alpha": ALPHA}).to_text()


def test_machine_text_round_trip_and_dot():
    m = machine_of({"gamma": GAMMA, "alpha": ALPHA}, notes=("example",))
    text = m.to_text()
    assert text == (
        "treeperm-machine v1\n# example\ndegree 3\n"
        "state gamma id -> gamma e alpha\nstate e id -> e e e\nstate alpha (1 2) -> e alpha e\n"
        "root gamma\nroot alpha\n"
    )
    again = parse_machine(text)
    assert again == m and again.to_text() == text
    dot = m.to_dot()
    assert '"alpha" [shape=doublecircle label="alpha / (1 2)"]' in dot
    assert '"gamma" -> "alpha" [label="3"]' in dot


@pytest.mark.parametrize("text, line", [
    ("nope\n", 1),
    ("treeperm-machine v1\ndegree 2\nstate a (1 3) -> a a\n", 3),
    ("treeperm-machine v1\ndegree 2\nstate a id -> a\n", 3),
    ("treeperm-machine v1\ndegree 2\nstate a id -> a b\n", 3),
    ("treeperm-machine v1\nstate a id -> a a\n", 2),
    ("treeperm-machine v1\ndegree 2\nfoo\n", 3),
])
def test_machine_format_errors(text, line):
    with pytest.raises(MachineFormatError) as exc:
        parse_machine(text)
    assert exc.value.line == line


def test_degree_two_minimum():
    with pytest.raises(ValueError):
        MealyMachine(1, (Perm.identity(1),), ((0,),))


# -- properties --------------------------------------------------------------

def _catalog_pool():
    pools = []
    for name in ("odometer", "zwrz-3", "zwrz-6", "w3-2"):
        pools.append((name, list(catalog.load(name).generators().values()), 5))
    for name in ("z-ext-8", "w3-10", "c2-ext-16"):
        pools.append((name, list(catalog.load(name).generators().values()), 3))
    return pools


POOLS = _catalog_pool()


@pytest.mark.parametrize("name, gens, depth", POOLS, ids=[p[0] for p in POOLS])
def test_action_homomorphism(name, gens, depth):
    m = gens[0].degree
    words = list(all_words(m, depth))
    if len(words) > 5000:
        words = random.Random(1).sample(words, 5000)
    for a, b in itertools.product(gens, repeat=2):
        ab = a * b
        for w in words:
            assert ab.act(w) == b.act(a.act(w))


@pytest.mark.parametrize("name, gens, depth", POOLS, ids=[p[0] for p in POOLS])
def test_inverse_law(name, gens, depth):
    rng = random.Random(name)
    for _ in range(100):
        w = random_word(rng, gens, 6)
        assert is_trivial(w * w.inverse()) is True


@pytest.mark.parametrize("name, gens, depth", POOLS, ids=[p[0] for p in POOLS])
def test_section_product_compatibility(name, gens, depth):
    for a, b in itertools.product(gens, repeat=2):
        sa = a.activity()
        for i in range(1, a.degree + 1):
            lhs = (a * b).section((i,))
            rhs = a.section((i,)) * b.section((sa(i),))
            assert equal(lhs, rhs) is True


@pytest.mark.parametrize("name, gens, depth", POOLS, ids=[p[0] for p in POOLS])
def test_state_closure_bound(name, gens, depth):
    rng = random.Random(name + "q")
    sizes = {id(g): len(states(g)) for g in gens}
    for _ in range(30):
        picks = [rng.choice(gens) for _ in range(rng.randint(1, 4))]
        signs = [rng.choice((1, -1)) for _ in picks]
        w = picks[0] ** signs[0]
        for g, s in zip(picks[1:], signs[1:]):
            w = w * g ** s
        bound = 1
        for g in picks:
            bound *= sizes[id(g)]
        assert len(states(w)) <= bound


@pytest.mark.parametrize("name", ["zwrz-3", "zwrz-6", "odometer", "w3-2", "z-ext-8"])
def test_minimization_soundness(name):
    m = catalog.load(name).machine
    # blow the machine up with an unreachable-equivalent duplicate of every state
    n = len(m)
    outputs = m.outputs + m.outputs
    children = tuple(tuple(c + n for c in row) for row in m.children) + m.children
    big = MealyMachine(m.degree, outputs, children, None, m.roots)
    small = minimize(big)
    assert len(small) == n
    depth = 5 if m.degree <= 3 else 3
    words = list(all_words(m.degree, depth))
    for r_big, r_small in zip(big.roots, small.roots):
        a, b = big.element(r_big), small.element(r_small)
        for w in words:
            assert a.act(w) == b.act(w)
        assert bisimilar(big, r_big, small, r_small)


@given(st.lists(st.tuples(st.sampled_from(["gamma", "alpha"]), st.sampled_from([1, -1])), max_size=8))
def test_words_trivial_iff_action_trivial_deep(word):
    g = identity(3)
    for n, k in word:
        g = g * ((GAMMA if n == "gamma" else ALPHA) ** k)
    if is_trivial(g):
        assert all(g.act(w) == w for w in all_words(3, 4))
    else:
        # nontrivial finite-state elements move some vertex at a bounded depth
        assert any(g.act(w) != w for w in all_words(3, len(states(g)) + 1))
