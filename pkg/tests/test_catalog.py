import random

import pytest

from helpers import reduced_words
from treeperm import catalog
from treeperm.automata import equal, machine_of, minimize, parse_machine, states
from treeperm.catalog import oracle
from treeperm.tree_ops import EncodingTree, deflate

MACHINES = [n for n, e in catalog.ENTRIES.items() if e.kind == "machine"]


def test_degrees():
    assert catalog.load("zwrz-3").degree == 3
    assert catalog.load("zwrz-6").degree == 6
    assert catalog.load("w3-10").degree == 10
    assert catalog.load("w3-2").degree == 2
    assert catalog.load("c2-ext-16").degree == 16
    assert catalog.load("odometer").degree == 2
    for n in MACHINES:
        assert catalog.load(n).machine.degree == catalog.load(n).degree


def test_unknown_entry():
    with pytest.raises(KeyError, match="unknown catalog entry"):
        catalog.load("nope")


def test_tree_entry():
    t = catalog.load("w3-encoding-tree").tree
    assert t.degree == 10 and t == EncodingTree.parse("((((1,2),(3,4)),((5,6),(7,8))),(9,10))")


@pytest.mark.parametrize("name", [n for n in MACHINES if n != "odometer"] + ["odometer"])
def test_golden_file_is_byte_equal_to_recomputation(name):
    assert catalog.load(name).path.read_text() == catalog.golden_text(name)


def test_tree_golden_file():
    assert catalog.load("w3-encoding-tree").path.read_text() == catalog.golden_text("w3-encoding-tree")


@pytest.mark.parametrize("name", MACHINES)
def test_golden_round_trip(name):
    text = catalog.load(name).path.read_text()
    m = parse_machine(text)
    assert m.to_text() == text
    again = parse_machine(m.to_text())
    for r in m.roots:
        assert equal(m.element(r), again.element(r)) is True


def test_zwrz6_equals_pipeline():
    from treeperm.catalog import builders
    from treeperm.gdata import represent

    gd = builders.zwrz_refined()
    G = gd.ambient
    m = machine_of({"gamma1": represent(gd, G.gen("y")), "alpha1": represent(gd, G.gen("x"))})
    golden = catalog.load("zwrz-6").machine
    body = [l for l in golden.to_text().splitlines() if not l.startswith("#")]
    assert [l for l in m.to_text().splitlines() if not l.startswith("#")] == body


def test_w3_2_equals_deflation_after_minimize():
    tree = catalog.load("w3-encoding-tree").tree
    src = catalog.load("w3-10").generators()
    golden = catalog.load("w3-2").generators()
    ours = {n: deflate(g, tree) for n, g in src.items()}
    assert minimize(machine_of(ours)).to_text() == minimize(machine_of(golden)).to_text()
    for n in src:
        assert equal(ours[n], golden[n]) is True


def test_closure_sizes_are_frozen_in_golden_files():
    text = catalog.load("w3-10").path.read_text()
    assert "closure sizes: a 8, y1 7, y2 7, y3 7, x1 4, x2 4, x3 4" in text
    for n, g in catalog.load("w3-10").generators().items():
        assert f"{n} {len(states(g, 10_000))}" in text
    zw = catalog.load("zwrz-3").generators()
    assert len(states(zw["gamma"])) == 3 and len(states(zw["alpha"])) == 2
    assert len(states(catalog.load("odometer").generators()["t"])) == 2


@pytest.mark.parametrize("name", ["zwrz-3", "zwrz-6", "w3-10", "w3-2", "c2-ext-16", "z-ext-8", "odometer"])
def test_relation_suites(name):
    report = catalog.run_suite(name)
    assert report.ok, report.failures


def test_suite_summary():
    assert catalog.run_suite("zwrz-3").summary() == "12/12 relations hold; 64/64 non-relations confirmed"


# -- oracle -------------------------------------------------------------------

def test_oracle_examples():
    c2 = oracle.c2_wr_z()
    a = c2.generators()["a"]
    assert c2.mul(a, a) == c2.identity
    zz = oracle.z_wr_z()
    y, x = zz.generators()["y"], zz.generators()["x"]
    yx = zz.mul(zz.inv(x), zz.mul(y, x))
    assert zz.mul(y, yx) == zz.mul(yx, y)
    assert zz.evaluate([("y", 1), ("x", 1), ("y", 1)], zz.generators()) == (((-1, 1), (0, 1)), 1)
    assert yx == (((1, 1),), 0)


@pytest.mark.parametrize("make", [oracle.z_wr_z, oracle.c2_wr_z, oracle.z_wr_z_wr_z])
def test_oracle_group_axioms(make):
    W = make()
    gens = list(W.generators().items())
    rng = random.Random(make.__name__)

    def rand():
        return W.evaluate([(rng.choice(gens)[0], rng.choice((-1, 1))) for _ in range(rng.randint(0, 5))],
                          W.generators())

    for _ in range(100):
        a, b, c = rand(), rand(), rand()
        assert W.mul(W.mul(a, b), c) == W.mul(a, W.mul(b, c))
        assert W.is_identity(W.mul(a, W.inv(a)))


def test_oracle_check_examples():
    # words are over the oracle's names; y -> gamma, x -> alpha
    comm = [("y", -1), ("x", -1), ("y", -1), ("x", 1), ("y", 1), ("x", -1), ("y", 1), ("x", 1)]  # [y, y^x]
    rep = catalog.oracle_check([comm, [("y", 1), ("x", -1)], []], "zwrz-3")
    assert rep.rows == [
        ("y^-1 x^-1 y^-1 x y x^-1 y x", True, True),
        ("y x^-1", False, False),
        ("e", True, True),
    ]
    assert rep.ok


def test_oracle_check_reports_mismatch_by_word():
    from dataclasses import replace
    # a deliberately wrong isomorphism: the lamp goes to the top generator
    entry = replace(catalog.load("zwrz-3"), oracle_images=(("y", "alpha"), ("x", "gamma")))
    rep = catalog.oracle_check([[("y", -1), ("x", -1), ("y", -1), ("x", 1), ("y", 1), ("x", -1), ("y", 1), ("x", 1)]], entry)
    assert not rep.ok
    assert rep.mismatches[0][0] == "y^-1 x^-1 y^-1 x y x^-1 y x"


def test_oracle_zwrz_reduced_words():
    words = list(reduced_words(["y", "x"], 4))
    rep = catalog.oracle_check(words, "zwrz-3")
    assert len(rep.rows) == len(words) and rep.ok, rep.mismatches


@pytest.mark.parametrize("name", ["w3-10", "w3-2"])
def test_oracle_w3_random_words(name):
    rng = random.Random(name)
    words = [[(rng.choice("ayx"), rng.choice((-1, 1))) for _ in range(rng.randint(0, 5))] for _ in range(200)]
    rep = catalog.oracle_check(words, name)
    assert rep.ok, rep.mismatches


def test_oracle_independent_of_engine():
    import ast
    src = (catalog.DATA.parent / "oracle.py").read_text()
    mods = {n.module for n in ast.walk(ast.parse(src)) if isinstance(n, ast.ImportFrom)}
    assert not any(m and m.startswith("treeperm") for m in mods)
    assert "import treeperm" not in src
