"""Named machines, G-data and relation suites, with golden files in ``data/``."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable

from ..automata import Exceeded, MealyMachine, from_recursion, is_trivial, load_machine, machine_of, states
from ..dsl import DslProgram, elaborate, parse, program_from_machine
from ..gdata import GData, represent
from ..tree_ops import EncodingTree, deflate
from . import builders, oracle

DATA = Path(__file__).parent / "data"
W3_TREE = "((((1,2),(3,4)),((5,6),(7,8))),(9,10))"


@dataclass(frozen=True)
class Relation:
    text: str
    trivial: bool  # expected answer of is_trivial


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    degree: int
    description: str
    kind: str = "machine"  # machine | gdata | tree
    aliases: tuple = ()     # (name, expression) pairs added to the program
    oracle_images: tuple = ()  # (oracle generator, machine expression) pairs
    gdata: Callable[[], GData] | None = field(default=None, compare=False)

    @property
    def path(self) -> Path:
        return DATA / self.name

    @property
    def machine(self) -> MealyMachine:
        if self.kind != "machine":
            raise ValueError(f"{self.name} is not a machine entry")
        return _load(self.name)

    @property
    def tree(self) -> EncodingTree:
        if self.kind != "tree":
            raise ValueError(f"{self.name} is not an encoding tree")
        return EncodingTree.parse(_strip_comments(self.path.read_text()))

    def program(self) -> DslProgram:
        prog = program_from_machine(self.machine)
        if not self.aliases:
            return prog
        return parse(prog.to_text() + "".join(f"{n} = {e}\n" for n, e in self.aliases))

    def generators(self) -> dict:
        return self.machine.generators()


def _strip_comments(text: str) -> str:
    return "".join(line for line in text.splitlines() if not line.lstrip().startswith("#")).strip()


@lru_cache(maxsize=None)
def _load(name: str) -> MealyMachine:
    return load_machine(DATA / name)


_W3_ALIASES = (("y", "y1 y2 y3"), ("x", "x1 x2 x3"))

ENTRIES = {
    e.name: e
    for e in [
        CatalogEntry("odometer", 2, "binary adding machine t = (e, t)(1 2)"),
        CatalogEntry("zwrz-3", 3, "Z wr Z from two-part data: gamma is the lamp y, alpha the top x",
                     oracle_images=(("y", "gamma"), ("x", "alpha")), gdata=builders.zwrz_gdata),
        CatalogEntry("zwrz-6", 6, "Z wr Z from the refined three-part data (trivial parabolic)",
                     oracle_images=(("y", "gamma1"), ("x", "alpha1")), gdata=builders.zwrz_refined),
        CatalogEntry("c2wrz-gdata", 4, "C2 wr Z with f: [a,x] -> a, x -> x on H = G'<x> and its "
                     "conjugate f_a = a f a; label subgroups <x> and <x>^a", kind="gdata",
                     gdata=builders.c2wrz_gdata),
        CatalogEntry("c2-ext-16", 16, "C2^(G x G) x| (C2 wr Z)^2: gamma the lamp, beta_i = a_i, "
                     "alpha_i = x_i", gdata=builders.c2_ext_gdata),
        CatalogEntry("z-ext-8", 9, "Z^(G x G) x| (C2 wr Z)^2: y the lamp, a_i and x_i on top; "
                     "eight letters for the two shifted parts plus one for mu", gdata=builders.z_ext_gdata),
        CatalogEntry("w3-10", 10, "Z wr (Z wr Z)^3 from the refined Z wr Z data; contains "
                     "Z wr (Z wr Z) as <a, y1 y2 y3, x1 x2 x3>", aliases=_W3_ALIASES,
                     oracle_images=(("a", "a"), ("y", "y"), ("x", "x")), gdata=builders.w3_gdata),
        CatalogEntry("w3-2", 2, "binary deflation of w3-10 along w3-encoding-tree",
                     aliases=_W3_ALIASES, oracle_images=(("a", "a"), ("y", "y"), ("x", "x"))),
        CatalogEntry("w3-encoding-tree", 10, "encoding tree " + W3_TREE, kind="tree"),
    ]
}


def names() -> list[str]:
    return list(ENTRIES)


def load(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(ENTRIES)}") from None


# ---------------------------------------------------------------------------
# recomputation of the golden machines

_RENAME = {
    "zwrz-3": {"y": "gamma", "x": "alpha"},
    "zwrz-6": {"y": "gamma1", "x": "alpha1"},
    "c2-ext-16": {"gamma": "gamma", "a1": "beta1", "a2": "beta2", "x1": "alpha1", "x2": "alpha2"},
    "z-ext-8": {"y": "y", "a1": "a1", "a2": "a2", "x1": "x1", "x2": "x2"},
    "w3-10": {n: n for n in ("a", "y1", "y2", "y3", "x1", "x2", "x3")},
}


def _closure_note(elements: dict) -> str:
    sizes = []
    for n, g in elements.items():
        q = states(g, 10_000)
        sizes.append(f"{n} {'>10000' if isinstance(q, Exceeded) else len(q)}")
    return "closure sizes: " + ", ".join(sizes)


def compute_elements(name: str) -> dict:
    """Generators of a machine entry, recomputed from their construction."""
    if name == "odometer":
        return {"t": from_recursion(2, {"t": (["e", "t"], "(1 2)")}).element("t")}
    if name in _RENAME:
        gd = load(name).gdata()
        return {new: represent(gd, gd.ambient.gen(old)) for old, new in _RENAME[name].items()}
    if name == "w3-2":
        tree = EncodingTree.parse(W3_TREE)
        return {n: deflate(g, tree) for n, g in load("w3-10").generators().items()}
    raise ValueError(f"{name} has no machine")


def compute_machine(name: str) -> MealyMachine:
    entry = load(name)
    elements = compute_elements(name)
    notes = (f"{name}: {entry.description}", _closure_note(elements))
    return machine_of(elements, notes=notes)


def golden_text(name: str) -> str:
    entry = load(name)
    if entry.kind == "tree":
        return f"# {name}: leaves 1..10 in reading order\n{W3_TREE}\n"
    return compute_machine(name).to_text()


def regenerate(names_: list[str] | None = None) -> list[Path]:
    """Rewrite golden files from their constructions (used once, then frozen)."""
    out = []
    for name in names_ or [n for n, e in ENTRIES.items() if e.kind != "gdata"]:
        path = DATA / name
        path.write_text(golden_text(name))
        out.append(path)
    _load.cache_clear()
    return out


# ---------------------------------------------------------------------------
# relation suites


def _zwrz_suite(g: str, a: str) -> list[Relation]:
    rels = [Relation(f"[{g}, {g}^({a}^{k})]", True) for k in range(-6, 7) if k]
    rels += [Relation(f"{g}^{n}", False) for n in range(1, 33)]
    rels += [Relation(f"{a}^{n}", False) for n in range(1, 33)]
    return rels


def _w3_suite() -> list[Relation]:
    rels = [Relation(f"[y, y^(x^{k})]", True) for k in range(-3, 4)]
    rels += [Relation(f"[a, a^({g})]", True) for g in ("y", "x", "y x", "x^2", "y^x")]
    for g in ("a", "y", "x"):
        rels += [Relation(f"{g}^{n}", False) for n in range(1, 17)]
    return rels


_C2_SAMPLE = ("alpha1", "alpha2", "alpha1 alpha2", "alpha1^-1 beta1", "beta2 alpha2^2",
              "alpha1 beta1 alpha1", "alpha2^-1 beta2 alpha1", "beta1 beta2", "alpha1^2 alpha2^-1",
              "beta1 alpha2 beta2 alpha1")


def _c2_suite() -> list[Relation]:
    rels = [Relation(f"{g}^2", True) for g in ("beta1", "beta2", "gamma")]
    rels += [Relation(f"[gamma, gamma^({w})]", True) for w in _C2_SAMPLE]
    rels += [Relation(f"(gamma^({w}))^2", True) for w in _C2_SAMPLE]
    rels += [Relation(r, True) for r in ("[beta1, beta1^alpha1]", "[beta2, beta2^alpha2]",
                                         "[alpha1, alpha2]", "[beta1, alpha2]", "[beta1, beta2]")]
    rels += [Relation(g, False) for g in ("gamma", "beta1", "beta2", "alpha1", "alpha2",
                                           "[gamma, alpha1]", "[beta1, alpha1]")]
    return rels


def _zext_suite() -> list[Relation]:
    sample = ("x1", "x2", "a1", "x1 x2", "x1^-1 a2 x2", "a1 x2^2")
    rels = [Relation(f"{g}^2", True) for g in ("a1", "a2")]
    rels += [Relation(f"[y, y^({w})]", True) for w in sample]
    rels += [Relation(r, True) for r in ("[x1, x2]", "[a1, a2]", "[a1, a1^x1]", "[a2, a2^x2]")]
    rels += [Relation(f"{g}^{n}", False) for g in ("y", "x1", "x2") for n in range(1, 9)]
    return rels


SUITES: dict[str, Callable[[], list[Relation]]] = {
    "odometer": lambda: [Relation("[t, t^t]", True)] + [Relation(f"t^{n}", False) for n in range(1, 33)],
    "zwrz-3": lambda: _zwrz_suite("gamma", "alpha"),
    "zwrz-6": lambda: _zwrz_suite("gamma1", "alpha1"),
    "c2-ext-16": _c2_suite,
    "z-ext-8": _zext_suite,
    "w3-10": _w3_suite,
    "w3-2": _w3_suite,
}


@dataclass
class SuiteReport:
    name: str
    results: list  # (Relation, answer)

    @property
    def failures(self) -> list:
        return [(r, ans) for r, ans in self.results if ans is not r.trivial]

    def counts(self, trivial: bool) -> tuple[int, int]:
        rows = [(r, a) for r, a in self.results if r.trivial is trivial]
        return sum(1 for r, a in rows if a is r.trivial), len(rows)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        held, total = self.counts(True)
        out = f"{held}/{total} relations hold"
        nh, nt = self.counts(False)
        if nt:
            out += f"; {nh}/{nt} non-relations confirmed"
        return out


def suite(name: str) -> list[Relation]:
    if name not in SUITES:
        raise KeyError(f"no relation suite for {name!r}")
    return SUITES[name]()


def run_suite(name: str, limit: int | None = None) -> SuiteReport:
    prog = load(name).program()
    results = []
    for rel in suite(name):
        results.append((rel, is_trivial(elaborate(prog, rel.text), limit)))
    return SuiteReport(name, results)


# ---------------------------------------------------------------------------
# oracle cross-checks


def oracle_for(name: str) -> oracle.WreathOracle:
    if name in ("zwrz-3", "zwrz-6"):
        return oracle.z_wr_z()
    if name in ("w3-10", "w3-2"):
        return oracle.z_wr_z_wr_z()
    raise KeyError(f"no oracle for {name!r}")


@dataclass
class OracleReport:
    rows: list  # (word, machine answer, oracle answer)

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if r[1] is not r[2]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def word_text(word) -> str:
    return " ".join(n if k == 1 else f"{n}^{k}" for n, k in word) or "e"


def oracle_check(words, entry: CatalogEntry | str, limit: int | None = None) -> OracleReport:
    """Compare machine and oracle triviality for words of ``(generator, exponent)`` pairs."""
    entry = load(entry) if isinstance(entry, str) else entry
    orc = oracle_for(entry.name)
    images = orc.generators()
    prog = entry.program()
    alias = dict(entry.oracle_images)
    rows = []
    for word in words:
        text = " ".join(f"({alias[n]})^{k}" for n, k in word) or "e"
        machine = is_trivial(elaborate(prog, text), limit)
        rows.append((word_text(word), machine, orc.is_identity(orc.evaluate(word, images))))
    return OracleReport(rows)


__all__ = [
    "CatalogEntry", "ENTRIES", "OracleReport", "Relation", "SuiteReport", "compute_elements",
    "compute_machine", "golden_text", "load", "names", "oracle", "oracle_check", "oracle_for",
    "regenerate", "run_suite", "suite",
]
