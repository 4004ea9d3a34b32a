"""Tree automorphisms given by wreath recursion.

An automorphism is a word over the states of a *state system*: anything that
can report, for each state, its activity (a ``Perm``) and its section at each
letter as another word.  Explicit ``MealyMachine`` objects, the lazy
representations built from G-data and the DSL definitions are all state
systems, so one engine handles products, inverses, closures and triviality.

Action convention: ``(a * b).act(w) == b.act(a.act(w))``.  Sections follow
``(ab)_x = a_x b_{x^a}``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .perm import Perm

DEFAULT_LIMIT = 100_000

Letter = tuple  # (state, sign) with sign in {+1, -1}
Word = tuple


def default_limit() -> int:
    return int(os.environ.get("TREEPERM_LIMIT", DEFAULT_LIMIT))


class Exceeded:
    """Result value returned when a closure grows past its limit."""

    def __init__(self, limit: int):
        self.limit = limit

    def __bool__(self):
        raise TypeError("Exceeded has no truth value; compare with `is True`")

    def __eq__(self, other):
        return isinstance(other, Exceeded)

    def __hash__(self):
        return hash(Exceeded)

    def __repr__(self):
        return f"Exceeded(limit={self.limit})"


class StateSystem:
    """Base class for anything whose states carry wreath recursions.

    Subclasses implement ``activity``, ``section`` and (optionally)
    ``is_identity``; the signed helpers below cache their results.
    """

    degree: int

    def activity(self, state) -> Perm:
        raise NotImplementedError

    def section(self, state, letter: int) -> Word:
        """Section at a 0-based letter, as a word of ``(state, sign)`` pairs."""
        raise NotImplementedError

    def is_identity(self, state) -> bool:
        return False

    def state_name(self, state) -> str | None:
        return None

    # cached signed access ---------------------------------------------
    def _caches(self):
        try:
            return self.__act_cache, self.__sec_cache
        except AttributeError:
            caches = ({}, {})
            object.__setattr__(self, "_StateSystem__act_cache", caches[0])
            object.__setattr__(self, "_StateSystem__sec_cache", caches[1])
            return caches

    def signed_activity(self, letter: Letter) -> Perm:
        acts, _ = self._caches()
        p = acts.get(letter)
        if p is None:
            state, sign = letter
            p = self.activity(state)
            if sign < 0:
                p = p.inverse()
            p = acts.setdefault(letter, p)
        return p

    def signed_sections(self, letter: Letter) -> tuple[Word, ...]:
        _, secs = self._caches()
        out = secs.get(letter)
        if out is None:
            state, sign = letter
            if sign > 0:
                out = tuple(tuple(self.section(state, x)) for x in range(self.degree))
            else:
                inv = self.activity(state).inverse().images
                out = tuple(invert_word(self.section(state, inv[x])) for x in range(self.degree))
            out = secs.setdefault(letter, out)
        return out


def invert_word(word: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(word))


def normalize(system: StateSystem, word: Iterable[Letter]) -> Word:
    """Drop identity states and cancel adjacent ``s s^-1`` pairs."""
    stack: list = []
    for letter in word:
        if system.is_identity(letter[0]):
            continue
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def word_activity(system: StateSystem, word: Word) -> Perm:
    images = list(range(system.degree))
    for letter in word:
        p = system.signed_activity(letter).images
        images = [p[i] for i in images]
    return Perm(images)


def word_section(system: StateSystem, word: Word, letter: int) -> Word:
    out: list = []
    x = letter
    for lt in word:
        out.extend(system.signed_sections(lt)[x])
        x = system.signed_activity(lt).images[x]
    return normalize(system, out)


def word_expand(system: StateSystem, word: Word) -> tuple[Perm, tuple[Word, ...]]:
    """Activity and all first-level sections of a word."""
    return word_activity(system, word), tuple(word_section(system, word, x) for x in range(system.degree))


class JoinedSystem(StateSystem):
    """Disjoint union of state systems of equal degree."""

    def __init__(self, parts: Sequence[StateSystem]):
        degrees = {p.degree for p in parts}
        if len(degrees) != 1:
            raise ValueError(f"degree mismatch: {sorted(degrees)}")
        self.parts = tuple(parts)
        self.degree = degrees.pop()

    def index_of(self, system: StateSystem) -> int:
        for i, p in enumerate(self.parts):
            if p is system:
                return i
        raise KeyError(system)

    def activity(self, state):
        i, s = state
        return self.parts[i].activity(s)

    def section(self, state, letter):
        i, s = state
        return tuple(((i, t), e) for t, e in self.parts[i].section(s, letter))

    def is_identity(self, state):
        i, s = state
        return self.parts[i].is_identity(s)

    def state_name(self, state):
        i, s = state
        return self.parts[i].state_name(s)


_JOINS: dict = {}


def _lift(system: StateSystem, joined: JoinedSystem, word: Word) -> Word:
    if system is joined:
        return word
    i = joined.index_of(system)
    return tuple(((i, s), e) for s, e in word)


def common_system(elements: Sequence["TreeAutomorphism"]) -> tuple[StateSystem, list[Word]]:
    systems: list = []
    for el in elements:
        parts = el.system.parts if isinstance(el.system, JoinedSystem) else (el.system,)
        for p in parts:
            if not any(p is q for q in systems):
                systems.append(p)
    if len(systems) == 1:
        return systems[0], [el.word for el in elements]
    key = tuple(id(s) for s in systems)
    joined = _JOINS.get(key)
    if joined is None or any(a is not b for a, b in zip(joined.parts, systems)):
        joined = JoinedSystem(systems)
        _JOINS[key] = joined
    words = []
    for el in elements:
        if isinstance(el.system, JoinedSystem):
            words.append(tuple(((joined.index_of(el.system.parts[i]), s), e) for (i, s), e in el.word))
        else:
            words.append(_lift(el.system, joined, el.word))
    return joined, words


def _check_letters(degree: int, word: Sequence[int]) -> None:
    for y in word:
        if not isinstance(y, int) or not 1 <= y <= degree:
            raise ValueError(f"letter {y!r} out of range 1..{degree}")


class TreeAutomorphism:
    """An element of the automorphism group of the rooted ``degree``-ary tree.

    ``==`` compares representations (system and normalized word); use
    ``equal`` for equality of automorphisms.
    """

    __slots__ = ("system", "word")

    def __init__(self, system: StateSystem, word: Iterable[Letter] = ()):
        self.system = system
        self.word = normalize(system, word)

    @property
    def degree(self) -> int:
        return self.system.degree

    def activity(self) -> Perm:
        return word_activity(self.system, self.word)

    def act(self, vertex: Sequence[int]) -> tuple[int, ...]:
        _check_letters(self.degree, vertex)
        out = []
        word = self.word
        for y in vertex:
            x = y - 1
            out.append(word_activity(self.system, word).images[x] + 1)
            word = word_section(self.system, word, x)
        return tuple(out)

    def section(self, vertex: Sequence[int] = ()) -> "TreeAutomorphism":
        _check_letters(self.degree, vertex)
        word = self.word
        for y in vertex:
            word = word_section(self.system, word, y - 1)
        return TreeAutomorphism(self.system, word)

    def sections(self) -> tuple["TreeAutomorphism", ...]:
        return tuple(self.section((x,)) for x in range(1, self.degree + 1))

    def __mul__(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        system, (w1, w2) = common_system([self, other])
        return TreeAutomorphism(system, w1 + w2)

    def inverse(self) -> "TreeAutomorphism":
        return TreeAutomorphism(self.system, invert_word(self.word))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n: int) -> "TreeAutomorphism":
        if not isinstance(n, int):
            return NotImplemented
        base = self.word if n >= 0 else invert_word(self.word)
        return TreeAutomorphism(self.system, base * abs(n))

    def conj(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        """``self ** other`` in the group sense: ``other^-1 self other``."""
        return other.inverse() * self * other

    def identity(self) -> "TreeAutomorphism":
        return TreeAutomorphism(self.system, ())

    def __eq__(self, other):
        return (isinstance(other, TreeAutomorphism) and self.system is other.system
                and self.word == other.word)

    def __hash__(self):
        return hash((id(self.system), self.word))

    def __repr__(self):
        if not self.word:
            return "TreeAutomorphism(e)"
        parts = []
        for s, e in self.word:
            name = self.system.state_name(s) or repr(s)
            parts.append(name if e > 0 else name + "^-1")
        return f"TreeAutomorphism({' '.join(parts)}, degree={self.degree})"

    # decision procedures ------------------------------------------------
    def is_trivial(self, limit: int | None = None):
        return is_trivial(self, limit)

    def equal(self, other, limit: int | None = None):
        return equal(self, other, limit)

    def states(self, limit: int | None = None):
        return states(self, limit)

    def portrait(self, depth: int):
        return portrait(self, depth)

    def to_machine(self, limit: int | None = None, name: str | None = None):
        return machine_of({name or "g": self}, limit)


def identity(degree: int) -> TreeAutomorphism:
    return TreeAutomorphism(MealyMachine.trivial(degree), ())


# ---------------------------------------------------------------------------
# closures


def explore(system: StateSystem, roots: Sequence[Word], limit: int):
    """Breadth-first closure of words under sections.

    Returns ``(words, outputs, children)`` with ``children[i][x]`` the index
    of the section of ``words[i]`` at 0-based letter ``x``, or ``Exceeded``.
    """
    index: dict = {}
    words: list = []
    queue: deque = deque()
    for w in roots:
        w = normalize(system, w)
        if w not in index:
            index[w] = len(words)
            words.append(w)
            queue.append(w)
    outputs: list = []
    children: list = []
    pos = 0
    while pos < len(words):
        w = words[pos]
        pos += 1
        act, secs = word_expand(system, w)
        row = []
        for s in secs:
            j = index.get(s)
            if j is None:
                if len(words) >= limit:
                    return Exceeded(limit)
                j = index[s] = len(words)
                words.append(s)
            row.append(j)
        outputs.append(act)
        children.append(tuple(row))
    return words, outputs, children


def is_trivial(a: TreeAutomorphism, limit: int | None = None):
    """True iff every state reachable from ``a`` has identity activity."""
    limit = default_limit() if limit is None else limit
    system = a.system
    seen = {a.word}
    stack = [a.word]
    while stack:
        w = stack.pop()
        if not w:
            continue
        if not word_activity(system, w).is_identity():
            return False
        for x in range(system.degree):
            s = word_section(system, w, x)
            if s not in seen:
                if len(seen) >= limit:
                    return Exceeded(limit)
                seen.add(s)
                stack.append(s)
    return True


def equal(a: TreeAutomorphism, b: TreeAutomorphism, limit: int | None = None):
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    return is_trivial(a * b.inverse(), limit)


def states(a: TreeAutomorphism, limit: int | None = None):
    """The state set Q(a) as distinct automorphisms, or ``Exceeded``."""
    m = machine_of({"a": a}, limit)
    if isinstance(m, Exceeded):
        return m
    return frozenset(m.element(i) for i in range(len(m)))


def order_bounded(a: TreeAutomorphism, n_max: int, limit: int | None = None) -> int | None:
    """Smallest ``1 <= n <= n_max`` with ``a**n`` trivial, else ``None``."""
    for n in range(1, n_max + 1):
        if is_trivial(a ** n, limit) is True:
            return n
    return None


def portrait(a: TreeAutomorphism, depth: int) -> dict[tuple[int, ...], Perm]:
    """Activity at every vertex above ``depth`` (vertices as 1-based tuples)."""
    out = {}
    level = [((), a.word)]
    for _ in range(depth):
        nxt = []
        for v, w in level:
            act, secs = word_expand(a.system, w)
            out[v] = act
            nxt.extend((v + (x + 1,), s) for x, s in enumerate(secs))
        level = nxt
    return out


# ---------------------------------------------------------------------------
# explicit machines


@dataclass(frozen=True, eq=False)
class MealyMachine(StateSystem):
    """Finite invertible Mealy machine.

    ``children[i][x]`` is the state reached from state ``i`` on 0-based letter
    ``x``; ``roots`` lists distinguished states (e.g. generators).
    """

    degree: int
    outputs: tuple
    children: tuple
    names: tuple | None = None
    roots: tuple = ()
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("degree must be at least 2")
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "children", tuple(tuple(c) for c in self.children))
        object.__setattr__(self, "roots", tuple(self.roots))
        n = len(self.outputs)
        if len(self.children) != n:
            raise ValueError("outputs and children differ in length")
        for p, row in zip(self.outputs, self.children):
            if p.degree != self.degree or len(row) != self.degree:
                raise ValueError("state arity does not match degree")
            for c in row:
                if not 0 <= c < n:
                    raise ValueError(f"child index {c} out of range")
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != n or len(set(names)) != n:
                raise ValueError("state names must be unique, one per state")
            object.__setattr__(self, "names", names)
        for r in self.roots:
            if not 0 <= r < n:
                raise ValueError(f"root {r} out of range")
        object.__setattr__(self, "_trivial", self._trivial_states())

    @classmethod
    def trivial(cls, degree: int) -> "MealyMachine":
        return cls(degree, (Perm.identity(degree),), ((0,) * degree,), ("e",))

    def __len__(self):
        return len(self.outputs)

    def __eq__(self, other):
        return (isinstance(other, MealyMachine) and self.degree == other.degree
                and self.outputs == other.outputs and self.children == other.children
                and self.names == other.names and self.roots == other.roots)

    def __hash__(self):
        return hash((self.degree, self.outputs, self.children))

    def _trivial_states(self) -> frozenset:
        alive = {i for i, p in enumerate(self.outputs) if p.is_identity()}
        changed = True
        while changed:
            changed = False
            for i in list(alive):
                if any(c not in alive for c in self.children[i]):
                    alive.discard(i)
                    changed = True
        return frozenset(alive)

    # StateSystem
    def activity(self, state):
        return self.outputs[state]

    def section(self, state, letter):
        return ((self.children[state][letter], 1),)

    def is_identity(self, state):
        return state in self._trivial

    def state_name(self, state):
        return self.names[state] if self.names else f"q{state}"

    def index(self, name: str) -> int:
        if self.names is None:
            raise KeyError(name)
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def element(self, state: int | str) -> TreeAutomorphism:
        if isinstance(state, str):
            state = self.index(state)
        return TreeAutomorphism(self, ((state, 1),))

    def generators(self) -> dict[str, TreeAutomorphism]:
        return {self.state_name(r): self.element(r) for r in self.roots}

    def minimize(self) -> "MealyMachine":
        return minimize(self)

    def to_text(self) -> str:
        return machine_to_text(self)

    def to_dot(self) -> str:
        return machine_to_dot(self)


def _refine_classes(outputs: Sequence[Perm], children: Sequence[Sequence[int]]) -> list[int]:
    """Coarsest bisimulation: partition refinement on (output, child classes)."""
    labels: dict = {}
    cls = [labels.setdefault(p, len(labels)) for p in outputs]
    while True:
        sigs: dict = {}
        new = [sigs.setdefault((cls[i], tuple(cls[c] for c in row)), len(sigs))
               for i, row in enumerate(children)]
        if len(sigs) == len(set(cls)):
            return new
        cls = new


def _quotient(mach: MealyMachine, roots: Sequence[int]):
    """Bisimulation quotient; returns (outputs, children, new_roots, old->new map)."""
    starts = tuple(roots) or tuple(range(len(mach)))
    cls = _refine_classes(mach.outputs, mach.children)
    rep: dict = {}
    for i, c in enumerate(cls):
        rep.setdefault(c, i)
    order: dict = {}
    queue: deque = deque()
    for r in starts:
        c = cls[r]
        if c not in order:
            order[c] = len(order)
            queue.append(c)
        while queue:
            c = queue.popleft()
            for ch in mach.children[rep[c]]:
                cc = cls[ch]
                if cc not in order:
                    order[cc] = len(order)
                    queue.append(cc)
    by_new = sorted(order, key=order.get)
    outputs = tuple(mach.outputs[rep[c]] for c in by_new)
    children = tuple(tuple(order[cls[ch]] for ch in mach.children[rep[c]]) for c in by_new)
    new_of = {i: order[c] for i, c in enumerate(cls) if c in order}
    return outputs, children, tuple(new_of[r] for r in roots), new_of


def minimize(mach: MealyMachine, roots: Sequence[int] | None = None) -> MealyMachine:
    """Bisimulation quotient, renumbered breadth-first from the roots.

    States unreachable from the roots are dropped; a machine without roots
    keeps every state (all states act as roots, in index order).
    """
    roots = tuple(mach.roots if roots is None else roots)
    outputs, children, new_roots, new_of = _quotient(mach, roots)
    names = None
    if mach.names is not None:
        picked: list = [None] * len(outputs)
        for r in roots:
            if picked[new_of[r]] is None:
                picked[new_of[r]] = mach.names[r]
        for i in sorted(new_of):
            if picked[new_of[i]] is None:
                picked[new_of[i]] = mach.names[i]
        names = _finish_names(picked, outputs, children, new_roots)
    return MealyMachine(mach.degree, outputs, children, names, new_roots, mach.notes)


def _finish_names(picked: list, outputs, children, roots) -> tuple[str, ...]:
    trivial = MealyMachine(outputs[0].degree, outputs, children)._trivial
    names = list(picked)
    for i in sorted(trivial):
        if i not in roots and "e" not in names:
            names[i] = "e"
    used: set = set()
    counter = 0
    for k, n in enumerate(names):
        if n is None or n in used:
            while f"q{counter}" in used or f"q{counter}" in names[k + 1:]:
                counter += 1
            n = f"q{counter}"
        used.add(n)
        names[k] = n
    return tuple(names)


def machine_of(elements: Mapping[str, TreeAutomorphism], limit: int | None = None,
               namer: Callable[[StateSystem, Word], str | None] | None = None,
               notes: Sequence[str] = ()):
    """Explicit minimized machine whose roots are the given named elements.

    ``namer`` may name intermediate states from their words; otherwise they
    get ``q<k>`` in canonical order and the trivial state is ``e``.
    """
    limit = default_limit() if limit is None else limit
    items = list(elements.items())
    if not items:
        raise ValueError("no elements")
    system, words = common_system([el for _, el in items])
    res = explore(system, words, limit)
    if isinstance(res, Exceeded):
        return res
    all_words, outputs, children = res
    word_index = {w: i for i, w in enumerate(all_words)}
    root_idx = tuple(word_index[normalize(system, w)] for w in words)
    raw = MealyMachine(system.degree, outputs, children)
    q_out, q_children, roots, new_of = _quotient(raw, root_idx)
    picked: list = [None] * len(q_out)
    for (nm, _), r in zip(items, roots):
        if picked[r] is None:
            picked[r] = nm
    if namer is not None:
        for i in sorted(new_of):
            k = new_of[i]
            if picked[k] is None:
                picked[k] = namer(system, all_words[i])
    names = _finish_names(picked, q_out, q_children, roots)
    return MealyMachine(system.degree, q_out, q_children, names, roots, tuple(notes))


def bisimilar(m1: MealyMachine, s1: int, m2: MealyMachine, s2: int) -> bool:
    joined = JoinedSystem([m1, m2])
    a = TreeAutomorphism(joined, (((0, s1), 1),))
    b = TreeAutomorphism(joined, (((1, s2), 1),))
    return equal(a, b, len(m1) * len(m2) + 2) is True


# ---------------------------------------------------------------------------
# text format and DOT

HEADER = "treeperm-machine v1"


class MachineFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def machine_to_text(m: MealyMachine) -> str:
    names = m.names or tuple(m.state_name(i) for i in range(len(m)))
    lines = [HEADER]
    lines.extend(f"# {n}" if n else "#" for n in m.notes)
    lines.append(f"degree {m.degree}")
    for i in range(len(m)):
        kids = " ".join(names[c] for c in m.children[i])
        lines.append(f"state {names[i]} {m.outputs[i].to_cycles()} -> {kids}")
    lines.extend(f"root {names[r]}" for r in m.roots)
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> MealyMachine:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise MachineFormatError(f"missing header {HEADER!r}", 1)
    notes = []
    degree = None
    rows = []
    roots = []
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            notes.append(line[1:].strip())
            continue
        head, _, rest = line.partition(" ")
        if head == "degree":
            try:
                degree = int(rest)
            except ValueError:
                raise MachineFormatError(f"bad degree {rest!r}", no) from None
            if degree < 2:
                raise MachineFormatError("degree must be at least 2", no)
        elif head == "state":
            if degree is None:
                raise MachineFormatError("state before degree", no)
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise MachineFormatError("expected '->'", no)
            name, _, cyc = lhs.strip().partition(" ")
            try:
                perm = Perm.from_cycles(cyc, degree)
            except ValueError as exc:
                raise MachineFormatError(str(exc), no) from None
            kids = rhs.split()
            if len(kids) != degree:
                raise MachineFormatError(f"expected {degree} children, got {len(kids)}", no)
            rows.append((name, perm, kids, no))
        elif head == "root":
            roots.append((rest.strip(), no))
        else:
            raise MachineFormatError(f"unknown directive {head!r}", no)
    if degree is None:
        raise MachineFormatError("missing degree")
    index = {}
    for i, (name, _, _, no) in enumerate(rows):
        if name in index:
            raise MachineFormatError(f"duplicate state {name!r}", no)
        index[name] = i

    def resolve(name, no):
        try:
            return index[name]
        except KeyError:
            raise MachineFormatError(f"unknown state {name!r}", no) from None

    children = [tuple(resolve(k, no) for k in kids) for _, _, kids, no in rows]
    return MealyMachine(degree, tuple(r[1] for r in rows), tuple(children),
                        tuple(r[0] for r in rows), tuple(resolve(n, no) for n, no in roots),
                        tuple(notes))


def load_machine(path: str | os.PathLike) -> MealyMachine:
    with open(path, encoding="utf-8") as fh:
        return parse_machine(fh.read())


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def machine_to_dot(m: MealyMachine) -> str:
    lines = ["digraph machine {"]
    for i in range(len(m)):
        name = m.state_name(i)
        shape = "doublecircle" if i in m.roots else "circle"
        label = f"{name} / {m.outputs[i].to_cycles()}"
        lines.append(f"  {_dot_quote(name)} [shape={shape} label={_dot_quote(label)}];")
    for i in range(len(m)):
        for x, c in enumerate(m.children[i]):
            lines.append(f"  {_dot_quote(m.state_name(i))} -> {_dot_quote(m.state_name(c))}"
                         f" [label={_dot_quote(str(x + 1))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def act(a: TreeAutomorphism, w: Sequence[int]) -> tuple[int, ...]:
    return a.act(w)


def section(a: TreeAutomorphism, w: Sequence[int]) -> TreeAutomorphism:
    return a.section(w)


def compose(a: TreeAutomorphism, b: TreeAutomorphism) -> TreeAutomorphism:
    return a * b


def inverse(a: TreeAutomorphism) -> TreeAutomorphism:
    return a.inverse()


def from_recursion(degree: int, spec: Mapping[str, tuple[Sequence[str], str]]) -> MealyMachine:
    """Quick explicit machine: ``{"t": (["e", "t"], "(1 2)")}``; ``e`` is implicit."""
    names = list(spec)
    if "e" not in spec:
        names.append("e")
    idx = {n: i for i, n in enumerate(names)}
    outputs, children = [], []
    for n in names:
        if n == "e" and "e" not in spec:
            outputs.append(Perm.identity(degree))
            children.append((idx["e"],) * degree)
            continue
        kids, cyc = spec[n]
        outputs.append(Perm.from_cycles(cyc, degree))
        children.append(tuple(idx[k] for k in kids))
    roots = tuple(idx[n] for n in spec if n != "e")
    return MealyMachine(degree, outputs, children, tuple(names), roots)
