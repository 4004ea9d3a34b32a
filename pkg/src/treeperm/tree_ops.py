"""Re-encodings of the tree: k-inflation and deflation to the binary tree."""
from __future__ import annotations

from functools import cached_property
from typing import Sequence

from .automata import (
    Exceeded,
    StateSystem,
    TreeAutomorphism,
    default_limit,
    explore,
    word_activity,
    word_section,
)
from .perm import Perm


# ---------------------------------------------------------------------------
# inflation


class InflatedSystem(StateSystem):
    """Reads ``k`` levels of a degree-``m`` tree as one letter of degree ``m^k``.

    A block ``y_1 ... y_k`` is the letter ``1 + sum (y_j - 1) m^(k-j)``.
    """

    def __init__(self, base: StateSystem, k: int):
        self.base, self.k = base, k
        self.degree = base.degree ** k
        self._memo: dict = {}

    def _block(self, letter0: int) -> list[int]:
        m, out = self.base.degree, []
        for _ in range(self.k):
            letter0, r = divmod(letter0, m)
            out.append(r)
        return out[::-1]

    def _expand(self, word):
        hit = self._memo.get(word)
        if hit is None:
            m = self.base.degree
            images, secs = [], []
            for n in range(self.degree):
                w, code = word, 0
                for y in self._block(n):
                    code = code * m + word_activity(self.base, w).images[y]
                    w = word_section(self.base, w, y)
                images.append(code)
                secs.append(w)
            hit = self._memo.setdefault(word, (Perm(tuple(images)), tuple(secs)))
        return hit

    def activity(self, state):
        return self._expand(state)[0]

    def section(self, state, letter0):
        w = self._expand(state)[1][letter0]
        return ((w, 1),) if w else ()

    def is_identity(self, state):
        return not state

    def state_name(self, state):
        return "inflate(" + " ".join(self.base.state_name(s) or repr(s) for s, _ in state) + ")"


def block_letter(block: Sequence[int], m: int) -> int:
    """1-based letter of ``Y^k`` encoding the 1-based block ``y_1 ... y_k``."""
    out = 0
    for y in block:
        if not 1 <= y <= m:
            raise ValueError(f"letter {y} out of range 1..{m}")
        out = out * m + (y - 1)
    return out + 1


def blocked(word: Sequence[int], m: int, k: int) -> tuple[int, ...]:
    if len(word) % k:
        raise ValueError("word length must be a multiple of k")
    return tuple(block_letter(word[i:i + k], m) for i in range(0, len(word), k))


def inflate(a: TreeAutomorphism, k: int) -> TreeAutomorphism:
    """The ``k``-inflation of ``a``: same automorphism read over ``Y^k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return a
    system = InflatedSystem(a.system, k)
    return TreeAutomorphism(system, ((a.word, 1),) if a.word else ())


# ---------------------------------------------------------------------------
# encoding trees


class NotRealizable(ValueError):
    """A permutation does not preserve the block structure of an encoding tree."""


class EncodingTree:
    """Full binary tree whose leaves carry the letters ``1..m``.

    Internal nodes are numbered in preorder from 0; a child reference is a
    node number ``>= 0`` or ``-letter`` for a leaf.
    """

    def __init__(self, shape):
        self.children: list[tuple[int, int]] = []
        self.root = self._build(shape)
        letters = sorted(self.leaves(self.root))
        if letters != list(range(1, len(letters) + 1)):
            raise ValueError("leaves must be exactly the letters 1..m")
        if len(letters) < 2:
            raise ValueError("an encoding tree needs at least two leaves")

    def _build(self, shape) -> int:
        if isinstance(shape, int):
            return -shape
        left, right = shape
        n = len(self.children)
        self.children.append((0, 0))
        self.children[n] = (self._build(left), self._build(right))
        return n

    @classmethod
    def parse(cls, text: str) -> "EncodingTree":
        pos = 0

        def skip():
            nonlocal pos
            while pos < len(text) and text[pos].isspace():
                pos += 1

        def expect(ch):
            nonlocal pos
            skip()
            if pos >= len(text) or text[pos] != ch:
                raise ValueError(f"expected {ch!r} at column {pos + 1}")
            pos += 1

        def tree():
            nonlocal pos
            skip()
            if pos < len(text) and text[pos] == "(":
                pos += 1
                left = tree()
                expect(",")
                right = tree()
                expect(")")
                return (left, right)
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            if start == pos:
                raise ValueError(f"expected a letter or '(' at column {pos + 1}")
            return int(text[start:pos])

        shape = tree()
        skip()
        if pos != len(text):
            raise ValueError(f"unexpected text at column {pos + 1}")
        return cls(shape)

    @property
    def degree(self) -> int:
        return len(self.paths)

    @property
    def internal(self) -> range:
        return range(len(self.children))

    def leaves(self, ref: int) -> list[int]:
        if ref < 0:
            return [-ref]
        left, right = self.children[ref]
        return self.leaves(left) + self.leaves(right)

    @cached_property
    def _leafsets(self) -> dict:
        return {n: frozenset(self.leaves(n)) for n in self.internal}

    def leafset(self, ref: int) -> frozenset:
        return frozenset((-ref,)) if ref < 0 else self._leafsets[ref]

    @cached_property
    def paths(self) -> dict[int, tuple[int, ...]]:
        """Root-to-leaf path of each letter (1 = first child, 2 = second)."""
        out: dict = {}

        def walk(ref, path):
            if ref < 0:
                out[-ref] = path
            else:
                for bit, child in enumerate(self.children[ref], 1):
                    walk(child, path + (bit,))

        walk(self.root, ())
        return out

    def depth(self, letter: int) -> int:
        return len(self.paths[letter])

    def to_text(self, ref: int | None = None) -> str:
        ref = self.root if ref is None else ref
        if ref < 0:
            return str(-ref)
        left, right = self.children[ref]
        return f"({self.to_text(left)},{self.to_text(right)})"

    def __repr__(self):
        return f"EncodingTree({self.to_text()})"

    def __eq__(self, other):
        return isinstance(other, EncodingTree) and self.to_text() == other.to_text()

    def __hash__(self):
        return hash(self.to_text())


def realizable(p: Perm, t: EncodingTree) -> dict[int, bool]:
    """Swap flags on internal nodes inducing ``p`` on the leaves.

    Raises ``NotRealizable`` naming the first node where neither keeping nor
    swapping the two subtrees matches ``p``.
    """
    if p.degree != t.degree:
        raise ValueError(f"permutation degree {p.degree} does not match tree degree {t.degree}")
    flags: dict[int, bool] = {}

    def image(ref):
        return frozenset(p(x) for x in t.leafset(ref))

    def match(src: int, dst: int) -> None:
        if src < 0 or dst < 0:
            if not (src < 0 and dst < 0 and p(-src) == -dst):
                raise NotRealizable(f"letter block {sorted(t.leafset(src))} cannot map onto "
                                    f"{sorted(t.leafset(dst))}")
            return
        (sl, sr), (dl, dr) = t.children[src], t.children[dst]
        if image(sl) == t.leafset(dl):
            flags[src] = False
            match(sl, dl)
            match(sr, dr)
        elif image(sl) == t.leafset(dr):
            if len(t.leafset(sl)) != len(t.leafset(sr)):
                raise NotRealizable(f"node {src}: blocks of unequal size cannot swap")
            flags[src] = True
            match(sl, dr)
            match(sr, dl)
        else:
            raise NotRealizable(f"node {src} ({t.to_text(src)}): image of the left block "
                                f"{sorted(image(sl))} is not a block of the target node")

    match(t.root, t.root)
    return flags


def encode_word(w: Sequence[int], t: EncodingTree) -> tuple[int, ...]:
    out: list[int] = []
    for y in w:
        if y not in t.paths:
            raise ValueError(f"letter {y} out of range 1..{t.degree}")
        out.extend(t.paths[y])
    return tuple(out)


class DeflatedSystem(StateSystem):
    """Binary state system with states ``(word, node)`` over a base system."""

    degree = 2

    def __init__(self, base: StateSystem, tree: EncodingTree):
        if base.degree != tree.degree:
            raise ValueError(f"tree has {tree.degree} leaves, machine has degree {base.degree}")
        self.base, self.tree = base, tree
        self._flags: dict = {}

    def flags(self, word) -> dict[int, bool]:
        hit = self._flags.get(word)
        if hit is None:
            p = word_activity(self.base, word)
            try:
                hit = realizable(p, self.tree)
            except NotRealizable as exc:
                raise NotRealizable(f"state {self._name(word)} with activity {p.to_cycles()}: {exc}") from None
            hit = self._flags.setdefault(word, hit)
        return hit

    def _name(self, word) -> str:
        return " ".join((self.base.state_name(s) or repr(s)) + ("" if e > 0 else "^-1") for s, e in word) or "e"

    def activity(self, state):
        word, node = state
        return Perm((1, 0)) if self.flags(word)[node] else Perm((0, 1))

    def section(self, state, bit):
        word, node = state
        child = self.tree.children[node][bit]
        if child >= 0:
            nxt = (word, child)
        else:
            w = word_section(self.base, word, -child - 1)
            if not w:
                return ()
            nxt = (w, self.tree.root)
        return ((nxt, 1),)

    def is_identity(self, state):
        return not state[0]

    def state_name(self, state):
        word, node = state
        base = self._name(word)
        return base if node == self.tree.root else f"{base}@{self.tree.to_text(node)}"


def deflate(a: TreeAutomorphism, t: EncodingTree, limit: int | None = None):
    """Binary automorphism ``d`` with ``encode(a(w)) = d(encode(w))``.

    Every state of ``a`` must have an activity realizable on ``t``; the
    closure is checked up front (``Exceeded`` is returned past ``limit``).
    """
    limit = default_limit() if limit is None else limit
    system = DeflatedSystem(a.system, t)
    found = explore(a.system, [a.word], limit)
    if isinstance(found, Exceeded):
        return found
    for word in found[0]:
        system.flags(word)
    if not a.word:
        return TreeAutomorphism(system, ())
    return TreeAutomorphism(system, (((a.word, t.root), 1),))
