"""Ambient groups with canonical, hashable elements.

Every element is its own normal form (nested tuples of ints), so
``normal_form`` is the identity and elements can key memo tables directly.
Conjugation is ``g^h = h^-1 g h`` and commutators are ``[g, h] = g^-1 h^-1 g h``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence


class AmbientGroup:
    """Interface for the abstract groups G-data is built over."""

    identity: Hashable
    generators: dict
    infinite_order_witness = None

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def normal_form(self, g):
        return g

    def prod(self, *elements):
        out = self.identity
        for g in elements:
            out = self.mul(out, g)
        return out

    def power(self, g, n: int):
        base = g if n >= 0 else self.inv(g)
        out = self.identity
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out

    def conj(self, g, h):
        return self.prod(self.inv(h), g, h)

    def comm(self, g, h):
        return self.prod(self.inv(g), self.inv(h), g, h)

    def gen(self, name: str):
        return self.generators[name]


# ---------------------------------------------------------------------------
# lamplighters over the integers


def _add_lamps(a: dict, lamps: Iterable[tuple[int, int]], order: int, shift: int = 0, sign: int = 1) -> None:
    for pos, val in lamps:
        p = pos + shift
        v = a.get(p, 0) + sign * val
        if order:
            v %= order
        if v:
            a[p] = v
        else:
            a.pop(p, None)


class Lamplighter(AmbientGroup):
    """``C_order wr Z`` (``order=0`` gives ``Z wr Z``).

    Elements are ``(lamps, top)`` with ``lamps`` a sorted tuple of
    ``(position, value)``; the lamp at position ``n`` is ``lamp^(x^n)``.
    """

    def __init__(self, order: int = 0, lamp: str = "y", top: str = "x"):
        self.order = order
        self.lamp_name, self.top_name = lamp, top
        self.identity = ((), 0)
        self.generators = {lamp: (((0, 1),), 0), top: ((), 1)}
        self.infinite_order_witness = self.generators[top]

    @staticmethod
    def _pack(lamps: dict, top: int):
        return (tuple(sorted(lamps.items())), top)

    def element(self, lamps: dict | None = None, top: int = 0):
        out: dict = {}
        _add_lamps(out, (lamps or {}).items(), self.order)
        return self._pack(out, top)

    def mul(self, g, h):
        out = dict(g[0])
        _add_lamps(out, h[0], self.order, shift=-g[1])
        return self._pack(out, g[1] + h[1])

    def inv(self, g):
        out: dict = {}
        _add_lamps(out, g[0], self.order, shift=g[1], sign=-1)
        return self._pack(out, -g[1])

    def lamp_sum(self, g) -> int:
        s = sum(v for _, v in g[0])
        return s % self.order if self.order else s

    def __repr__(self):
        base = f"C{self.order}" if self.order else "Z"
        return f"Lamplighter({base} wr Z)"


class ProductGroup(AmbientGroup):
    """Direct power ``G^s``; generator ``g`` of coordinate ``i`` is named ``g<i>``."""

    def __init__(self, factor: AmbientGroup, s: int):
        if s < 1:
            raise ValueError("s must be positive")
        self.factor, self.s = factor, s
        self.identity = (factor.identity,) * s
        self.generators = {}
        for i in range(s):
            for name, g in factor.generators.items():
                self.generators[f"{name}{i + 1}"] = self.embed(i, g)
        w = factor.infinite_order_witness
        self.infinite_order_witness = None if w is None else (w,) * s

    def embed(self, i: int, g):
        out = list(self.identity)
        out[i] = g
        return tuple(out)

    def diagonal(self, g):
        return (g,) * self.s

    def mul(self, g, h):
        f = self.factor
        return tuple(f.mul(a, b) for a, b in zip(g, h))

    def inv(self, g):
        return tuple(self.factor.inv(a) for a in g)

    def __repr__(self):
        return f"ProductGroup({self.factor!r}, {self.s})"


# ---------------------------------------------------------------------------
# abelian coordinate groups and split extensions


@dataclass(frozen=True)
class AbelianBase:
    """``Z^l x C_n1 x ...`` stored as per-component moduli (0 means Z)."""

    moduli: tuple = (0,)

    @classmethod
    def of(cls, rank: int = 0, torsion: Sequence[int] = ()) -> "AbelianBase":
        if rank < 0:
            raise ValueError("rank must be non-negative")
        for n in torsion:
            if n < 2:
                raise ValueError("torsion orders must be at least 2")
        return cls((0,) * rank + tuple(torsion))

    @property
    def rank(self) -> int:
        return sum(1 for n in self.moduli if n == 0)

    @property
    def torsion(self) -> tuple:
        return tuple(n for n in self.moduli if n)

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.moduli)

    @property
    def is_trivial(self) -> bool:
        return not self.moduli

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for n in self.moduli:
            out *= n
        return out

    def reduce(self, v: Sequence[int]) -> tuple:
        return tuple(x % n if n else x for x, n in zip(v, self.moduli))

    def add(self, u, v) -> tuple:
        return self.reduce(a + b for a, b in zip(u, v))

    def scale(self, v, k: int) -> tuple:
        return self.reduce(k * a for a in v)

    def unit(self, i: int = 0) -> tuple:
        v = [0] * len(self.moduli)
        v[i] = 1
        return tuple(v)

    def elements(self) -> list[tuple]:
        """All elements of a finite base, first component varying fastest."""
        if self.rank:
            raise ValueError("base is infinite")
        combos = itertools.product(*[range(n) for n in reversed(self.moduli)])
        return [tuple(reversed(c)) for c in combos]

    def __add__(self, other: "AbelianBase") -> "AbelianBase":
        return AbelianBase(self.moduli + other.moduli)


ZZ = AbelianBase.of(1)
TRIVIAL_BASE = AbelianBase(())


class LabelOracle:
    """Right cosets ``H_w g`` of a coordinate group, labelled canonically.

    ``label(g)`` must return a canonical representative of ``H_w g``;
    ``generators`` generate ``H_w`` (used for invariance spot checks).
    """

    def __init__(self, label: Callable, generators: Sequence = (), name: str = ""):
        self.label = label
        self.generators = tuple(generators)
        self.name = name

    def __repr__(self):
        return f"LabelOracle({self.name or self.label!r})"


def trivial_labels(group: AmbientGroup) -> LabelOracle:
    """Labels for the trivial subgroup: every element is its own coset."""
    return LabelOracle(lambda g: g, (), "trivial")


class SplitElement(NamedTuple):
    coords: tuple  # sorted ((label_tuple, value_vector), ...)
    top: tuple


class SplitGroup(AmbientGroup):
    """``B^((H_1\\G) x ... x (H_s\\G)) x| G^s`` with finitely supported coordinates.

    The lamp at the label tuple ``P`` is conjugated by ``h`` to the lamp at
    ``P h``.
    """

    def __init__(self, top: ProductGroup, labels: Sequence[LabelOracle], base: AbelianBase,
                 lamp_names: Sequence[str] = ("a",)):
        if len(labels) != top.s:
            raise ValueError("one label oracle per coordinate is required")
        self.top, self.labels, self.base = top, tuple(labels), base
        self.identity = SplitElement((), top.identity)
        self.basepoint = self.label_of(top.identity)
        self.generators = {}
        n = len(base.moduli)
        names = list(lamp_names)
        if n > len(names):
            names = [f"{names[0]}{i + 1}" for i in range(n)]
        for i in range(n):
            self.generators[names[i]] = self.lamp(self.basepoint, base.unit(i))
        for name, g in top.generators.items():
            self.generators[name] = SplitElement((), g)
        self.lamp_names = tuple(names[:n])
        self.infinite_order_witness = None

    def label_of(self, g: tuple) -> tuple:
        return tuple(lab.label(x) for lab, x in zip(self.labels, g))

    def lamp(self, label: tuple, value) -> SplitElement:
        value = self.base.reduce(value)
        if not any(value):
            return self.identity
        return SplitElement(((label, value),), self.top.identity)

    def from_top(self, g) -> SplitElement:
        return SplitElement((), g)

    def _pack(self, coords: dict, top) -> SplitElement:
        return SplitElement(tuple(sorted((k, v) for k, v in coords.items() if any(v))), top)

    def shift(self, coords: Iterable, g) -> dict:
        """Coordinates conjugated by ``g``: the lamp at ``P`` moves to ``P g``."""
        f = self.top.factor
        out: dict = {}
        for label, value in coords:
            new = tuple(lab.label(f.mul(p, x)) for lab, p, x in zip(self.labels, label, g))
            out[new] = self.base.add(out.get(new, self.base.zero), value)
        return out

    def mul(self, g: SplitElement, h: SplitElement) -> SplitElement:
        coords = dict(g.coords)
        if h.coords:
            for label, value in self.shift(h.coords, self.top.inv(g.top)).items():
                coords[label] = self.base.add(coords.get(label, self.base.zero), value)
        return self._pack(coords, self.top.mul(g.top, h.top))

    def inv(self, g: SplitElement) -> SplitElement:
        coords = {k: self.base.scale(v, -1) for k, v in self.shift(g.coords, g.top).items()}
        return self._pack(coords, self.top.inv(g.top))

    def coord_sum(self, g: SplitElement) -> tuple:
        out = self.base.zero
        for _, v in g.coords:
            out = self.base.add(out, v)
        return out

    def __repr__(self):
        return f"SplitGroup(base={self.base.moduli}, top={self.top!r})"
