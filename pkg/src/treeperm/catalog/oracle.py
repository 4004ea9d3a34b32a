"""Brute-force restricted wreath products, independent of the automata engine.

Law: ``(f1, t1)(f2, t2) = (f1 + t1.f2, t1 t2)`` with ``(t.f)(g) = f(g t)``,
so a lamp at ``p`` is carried to ``p t^-1``. This is a left action for any
top group, and it makes ``t^-1 a t`` the lamp at ``t``.
"""
from __future__ import annotations

from typing import NamedTuple


class Integers:
    """The infinite cyclic group, written additively as ints."""

    identity = 0

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a

    def generators(self) -> dict:
        return {"t": 1}


class WreathOracleElement(NamedTuple):
    lamps: tuple  # sorted ((base element, value), ...), zero values pruned
    top: object


class WreathOracle:
    """``A wr G`` with ``A = Z`` (``modulus=0``) or ``Z/modulus``."""

    def __init__(self, base, modulus: int = 0, lamp: str = "a", tops: dict | None = None):
        self.base, self.modulus = base, modulus
        self.identity = WreathOracleElement((), base.identity)
        self.named = {lamp: WreathOracleElement(((base.identity, 1),), base.identity)}
        for name, g in (tops or base.generators()).items():
            self.named[name] = WreathOracleElement((), base.named[g] if isinstance(g, str) else g)

    def generators(self) -> dict:
        return dict(self.named)

    def _value(self, v: int) -> int:
        return v % self.modulus if self.modulus else v

    def mul(self, a: WreathOracleElement, b: WreathOracleElement) -> WreathOracleElement:
        G = self.base
        acc = dict(a.lamps)
        ti = G.inv(a.top)
        for p, v in b.lamps:
            q = G.mul(p, ti)
            w = self._value(acc.get(q, 0) + v)
            if w:
                acc[q] = w
            else:
                acc.pop(q, None)
        return WreathOracleElement(tuple(sorted(acc.items())), G.mul(a.top, b.top))

    def inv(self, a: WreathOracleElement) -> WreathOracleElement:
        G = self.base
        acc = {}
        for p, v in a.lamps:
            w = self._value(-v)
            if w:
                acc[G.mul(p, a.top)] = w
        return WreathOracleElement(tuple(sorted(acc.items())), G.inv(a.top))

    def is_identity(self, a: WreathOracleElement) -> bool:
        return a == self.identity

    def evaluate(self, word, images: dict) -> WreathOracleElement:
        """Product of ``(name, exponent)`` pairs under ``images``."""
        out = self.identity
        for name, k in word:
            g = images[name]
            if k < 0:
                g = self.inv(g)
            for _ in range(abs(k)):
                out = self.mul(out, g)
        return out


def z_wr_z() -> WreathOracle:
    """``Z wr Z`` generated by the lamp ``y`` and the top ``x``."""
    return WreathOracle(Integers(), 0, "y", {"x": 1})


def z_wr_z_wr_z() -> WreathOracle:
    """``Z wr (Z wr Z)`` generated by the lamp ``a`` and ``y``, ``x`` on top."""
    inner = z_wr_z()
    return WreathOracle(inner, 0, "a", inner.generators())


def c2_wr_z() -> WreathOracle:
    return WreathOracle(Integers(), 2, "a", {"x": 1})
