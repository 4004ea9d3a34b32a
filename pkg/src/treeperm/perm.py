"""Permutations of the letters ``1..m``.

Letters are 1-based at every public boundary; ``Perm.images`` stores the
0-based image of each 0-based point.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Perm:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images!r}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, m: int) -> "Perm":
        return cls(range(m))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Perm":
        """Build from 1-based images: ``images[i-1]`` is where letter i goes."""
        return cls(x - 1 for x in images)

    @classmethod
    def from_cycles(cls, text: str, m: int) -> "Perm":
        """Parse cycle notation such as ``(1 8)(2 7)`` or ``id``."""
        text = text.strip()
        images = list(range(m))
        if text in ("", "id", "()"):
            return cls(images)
        if _CYCLE_RE.sub("", text).strip():
            raise ValueError(f"malformed cycles: {text!r}")
        seen = set()
        for body in _CYCLE_RE.findall(text):
            points = [int(tok) for tok in body.replace(",", " ").split()]
            for p in points:
                if not 1 <= p <= m:
                    raise ValueError(f"point {p} out of range 1..{m}")
                if p in seen:
                    raise ValueError(f"point {p} repeated in {text!r}")
                seen.add(p)
            for a, b in zip(points, points[1:] + points[:1]):
                images[a - 1] = b - 1
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, letter: int) -> int:
        """Image of a 1-based letter."""
        return self.images[letter - 1] + 1

    def __mul__(self, other: "Perm") -> "Perm":
        # left to right: apply self, then other
        o = other.images
        return Perm(o[i] for i in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def to_cycles(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Perm({self.to_cycles()!r}, m={self.degree})"

    __str__ = to_cycles


def compose_all(perms: Iterable[Perm], m: int) -> Perm:
    out = Perm.identity(m)
    for p in perms:
        out = out * p
    return out
