"""Shared fixtures-as-functions for the test modules."""
from __future__ import annotations

import itertools
import random

from treeperm.automata import from_recursion


def zwrz3():
    m = from_recursion(3, {"gamma": (["gamma", "e", "alpha"], "id"), "alpha": (["e", "alpha", "e"], "(1 2)")})
    return m.element("gamma"), m.element("alpha")


def odometer():
    return from_recursion(2, {"t": (["e", "t"], "(1 2)")}).element("t")


def all_words(m: int, max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(range(1, m + 1), repeat=n)


def random_word(rng: random.Random, gens: list, max_len: int):
    """Product of random generators and inverses of length ``<= max_len``."""
    out = None
    for _ in range(rng.randint(0, max_len)):
        g = rng.choice(gens)
        g = g if rng.random() < 0.5 else g.inverse()
        out = g if out is None else out * g
    return out if out is not None else gens[0].identity()


def reduced_words(names: list[str], max_len: int):
    """All freely reduced words over ``names`` and inverses, as (name, ±1) tuples."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for n in names:
                for k in (1, -1):
                    if w and w[-1] == (n, -k):
                        continue
                    nxt.append(w + ((n, k),))
        out += nxt
        frontier = nxt
    return out
