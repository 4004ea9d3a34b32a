"""Ambient groups and G-data shipped with the catalog."""
from __future__ import annotations

from functools import lru_cache

from ..gdata import (
    GData,
    Part,
    SubgroupOracle,
    refine,
    theorem_b_extend,
    theorem_c_extend,
    whole_group,
)
from ..groups import AbelianBase, Lamplighter, LabelOracle, ZZ

# transversal order of the degree-10 data: bits of the x-exponents per coordinate
W3_ORDER = ((0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 0, 1), (1, 1, 0), (1, 0, 0))


@lru_cache(maxsize=None)
def zwrz_group() -> Lamplighter:
    return Lamplighter(0, "y", "x")


def halve(g):
    """``Z wr Z``: lamps at even positions ``2n`` go to ``n``, odd lamps die,
    the top ``x^2k`` goes to ``x^k``.  Defined on ``<y>^<x> <x^2>``."""
    lamps, k = g
    if k % 2:
        raise ValueError("halve is only defined on elements with even top")
    return zwrz_group().element({p // 2: v for p, v in lamps if p % 2 == 0}, k // 2)


def lamp_total(g):
    """``Z wr Z -> <x>``: the sum of all lamps, as a power of ``x``."""
    return zwrz_group().element({}, zwrz_group().lamp_sum(g))


@lru_cache(maxsize=None)
def zwrz_even() -> SubgroupOracle:
    """``H = <y>^<x> <x^2>``, the elements with even top, transversal ``{e, x}``."""
    G = zwrz_group()
    y, x = G.gen("y"), G.gen("x")
    return SubgroupOracle((G.identity, x), lambda g: g[1] % 2, (y, G.conj(y, x), G.power(x, 2)), "H")


@lru_cache(maxsize=None)
def zwrz_gdata() -> GData:
    """Two parts ``(H, halve)`` and ``(G, lamp_total)``: degree 3."""
    G = zwrz_group()
    return GData(G, [Part(zwrz_even(), halve, "f1"), Part(whole_group(G), lamp_total, "f2")])


@lru_cache(maxsize=None)
def zwrz_refined() -> GData:
    return refine(zwrz_gdata(), zwrz_even())


@lru_cache(maxsize=None)
def w3_gdata() -> GData:
    y = zwrz_group().gen("y")
    e = zwrz_group().identity
    return theorem_c_extend(zwrz_refined(), 3, ZZ, mu_image=(y, e, e), order=W3_ORDER)


# ---------------------------------------------------------------------------
# C2 wr Z


@lru_cache(maxsize=None)
def c2wrz_group() -> Lamplighter:
    return Lamplighter(2, "a", "x")


def unshift(g):
    """``C2 wr Z``: ``[a, x] -> a``, ``x -> x``.

    An even-weight lamp configuration ``L`` is ``(1 + t) C`` for a unique
    ``C``; the image is ``C`` with the same top.
    """
    G = c2wrz_group()
    lamps, k = g
    cfg = dict(lamps)
    out, carry = {}, 0
    if cfg:
        lo, hi = min(cfg), max(cfg)
        for n in range(lo, hi):
            carry = (cfg.get(n, 0) + carry) % 2
            if carry:
                out[n] = 1
        if (cfg.get(hi, 0) + carry) % 2:
            raise ValueError("unshift is only defined on even lamp weight")
    return G.element(out, k)


def unshift_a(g):
    """The conjugate endomorphism ``h -> a f(a h a) a``."""
    G = c2wrz_group()
    a = G.gen("a")
    return G.prod(a, unshift(G.prod(a, g, a)), a)


@lru_cache(maxsize=None)
def c2wrz_even() -> SubgroupOracle:
    """``H = G' <x>``: even lamp weight, transversal ``{e, a}``."""
    G = c2wrz_group()
    a, x = G.gen("a"), G.gen("x")
    return SubgroupOracle((G.identity, a), G.lamp_sum, (G.comm(a, x), x), "H")


@lru_cache(maxsize=None)
def c2wrz_gdata() -> GData:
    H = c2wrz_even()
    return GData(c2wrz_group(), [Part(H, unshift, "f"), Part(H, unshift_a, "f_a")])


def top_label(g):
    """Canonical representative of ``<x> g``: shift the lamps, drop the top."""
    lamps, k = g
    return (tuple(sorted((p + k, v) for p, v in lamps)), 0)


def c2wrz_labels() -> tuple[LabelOracle, LabelOracle]:
    """Coset labels for ``<x>`` and its conjugate ``<x>^a``."""
    G = c2wrz_group()
    a, x = G.gen("a"), G.gen("x")
    first = LabelOracle(top_label, (x,), "<x>")
    second = LabelOracle(lambda g: G.mul(a, top_label(G.mul(a, g))), (G.prod(a, x, a),), "<x>^a")
    return first, second


@lru_cache(maxsize=None)
def c2_ext_gdata() -> GData:
    return theorem_b_extend(c2wrz_gdata(), AbelianBase.of(0, (2,)), lamp_names=("gamma",))


@lru_cache(maxsize=None)
def z_ext_gdata() -> GData:
    G = c2wrz_group()
    return theorem_b_extend(c2wrz_gdata(), ZZ, mu_image=(G.gen("x"), G.identity), lamp_names=("y",))


GDATA = {
    "zwrz": zwrz_gdata,
    "zwrz-refined": zwrz_refined,
    "c2wrz": c2wrz_gdata,
    "w3": w3_gdata,
    "c2-ext": c2_ext_gdata,
    "z-ext": z_ext_gdata,
}
