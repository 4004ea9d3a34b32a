"""G-data and the Kaloujnine-Krasner self-similar representation.

A :class:`GData` is a list of parts ``(H_i, f_i)``: a subgroup oracle with a
right transversal and a virtual endomorphism ``f_i: H_i -> G``.  Letters of
the tree are the transversal slots of all parts, concatenated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Sequence

from .automata import Exceeded, StateSystem, TreeAutomorphism, default_limit
from .groups import (
    AbelianBase,
    AmbientGroup,
    LabelOracle,
    ProductGroup,
    SplitElement,
    SplitGroup,
    ZZ,
    trivial_labels,
)
from .perm import Perm


@dataclass(frozen=True, eq=False)
class SubgroupOracle:
    """A finite-index subgroup ``H`` given by a right transversal.

    ``coset_index(g)`` returns the 0-based ``j`` with ``H t_j = H g``;
    ``transversal[0]`` must represent ``H`` itself.
    """

    transversal: tuple
    coset_index: Callable[[Hashable], int]
    generators: tuple = ()
    name: str = ""

    @property
    def index(self) -> int:
        return len(self.transversal)

    def contains(self, g) -> bool:
        return self.coset_index(g) == 0


def whole_group(group: AmbientGroup, name: str = "G") -> SubgroupOracle:
    return SubgroupOracle((group.identity,), lambda g: 0, tuple(group.generators.values()), name)


@dataclass(frozen=True, eq=False)
class Part:
    subgroup: SubgroupOracle
    endo: Callable
    name: str = ""


@dataclass(frozen=True, eq=False)
class GData:
    ambient: AmbientGroup
    parts: tuple
    trivial_parabolic: bool = False
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("G-data needs at least one part")
        if self.degree < 2:
            raise ValueError("G-data must have degree at least 2")

    @property
    def degree(self) -> int:
        return sum(p.subgroup.index for p in self.parts)

    @property
    def orbit_type(self) -> tuple:
        return tuple(p.subgroup.index for p in self.parts)

    @cached_property
    def slots(self) -> tuple:
        """``(part, j)`` for every letter, 0-based."""
        return tuple((i, j) for i, p in enumerate(self.parts) for j in range(p.subgroup.index))

    @cached_property
    def offsets(self) -> tuple:
        return tuple(itertools.accumulate([0] + [p.subgroup.index for p in self.parts[:-1]]))

    @cached_property
    def system(self) -> "GDataSystem":
        return GDataSystem(self)

    def element(self, name: str):
        return self.ambient.gen(name)


def schreier(gd: GData, i: int, g, t) -> tuple:
    """``theta_i(g, t) = t g t_k^-1`` with ``H_i t_k = H_i t g``; returns ``(theta, k)``.

    ``i`` and ``k`` are 0-based.
    """
    sub = gd.parts[i].subgroup
    G = gd.ambient
    if t not in sub.transversal:
        raise ValueError("t is not a transversal element of this part")
    tg = G.mul(t, g)
    k = sub.coset_index(tg)
    return G.mul(tg, G.inv(sub.transversal[k])), k


class GDataSystem(StateSystem):
    """Lazy state system whose states are ambient elements (normal forms)."""

    def __init__(self, gd: GData):
        self.gd = gd
        self.degree = gd.degree
        self._act: dict = {}
        self._sec: dict = {}

    def _expand(self, g):
        hit = self._act.get(g)
        if hit is not None:
            return hit, self._sec[g]
        gd, G = self.gd, self.gd.ambient
        images, secs = [], []
        for (i, part), off in zip(enumerate(gd.parts), gd.offsets):
            for t in part.subgroup.transversal:
                theta, k = schreier(gd, i, g, t)
                images.append(off + k)
                secs.append(G.normal_form(part.endo(theta)))
        perm = Perm(tuple(images))
        # setdefault keeps one canonical entry under concurrent materialization
        secs = self._sec.setdefault(g, tuple(secs))
        return self._act.setdefault(g, perm), secs

    def activity(self, state) -> Perm:
        return self._expand(state)[0]

    def section(self, state, letter0: int):
        s = self._expand(state)[1][letter0]
        return () if self.is_identity(s) else ((s, 1),)

    def is_identity(self, state) -> bool:
        return state == self.gd.ambient.identity

    def state_name(self, state) -> str:
        return repr(state)

    def element_sections(self, g) -> tuple:
        return self._expand(self.gd.ambient.normal_form(g))[1]


def represent(gd: GData, g) -> TreeAutomorphism:
    """The automorphism induced on the tree by the ambient element ``g``."""
    g = gd.ambient.normal_form(g)
    word = () if gd.system.is_identity(g) else ((g, 1),)
    return TreeAutomorphism(gd.system, word)


def explore_finite_state(gd: GData, g, limit: int | None = None):
    """Section closure of ``g`` inside the ambient group, or ``Exceeded``."""
    limit = default_limit() if limit is None else limit
    G, system = gd.ambient, gd.system
    start = G.normal_form(g)
    seen = {start}
    todo = [start]
    while todo:
        h = todo.pop()
        for s in system.element_sections(h):
            if s not in seen:
                seen.add(s)
                if len(seen) > limit:
                    return Exceeded(limit)
                todo.append(s)
    return frozenset(seen)


def restrict(gd: GData, i: int, sub: SubgroupOracle) -> GData:
    """Replace part ``i`` (0-based) by the subgroup ``K <= H_i`` given by ``sub``.

    ``sub`` indexes cosets of ``K`` inside ``H_i``; the new transversal is
    ``{l t}`` with ``l`` in the transversal of ``K`` in ``H_i``.
    """
    G = gd.ambient
    old = gd.parts[i]
    outer = old.subgroup
    m = outer.index
    for l in sub.transversal:
        if not outer.contains(l):
            raise ValueError("the restricting subgroup must lie inside H_i")

    def coset_index(g, outer=outer, sub=sub, m=m):
        a = outer.coset_index(g)
        b = sub.coset_index(G.mul(g, G.inv(outer.transversal[a])))
        return b * m + a

    trans = tuple(G.mul(l, t) for l in sub.transversal for t in outer.transversal)
    oracle = SubgroupOracle(trans, coset_index, sub.generators, sub.name or f"{outer.name}'")
    parts = list(gd.parts)
    parts[i] = Part(oracle, old.endo, f"{old.name}|" if old.name else "")
    return GData(G, parts, gd.trivial_parabolic)


# ---------------------------------------------------------------------------
# direct powers


def product_oracle(sub: SubgroupOracle, s: int, group: ProductGroup | None = None,
                   order: Sequence[Sequence[int]] | None = None) -> SubgroupOracle:
    """``H^s`` in ``G^s`` with transversal ``T x ... x T``.

    By default coordinate 1 varies fastest; ``order`` lists 0-based index
    tuples to fix another enumeration (it must start with ``(0, ..., 0)``).
    """
    m = sub.index
    if order is None:
        combos = [tuple(reversed(c)) for c in itertools.product(range(m), repeat=s)]
    else:
        combos = [tuple(c) for c in order]
        if sorted(combos) != sorted(itertools.product(range(m), repeat=s)):
            raise ValueError("order must enumerate every index tuple exactly once")
        if any(combos[0]):
            raise ValueError("order must start with the identity tuple")
    where = {c: n for n, c in enumerate(combos)}
    trans = tuple(tuple(sub.transversal[j] for j in c) for c in combos)
    ident = sub.transversal[0]
    gens = []
    for i in range(s):
        for h in sub.generators:
            v = [ident] * s
            v[i] = h
            gens.append(tuple(v))
    return SubgroupOracle(
        trans,
        lambda g: where[tuple(sub.coset_index(x) for x in g)],
        tuple(gens),
        f"{sub.name}^{s}",
    )


def _coordinatewise(endos: Sequence[Callable]) -> Callable:
    endos = tuple(endos)
    return lambda h: tuple(f(x) for f, x in zip(endos, h))


def rotate(g: tuple) -> tuple:
    """``(g_1, ..., g_s) -> (g_s, g_1, ..., g_{s-1})``."""
    return (g[-1],) + tuple(g[:-1])


def rotate_left(g: tuple) -> tuple:
    """``(g_1, ..., g_s) -> (g_2, ..., g_s, g_1)``."""
    return tuple(g[1:]) + (g[0],)


def _shared_subgroup(gd: GData) -> SubgroupOracle:
    first = gd.parts[0].subgroup
    for p in gd.parts[1:]:
        q = p.subgroup
        if q is first:
            continue
        if q.transversal != first.transversal or any(
            q.coset_index(t) != first.coset_index(t) for t in first.transversal
        ):
            raise ValueError("all parts must share the same subgroup")
    return first


def cyclic_endos(gd: GData, j: int) -> tuple:
    """Endomorphisms assigned to coordinates in the ``j``-th shifted part (0-based)."""
    s = len(gd.parts)
    return tuple(gd.parts[(i + j) % s].endo for i in range(s))


def power_data(gd: GData, s: int | None = None, variant: str = "cyclic",
               order: Sequence[Sequence[int]] | None = None) -> GData:
    """Data for ``G^s`` from data ``((m,...,m), (H,...,H), (f_1,...,f_s))``.

    ``cyclic``: ``s`` parts over ``H^s``, part ``j`` applying the endomorphisms
    cyclically shifted by ``j``.  ``shift``: parts ``(H^s, rho)`` and
    ``(G^s, tau)`` with ``tau`` the coordinate rotation.
    """
    s = len(gd.parts) if s is None else s
    if s != len(gd.parts):
        raise ValueError(f"data has {len(gd.parts)} parts, expected {s}")
    H = _shared_subgroup(gd)
    P = ProductGroup(gd.ambient, s)
    Hs = product_oracle(H, s, P, order)
    if variant == "cyclic":
        parts = [Part(Hs, _coordinatewise(cyclic_endos(gd, j)), f"rho{j + 1}") for j in range(s)]
    elif variant == "shift":
        parts = [Part(Hs, _coordinatewise(cyclic_endos(gd, 0)), "rho"),
                 Part(whole_group(P), rotate, "tau")]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return GData(P, parts, gd.trivial_parabolic)


# ---------------------------------------------------------------------------
# refinement to trivial parabolic data


def refine(gd: GData, core: SubgroupOracle, dedupe: bool = True) -> GData:
    """Conjugated endomorphisms ``h -> f_i(t^-1 h t)`` over a normal core.

    ``core`` must be normal in ``G`` and contained in every ``H_i``; both are
    spot-checked on generators.  With ``dedupe``, parts whose endomorphisms
    agree on the core generators are kept once.
    """
    G = gd.ambient
    gens = list(G.generators.values())
    for c in core.generators:
        for g in gens:
            for h in (g, G.inv(g)):
                if not core.contains(G.conj(c, h)):
                    raise ValueError("core is not normal: conjugate of a generator escapes")
        for p in gd.parts:
            if not p.subgroup.contains(c):
                raise ValueError("core is not contained in every H_i")
    parts: list[Part] = []
    seen: list[tuple] = []
    for p in gd.parts:
        for n, t in enumerate(core.transversal):
            ti = G.inv(t)

            def endo(h, f=p.endo, t=t, ti=ti):
                return f(G.prod(ti, h, t))

            sig = tuple(G.normal_form(endo(c)) for c in core.generators)
            if dedupe and core.generators and sig in seen:
                continue
            seen.append(sig)
            parts.append(Part(core, endo, f"{p.name}^t{n + 1}" if p.name else ""))
    return GData(G, parts, trivial_parabolic=True)


# ---------------------------------------------------------------------------
# wreath extensions


def _rho(group: SplitGroup, H: SubgroupOracle, endos: Sequence[Callable]) -> Callable:
    """Lamps with all label coordinates in ``H`` are relabelled by ``f_i``;
    the rest are dropped.  The top is mapped coordinatewise."""
    labels = group.labels
    endos = tuple(endos)
    top = _coordinatewise(endos)
    base = group.base

    def rho(el: SplitElement) -> SplitElement:
        coords: dict = {}
        for label, value in el.coords:
            if all(H.contains(p) for p in label):
                new = tuple(lab.label(f(p)) for lab, f, p in zip(labels, endos, label))
                coords[new] = base.add(coords.get(new, base.zero), value)
        return group._pack(coords, top(el.top))

    return rho


def _mu(group: SplitGroup, image, rank_index: int = 0) -> Callable:
    top = group.top

    def mu(el: SplitElement) -> SplitElement:
        n = group.coord_sum(el)[rank_index]
        return SplitElement((), top.power(image, n))

    return mu


def _check_labels(gd: GData, H: SubgroupOracle, labels: Sequence[LabelOracle], assignments) -> None:
    G = gd.ambient
    for coord, lab in enumerate(labels):
        base = lab.label(G.identity)
        for h in lab.generators:
            if not H.contains(h):
                raise ValueError(f"label subgroup of coordinate {coord + 1} is not inside H")
            for endos in assignments:
                if lab.label(endos[coord](h)) != base:
                    raise ValueError(
                        f"relabelling is not well defined: coordinate {coord + 1} label subgroup "
                        "is not invariant under its assigned endomorphism"
                    )


def _label_list(labels, s: int, G: AmbientGroup) -> tuple:
    if labels is None:
        return (trivial_labels(G),) * s
    if isinstance(labels, LabelOracle):
        return (labels,) * s
    labels = tuple(labels)
    if len(labels) != s:
        raise ValueError("one label oracle per coordinate is required")
    return labels


def _mu_image(top: ProductGroup, mu_image):
    if mu_image is not None:
        return top.normal_form(tuple(mu_image))
    if top.infinite_order_witness is None:
        raise ValueError("ambient group declares no infinite-order element for mu")
    return top.infinite_order_witness


def theorem_b_extend(gd: GData, base: AbelianBase, labels=None, mu_image=None,
                     order: Sequence[Sequence[int]] | None = None,
                     lamp_names: Sequence[str] = ("b",)) -> GData:
    """Data for ``B^((H_w1\\G) x ... x (H_ws\\G)) x| G^s``.

    Finite ``B``: ``s`` parts over ``H_cal`` with transversal ``B_dot x T^s``
    (index ``|B| m^s``).  ``B = Z``: ``s`` parts of index ``m^s`` plus one part
    ``(G_cal, mu)``.  Part ``j`` relabels coordinate ``i`` by ``f_{i+j}``
    (indices mod ``s``).
    """
    s = len(gd.parts)
    G = gd.ambient
    H = _shared_subgroup(gd)
    labels = _label_list(labels, s, G)
    assignments = [cyclic_endos(gd, j) for j in range(s)]
    _check_labels(gd, H, labels, assignments)
    top = ProductGroup(G, s)
    group = SplitGroup(top, labels, base, lamp_names)
    Hs = product_oracle(H, s, top, order)
    m_s = Hs.index
    lamp_gens = [group.lamp(group.basepoint, base.unit(i)) for i in range(len(base.moduli))]
    top_gens = [group.from_top(h) for h in Hs.generators]

    if base.rank == 0:
        elems = base.elements()
        where = {b: n for n, b in enumerate(elems)}
        trans = tuple(group.mul(group.lamp(group.basepoint, b), group.from_top(t))
                      for b in elems for t in Hs.transversal)

        def coset_index(el):
            return where[group.coord_sum(el)] * m_s + Hs.coset_index(el.top)

        gens = tuple(top_gens)
        for lg in lamp_gens:
            for name, g in top.generators.items():
                gens += (group.comm(lg, group.from_top(g)),)
        Hcal = SubgroupOracle(trans, coset_index, gens, "Hcal")
        parts = [Part(Hcal, _rho(group, H, endos), f"rho{j + 1}") for j, endos in enumerate(assignments)]
    elif base.moduli == (0,):
        trans = tuple(group.from_top(t) for t in Hs.transversal)
        Hcal = SubgroupOracle(trans, lambda el: Hs.coset_index(el.top),
                              tuple(lamp_gens + top_gens), "Hcal")
        parts = [Part(Hcal, _rho(group, H, endos), f"rho{j + 1}") for j, endos in enumerate(assignments)]
        parts.append(Part(whole_group(group, "Gcal"), _mu(group, _mu_image(top, mu_image)), "mu"))
    else:
        raise ValueError("base must be finite or Z; combine bases with concat")
    return GData(group, parts, trivial_parabolic=False)


def theorem_c_extend(gd: GData, s: int | None = None, base: AbelianBase = ZZ, mu_image=None,
                     order: Sequence[Sequence[int]] | None = None,
                     lamp_names: Sequence[str] = ("a",)) -> GData:
    """Data ``((m^s, 1, 1), (H_cal, G_cal, G_cal), (rho, tau, mu))``.

    Requires trivial parabolic data, so coset labels are ambient elements.
    ``tau`` rotates ``(g_1, ..., g_s)`` to ``(g_2, ..., g_s, g_1)`` (and the
    lamp labels alike); ``mu`` sends lamps to powers of ``mu_image``.
    """
    if not gd.trivial_parabolic:
        raise ValueError("data must be flagged trivial_parabolic (run refine first)")
    s = len(gd.parts) if s is None else s
    if s != len(gd.parts):
        raise ValueError(f"data has {len(gd.parts)} parts, expected {s}")
    if base.torsion or base.rank > 1:
        raise ValueError("base must be Z or trivial; combine bases with concat")
    G = gd.ambient
    H = _shared_subgroup(gd)
    top = ProductGroup(G, s)
    labels = (trivial_labels(G),) * s
    group = SplitGroup(top, labels, base, lamp_names)
    Hs = product_oracle(H, s, top, order)
    lamp_gens = [group.lamp(group.basepoint, base.unit(i)) for i in range(len(base.moduli))]
    trans = tuple(group.from_top(t) for t in Hs.transversal)
    Hcal = SubgroupOracle(trans, lambda el: Hs.coset_index(el.top),
                          tuple(lamp_gens + [group.from_top(h) for h in Hs.generators]), "Hcal")
    rho = _rho(group, H, cyclic_endos(gd, 0))

    def tau(el: SplitElement) -> SplitElement:
        coords = {rotate_left(label): v for label, v in el.coords}
        return group._pack(coords, rotate_left(el.top))

    if base.is_trivial:
        image = top.identity

        def mu(el):
            return group.identity
    else:
        image = _mu_image(top, mu_image)
        mu = _mu(group, image)
    Gcal = whole_group(group, "Gcal")
    parts = [Part(Hcal, rho, "rho"), Part(Gcal, tau, "tau"), Part(Gcal, mu, "mu")]
    return GData(group, parts, trivial_parabolic=False)


def diagonal_embed(ext: GData, g, lamps: dict | None = None) -> SplitElement:
    """``delta``: the element ``(sum_P v_P a^P) g`` of ``Z wr G`` sent to its
    diagonal copy; ``lamps`` maps ambient elements of ``G`` to values."""
    group = ext.ambient
    if not isinstance(group, SplitGroup):
        raise TypeError("diagonal_embed needs extension data")
    s = group.top.s
    coords: dict = {}
    for p, v in (lamps or {}).items():
        value = v if isinstance(v, tuple) else (v,) + (0,) * (len(group.base.moduli) - 1)
        label = group.label_of((p,) * s)
        coords[label] = group.base.add(coords.get(label, group.base.zero), value)
    return group._pack(coords, (g,) * s)


# ---------------------------------------------------------------------------
# concatenation


def concat(gd1: GData, gd2: GData) -> GData:
    """Data for ``(A_1 + A_2) x| U`` from data for ``A_1 x| U`` and ``A_2 x| U``."""
    g1, g2 = gd1.ambient, gd2.ambient
    if not (isinstance(g1, SplitGroup) and isinstance(g2, SplitGroup)):
        raise TypeError("concat needs split-group data on both sides")
    same_top = g1.top is g2.top or (
        g1.top.s == g2.top.s
        and g1.top.identity == g2.top.identity
        and {k: v for k, v in g1.top.generators.items()} == dict(g2.top.generators)
    )
    same_labels = all(
        a is b or all(a.label(g) == b.label(g) for g in g1.top.factor.generators.values())
        for a, b in zip(g1.labels, g2.labels)
    )
    if not (same_top and same_labels):
        raise ValueError("operands are not over the same top group")
    k1 = len(g1.base.moduli)
    names = tuple(g1.lamp_names) + tuple(g2.lamp_names)
    if len(set(names)) != len(names):
        names = (names[0][:1] or "a",)
    group = SplitGroup(g1.top, g1.labels, g1.base + g2.base, names)
    pad1 = (0,) * len(g2.base.moduli)
    pad0 = (0,) * k1

    def project(el, which):
        coords = {}
        for label, v in el.coords:
            w = v[:k1] if which == 0 else v[k1:]
            if any(w):
                coords[label] = w
        src = g1 if which == 0 else g2
        return src._pack(coords, el.top)

    def embed(el, which):
        coords = {label: (v + pad1 if which == 0 else pad0 + v) for label, v in el.coords}
        return group._pack(coords, el.top)

    parts = []
    for which, gd in ((0, gd1), (1, gd2)):
        for p in gd.parts:
            sub = p.subgroup
            oracle = SubgroupOracle(
                tuple(embed(t, which) for t in sub.transversal),
                lambda el, sub=sub, which=which: sub.coset_index(project(el, which)),
                tuple(embed(h, which) for h in sub.generators),
                sub.name,
            )
            parts.append(Part(oracle, lambda el, f=p.endo, which=which: embed(f(project(el, which)), which),
                              p.name))
    return GData(group, parts, trivial_parabolic=False)
