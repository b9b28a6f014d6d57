"""Centroid and relative-centroid maps, and counting verifiers for them.

The space of centroids is always the group itself acting on itself by left
multiplication.  That action is free, so the stabilizer bound is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from rdlab.enumeration import DEFAULT_CAP, ball
from rdlab.errors import BackendMismatch, ContractError, WrongBackend
from rdlab.groups.base import Element, Group, LengthValue
from rdlab.groups.free import FreeGroup, common_prefix
from rdlab.groups.graph_product import APPEND, CANCEL, MERGE, GraphProduct


@dataclass(frozen=True)
class CentroidMap:
    """``co(g, k)``: a center for the triangle ``(1, g, k)``.

    ``raw`` works on payloads and is what the verifiers call.
    """

    group: Group
    raw: Callable
    name: str = "centroid"

    def __call__(self, g: Element, k: Element) -> Element:
        return Element(self.group, self.raw(self.group.check(g).payload,
                                            self.group.check(k).payload))


@dataclass(frozen=True)
class RelativeCentroidMap:
    """``rc(g, k) = (alpha, beta, gamma)``, a triple of group elements."""

    group: Group
    raw: Callable
    name: str = "relative centroid"

    def __call__(self, g: Element, k: Element) -> tuple[Element, Element, Element]:
        a, b, c = self.raw(self.group.check(g).payload, self.group.check(k).payload)
        G = self.group
        return Element(G, a), Element(G, b), Element(G, c)


# ---------------------------------------------------------------- trees

def tree_median(g: Element, k: Element) -> Element:
    """Median of ``(1, g, k)`` in the Cayley tree of a free group."""
    if not isinstance(g.group, FreeGroup):
        raise WrongBackend(f"tree median needs a free group, not {g.group.describe()}")
    g.group.check(k)
    return Element(g.group, common_prefix(g.payload, k.payload))


def median_map(group: FreeGroup) -> CentroidMap:
    if not isinstance(group, FreeGroup):
        raise WrongBackend(f"tree median needs a free group, not {group.describe()}")
    return CentroidMap(group, common_prefix, "tree median")


def product_centroid(*maps: CentroidMap) -> CentroidMap:
    """Coordinatewise centroid on the direct product of the maps' groups.

    The direct product is realized as the complete-graph product.
    """
    if len(maps) < 2:
        raise ValueError("product_centroid needs at least two centroid maps")
    gp = GraphProduct.direct_product(*(m.group for m in maps))
    ids = [m.group.identity_payload for m in maps]
    raws = [m.raw for m in maps]
    n = len(maps)

    def coords(x):
        out = list(ids)
        for v, s in x:
            out[v] = s
        return out

    def raw(x, y):
        cx, cy = coords(x), coords(y)
        return gp.reduce([(v, raws[v](cx[v], cy[v])) for v in range(n)])

    return CentroidMap(gp, raw, " x ".join(m.name for m in maps))


# ------------------------------------------------------ graph products

@dataclass(frozen=True)
class CliqueFactorization:
    """Witness ``g = g1 s1 w``, ``h = w^-1 s2 h1`` for a product ``gh``.

    ``s1`` and ``s2`` live in the clique subgroup of ``clique``; ``q`` is the
    drop in syllable length, ``|C| + 2 * syllable_length(w)``.
    """

    g1: Element
    s1: Element
    w: Element
    s2: Element
    h1: Element
    clique: tuple[int, ...]
    q: int

    def violations(self, g: Element, h: Element) -> list[str]:
        """Every type invariant that fails for the pair ``(g, h)``."""
        gp = g.group
        lam = lambda x: len(x.payload)  # noqa: E731
        out = []
        C = self.clique
        if not gp.is_clique(C):
            out.append(f"{C} is not a clique")
        if self.g1 * self.s1 * self.w != g:
            out.append("g1 s1 w != g")
        elif lam(g) != lam(self.g1) + lam(self.s1) + lam(self.w):
            out.append("g = g1 s1 w is not a factorization")
        if ~self.w * self.s2 * self.h1 != h:
            out.append("w^-1 s2 h1 != h")
        elif lam(h) != lam(self.w) + lam(self.s2) + lam(self.h1):
            out.append("h = w^-1 s2 h1 is not a factorization")
        for name, s in (("s1", self.s1), ("s2", self.s2)):
            if not gp.in_subgroup(s, C):
                out.append(f"{name} is not in the clique subgroup of {C}")
        s = self.s1 * self.s2
        if not lam(self.s1) == lam(self.s2) == lam(s) == len(C):
            out.append("syllable lengths of s1, s2, s1 s2 differ from |C|")
        if self.q != len(C) + 2 * lam(self.w):
            out.append("q != |C| + 2 lambda(w)")
        if lam(g * h) != lam(g) + lam(h) - self.q:
            out.append("lambda(gh) != lambda(g) + lambda(h) - q")
        return out


def _factor_payloads(gp: GraphProduct, gx: tuple, hx: tuple):
    """Instrumented computation of ``g h``; see :func:`clique_factorize`."""
    word = [(v, s, i) for i, (v, s) in enumerate(gx)]
    g_status = ["keep"] * len(gx)
    h_status = []
    for j, (v, y) in enumerate(hx):
        kind, idx, old = gp._absorb(word, v, y)
        if kind == APPEND:
            word[idx] = (v, y, None)
            h_status.append("keep")
            continue
        i = old[2]
        if i is None:
            raise ContractError("a syllable of h interacted with another syllable of h; "
                                "h is not reduced")
        if g_status[i] != "keep":
            raise ContractError(f"syllable {i} of g was rewritten twice")
        g_status[i] = "merge" if kind == MERGE else "cancel"
        h_status.append(g_status[i])

    def part(src, status, which):
        return gp.reduce([syl for syl, st in zip(src, status) if st == which])

    g1, s1, w = part(gx, g_status, "keep"), part(gx, g_status, "merge"), part(gx, g_status, "cancel")
    w_inv, s2, h1 = part(hx, h_status, "cancel"), part(hx, h_status, "merge"), part(hx, h_status, "keep")
    if w_inv != gp.inv(w):
        raise ContractError("cancelled syllables of h do not form the inverse of those of g")
    clique = tuple(sorted(v for (v, _), st in zip(gx, g_status) if st == "merge"))
    return g1, s1, w, s2, h1, clique


def _need_gp(group: Group) -> GraphProduct:
    if not isinstance(group, GraphProduct):
        raise WrongBackend(f"needs a graph product, not {group.describe()}")
    return group


def clique_factorize(gp: GraphProduct, g: Element, h: Element) -> CliqueFactorization:
    """Clique factorization of the product ``g h`` in a graph product.

    Computes ``g h`` by absorbing the syllables of ``h`` one at a time into
    ``g`` and records which syllables of ``g`` vanish (they form ``w``),
    which merge into a nontrivial syllable (they form ``s1``, their partners
    ``s2``, their vertices the clique ``C``) and which are untouched
    (``g1`` and ``h1``).
    """
    _need_gp(gp)
    gp.check(g)
    gp.check(h)
    g1, s1, w, s2, h1, clique = _factor_payloads(gp, g.payload, h.payload)
    E = lambda x: Element(gp, x)  # noqa: E731
    return CliqueFactorization(E(g1), E(s1), E(w), E(s2), E(h1), clique,
                               len(clique) + 2 * len(w))


def _rc_raw(gp: GraphProduct):
    mul, inv = gp.mul, gp.inv

    def raw(gx, kx):
        hx = mul(inv(gx), kx)
        g1, s1, _, s2, _, _ = _factor_payloads(gp, gx, hx)
        b = mul(g1, s1)
        return g1, b, mul(b, s2)

    return raw


def graph_product_rc_map(gp: GraphProduct) -> RelativeCentroidMap:
    _need_gp(gp)
    return RelativeCentroidMap(gp, _rc_raw(gp), "clique centroid")


def graph_product_rc(gp: GraphProduct, g: Element, k: Element) -> tuple[Element, Element, Element]:
    """``(g1, g1 s1, g1 s1 s2)`` from the clique factorization of ``g (g^-1 k)``."""
    return graph_product_rc_map(gp)(g, k)


# ----------------------------------------------------------- verifiers

@dataclass(frozen=True)
class CountReport:
    """Exact size of one of the counted sets.

    ``truncated`` marks counts over a finite ball standing in for the whole
    group (a lower bound for the true count); ``stabilized`` then says
    whether the count stayed the same over the last two radius increments.
    It is None for counts that are not truncations.
    """

    mode: str
    fixed_element: str
    radius: LengthValue
    count: int
    stabilized: bool | None = None
    truncated: bool = False

    def row(self) -> dict:
        return {"mode": self.mode, "fixed_element": self.fixed_element,
                "radius": str(self.radius), "count": self.count,
                "stabilized": "" if self.stabilized is None else str(self.stabilized).lower()}


def _match(group: Group, mapping) -> None:
    if mapping.group is not group and mapping.group != group:
        raise BackendMismatch(f"map is defined on {mapping.group.describe()}, "
                              f"not {group.describe()}")


def _truncated_counts(b, keyed) -> tuple[int, bool]:
    """Count distinct keys and whether the count was stable on the last two shells.

    ``keyed`` yields ``(key, length of the ball element that produced it)``.
    """
    first: dict = {}
    for key, lk in keyed:
        if key not in first or lk < first[key]:
            first[key] = lk
    radii = b.attained_lengths()[-3:]
    counts = [sum(1 for lk in first.values() if lk <= t) for t in radii]
    return len(first), len(counts) == 3 and len(set(counts)) == 1


def verify_c1(group: Group, co: CentroidMap, k: Element, r: LengthValue,
              cap: int = DEFAULT_CAP) -> CountReport:
    """``|{co(g, k) : L(g) <= r}|``."""
    _match(group, co)
    kx = group.check(k).payload
    raw = co.raw
    found = {raw(g.payload, kx) for g in ball(group, r, cap)}
    return CountReport("c1", str(k), r, len(found))


def verify_c2(group: Group, co: CentroidMap, g: Element, R: LengthValue,
              cap: int = DEFAULT_CAP) -> CountReport:
    """``|{co(g, k) : L(k) <= R}|``, a lower bound for the count over all ``k``."""
    _match(group, co)
    gx = group.check(g).payload
    raw = co.raw
    b = ball(group, R, cap)
    count, stable = _truncated_counts(
        b, ((raw(gx, k.payload), lk) for k, lk in zip(b.elements, b.lengths)))
    return CountReport("c2", str(g), R, count, stable, truncated=True)


def verify_c3(group: Group, co: CentroidMap, h: Element, r: LengthValue,
              cap: int = DEFAULT_CAP) -> CountReport:
    """``|{g^-1 co(g, g h) : L(g) <= r}|``."""
    _match(group, co)
    hx = group.check(h).payload
    mul, inv, raw = group.mul, group.inv, co.raw
    found = set()
    for g in ball(group, r, cap):
        gx = g.payload
        found.add(mul(inv(gx), raw(gx, mul(gx, hx))))
    return CountReport("c3", str(h), r, len(found))


RC_MODES = ("rc1", "rc2", "rc3")


def verify_rc(group: Group, rc: RelativeCentroidMap, mode: str, fixed: Element,
              r: LengthValue, cap: int = DEFAULT_CAP) -> CountReport:
    """Count the pairs bounded by the relative-centroid conditions.

    rc1: fixed ``k``, pairs ``(alpha, gamma)`` of ``rc(g, k)`` over ``L(g) <= r``.
    rc2: fixed ``g``, pairs ``(alpha, beta)`` over ``L(k) <= r`` (truncated).
    rc3: fixed ``h``, pairs ``g^-1 (beta, gamma)`` of ``rc(g, g h)`` over ``L(g) <= r``.
    """
    _match(group, rc)
    if mode not in RC_MODES:
        raise ValueError(f"mode must be one of {RC_MODES}, got {mode!r}")
    fx = group.check(fixed).payload
    mul, inv, raw = group.mul, group.inv, rc.raw
    b = ball(group, r, cap)
    if mode == "rc1":
        found = set()
        for g in b:
            a, _, c = raw(g.payload, fx)
            found.add((a, c))
        return CountReport(mode, str(fixed), r, len(found))
    if mode == "rc2":
        def keyed():
            for k, lk in zip(b.elements, b.lengths):
                a, bb, _ = raw(fx, k.payload)
                yield (a, bb), lk
        count, stable = _truncated_counts(b, keyed())
        return CountReport(mode, str(fixed), r, count, stable, truncated=True)
    found = set()
    for g in b:
        gx = g.payload
        gi = inv(gx)
        _, bb, c = raw(gx, mul(gx, fx))
        found.add((mul(gi, bb), mul(gi, c)))
    return CountReport(mode, str(fixed), r, len(found))


def verify_rc4(group: Group, rc: RelativeCentroidMap, g: Element, k: Element) -> bool:
    """Distance bounds of the triple against lengths, with the linear polynomial ``P(t) = t``."""
    _match(group, rc)
    alpha, beta, gamma = rc(g, k)
    d = group.distance
    return (d(alpha, beta) <= g.length
            and d(alpha, gamma) <= k.length
            and d(beta, gamma) <= group.length(~g * k))
