"""Exhaustive enumeration of balls and spheres under a proper length function."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import lru_cache
from math import floor
from typing import Iterable, Sequence

import numpy as np

from rdlab.errors import BackendMismatch, BudgetExceeded
from rdlab.groups.abelian import WeightedAbelianGroup
from rdlab.groups.base import Element, Group, LengthValue, as_weight, exact

DEFAULT_CAP = 10_000_000


@dataclass(frozen=True)
class Ball:
    """Elements of length at most ``radius``, sorted by (length, payload)."""

    group: Group
    radius: LengthValue
    elements: tuple
    lengths: tuple
    _members: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(g.payload for g in self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: Element) -> bool:
        return isinstance(g, Element) and g.group == self.group and g.payload in self._members

    def attained_lengths(self) -> list:
        return sorted(set(self.lengths))

    def within(self, r: LengthValue) -> "Ball":
        """The sub-ball of radius ``r`` (a prefix, thanks to the sort order)."""
        k = bisect.bisect_right(self.lengths, r)
        return Ball(self.group, r, self.elements[:k], self.lengths[:k])

    def shell(self, r: LengthValue) -> "Ball":
        lo = bisect.bisect_left(self.lengths, r)
        hi = bisect.bisect_right(self.lengths, r)
        return Ball(self.group, r, self.elements[lo:hi], self.lengths[lo:hi])

    def rows(self) -> list[tuple[str, str]]:
        """``(element, length)`` string pairs for CSV export."""
        return [(str(g), str(lg)) for g, lg in zip(self.elements, self.lengths)]


def _check_radius(r) -> None:
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")


def _lattice_ball(group: WeightedAbelianGroup, r, cap: int) -> list[tuple]:
    ws = group.weights
    n = len(ws)
    out: list[tuple] = []
    coords = [0] * n

    def rec(i: int, budget) -> None:
        if i == n:
            out.append(tuple(coords))
            if len(out) > cap:
                raise BudgetExceeded(f"ball of radius {r} in {group.describe()}", cap)
            return
        top = floor(budget / ws[i])
        for a in range(-top, top + 1):
            coords[i] = a
            rec(i + 1, budget - ws[i] * abs(a))
        coords[i] = 0

    rec(0, r)
    return out


def _closure(group: Group, r, cap: int) -> list:
    moves = sorted(group.move_payloads(r), key=lambda mw: mw[1])
    mul, ln = group.mul, group.len
    seen = {group.identity_payload: 0}
    frontier = [group.identity_payload]
    while frontier:
        nxt = []
        for x in frontier:
            lx = seen[x]
            for m, w in moves:
                if lx + w > r:
                    break
                y = mul(x, m)
                if y in seen:
                    continue
                ly = ln(y)
                if ly <= r:
                    seen[y] = ly
                    nxt.append(y)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"ball of radius {r} in {group.describe()}", cap)
        frontier = nxt
    return list(seen)


@lru_cache(maxsize=128)
def _ball(group: Group, r, cap: int) -> Ball:
    if isinstance(group, WeightedAbelianGroup):
        payloads = _lattice_ball(group, r, cap)
    else:
        payloads = _closure(group, r, cap)
    keyed = sorted((group.len(x), x) for x in payloads)
    return Ball(group, exact(r),
                tuple(Element(group, x) for _, x in keyed),
                tuple(lx for lx, _ in keyed))


def ball(group: Group, r: LengthValue, cap: int = DEFAULT_CAP) -> Ball:
    """Every element with ``L(g) <= r``; raises BudgetExceeded past ``cap`` elements."""
    if isinstance(r, float):
        r = as_weight(r)
    _check_radius(r)
    return _ball(group, r, cap)


def sphere(group: Group, r: LengthValue, cap: int = DEFAULT_CAP) -> Ball:
    """Every element with ``L(g) == r`` exactly."""
    return ball(group, r, cap).shell(r)


def _same_group(elements: Iterable[Element]) -> Group | None:
    group = None
    for g in elements:
        if not isinstance(g, Element):
            raise TypeError(f"expected Elements, got {type(g).__name__}")
        if group is None:
            group = g.group
        elif g.group is not group and g.group != group:
            raise BackendMismatch("sets mix elements of different backends")
    return group


def product_set(S: Iterable[Element], X: Iterable[Element]) -> set:
    """``{s * x}`` over ``s`` in ``S`` and ``x`` in ``X``."""
    S, X = list(S), list(X)
    group = _same_group(S + X)
    if group is None:
        return set()
    mul = group.mul
    xs = [x.payload for x in X]
    out = {mul(s.payload, x) for s in S for x in xs}
    return {Element(group, p) for p in out}


class ProductTable:
    """Index table of all products ``left[i] * right[j]`` of two finite lists.

    Products are numbered densely; ``table[i, j]`` is the number of
    ``left[i] * right[j]``.  Subsets of the two lists can then be convolved
    or multiplied with numpy index arithmetic.
    """

    def __init__(self, left: Sequence[Element], right: Sequence[Element]):
        group = _same_group(list(left) + list(right))
        if group is None:
            raise ValueError("product table needs nonempty lists")
        self.group = group
        self.left = tuple(left)
        self.right = tuple(right)
        self._left_pos = {g.payload: i for i, g in enumerate(self.left)}
        self._right_pos = {g.payload: i for i, g in enumerate(self.right)}
        ids: dict = {}
        mul = group.mul
        rp = [g.payload for g in self.right]
        rows = []
        for a in self.left:
            ap = a.payload
            row = []
            for b in rp:
                p = mul(ap, b)
                k = ids.get(p)
                if k is None:
                    k = ids[p] = len(ids)
                row.append(k)
            rows.append(row)
        table = np.array(rows, dtype=np.int64).reshape(len(self.left), len(rp))
        self.table = table
        self.targets = tuple(ids)

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    def left_indices(self, elements: Iterable[Element]) -> np.ndarray:
        return np.fromiter((self._left_pos[self.group.check(g).payload] for g in elements),
                           dtype=np.int64)

    def right_indices(self, elements: Iterable[Element]) -> np.ndarray:
        return np.fromiter((self._right_pos[self.group.check(g).payload] for g in elements),
                           dtype=np.int64)

    def products(self, li: np.ndarray, ri: np.ndarray) -> np.ndarray:
        return self.table[np.ix_(li, ri)].ravel()

    def target(self, k: int) -> Element:
        return Element(self.group, self.targets[k])
