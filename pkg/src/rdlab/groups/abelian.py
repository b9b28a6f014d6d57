"""Weighted free-abelian groups and finite cyclic groups."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from rdlab.groups.base import Element, Group, as_weight, exact

_CYCLIC = re.compile(r"^t(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class WeightedAbelianGroup(Group):
    """``Z^n`` with length ``sum(w_i * |v_i|)``.

    That is the least total weight of a word in the basis vectors when
    basis vector ``i`` weighs ``w_i``.  Weights are exact rationals >= 1.
    """

    weights: tuple[Fraction, ...]
    _int_weights: bool = field(init=False, repr=False, compare=False)

    kind = "weighted_abelian"

    def __post_init__(self):
        ws = tuple(as_weight(w) for w in self.weights)
        if not ws:
            raise ValueError("weighted abelian group needs at least one weight")
        bad = [str(w) for w in ws if w < 1]
        if bad:
            raise ValueError(f"weights must be >= 1, got {', '.join(bad)}")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "_int_weights", all(w.denominator == 1 for w in ws))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def identity_payload(self):
        return (0,) * len(self.weights)

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def len(self, x):
        if self._int_weights:
            return sum(int(w) * abs(a) for w, a in zip(self.weights, x))
        return exact(sum((w * abs(a) for w, a in zip(self.weights, x)), Fraction(0)))

    def move_payloads(self, radius):
        moves = []
        for i, w in enumerate(self.weights):
            if w <= radius:
                for s in (1, -1):
                    v = [0] * self.dim
                    v[i] = s
                    moves.append((tuple(v), exact(w)))
        return moves

    def vector(self, *coords: int) -> Element:
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return Element(self, tuple(int(c) for c in coords))

    def format(self, x):
        return "(" + ",".join(str(a) for a in x) + ")"

    def parse_payload(self, text):
        t = text.strip()
        if self.dim == 1 and t.lstrip("-").isdigit():
            return (int(t),)
        if not (t.startswith("(") and t.endswith(")")):
            raise ValueError(f"vector must look like '(1,-2,0)', got {text!r}")
        body = t[1:-1].strip()
        coords = tuple(int(c) for c in body.split(",")) if body else ()
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates in {text!r}")
        return coords

    def config(self):
        return {"type": "weighted_abelian",
                "weights": [int(w) if w.denominator == 1 else str(w) for w in self.weights]}

    def describe(self):
        return "Z^%d[%s]" % (self.dim, ",".join(str(w) for w in self.weights))


@dataclass(frozen=True)
class CyclicGroup(Group):
    """Finite cyclic group ``Z_m`` with word length in one generator ``t``."""

    order: int

    kind = "cyclic"
    identity_payload = 0

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"cyclic order must be a positive integer, got {self.order!r}")

    def mul(self, x, y):
        return (x + y) % self.order

    def inv(self, x):
        return (-x) % self.order

    def len(self, x):
        return min(x, self.order - x)

    def move_payloads(self, radius):
        if radius < 1 or self.order == 1:
            return []
        return sorted({(1 % self.order, 1), ((-1) % self.order, 1)})

    def power(self, k: int) -> Element:
        return Element(self, k % self.order)

    def format(self, x):
        return "1" if x == 0 else ("t" if x == 1 else f"t^{x}")

    def parse_payload(self, text):
        t = text.strip()
        if t == "1":
            return 0
        m = _CYCLIC.match(t)
        if not m:
            raise ValueError(f"bad cyclic element {text!r}")
        return int(m.group(1) or 1) % self.order

    def config(self):
        return {"type": "cyclic", "order": self.order}

    def describe(self):
        return f"Z_{self.order}"
