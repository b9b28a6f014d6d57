"""Free groups on ``rank`` generators with the word-length function."""

from __future__ import annotations

import re
from dataclasses import dataclass

from rdlab.groups.base import Element, Group

_TOKEN = re.compile(r"^a(\d*)(?:\^(-?\d+))?$")


def free_reduce(letters) -> tuple[int, ...]:
    """Freely reduce a sequence of signed generator indices (``+-(i+1)``)."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def common_prefix(x: tuple, y: tuple) -> tuple:
    n = min(len(x), len(y))
    i = 0
    while i < n and x[i] == y[i]:
        i += 1
    return x[:i]


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group ``F_rank``.

    Payloads are freely reduced tuples of nonzero ints: ``i+1`` stands for
    generator ``i`` and ``-(i+1)`` for its inverse.  Generators print as
    ``a1 .. ak`` (just ``a`` when the rank is one).
    """

    rank: int

    kind = "free"
    identity_payload = ()

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError(f"free group rank must be a positive integer, got {self.rank!r}")

    def mul(self, x, y):
        i = 0
        n = min(len(x), len(y))
        lx = len(x)
        while i < n and x[lx - 1 - i] == -y[i]:
            i += 1
        if i == 0:
            return x + y
        return x[:lx - i] + y[i:]

    def inv(self, x):
        return tuple(-a for a in reversed(x))

    def len(self, x):
        return len(x)

    def move_payloads(self, radius):
        if radius < 1:
            return []
        return [((s * (i + 1),), 1) for i in range(self.rank) for s in (1, -1)]

    def generators(self) -> list[Element]:
        return [Element(self, (i + 1,)) for i in range(self.rank)]

    def word(self, letters) -> Element:
        """Element from signed generator indices ``+-1 .. +-rank``."""
        letters = tuple(letters)
        for a in letters:
            if a == 0 or abs(a) > self.rank:
                raise ValueError(f"letter {a} out of range for rank {self.rank}")
        return Element(self, free_reduce(letters))

    def _name(self, i: int) -> str:
        return "a" if self.rank == 1 else f"a{i}"

    def format(self, x):
        if not x:
            return "1"
        parts = []
        j = 0
        while j < len(x):
            k = j
            while k < len(x) and x[k] == x[j]:
                k += 1
            exp = (k - j) * (1 if x[j] > 0 else -1)
            name = self._name(abs(x[j]))
            parts.append(name if exp == 1 else f"{name}^{exp}")
            j = k
        return " ".join(parts)

    def parse_payload(self, text):
        if text in ("", "1"):
            return ()
        letters: list[int] = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad free-group token {tok!r}")
            idx = m.group(1)
            if idx == "":
                if self.rank != 1:
                    raise ValueError(f"bare 'a' only allowed in rank 1, got {tok!r}")
                i = 1
            else:
                i = int(idx)
            if not 1 <= i <= self.rank:
                raise ValueError(f"generator {tok!r} out of range for rank {self.rank}")
            exp = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend([i if exp > 0 else -i] * abs(exp))
        return free_reduce(letters)

    def config(self):
        return {"type": "free", "rank": self.rank}

    def describe(self):
        return f"F{self.rank}"
