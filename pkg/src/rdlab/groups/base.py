"""Group elements and the interface every backend implements.

Backends work on hashable *payloads* (tuples or ints already in canonical
form).  :class:`Element` pairs a payload with its backend so user code can
write ``g * h`` and ``~g`` and get a typed error when backends are mixed.
Hot loops inside the library call the payload-level methods directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Hashable, Iterable, Union

from rdlab.errors import BackendMismatch

LengthValue = Union[int, Fraction]


def exact(x: LengthValue) -> LengthValue:
    """Return ``x`` as an int when it is integral, otherwise as a Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def as_weight(x: Any) -> Fraction:
    """Parse a weight given as int, float, decimal string or ``"p/q"``."""
    if isinstance(x, bool):
        raise TypeError("weights must be numbers, not booleans")
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


class Element:
    """A canonical group element bound to its backend."""

    __slots__ = ("group", "payload")

    def __init__(self, group: "Group", payload: Hashable):
        self.group = group
        self.payload = payload

    def _same(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected an Element, got {type(other).__name__}")
        if other.group is not self.group and other.group != self.group:
            raise BackendMismatch(f"cannot combine elements of {self.group.describe()} "
                                  f"and {other.group.describe()}")

    def __mul__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.group, self.group.mul(self.payload, other.payload))

    def __invert__(self) -> "Element":
        return Element(self.group, self.group.inv(self.payload))

    def inverse(self) -> "Element":
        return ~self

    @property
    def length(self) -> LengthValue:
        return self.group.len(self.payload)

    def is_identity(self) -> bool:
        return self.payload == self.group.identity_payload

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.payload == other.payload and (
            self.group is other.group or self.group == other.group)

    def __hash__(self) -> int:
        return hash(self.payload)

    def __lt__(self, other: "Element") -> bool:
        self._same(other)
        return self.payload < other.payload

    def __str__(self) -> str:
        return self.group.format(self.payload)

    def __repr__(self) -> str:
        return f"<{self.group.kind} {self.group.format(self.payload)}>"


class Group:
    """Interface shared by the free, abelian, cyclic and graph-product backends.

    Subclasses provide ``identity_payload`` and the payload methods
    ``mul``, ``inv``, ``len``, ``format``, ``parse_payload`` plus
    ``move_payloads`` (generator moves used by ball enumeration) and
    ``config``.
    """

    kind: str = "abstract"
    identity_payload: Hashable

    # payload level -----------------------------------------------------

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def len(self, x) -> LengthValue:
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def parse_payload(self, text: str):
        raise NotImplementedError

    def move_payloads(self, radius: LengthValue) -> list[tuple[Hashable, LengthValue]]:
        """Moves ``(payload, weight)`` whose weight is at most ``radius``.

        Every nontrivial element of length ``l`` must factor as ``x * m``
        with ``m`` a move of weight ``w`` and ``len(x) == l - w``.
        """
        raise NotImplementedError

    def config(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind

    # element level -----------------------------------------------------

    @property
    def identity(self) -> Element:
        return Element(self, self.identity_payload)

    def wrap(self, payload) -> Element:
        return Element(self, payload)

    def parse(self, text: str) -> Element:
        return Element(self, self.parse_payload(text.strip()))

    def check(self, g: Element) -> Element:
        if not isinstance(g, Element):
            raise TypeError(f"expected an Element, got {type(g).__name__}")
        if g.group is not self and g.group != self:
            raise BackendMismatch(f"element of {g.group.describe()} used with {self.describe()}")
        return g

    def multiply(self, a: Element, b: Element) -> Element:
        self.check(a)
        self.check(b)
        return Element(self, self.mul(a.payload, b.payload))

    def inverse(self, a: Element) -> Element:
        self.check(a)
        return Element(self, self.inv(a.payload))

    def length(self, g: Element) -> LengthValue:
        self.check(g)
        return self.len(g.payload)

    def distance(self, a: Element, b: Element) -> LengthValue:
        """Left-invariant distance ``L(a^-1 b)``."""
        return self.len(self.mul(self.inv(self.check(a).payload), self.check(b).payload))

    def product(self, items: Iterable[Element]) -> Element:
        acc = self.identity_payload
        for g in items:
            acc = self.mul(acc, self.check(g).payload)
        return Element(self, acc)
