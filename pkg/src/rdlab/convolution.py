"""Finitely supported nonnegative functions on a group and their convolutions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from rdlab.enumeration import DEFAULT_CAP, ball
from rdlab.errors import BackendMismatch, EmptySupport
from rdlab.groups.base import Element, Group, LengthValue

log = logging.getLogger(__name__)


class SparseFunction:
    """A map from group elements to positive reals; absent keys are zero.

    Entries given by the caller are stored in canonical payload order.
    Convolutions iterate their inputs in stored order, so results (and their
    floating-point rounding) are deterministic; their entries are kept in
    the order produced and sorted only for ``support`` and serialization.
    """

    __slots__ = ("group", "_data")

    def __init__(self, group: Group, values: Mapping[Element, float] | Iterable = ()):
        items = values.items() if isinstance(values, Mapping) else values
        data: dict = {}
        for g, v in items:
            group.check(g)
            v = float(v)
            if not v >= 0 or math.isinf(v):
                raise ValueError(f"value at {g} must be a finite nonnegative real, got {v}")
            if v > 0:
                data[g.payload] = data.get(g.payload, 0.0) + v
        self.group = group
        self._data = {p: data[p] for p in sorted(data)}

    @classmethod
    def _from_payloads(cls, group: Group, data: dict) -> "SparseFunction":
        f = cls.__new__(cls)
        f.group = group
        f._data = {p: v for p, v in data.items() if v > 0}
        return f

    @classmethod
    def indicator(cls, group: Group, elements: Iterable[Element]) -> "SparseFunction":
        return cls._from_payloads(group, dict.fromkeys(
            sorted({group.check(g).payload for g in elements}), 1.0))

    @classmethod
    def delta(cls, g: Element) -> "SparseFunction":
        return cls._from_payloads(g.group, {g.payload: 1.0})

    def __getitem__(self, g: Element) -> float:
        return self._data.get(self.group.check(g).payload, 0.0)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseFunction):
            return NotImplemented
        return self.group == other.group and self._data == other._data

    def __repr__(self) -> str:
        return f"SparseFunction({self.group.describe()}, {len(self)} entries)"

    @property
    def support(self) -> list[Element]:
        """Support in canonical order."""
        return [Element(self.group, p) for p in sorted(self._data)]

    def items(self):
        for p, v in self._data.items():
            yield Element(self.group, p), v

    def values(self) -> list[float]:
        return list(self._data.values())

    def scaled(self, c: float) -> "SparseFunction":
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return SparseFunction._from_payloads(self.group, {p: c * v for p, v in self._data.items()})

    def __add__(self, other: "SparseFunction") -> "SparseFunction":
        _same(self, other)
        data = dict(self._data)
        for p, v in other._data.items():
            data[p] = data.get(p, 0.0) + v
        return SparseFunction._from_payloads(self.group, data)

    def l1_norm(self) -> float:
        return math.fsum(self._data.values())

    def to_json(self) -> dict:
        fmt = self.group.format
        return {"entries": [{"element": fmt(p), "value": self._data[p]}
                            for p in sorted(self._data)]}

    @classmethod
    def from_json(cls, group: Group, obj: dict) -> "SparseFunction":
        if not isinstance(obj, dict) or not isinstance(obj.get("entries"), list):
            raise ValueError('sparse function JSON needs an "entries" list')
        pairs = []
        for i, e in enumerate(obj["entries"]):
            if not isinstance(e, dict) or set(e) != {"element", "value"}:
                raise ValueError(f"entry {i} must have exactly 'element' and 'value'")
            pairs.append((group.parse(e["element"]), e["value"]))
        return cls(group, pairs)


def _same(phi: SparseFunction, psi: SparseFunction) -> Group:
    if phi.group is not psi.group and phi.group != psi.group:
        raise BackendMismatch(f"functions live on {phi.group.describe()} and {psi.group.describe()}")
    return phi.group


def l2_norm(phi: SparseFunction) -> float:
    return math.sqrt(math.fsum(v * v for v in phi._data.values()))


def propagation(phi: SparseFunction) -> LengthValue:
    """Largest length of an element in the support."""
    if not phi._data:
        raise EmptySupport("propagation of the zero function is undefined")
    ln = phi.group.len
    return max(ln(p) for p in phi._data)


@dataclass(frozen=True)
class TripleSet:
    """A left-invariant set of triples ``(x, z, y)`` of group elements.

    ``kind="all"`` is every triple; ``kind="subgroup_cosets"`` is the set
    ``G.H^3`` of triples lying in a single left coset ``gH``, with ``H``
    given by a membership predicate.
    """

    kind: str
    member: Callable[[Element], bool] | None = None

    @classmethod
    def all(cls) -> "TripleSet":
        return cls("all")

    @classmethod
    def subgroup_cosets(cls, member: Callable[[Element], bool]) -> "TripleSet":
        return cls("subgroup_cosets", member)

    def __post_init__(self):
        if self.kind not in ("all", "subgroup_cosets"):
            raise ValueError(f"unknown triple-set kind {self.kind!r}")
        if self.kind == "subgroup_cosets" and self.member is None:
            raise ValueError("subgroup_cosets needs a membership predicate")

    def contains(self, x: Element, z: Element, y: Element) -> bool:
        if self.kind == "all":
            return True
        xi = ~x
        return self.member(xi * z) and self.member(xi * y)


def _convolve(phi: SparseFunction, psi: SparseFunction, keep=None) -> SparseFunction:
    group = _same(phi, psi)
    mul = group.mul
    acc: dict = {}
    get = acc.get
    right = list(psi._data.items())
    for a, va in phi._data.items():
        if keep is None:
            for b, vb in right:
                y = mul(a, b)
                acc[y] = get(y, 0.0) + va * vb
        else:
            for b, vb in right:
                y = mul(a, b)
                if keep(a, y):
                    acc[y] = get(y, 0.0) + va * vb
    return SparseFunction._from_payloads(group, acc)


def convolve(phi: SparseFunction, psi: SparseFunction) -> SparseFunction:
    """``(phi * psi)(k) = sum_g phi(g) psi(g^-1 k)``."""
    return _convolve(phi, psi)


def relative_convolve(phi: SparseFunction, psi: SparseFunction, T: TripleSet) -> SparseFunction:
    """``y -> sum over z with (1, z, y) in T of phi(z) psi(z^-1 y)``.

    ``phi`` and ``psi`` stand for the invariant kernels ``(x, y) -> phi(x^-1 y)``
    on the group itself.
    """
    group = _same(phi, psi)
    if T.kind == "all":
        return _convolve(phi, psi)
    member = T.member

    def keep(z, y):
        return member(Element(group, z)) and member(Element(group, y))

    return _convolve(phi, psi, keep)


def rd_ratio(phi: SparseFunction, psi: SparseFunction) -> float:
    """``||phi * psi||^2 / (||phi||^2 ||psi||^2)``."""
    if not phi._data or not psi._data:
        raise EmptySupport("rd_ratio needs nonempty supports")
    conv = _convolve(phi, psi)
    num = math.fsum(v * v for v in conv._data.values())
    den = math.fsum(v * v for v in phi._data.values()) * math.fsum(v * v for v in psi._data.values())
    return num / den


class NormEstimate(NamedTuple):
    value: float
    iterations: int
    converged: bool
    window_size: int


def operator_norm_estimate(phi: SparseFunction, window_radius: LengthValue,
                           max_iters: int = 1000, tol: float = 1e-12,
                           cap: int = DEFAULT_CAP) -> NormEstimate:
    """Lower bound for the operator norm of left convolution by ``phi``.

    The operator is restricted to functions supported on the ball of radius
    ``window_radius``; its top singular value is found by power iteration on
    ``A^T A`` from the uniform vector.  Every iterate gives ``||A x||`` for a
    unit ``x``, so the returned value never exceeds the true norm.
    """
    if not phi._data:
        raise EmptySupport("operator norm of the zero function")
    group = phi.group
    window = ball(group, window_radius, cap)
    mul = group.mul
    col_payloads = [g.payload for g in window.elements]
    out_ids: dict = {}
    rows, cols, vals = [], [], []
    for a, va in phi._data.items():
        for j, x in enumerate(col_payloads):
            y = mul(a, x)
            k = out_ids.get(y)
            if k is None:
                k = out_ids[y] = len(out_ids)
            rows.append(k)
            cols.append(j)
            vals.append(va)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=float)
    n_in, n_out = len(col_payloads), len(out_ids)

    x = np.full(n_in, 1.0 / math.sqrt(n_in))
    sigma = 0.0
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        y = np.bincount(rows, weights=vals * x[cols], minlength=n_out)
        new = float(np.linalg.norm(y))
        z = np.bincount(cols, weights=vals * y[rows], minlength=n_in)
        nz = float(np.linalg.norm(z))
        done = sigma > 0 and abs(new - sigma) <= tol * new
        sigma = max(sigma, new)
        if done:
            converged = True
            break
        if nz == 0.0:
            converged = True
            break
        x = z / nz
    if not converged:
        log.warning("power iteration stopped after %d iterations without reaching tol=%g",
                    it, tol)
    return NormEstimate(sigma, it, converged, n_in)
