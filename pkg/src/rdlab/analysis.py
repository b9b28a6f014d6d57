"""RD scans, the Rapid Expansion inequality and the non-RD counterexample.

Everything that decides a verdict is an integer count or an exact
rational; floats only appear in reported ratios.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from rdlab.convolution import SparseFunction, rd_ratio
from rdlab.enumeration import DEFAULT_CAP, Ball, ProductTable, ball, product_set
from rdlab.errors import BackendMismatch, BudgetExceeded, ContractError, EmptySupport
from rdlab.groups.abelian import WeightedAbelianGroup
from rdlab.groups.base import Element, Group, LengthValue, as_weight, exact

DEFAULT_MAX_POINTS = 3_000_000


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with nonnegative rational coefficients, lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        cs = [as_weight(c) for c in self.coeffs]
        if any(c < 0 for c in cs):
            raise ValueError("polynomial coefficients must be nonnegative")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """``"0,0,1"`` is ``r^2``."""
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(p == "" for p in parts):
            raise ValueError(f"bad coefficient list {text!r}")
        return cls(tuple(parts))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> LengthValue:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return exact(acc)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if d == 0 else ("r" if d == 1 else f"r^{d}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def to_json(self) -> list:
        return [int(c) if c.denominator == 1 else str(c) for c in self.coeffs]


# ----------------------------------------------------------------- scans

SAMPLERS = ("delta", "ball", "sphere", "random-subset", "random-sphere-subset",
            "random-weighted")
SAMPLER_ALIASES = {"indicator-of-ball": "ball", "indicator-of-sphere": "sphere",
                   "random-subset-indicator": "random-subset"}
# ratios are floats; a bound counts as met up to this relative slack
REL_TOL = 1e-9


@dataclass(frozen=True)
class ScanRow:
    r: LengthValue
    sampler: str
    max_ratio: float
    argmax: str
    bound: LengthValue | None = None

    @property
    def passed(self) -> bool | None:
        return None if self.bound is None else self.max_ratio <= self.bound * (1 + REL_TOL)

    def row(self) -> dict:
        return {"r": str(self.r), "sampler": self.sampler, "max_ratio": repr(self.max_ratio),
                "bound": "" if self.bound is None else str(self.bound),
                "pass": "" if self.passed is None else str(self.passed).lower()}


@dataclass(frozen=True)
class ScanReport:
    seed: int
    trials: int
    rows: tuple
    bound: Polynomial | None = None
    psi_radius: LengthValue | None = None
    cap: int = DEFAULT_CAP

    @property
    def passed(self) -> bool:
        return all(row.passed is not False for row in self.rows)

    def row(self, r, sampler: str) -> ScanRow:
        for row in self.rows:
            if row.r == r and row.sampler == sampler:
                return row
        raise KeyError((r, sampler))


def _indicator_ratio(ids: np.ndarray, size_a: int, size_b: int) -> float:
    n = np.bincount(ids)
    return int(np.dot(n, n)) / (size_a * size_b)


def _weighted_ratio(ids: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    conv = np.bincount(ids, weights=np.outer(a, b).ravel())
    return float(np.dot(conv, conv) / (np.dot(a, a) * np.dot(b, b)))


def rd_scan(group: Group, r_max: LengthValue, samplers: Sequence[str] = ("ball", "sphere"),
            seed: int = 0, *, trials: int = 100, psi: SparseFunction | None = None,
            psi_radius: LengthValue | None = None, bound: Polynomial | None = None,
            cap: int = DEFAULT_CAP) -> ScanReport:
    """Largest observed ``rd_ratio`` per radius and sampler.

    Radii run over the lengths attained in ``ball(r_max)``.  For a radius
    ``r`` the samplers draw ``phi`` with ``prop(phi) <= r``:

    * ``delta``: the point mass at the identity;
    * ``ball`` / ``sphere``: the indicator of ``ball(r)`` / ``sphere(r)``;
    * ``random-subset`` / ``random-sphere-subset``: indicators of random
      nonempty subsets of ``ball(r)`` / ``sphere(r)``, ``trials`` of them;
    * ``random-weighted``: random values in (0, 1] on random subsets of ``ball(r)``.

    The deterministic samplers pair ``phi`` with ``psi`` when given, else
    with the indicator of ``ball(psi_radius)`` when that is given, else with
    ``phi`` itself.  Random samplers draw ``psi`` like ``phi`` from
    ``ball(psi_radius)`` (default ``ball(r)``), with the same value law.
    """
    samplers = [SAMPLER_ALIASES.get(s, s) for s in samplers]
    unknown = [s for s in samplers if s not in SAMPLERS]
    if unknown:
        raise ValueError(f"unknown samplers {unknown}; choose from {SAMPLERS}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if psi is not None:
        if psi.group != group:
            raise BackendMismatch("psi lives on a different group")
        if len(psi) == 0:
            raise EmptySupport("psi must have nonempty support")
    big = ball(group, r_max, cap)
    radii = big.attained_lengths()
    psi_ball = ball(group, psi_radius, cap) if psi_radius is not None else None
    table: ProductTable | None = None
    rows = []
    for ri, r in enumerate(radii):
        inner = big.within(r)
        lo = len(big.within(r)) - len(big.shell(r))
        for sampler in samplers:
            if sampler in ("delta", "ball", "sphere"):
                if sampler == "delta":
                    phi = SparseFunction.delta(group.identity)
                elif sampler == "ball":
                    phi = SparseFunction.indicator(group, inner)
                else:
                    phi = SparseFunction.indicator(group, big.shell(r))
                if psi is not None:
                    partner = psi
                elif psi_ball is not None:
                    partner = SparseFunction.indicator(group, psi_ball)
                else:
                    partner = phi
                ratio = rd_ratio(phi, partner)
                rows.append(ScanRow(r, sampler, ratio, "full",
                                    None if bound is None else bound(r)))
                continue
            if table is None:
                right = psi_ball.elements if psi_ball is not None else big.elements
                table = ProductTable(big.elements, right)
            rng = np.random.default_rng(np.random.SeedSequence([seed, SAMPLERS.index(sampler), ri]))
            pool = np.arange(lo, len(inner)) if sampler == "random-sphere-subset" \
                else np.arange(len(inner))
            right_pool = len(psi_ball) if psi_ball is not None else len(inner)
            best, arg = -1.0, ""
            for t in range(trials):
                li = rng.choice(pool, size=int(rng.integers(1, len(pool) + 1)), replace=False)
                rj = rng.choice(right_pool, size=int(rng.integers(1, right_pool + 1)),
                                replace=False)
                ids = table.products(li, rj)
                if sampler == "random-weighted":
                    a = 1.0 - rng.random(len(li))
                    b = 1.0 - rng.random(len(rj))
                    ratio = _weighted_ratio(ids, a, b)
                else:
                    ratio = _indicator_ratio(ids, len(li), len(rj))
                if ratio > best:
                    best, arg = ratio, f"trial={t} |supp phi|={len(li)} |supp psi|={len(rj)}"
            rows.append(ScanRow(r, sampler, best, arg, None if bound is None else bound(r)))
    return ScanReport(seed, trials, tuple(rows), bound, psi_radius, cap)


def cauchy_schwarz_functional(phi: SparseFunction) -> float:
    """``(sum phi)^2 / sum phi^2``; never more than the support size."""
    vals = phi.values()
    if not vals:
        raise EmptySupport("functional of the zero function is undefined")
    return math.fsum(vals) ** 2 / math.fsum(v * v for v in vals)


# ------------------------------------------------------ lattice helpers

@dataclass(frozen=True)
class Cube:
    """The box ``{-m .. m}^n`` in a weighted ``Z^n``."""

    group: WeightedAbelianGroup
    half_side: int

    def __post_init__(self):
        if not isinstance(self.group, WeightedAbelianGroup):
            raise BackendMismatch("cubes live in weighted abelian groups")
        if self.half_side < 0:
            raise ValueError("half side must be nonnegative")

    def __len__(self) -> int:
        return (2 * self.half_side + 1) ** self.group.dim

    def __iter__(self):
        m = self.half_side
        for v in itertools.product(range(-m, m + 1), repeat=self.group.dim):
            yield Element(self.group, v)

    def __contains__(self, g: Element) -> bool:
        return all(abs(a) <= self.half_side for a in self.group.check(g).payload)

    @property
    def max_length(self) -> LengthValue:
        return exact(self.half_side * sum(self.group.weights))


def _as_points(elements: Iterable[Element], group: Group) -> np.ndarray:
    pts = np.array([group.check(g).payload for g in elements], dtype=np.int64)
    return pts.reshape(-1, group.dim)


def _mask(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = points.min(axis=0)
    shape = tuple(points.max(axis=0) - lo + 1)
    mask = np.zeros(shape, dtype=bool)
    mask[tuple((points - lo).T)] = True
    return mask, lo


def _box_dilate(mask: np.ndarray, m: int) -> np.ndarray:
    """OR of all shifts of ``mask`` by vectors in ``{0 .. 2m}^n``."""
    out = mask
    w = 2 * m + 1
    for axis in range(mask.ndim):
        pad = [(0, 0)] * out.ndim
        pad[axis] = (w, w - 1)
        c = np.cumsum(np.pad(out.astype(np.int32), pad), axis=axis)
        n = out.shape[axis] + w - 1
        hi = np.take(c, np.arange(w, w + n), axis=axis)
        lo = np.take(c, np.arange(0, n), axis=axis)
        out = (hi - lo) > 0
    return out


def _grid_size(shape) -> int:
    return int(np.prod(np.asarray(shape, dtype=object)))


def lattice_sumset_size(S, X, max_points: int = DEFAULT_MAX_POINTS) -> tuple[int, int]:
    """``|S + X|`` in ``Z^n`` by enumerating the sumset on a bounding grid.

    Either argument may be a :class:`Cube` (handled by separable box
    dilation) or a collection of elements.  Returns the size and the number
    of grid points enumerated; raises BudgetExceeded past ``max_points``.
    """
    if isinstance(S, Cube) and not isinstance(X, Cube):
        S, X = X, S
    if isinstance(X, Cube):
        group = X.group
        if isinstance(S, Cube):
            S = list(S) if len(S) <= len(X) else S
            if isinstance(S, Cube):
                n = group.dim
                side = 2 * (S.half_side + X.half_side) + 1
                return side ** n, side ** n
        pts = _as_points(S, group)
        mask, _ = _mask(pts)
        shape = [s + 2 * X.half_side for s in mask.shape]
        total = _grid_size(shape)
        if total > max_points:
            raise BudgetExceeded("sumset grid", max_points)
        return int(_box_dilate(mask, X.half_side).sum()), total
    S, X = list(S), list(X)
    if not S or not X:
        return 0, 0
    group = S[0].group
    if len(S) > len(X):
        S, X = X, S
    sp, xp = _as_points(S, group), _as_points(X, group)
    xmask, xlo = _mask(xp)
    slo = sp.min(axis=0)
    shape = tuple(np.asarray(xmask.shape) + sp.max(axis=0) - slo)
    total = _grid_size(shape)
    if total > max_points:
        raise BudgetExceeded("sumset grid", max_points)
    out = np.zeros(shape, dtype=bool)
    for s in sp - slo:
        idx = tuple(slice(a, a + d) for a, d in zip(s, xmask.shape))
        out[idx] |= xmask
    return int(out.sum()), total


def ball_plus_cube_size(group: WeightedAbelianGroup, radius: LengthValue, m: int) -> int:
    """``|ball(radius) + cube(m)|`` in closed form.

    A point is in the sumset iff the weighted sum of its excesses
    ``max(|v_i| - m, 0)`` is at most ``radius``; each coordinate is either
    inside ``[-m, m]`` (``2m + 1`` values) or has a positive excess on one
    of two sides.
    """
    ws = group.weights
    inside = 2 * m + 1

    def rec(i: int, budget) -> int:
        if i == len(ws):
            return 1
        total = inside * rec(i + 1, budget)
        e = 1
        while ws[i] * e <= budget:
            total += 2 * rec(i + 1, budget - ws[i] * e)
            e += 1
        return total

    return rec(0, Fraction(radius))


def l1_ball_size(n: int, rho: int) -> int:
    """Lattice points of ``Z^n`` with l1 norm at most ``rho``."""
    return sum(2 ** k * comb(n, k) * comb(rho, k) for k in range(min(n, rho) + 1))


# -------------------------------------------------------- expansion

@dataclass(frozen=True)
class ExpansionReport:
    S: int
    X: int
    SX: int
    r: LengthValue
    bound: Fraction
    polynomial: Polynomial
    method: str = "product"
    points_enumerated: int = 0

    @property
    def verdict(self) -> str:
        return "satisfies" if self.SX >= self.bound else "violates"

    def to_json(self) -> dict:
        return {"S": self.S, "X": self.X, "SX": self.SX, "r": str(self.r),
                "bound": float(self.bound), "bound_exact": str(self.bound),
                "polynomial": self.polynomial.to_json(), "verdict": self.verdict,
                "method": self.method, "points_enumerated": self.points_enumerated}


def _set_info(A) -> tuple[Group, int, LengthValue | None]:
    if isinstance(A, Cube):
        return A.group, len(A), A.max_length
    items = list(A)
    if not items:
        raise EmptySupport("sets must be nonempty")
    group = items[0].group
    ln = group.len
    return group, len(set(g.payload for g in items)), max(ln(group.check(g).payload) for g in items)


def rapid_expansion_check(S, X, P: Polynomial, *, table: ProductTable | None = None,
                          max_points: int = DEFAULT_MAX_POINTS) -> ExpansionReport:
    """Compare ``|SX|`` with ``|S| |X| / P(r)``, ``r`` the largest length in ``S``.

    ``S`` and ``X`` are collections of elements, or :class:`Cube` boxes in
    a weighted ``Z^n``.  With ``table`` the products are looked up instead
    of recomputed.
    """
    gs, ns, r = _set_info(S)
    gx, nx, _ = _set_info(X)
    if gs != gx:
        raise BackendMismatch("S and X live in different groups")
    pr = P(r)
    if pr <= 0:
        raise ContractError(f"P({r}) = {pr}; the bound |S||X|/P(r) is undefined")
    points = 0
    if isinstance(gs, WeightedAbelianGroup) and (isinstance(S, Cube) or isinstance(X, Cube)):
        sx, points = lattice_sumset_size(S, X, max_points)
        method = "lattice"
    elif table is not None:
        S, X = list(S), list(X)
        sx = int(np.unique(table.products(table.left_indices(S), table.right_indices(X))).size)
        method = "table"
    else:
        sx = len(product_set(S, X))
        method = "product"
    return ExpansionReport(ns, nx, sx, r, Fraction(ns * nx) / Fraction(pr), P, method, points)


@dataclass(frozen=True)
class FolnerResult:
    m: int
    cube_size: int
    sumset_size: int
    target: Fraction
    method: str
    points_enumerated: int = 0
    enumeration_agrees: bool | None = None


def folner_cube_search(group: WeightedAbelianGroup, S, expansion_target, *,
                       m_max: int = 10_000, max_points: int = DEFAULT_MAX_POINTS) -> FolnerResult:
    """Least ``m`` with ``|S + cube(m)| <= target * |cube(m)|``.

    When ``S`` is a :class:`Ball` of ``group`` the sumset sizes come from
    :func:`ball_plus_cube_size` and the winning ``m`` (and ``m - 1``) are
    re-counted by enumeration, which must agree.  Otherwise every ``m`` is
    counted by enumeration.
    """
    if not isinstance(group, WeightedAbelianGroup):
        raise BackendMismatch("Følner cubes need a weighted abelian group")
    target = as_weight(expansion_target)
    if target <= 1:
        raise ValueError("expansion target must exceed 1")
    closed = isinstance(S, Ball) and S.group == group
    pts = list(S)
    if not pts:
        raise EmptySupport("S must be nonempty")
    n = group.dim

    def enumerate_m(m):
        return lattice_sumset_size(pts, Cube(group, m), max_points)

    for m in range(m_max + 1):
        size = (2 * m + 1) ** n
        if closed:
            sx, how, points = ball_plus_cube_size(group, S.radius, m), "closed-form", 0
        else:
            (sx, points), how = enumerate_m(m), "enumeration"
        if sx <= target * size:
            agrees = None
            if closed:
                try:
                    ex, points = enumerate_m(m)
                    agrees = ex == sx
                    if m > 0:
                        prev, _ = enumerate_m(m - 1)
                        agrees = agrees and prev == ball_plus_cube_size(group, S.radius, m - 1)
                except BudgetExceeded:
                    agrees = None
                if agrees is False:
                    raise ContractError(f"closed form and enumeration disagree at m={m}")
            return FolnerResult(m, size, sx, target, how, points, agrees)
    raise BudgetExceeded("Følner cube search (half side)", m_max)


# --------------------------------------------------- counterexample

@dataclass(frozen=True)
class CounterexampleReport:
    n: int
    weight: int
    polynomial: Polynomial
    r: int
    ball_size: int
    ball_size_formula: int
    two_p_r: LengthValue
    pointwise_first_r: int | None
    folner: FolnerResult
    expansion: ExpansionReport
    checks: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return self.expansion.verdict

    def to_json(self) -> dict:
        f = self.folner
        return {
            "n": self.n, "weights": [self.weight] * self.n,
            "polynomial": self.polynomial.to_json(),
            "r": self.r, "ball_size": self.ball_size, "ball_size_formula": self.ball_size_formula,
            "two_P_r": str(self.two_p_r), "pointwise_first_r": self.pointwise_first_r,
            "cube_half_side": f.m, "X": f.cube_size, "SX": f.sumset_size,
            "folner_target": str(f.target), "folner_method": f.method,
            "enumeration_agrees": f.enumeration_agrees,
            "expansion": self.expansion.to_json(), "verdict": self.verdict,
        }


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _ball_size_poly(n: int) -> list:
    """``l1_ball_size(n, rho)`` as a polynomial in ``rho``."""
    total = [Fraction(0)]
    for k in range(n + 1):
        term = [Fraction(2 ** k * comb(n, k), math.factorial(k))]
        for i in range(k):
            term = _poly_mul(term, [Fraction(-i), Fraction(1)])
        total = [x + y for x, y in itertools.zip_longest(total, term, fillvalue=Fraction(0))]
    return total


def growth_threshold(n: int, weight: int, P: Polynomial) -> tuple[int, int | None]:
    """Radius from which ``|ball(r)| > 2 P(r)`` holds for every real ``r``.

    Balls only change at multiples of ``weight``; on ``[rho w, (rho+1) w)``
    the inequality holds throughout iff
    ``l1_ball_size(n, rho) >= 2 P((rho + 1) w)``.  The difference of the
    two sides is a polynomial in ``rho`` with positive leading coefficient,
    so past its Cauchy root bound it stays positive; below the bound every
    ``rho`` is checked.  Returns the threshold and the first attained
    radius at which the inequality holds pointwise.
    """
    if P.degree >= n:
        raise ContractError(f"deg P = {P.degree} must be below n = {n}")
    # 2 P(w (rho + 1)) as a polynomial in rho
    lin = [Fraction(weight), Fraction(weight)]
    rhs = [Fraction(0)]
    power = [Fraction(1)]
    for c in P.coeffs:
        rhs = [x + 2 * c * y for x, y in itertools.zip_longest(rhs, power, fillvalue=Fraction(0))]
        power = _poly_mul(power, lin)
    diff = [x - y for x, y in itertools.zip_longest(_ball_size_poly(n), rhs, fillvalue=Fraction(0))]
    while diff and diff[-1] == 0:
        diff.pop()
    lead = diff[-1]
    bound = 1 + max((abs(c / lead) for c in diff[:-1]), default=Fraction(0))
    last_fail = -1
    for rho in range(math.ceil(bound) + 1):
        if l1_ball_size(n, rho) < 2 * P(weight * (rho + 1)):
            last_fail = rho
    rho_star = max(last_fail + 1, 1)
    first = None
    for rho in range(1, rho_star + 1):
        if l1_ball_size(n, rho) > 2 * P(weight * rho):
            first = weight * rho
            break
    return weight * rho_star, first


def counterexample_demo(n: int, P: Polynomial, *, max_points: int = DEFAULT_MAX_POINTS,
                        m_max: int = 10_000) -> CounterexampleReport:
    """Finite witness that a free product containing weighted ``Z^n`` fails RD for ``P``.

    Works inside the ``Z^n`` free factor, all weights ``n``: takes ``S`` the
    ball of the threshold radius ``r`` (so ``|S| > 2 P(r)``), a cube ``X``
    with ``|SX| <= 2 |X|`` and reports ``|SX| < |S| |X| / P(r)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    weight = n
    group = WeightedAbelianGroup((weight,) * n)
    r, first = growth_threshold(n, weight, P)
    S = ball(group, r, cap=max_points)
    formula = l1_ball_size(n, r // weight)
    if len(S) != formula:
        raise ContractError(f"ball enumeration gave {len(S)} points, formula {formula}")
    two_p = 2 * P(r)
    if not len(S) > two_p:
        raise ContractError(f"|S| = {len(S)} does not exceed 2P(r) = {two_p}")
    folner = folner_cube_search(group, S, 2, m_max=m_max, max_points=max_points)
    expansion = rapid_expansion_check(S, Cube(group, folner.m), P, max_points=max_points)
    if expansion.SX != folner.sumset_size:
        raise ContractError("sumset size differs between the Følner search and the expansion check")
    if expansion.verdict != "violates":
        raise ContractError("expansion inequality unexpectedly satisfied")
    return CounterexampleReport(n, weight, P, r, len(S), formula, two_p, first, folner, expansion)
