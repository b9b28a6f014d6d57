"""Graph products of groups with syllable normal forms.

A payload is a tuple of syllables ``(vertex, vertex_payload)``.  It is
always *reduced* (no two syllables of the same vertex are separated only
by syllables commuting with that vertex) and, among all reduced words for
the element, it is the lexicographically least one: the syllables are
emitted greedily, each time taking the smallest vertex whose syllable
could be shuffled to the front.  Equal elements therefore have equal
payloads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from rdlab.errors import NotAFactorization, WrongBackend
from rdlab.groups.base import Element, Group, exact

APPEND, MERGE, CANCEL = "append", "merge", "cancel"

VERTEX_KINDS = ("free", "weighted_abelian", "cyclic")


@dataclass(frozen=True)
class GraphProduct(Group):
    """Graph product over a simple graph on vertices ``0 .. n-1``.

    Length is ``sum(L_v(g_i)) + syllable_length`` over a reduced word.
    """

    n_vertices: int
    edges: frozenset
    vertex_groups: tuple
    _adj: tuple = field(init=False, repr=False, compare=False)

    kind = "graph_product"
    identity_payload = ()

    def __post_init__(self):
        n = self.n_vertices
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"graph needs a positive vertex count, got {n!r}")
        vgs = tuple(self.vertex_groups)
        if len(vgs) != n:
            raise ValueError(f"expected {n} vertex groups, got {len(vgs)}")
        for v, vg in enumerate(vgs):
            if not isinstance(vg, Group) or vg.kind not in VERTEX_KINDS:
                raise ValueError(f"vertex {v}: unsupported vertex group {vg!r}")
        norm = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {e} has a vertex outside 0..{n - 1}")
            norm.add((min(i, j), max(i, j)))
        adj = [set() for _ in range(n)]
        for i, j in norm:
            adj[i].add(j)
            adj[j].add(i)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "vertex_groups", vgs)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    # construction helpers ---------------------------------------------

    @classmethod
    def build(cls, n_vertices: int, edges, vertex_groups) -> "GraphProduct":
        edges = [tuple(e) for e in edges]
        seen = set()
        for e in edges:
            key = (min(e), max(e))
            if key in seen:
                raise ValueError(f"duplicate edge {list(e)}")
            seen.add(key)
        return cls(n_vertices, frozenset(edges), tuple(vertex_groups))

    @classmethod
    def direct_product(cls, *factors: Group) -> "GraphProduct":
        """Complete-graph product, i.e. the direct product of ``factors``."""
        n = len(factors)
        return cls(n, frozenset(combinations(range(n), 2)), tuple(factors))

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def is_clique(self, vertices) -> bool:
        vs = list(vertices)
        return all(self.adjacent(u, v) for u, v in combinations(vs, 2))

    def cliques(self) -> list[tuple[int, ...]]:
        """All cliques, the empty one included, in (size, lexicographic) order."""
        out = [()]
        for size in range(1, self.n_vertices + 1):
            found = [c for c in combinations(range(self.n_vertices), size) if self.is_clique(c)]
            if not found:
                break
            out.extend(found)
        return out

    # rewriting ----------------------------------------------------------

    def _absorb(self, word: list, v: int, x) -> tuple[str, int, tuple | None]:
        """Right-multiply the reduced syllable list ``word`` by ``(v, x)`` in place.

        Scans leftwards past syllables commuting with ``v``.  Returns what
        happened, the index touched and the entry previously there.  Extra
        fields after ``(vertex, payload)`` in an entry survive a merge.
        """
        vg = self.vertex_groups[v]
        adj = self._adj[v]
        for j in range(len(word) - 1, -1, -1):
            old = word[j]
            u = old[0]
            if u == v:
                y = vg.mul(old[1], x)
                if y == vg.identity_payload:
                    del word[j]
                    return CANCEL, j, old
                word[j] = (v, y) + old[2:]
                return MERGE, j, old
            if u not in adj:
                break
        word.append((v, x))
        return APPEND, len(word) - 1, None

    def _lex_order(self, word: list) -> tuple:
        """Lexicographically least shuffle of a reduced syllable list."""
        rest = list(word)
        out = []
        adj = self._adj
        while rest:
            best = -1
            seen: set = set()
            for i, item in enumerate(rest):
                u = item[0]
                if seen <= adj[u] and (best < 0 or u < rest[best][0]):
                    best = i
                seen.add(u)
            out.append(rest.pop(best)[:2])
        return tuple(out)

    def reduce(self, syllables) -> tuple:
        """Canonical payload of an arbitrary product of syllables."""
        word: list = []
        for v, x in syllables:
            if x != self.vertex_groups[v].identity_payload:
                self._absorb(word, v, x)
        return self._lex_order(word)

    # Group interface --------------------------------------------------

    def mul(self, x, y):
        if not y:
            return x
        if not x:
            return y
        word = list(x)
        for v, s in y:
            self._absorb(word, v, s)
        return self._lex_order(word)

    def inv(self, x):
        vgs = self.vertex_groups
        return self._lex_order([(v, vgs[v].inv(s)) for v, s in reversed(x)])

    def len(self, x):
        vgs = self.vertex_groups
        return exact(sum(vgs[v].len(s) for v, s in x) + len(x))

    def move_payloads(self, radius):
        # a syllable s at vertex v adds L_v(s) + 1 when appended without cancellation
        from rdlab.enumeration import ball

        moves = []
        if radius < 1:
            return moves
        for v, vg in enumerate(self.vertex_groups):
            b = ball(vg, radius - 1)
            for s, ls in zip(b.elements, b.lengths):
                if not s.is_identity():
                    moves.append((((v, s.payload),), exact(ls + 1)))
        return moves

    def format(self, x):
        if not x:
            return "1"
        vgs = self.vertex_groups
        return " | ".join(f"v{v}:{vgs[v].format(s)}" for v, s in x)

    def parse_payload(self, text):
        t = text.strip()
        if t in ("", "1"):
            return ()
        syllables = []
        for part in t.split("|"):
            head, sep, body = part.strip().partition(":")
            if not sep or not head.startswith("v") or not head[1:].isdigit():
                raise ValueError(f"bad syllable {part.strip()!r}; expected 'v<i>:<element>'")
            v = int(head[1:])
            if not 0 <= v < self.n_vertices:
                raise ValueError(f"vertex {v} out of range")
            syllables.append((v, self.vertex_groups[v].parse_payload(body.strip())))
        return self.reduce(syllables)

    def config(self):
        return {"type": "graph_product", "vertices": self.n_vertices,
                "edges": [list(e) for e in sorted(self.edges)],
                "vertex_groups": [vg.config() for vg in self.vertex_groups]}

    def describe(self):
        return f"GP(n={self.n_vertices}, |E|={len(self.edges)})"

    # element-level helpers ---------------------------------------------

    def syllable(self, v: int, s) -> Element:
        """The one-syllable element ``s`` of vertex group ``v``.

        ``s`` may be an Element of the vertex group, its payload, or a
        string parsed by the vertex group.
        """
        vg = self.vertex_groups[v]
        if isinstance(s, Element):
            s = vg.check(s).payload
        elif isinstance(s, str):
            s = vg.parse_payload(s)
        return Element(self, self.reduce([(v, s)]))

    def word(self, syllables) -> Element:
        """Canonical element of a product of ``(vertex, element-or-payload)`` pairs."""
        items = []
        for v, s in syllables:
            vg = self.vertex_groups[v]
            if isinstance(s, Element):
                s = vg.check(s).payload
            elif isinstance(s, str):
                s = vg.parse_payload(s)
            items.append((v, s))
        return Element(self, self.reduce(items))

    def syllables(self, g: Element) -> list[tuple[int, Element]]:
        self.check(g)
        return [(v, Element(self.vertex_groups[v], s)) for v, s in g.payload]

    def support(self, g: Element) -> frozenset:
        return frozenset(v for v, _ in self.check(g).payload)

    def in_subgroup(self, g: Element, vertices) -> bool:
        """Membership in the subgroup generated by the given vertex groups."""
        return self.support(g) <= frozenset(vertices)

    def component(self, g: Element, v: int) -> Element:
        """The ``v``-coordinate of an element of a direct (complete-graph) product."""
        if not self.is_clique(range(self.n_vertices)):
            raise WrongBackend("components are only defined for complete-graph products")
        vg = self.vertex_groups[v]
        for u, s in self.check(g).payload:
            if u == v:
                return Element(vg, s)
        return vg.identity


def _need_gp(g: Element) -> GraphProduct:
    if not isinstance(g, Element):
        raise TypeError(f"expected an Element, got {type(g).__name__}")
    if not isinstance(g.group, GraphProduct):
        raise WrongBackend(f"syllable length needs a graph product, not {g.group.describe()}")
    return g.group


def syllable_length(g: Element) -> int:
    """Minimal number of syllables in a word for ``g``."""
    _need_gp(g)
    return len(g.payload)


def is_factorization(g: Element, parts) -> bool:
    """True iff ``g = parts[0] * parts[1] * ...`` with additive syllable length."""
    gp = _need_gp(g)
    parts = list(parts)
    if gp.product(parts) != g:
        raise NotAFactorization(f"{g} is not the product of {[str(p) for p in parts]}")
    return len(g.payload) == sum(len(p.payload) for p in parts)
