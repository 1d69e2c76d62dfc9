"""Undirected graphs and trivially perfect elimination orderings.

Vertices are labeled 1..n throughout.  A graph is *homogeneous chordal*
(equivalently: trivially perfect, a chordal cograph) exactly when it has no
induced path or cycle on four vertices, and exactly when it admits a
relabeling satisfying the two elimination conditions

    (o1)  {i,j}, {i,k} in E and i < j < k  =>  {j,k} in E
    (o2)  {i,j}, {j,k} in E and i < j < k  =>  {i,k} in E

Recognition and ordering use universal-vertex peeling: a graph is trivially
perfect iff every connected induced subgraph has a universal vertex, and
assigning peeled vertices the largest remaining labels yields (o1)/(o2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .errors import BadIndex, NotHomogeneousChordal, ParseError


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n with edges stored as (i, j), i < j."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ParseError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        norm = set()
        for e in self.edges:
            try:
                u, v = e
            except (TypeError, ValueError):
                raise ParseError(f"bad edge {e!r}")
            if u == v:
                raise ParseError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ParseError(f"edge {e!r} out of range 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> set:
        return {b if a == v else a for (a, b) in self.edges if v in (a, b)}

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def components(self) -> list:
        """Connected components as sorted vertex lists."""
        seen, comps = set(), []
        for start in self.vertices():
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(self.neighbors(v) - comp)
            seen |= comp
            comps.append(sorted(comp))
        return comps

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data) -> "Graph":
        if not isinstance(data, dict) or "n" not in data:
            raise ParseError("graph JSON must be an object with keys 'n' and 'edges'")
        edges = data.get("edges", [])
        if not isinstance(edges, list):
            raise ParseError("'edges' must be a list of pairs")
        return cls(n=data["n"], edges=frozenset(tuple(e) for e in edges))


@dataclass(frozen=True)
class Ordering:
    """Relabeling old -> new on 1..n; ``perm[old-1]`` is the new label.

    ``verified`` marks orderings that have passed :func:`verify_tpeo`.
    """

    perm: tuple
    verified: bool = False

    def __post_init__(self):
        perm = tuple(self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ParseError(f"perm {perm!r} is not a permutation of 1..{len(perm)}")

    @property
    def n(self) -> int:
        return len(self.perm)

    def new_label(self, old: int) -> int:
        return self.perm[old - 1]

    def old_label(self, new: int) -> int:
        return self.inverse().perm[new - 1]

    def inverse(self) -> "Ordering":
        inv = [0] * self.n
        for old, new in enumerate(self.perm, start=1):
            inv[new - 1] = old
        return Ordering(tuple(inv))

    def apply(self, g: Graph) -> Graph:
        if g.n != self.n:
            raise BadIndex(f"ordering on {self.n} vertices applied to graph on {g.n}")
        return Graph(g.n, frozenset((self.new_label(u), self.new_label(v)) for (u, v) in g.edges))

    @classmethod
    def identity(cls, n: int, verified: bool = False) -> "Ordering":
        return cls(tuple(range(1, n + 1)), verified)

    def to_json(self) -> dict:
        return {"perm": list(self.perm)}

    @classmethod
    def from_json(cls, data) -> "Ordering":
        if not isinstance(data, dict) or "perm" not in data:
            raise ParseError("ordering JSON must be an object with key 'perm'")
        return cls(tuple(data["perm"]))


def verify_tpeo(g: Graph, ordering: Ordering) -> bool:
    """Exhaustive O(n^3) check of (o1) and (o2) on the relabeled graph.

    This is the oracle; the ordering constructors are tested against it.
    """
    if ordering.n != g.n:
        return False
    h = ordering.apply(g)
    for i, j, k in combinations(h.vertices(), 3):  # i < j < k
        ij, ik, jk = h.has_edge(i, j), h.has_edge(i, k), h.has_edge(j, k)
        if ij and ik and not jk:
            return False
        if ij and jk and not ik:
            return False
    return True


def _peeling_order(g: Graph) -> Optional[list]:
    """Vertices in removal order (first removed gets the largest label), or
    None when some connected induced subgraph has no universal vertex."""
    remaining = set(g.vertices())
    adj = {v: g.neighbors(v) for v in g.vertices()}
    order = []
    while remaining:
        comp_of = {}
        for comp in _components_of(remaining, adj):
            for v in comp:
                comp_of[v] = comp
        candidates = [v for v in remaining if len(adj[v] & remaining) == len(comp_of[v]) - 1]
        if not candidates:
            return None
        v = min(candidates)  # deterministic tie-break: smallest original label
        order.append(v)
        remaining.discard(v)
    return order


def _components_of(vertices: set, adj: dict) -> list:
    seen, comps = set(), []
    for start in vertices:
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend((adj[v] & vertices) - comp)
        seen |= comp
        comps.append(comp)
    return comps


def find_p4_or_c4(g: Graph):
    """Scan all 4-subsets for an induced path or induced 4-cycle.

    Returns ("P4", vertices) or ("C4", vertices), or None.  On four vertices,
    three edges with degree multiset {1,1,2,2} force a path, and four edges
    with all degrees 2 force a cycle.
    """
    for quad in combinations(g.vertices(), 4):
        sub = [(u, v) for u, v in combinations(quad, 2) if g.has_edge(u, v)]
        if len(sub) not in (3, 4):
            continue
        deg = {v: 0 for v in quad}
        for u, v in sub:
            deg[u] += 1
            deg[v] += 1
        degs = sorted(deg.values())
        if len(sub) == 3 and degs == [1, 1, 2, 2]:
            return "P4", quad
        if len(sub) == 4 and degs == [2, 2, 2, 2]:
            return "C4", quad
    return None


def is_homogeneous_chordal(g: Graph) -> bool:
    return _peeling_order(g) is not None


def trivially_perfect_ordering(g: Graph) -> Ordering:
    """A verified trivially perfect elimination ordering via peeling.

    Universal vertices are assigned the largest unassigned labels, ties broken
    by smallest original label.  Raises :class:`NotHomogeneousChordal` with a
    P4/C4 witness when recognition fails.
    """
    order = _peeling_order(g)
    if order is None:
        witness = find_p4_or_c4(g)
        assert witness is not None, "peeling failed but no witness found"
        raise NotHomogeneousChordal(witness[0], witness[1])
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v - 1] = g.n - pos
    ordering = Ordering(tuple(perm), verified=True)
    assert verify_tpeo(g, ordering)
    return ordering


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """Subgraph on ``keep``, relabeled 1..|keep| preserving relative order."""
    keep = sorted(set(keep))
    for v in keep:
        if not (1 <= v <= g.n):
            raise BadIndex(f"vertex {v} out of range 1..{g.n}")
    new_label = {v: i + 1 for i, v in enumerate(keep)}
    edges = frozenset(
        (new_label[u], new_label[v]) for (u, v) in g.edges if u in new_label and v in new_label
    )
    return Graph(len(keep), edges)
