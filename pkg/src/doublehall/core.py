"""Finite bipartite graphs with two-sided vertex ids and the small exact
neighborhood operations everything else is built from.

Vertex ids are ``(side, index)`` pairs with side ``"a"`` or ``"b"``. Graphs
are immutable once built; every operation returns fresh objects and iterates
in sorted id order, so equal inputs give byte-equal outputs.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

from .errors import InvalidVertex

Vertex = tuple[str, int]
Edge = tuple[Vertex, Vertex]

A_SIDE = "a"
B_SIDE = "b"


def avert(index: int) -> Vertex:
    return (A_SIDE, index)


def bvert(index: int) -> Vertex:
    return (B_SIDE, index)


def _check_vertex_form(v) -> Vertex:
    if (
        not isinstance(v, tuple)
        or len(v) != 2
        or v[0] not in (A_SIDE, B_SIDE)
        or not isinstance(v[1], int)
        or v[1] < 0
    ):
        raise InvalidVertex(f"malformed vertex id: {v!r}")
    return v


class BipartiteGraph:
    """An explicit finite bipartite graph.

    ``a_vertices`` and ``b_vertices`` are kept sorted by index, which is also
    the enumeration order used by solvers for tie-breaking. ``labels`` maps
    vertex ids to display names; vertices without an entry fall back to
    ``a{i}`` / ``b{i}``.
    """

    __slots__ = ("a_vertices", "b_vertices", "edges", "labels", "_adj")

    def __init__(
        self,
        a_vertices: Iterable[Vertex],
        b_vertices: Iterable[Vertex],
        edges: Iterable[Edge],
        labels: Mapping[Vertex, str] | None = None,
    ):
        a = tuple(sorted(set(_check_vertex_form(v) for v in a_vertices)))
        b = tuple(sorted(set(_check_vertex_form(v) for v in b_vertices)))
        for v in a:
            if v[0] != A_SIDE:
                raise InvalidVertex(f"{v!r} listed on the A side")
        for v in b:
            if v[0] != B_SIDE:
                raise InvalidVertex(f"{v!r} listed on the B side")
        a_set, b_set = set(a), set(b)
        norm: set[Edge] = set()
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in a + b}
        for e in edges:
            if len(e) != 2:
                raise InvalidVertex(f"malformed edge: {e!r}")
            x, y = e
            if x[0] == B_SIDE and y[0] == A_SIDE:
                x, y = y, x
            if x not in a_set or y not in b_set:
                raise InvalidVertex(f"edge {e!r} has an endpoint outside the graph")
            norm.add((x, y))
            adj[x].add(y)
            adj[y].add(x)
        self.a_vertices = a
        self.b_vertices = b
        self.edges = frozenset(norm)
        self.labels = dict(labels) if labels else {}
        self._adj = {v: tuple(sorted(nb)) for v, nb in adj.items()}

    # -- queries ---------------------------------------------------------

    def __contains__(self, v: Vertex) -> bool:
        return v in self._adj

    def vertices(self) -> tuple[Vertex, ...]:
        return self.a_vertices + self.b_vertices

    def neighbors_of(self, v: Vertex) -> tuple[Vertex, ...]:
        if v not in self._adj:
            raise InvalidVertex(f"{v!r} is not a vertex of this graph")
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self.neighbors_of(v))

    def has_edge(self, x: Vertex, y: Vertex) -> bool:
        if x[0] == B_SIDE:
            x, y = y, x
        return (x, y) in self.edges

    def label(self, v: Vertex) -> str:
        return self.labels.get(v, f"{v[0]}{v[1]}")

    def num_edges(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteGraph)
            and self.a_vertices == other.a_vertices
            and self.b_vertices == other.b_vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.a_vertices, self.b_vertices, self.edges))

    def __repr__(self):
        return (
            f"BipartiteGraph(|A|={len(self.a_vertices)}, |B|={len(self.b_vertices)},"
            f" |E|={len(self.edges)})"
        )


def _norm_edge(e) -> Edge:
    if len(e) != 2:
        raise InvalidVertex(f"malformed edge: {e!r}")
    x, y = e
    if x[0] == B_SIDE and y[0] == A_SIDE:
        x, y = y, x
    return (x, y)


class SubgraphEdgeSet:
    """An edge set drawn from a fixed parent graph.

    The vertex set is implicit: every endpoint of ``edges``, plus the
    ``retained`` vertices, which sit in the subgraph at degree zero. An edge
    swap can strand a vertex mid-surgery; listing it as retained keeps it
    alive instead of silently evicting it. Retained vertices that turn out to
    be incident to an edge are normalized away, so ``retained`` is always
    exactly the isolated part of the vertex set.
    """

    __slots__ = ("parent", "edges", "retained", "_adj")

    def __init__(
        self,
        parent: BipartiteGraph,
        edges: Iterable[Edge],
        retained: Iterable[Vertex] = (),
    ):
        adj: dict[Vertex, set[Vertex]] = {}
        norm: set[Edge] = set()
        for e in edges:
            x, y = _norm_edge(e)
            if not parent.has_edge(x, y):
                raise InvalidVertex(f"({x!r}, {y!r}) is not an edge of the parent")
            norm.add((x, y))
            adj.setdefault(x, set()).add(y)
            adj.setdefault(y, set()).add(x)
        kept: set[Vertex] = set()
        for v in retained:
            if v not in parent:
                raise InvalidVertex(f"retained vertex {v!r} is not in the parent")
            if v not in adj:
                kept.add(v)
        for v in kept:
            adj[v] = set()
        self.parent = parent
        self.edges = frozenset(norm)
        self.retained = frozenset(kept)
        self._adj = {v: tuple(sorted(nb)) for v, nb in adj.items()}

    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(sorted(self._adj))

    def side_vertices(self, side: str) -> tuple[Vertex, ...]:
        return tuple(v for v in sorted(self._adj) if v[0] == side)

    def __contains__(self, v: Vertex) -> bool:
        return v in self._adj

    def degree(self, v: Vertex) -> int:
        return len(self._adj.get(v, ()))

    def neighbors_of(self, v: Vertex) -> tuple[Vertex, ...]:
        if v not in self._adj:
            raise InvalidVertex(f"{v!r} is not a vertex of this subgraph")
        return self._adj[v]

    def has_edge(self, x: Vertex, y: Vertex) -> bool:
        if x[0] == B_SIDE:
            x, y = y, x
        return (x, y) in self.edges

    def replace(
        self,
        remove: Iterable[Edge] = (),
        add: Iterable[Edge] = (),
        retained: Iterable[Vertex] | None = None,
    ) -> "SubgraphEdgeSet":
        """New view with ``remove`` taken out and ``add`` put in.

        Removed edges must be present and added edges absent; surgery code
        relies on both checks to catch a step applied twice. ``retained``
        defaults to the current retained set, so vertices stranded by the
        removal vanish unless the caller lists them explicitly.
        """
        cut = {_norm_edge(e) for e in remove}
        new = {_norm_edge(e) for e in add}
        missing = cut - self.edges
        if missing:
            raise InvalidVertex(f"cannot remove absent edges: {sorted(missing)!r}")
        clashing = new & self.edges
        if clashing:
            raise InvalidVertex(f"cannot add present edges: {sorted(clashing)!r}")
        keep = self.retained if retained is None else retained
        return SubgraphEdgeSet(self.parent, (self.edges - cut) | new, keep)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgraphEdgeSet)
            and self.parent == other.parent
            and self.edges == other.edges
            and self.retained == other.retained
        )

    def __hash__(self):
        return hash((self.parent, self.edges, self.retained))

    def __repr__(self):
        return (
            f"SubgraphEdgeSet(|E|={len(self.edges)},"
            f" retained={len(self.retained)})"
        )


def _side_checked(g: BipartiteGraph, xs: Iterable[Vertex]) -> tuple[str | None, frozenset[Vertex]]:
    members = frozenset(xs)
    sides = {v[0] for v in members}
    if len(sides) > 1:
        raise InvalidVertex("vertex set mixes the two sides")
    for v in members:
        if v not in g:
            raise InvalidVertex(f"{v!r} is not a vertex of this graph")
    return (next(iter(sides)) if sides else None, members)


def neighbors(g: BipartiteGraph, xs: Iterable[Vertex]) -> frozenset[Vertex]:
    """Union of neighborhoods of a one-sided vertex set."""
    _, members = _side_checked(g, xs)
    out: set[Vertex] = set()
    for v in members:
        out.update(g.neighbors_of(v))
    return frozenset(out)


def neighbors2(g: BipartiteGraph, xs: Iterable[Vertex]) -> frozenset[Vertex]:
    """Vertices with at least two neighbors inside ``xs``.

    Sets of size zero or one always map to the empty set: with no multi-edges
    a single vertex cannot supply two distinct neighbors.
    """
    _, members = _side_checked(g, xs)
    if len(members) < 2:
        return frozenset()
    seen_once: set[Vertex] = set()
    seen_twice: set[Vertex] = set()
    for v in sorted(members):
        for w in g.neighbors_of(v):
            if w in seen_once:
                seen_twice.add(w)
            else:
                seen_once.add(w)
    return frozenset(seen_twice)


def induced_subgraph(
    g: BipartiteGraph, a_keep: Iterable[Vertex], b_keep: Iterable[Vertex]
) -> BipartiteGraph:
    """Subgraph on the kept vertices, keeping their original ids and labels."""
    _, a_set = _side_checked(g, a_keep)
    _, b_set = _side_checked(g, b_keep)
    edges = [(x, y) for (x, y) in g.edges if x in a_set and y in b_set]
    labels = {v: g.labels[v] for v in (a_set | b_set) if v in g.labels}
    return BipartiteGraph(a_set, b_set, edges, labels)


def components_after_removal(
    g: BipartiteGraph, f: Iterable[Vertex]
) -> tuple[frozenset[Vertex], ...]:
    """Connected components of ``g`` minus the removed set ``f``.

    Components are returned sorted by their least vertex id, so the output
    order is deterministic.
    """
    removed = frozenset(f)
    for v in removed:
        if v not in g:
            raise InvalidVertex(f"{v!r} is not a vertex of this graph")
    alive = [v for v in g.vertices() if v not in removed]
    unseen = set(alive)
    comps: list[frozenset[Vertex]] = []
    for v in sorted(alive):
        if v not in unseen:
            continue
        comp = {v}
        unseen.discard(v)
        queue = deque([v])
        while queue:
            cur = queue.popleft()
            for w in g.neighbors_of(cur):
                if w in unseen:
                    unseen.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return tuple(sorted(comps, key=lambda c: min(c)))


def reindexed(g: BipartiteGraph, a_start: int = 0, b_start: int = 0) -> BipartiteGraph:
    """Copy of ``g`` with vertex indices shifted to start at the given bases.

    Used to make id spaces disjoint before gluing two graphs together.
    Labels follow their vertices.
    """
    a_map = {v: (A_SIDE, a_start + i) for i, v in enumerate(g.a_vertices)}
    b_map = {v: (B_SIDE, b_start + i) for i, v in enumerate(g.b_vertices)}
    vmap = {**a_map, **b_map}
    labels = {vmap[v]: lab for v, lab in g.labels.items()}
    return BipartiteGraph(
        a_map.values(),
        b_map.values(),
        [(vmap[x], vmap[y]) for (x, y) in g.edges],
        labels,
    )
