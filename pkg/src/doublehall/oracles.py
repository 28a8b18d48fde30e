"""Lazy adjacency oracles for the infinite bipartite families, finite
truncation windows, and the hub-gluing construction.

An oracle describes a countably infinite bipartite graph through an
adjacency predicate on (A-index, B-index) pairs plus declared degree
information. Truncation materializes a finite window of the oracle as an
explicit :class:`~doublehall.core.BipartiteGraph`, with the B side chosen by
a closure rule. Everything is deterministic for fixed parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .core import A_SIDE, B_SIDE, BipartiteGraph, Vertex, avert, bvert
from .errors import IdCollision, InvalidVertex, UnboundedClosure

FINITE = "finite"
COFINITE = "cofinite"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class DegreeHint:
    """Declared shape of one B-vertex's neighborhood.

    kind "finite": no neighbor has A-index above ``bound``.
    kind "cofinite": the neighborhood is exactly A minus ``excluded``.
    kind "unbounded": no finite description is declared; consumers must not
    rely on anything beyond the adjacency predicate.
    """

    kind: str
    bound: int | None = None
    excluded: frozenset[int] | None = None


def _cantor_pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + x


def _cantor_unpair(r: int) -> tuple[int, int]:
    s = (math.isqrt(8 * r + 1) - 1) // 2
    x = r - s * (s + 1) // 2
    return x, s - x


class GraphOracle:
    """Base class for lazily described infinite bipartite graphs.

    Subclasses fill in the adjacency predicate and the declared degree
    structure. Enumeration order on each side is the index order, which is
    what every "least" tie-break in the solvers and simulators refers to.
    """

    family = "?"
    a_locally_finite = False
    b_locally_finite = False

    @property
    def params(self) -> dict:
        return {}

    def adjacency(self, a_index: int, b_index: int) -> bool:
        raise NotImplementedError

    def a_neighbors(self, a_index: int) -> list[int] | None:
        """Exact B-neighbor indices of one A-vertex, or None if unbounded."""
        raise NotImplementedError

    def b_degree_hint(self, b_index: int) -> DegreeHint:
        raise NotImplementedError

    def common_neighbors(self, x: int, y: int) -> list[int] | None:
        """Exact common B-neighbors of two A-vertices, or None if infinite.

        The default intersects the two finite neighbor lists and is
        overridden where a family knows a sharper answer.
        """
        if x == y:
            raise InvalidVertex("common neighbors need two distinct A-vertices")
        nx, ny = self.a_neighbors(x), self.a_neighbors(y)
        if nx is None or ny is None:
            return None
        return sorted(set(nx) & set(ny))

    def n2_candidates(self, window: Iterable[int]) -> list[int]:
        """Finite superset of the B-indices with two neighbors in the window.

        The default unions the per-vertex neighbor lists and therefore needs
        a locally finite A side; families with a sharper bound override it.
        """
        out: set[int] = set()
        for i in window:
            nb = self.a_neighbors(i)
            if nb is None:
                raise UnboundedClosure(
                    f"{self.a_label(i)} has no declared neighbor bound;"
                    " the closure cannot be enumerated"
                )
            out.update(nb)
        return sorted(out)

    def a_label(self, a_index: int) -> str:
        return f"a{a_index}"

    def b_label(self, b_index: int) -> str:
        return f"b{b_index}"

    def canonical_truncation(self, n: int) -> "Truncation":
        """The family's default finite window with top A-index ``n``."""
        return Truncation(self, n, N2_CLOSURE)


class StaircaseOracle(GraphOracle):
    """A-vertex u_i is adjacent to v_j exactly when j <= i + 1.

    Every u_i has finite degree i + 2 while every v_j misses only the
    finitely many u_i with i < j - 1, so the B side is made of cofinite
    vertices throughout.
    """

    family = "h"
    a_locally_finite = True
    b_locally_finite = False

    def adjacency(self, a_index: int, b_index: int) -> bool:
        return 0 <= b_index <= a_index + 1

    def a_neighbors(self, a_index: int) -> list[int]:
        return list(range(a_index + 2))

    def b_degree_hint(self, b_index: int) -> DegreeHint:
        if b_index <= 1:
            return DegreeHint(COFINITE, excluded=frozenset())
        return DegreeHint(COFINITE, excluded=frozenset(range(b_index - 1)))

    def common_neighbors(self, x: int, y: int) -> list[int]:
        if x == y:
            raise InvalidVertex("common neighbors need two distinct A-vertices")
        return list(range(min(x, y) + 2))

    def a_label(self, a_index: int) -> str:
        return f"u{a_index}"

    def b_label(self, b_index: int) -> str:
        return f"v{b_index}"


class CopiesWithHubsOracle(GraphOracle):
    """Disjoint staircase copies tied together by an escalating hub family.

    The A side enumerates pairs (copy, inner) along diagonals. The B side
    interleaves two kinds of vertices through a pairing of (row, s): row 0
    holds the hubs y_s, row c + 1 holds copy c's staircase side. Hub y_s is
    adjacent to every A-vertex of every copy with index at least s - 1, so
    y_0 and y_1 see the whole A side and later hubs skip finitely many
    copies.
    """

    family = "gamma"
    a_locally_finite = True
    b_locally_finite = False

    @staticmethod
    def a_encode(copy: int, inner: int) -> int:
        return _cantor_pair(copy, inner)

    @staticmethod
    def a_decode(a_index: int) -> tuple[int, int]:
        return _cantor_unpair(a_index)

    @staticmethod
    def hub_index(s: int) -> int:
        return _cantor_pair(0, s)

    @staticmethod
    def copy_b_index(copy: int, inner: int) -> int:
        return _cantor_pair(copy + 1, inner)

    @staticmethod
    def b_decode(b_index: int) -> tuple[int | None, int]:
        """Returns (copy, inner) for staircase vertices, (None, s) for hubs."""
        row, s = _cantor_unpair(b_index)
        if row == 0:
            return None, s
        return row - 1, s

    def adjacency(self, a_index: int, b_index: int) -> bool:
        c, i = self.a_decode(a_index)
        row, s = self.b_decode(b_index)
        if row is None:
            return s - 1 <= c
        return row == c and 0 <= s <= i + 1

    def a_neighbors(self, a_index: int) -> list[int]:
        c, i = self.a_decode(a_index)
        out = [self.copy_b_index(c, j) for j in range(i + 2)]
        out.extend(self.hub_index(s) for s in range(c + 2))
        return sorted(out)

    def b_degree_hint(self, b_index: int) -> DegreeHint:
        row, s = self.b_decode(b_index)
        if row is None and s <= 1:
            return DegreeHint(COFINITE, excluded=frozenset())
        # later hubs and every staircase vertex have infinite degree but
        # exclude infinitely many A-vertices, so no finite description fits
        return DegreeHint(UNBOUNDED)

    def common_neighbors(self, x: int, y: int) -> list[int]:
        if x == y:
            raise InvalidVertex("common neighbors need two distinct A-vertices")
        cx, ix = self.a_decode(x)
        cy, iy = self.a_decode(y)
        out = [self.hub_index(s) for s in range(min(cx, cy) + 2)]
        if cx == cy:
            out.extend(self.copy_b_index(cx, j) for j in range(min(ix, iy) + 2))
        return sorted(out)

    def n2_candidates(self, window: Iterable[int]) -> list[int]:
        window = list(window)
        per_copy: dict[int, int] = {}
        copies: list[int] = []
        for p in window:
            c, i = self.a_decode(p)
            per_copy[c] = max(per_copy.get(c, -1), i)
            copies.append(c)
        out: set[int] = set()
        for c, top in per_copy.items():
            out.update(self.copy_b_index(c, j) for j in range(top + 2))
        if copies:
            out.update(self.hub_index(s) for s in range(max(copies) + 2))
        return sorted(out)

    def a_label(self, a_index: int) -> str:
        c, i = self.a_decode(a_index)
        return f"u{i}^{c}"

    def b_label(self, b_index: int) -> str:
        row, s = self.b_decode(b_index)
        if row is None:
            return f"y{s}"
        return f"v{s}^{row}"


class MatchingDefyingOracle(GraphOracle):
    """Double-Hall family with no perfect matching on the A side.

    A-vertices v_0 and v_1 are adjacent to every u_j; for i >= 2, v_i is
    adjacent exactly to u_0 .. u_{i-1}. Every B-vertex is declared
    unbounded, so distance-two questions through B stay undecidable unless
    the forbidden set already swallows the whole neighborhood.
    """

    family = "counterexample"
    a_locally_finite = False
    b_locally_finite = False

    def adjacency(self, a_index: int, b_index: int) -> bool:
        if a_index <= 1:
            return True
        return 0 <= b_index <= a_index - 1

    def a_neighbors(self, a_index: int) -> list[int] | None:
        if a_index <= 1:
            return None
        return list(range(a_index))

    def b_degree_hint(self, b_index: int) -> DegreeHint:
        return DegreeHint(UNBOUNDED)

    def common_neighbors(self, x: int, y: int) -> list[int] | None:
        if x == y:
            raise InvalidVertex("common neighbors need two distinct A-vertices")
        lo, hi = min(x, y), max(x, y)
        if hi <= 1:
            return None
        if lo <= 1:
            return list(range(hi))
        return list(range(lo))

    def n2_candidates(self, window: Iterable[int]) -> list[int]:
        window = sorted(set(window))
        if len(window) < 2:
            return []
        big = [i for i in window if i <= 1]
        rest = [i for i in window if i >= 2]
        if len(big) >= 2:
            raise UnboundedClosure(
                "v0 and v1 share every u; their joint closure is infinite"
            )
        if len(big) == 1:
            need = 1
        else:
            need = 2
        if len(rest) < need:
            return []
        # u_j gains a neighbor from each window member v_i with i >= j + 1
        top = rest[-need]
        return list(range(top))

    def canonical_truncation(self, n: int) -> "Truncation":
        # the two full-degree A-vertices make every two-sided closure
        # infinite, so the default window takes B = {u_0 .. u_n} explicitly,
        # the smallest choice whose windows keep the double Hall property
        return Truncation(self, n, EXPLICIT_B, b_window=n + 1)

    def a_label(self, a_index: int) -> str:
        return f"v{a_index}"

    def b_label(self, b_index: int) -> str:
        return f"u{b_index}"


class PairGadgetOracle(GraphOracle):
    """Every unordered A-pair {a_i, a_j} gets its own two degree-2 B-vertices.

    B enumerates (pair, copy) with pairs in colex order, so windows stay
    balanced: gadget b(i,j,k) sits at index 2 * (j * (j - 1) / 2 + i) + k.
    The B side is locally finite, which is what the greedy cycle builder
    needs, while every A-vertex has infinite degree.
    """

    family = "pair-gadget"
    a_locally_finite = False
    b_locally_finite = True

    @staticmethod
    def gadget_index(i: int, j: int, k: int) -> int:
        if not (0 <= i < j) or k not in (0, 1):
            raise InvalidVertex(f"no gadget for ({i}, {j}, {k})")
        return 2 * (j * (j - 1) // 2 + i) + k

    @staticmethod
    def gadget_decode(b_index: int) -> tuple[int, int, int]:
        p, k = divmod(b_index, 2)
        j = (1 + math.isqrt(1 + 8 * p)) // 2
        while j * (j - 1) // 2 > p:
            j -= 1
        i = p - j * (j - 1) // 2
        return i, j, k

    def adjacency(self, a_index: int, b_index: int) -> bool:
        i, j, _ = self.gadget_decode(b_index)
        return a_index in (i, j)

    def a_neighbors(self, a_index: int) -> None:
        return None

    def b_degree_hint(self, b_index: int) -> DegreeHint:
        _, j, _ = self.gadget_decode(b_index)
        return DegreeHint(FINITE, bound=j)

    def common_neighbors(self, x: int, y: int) -> list[int]:
        if x == y:
            raise InvalidVertex("common neighbors need two distinct A-vertices")
        i, j = min(x, y), max(x, y)
        return [self.gadget_index(i, j, 0), self.gadget_index(i, j, 1)]

    def n2_candidates(self, window: Iterable[int]) -> list[int]:
        window = sorted(set(window))
        out = []
        for t, j in enumerate(window):
            for i in window[:t]:
                out.append(self.gadget_index(i, j, 0))
                out.append(self.gadget_index(i, j, 1))
        return sorted(out)

    def b_label(self, b_index: int) -> str:
        i, j, k = self.gadget_decode(b_index)
        return f"b{i}_{j}_{k}"


def oracle_h() -> StaircaseOracle:
    return StaircaseOracle()


def oracle_gamma() -> CopiesWithHubsOracle:
    return CopiesWithHubsOracle()


def oracle_counterexample() -> MatchingDefyingOracle:
    return MatchingDefyingOracle()


def oracle_pair_gadget() -> PairGadgetOracle:
    return PairGadgetOracle()


FAMILIES = {
    "h": oracle_h,
    "gamma": oracle_gamma,
    "counterexample": oracle_counterexample,
    "pair-gadget": oracle_pair_gadget,
}

N2_CLOSURE = "n2"
N_CLOSURE = "n"
EXPLICIT_B = "explicit"


@dataclass(frozen=True)
class Truncation:
    """A finite window of an oracle.

    ``a_window`` is the largest A-index included, so the A side is the
    enumeration prefix of a_window + 1 vertices. The closure rule picks the
    B side: "n2" takes the vertices with two window neighbors, "n" takes
    every window neighbor, and "explicit" takes the first ``b_window``
    B-indices outright.
    """

    oracle: GraphOracle
    a_window: int
    closure: str = N2_CLOSURE
    b_window: int | None = None

    def __post_init__(self):
        if self.a_window < 0:
            raise InvalidVertex("a_window must be nonnegative")
        if self.closure not in (N2_CLOSURE, N_CLOSURE, EXPLICIT_B):
            raise InvalidVertex(f"unknown closure rule: {self.closure!r}")
        if self.closure == EXPLICIT_B and (self.b_window is None or self.b_window < 0):
            raise InvalidVertex("explicit closure needs a nonnegative b_window")


def _b_side_indices(t: Truncation) -> list[int]:
    oracle = t.oracle
    window = list(range(t.a_window + 1))
    if t.closure == EXPLICIT_B:
        return list(range(t.b_window))
    if t.closure == N_CLOSURE:
        out: set[int] = set()
        for i in window:
            nb = oracle.a_neighbors(i)
            if nb is None:
                raise UnboundedClosure(
                    f"{oracle.a_label(i)} has no declared neighbor bound;"
                    " the N closure of this window is not enumerable"
                )
            out.update(nb)
        return sorted(out)
    # two-neighbor closure
    if len(window) < 2:
        return []
    cands = oracle.n2_candidates(window)
    out = []
    for j in cands:
        hits = 0
        for i in window:
            if oracle.adjacency(i, j):
                hits += 1
                if hits == 2:
                    out.append(j)
                    break
    return sorted(set(out))


def materialize(t: Truncation) -> BipartiteGraph:
    """Build the explicit graph of a truncation window.

    Deterministic for fixed oracle and parameters. Raises
    :class:`UnboundedClosure` when the closure rule asks for a neighborhood
    with no declared finite bound.
    """
    oracle = t.oracle
    a_idx = list(range(t.a_window + 1))
    b_idx = _b_side_indices(t)
    a_ids = [avert(i) for i in a_idx]
    b_ids = [bvert(j) for j in b_idx]
    edges = [
        (avert(i), bvert(j))
        for i in a_idx
        for j in b_idx
        if oracle.adjacency(i, j)
    ]
    labels: dict[Vertex, str] = {}
    for i in a_idx:
        labels[avert(i)] = oracle.a_label(i)
    for j in b_idx:
        labels[bvert(j)] = oracle.b_label(j)
    return BipartiteGraph(a_ids, b_ids, edges, labels)


def gamma_window(copies: int, inner: int, y_window: int) -> BipartiteGraph:
    """Explicit hub-family window: ``copies`` staircase copies, ``inner``
    A-vertices each, per-copy B sides closed under two-neighbor reach, plus
    the first ``y_window`` hubs.
    """
    if copies < 1 or inner < 1 or y_window < 0:
        raise InvalidVertex("gamma window parameters must be positive")
    oracle = oracle_gamma()
    a_idx = [oracle.a_encode(c, i) for c in range(copies) for i in range(inner)]
    b_idx = [oracle.copy_b_index(c, j) for c in range(copies) for j in range(inner)]
    b_idx += [oracle.hub_index(s) for s in range(y_window)]
    a_ids = [avert(i) for i in sorted(a_idx)]
    b_ids = [bvert(j) for j in sorted(b_idx)]
    edges = [
        (x, y)
        for x in a_ids
        for y in b_ids
        if oracle.adjacency(x[1], y[1])
    ]
    labels = {v: oracle.a_label(v[1]) for v in a_ids}
    labels.update({v: oracle.b_label(v[1]) for v in b_ids})
    return BipartiteGraph(a_ids, b_ids, edges, labels)


def counterexample_window(n: int) -> BipartiteGraph:
    """Canonical matching-defying window: A = v_0..v_n, B = u_0..u_n."""
    return materialize(oracle_counterexample().canonical_truncation(n))


def counterexample_hall_window(n: int) -> BipartiteGraph:
    """The deficient window A = v_0..v_n, B = u_0..u_{n-1}.

    The B side is the joint neighborhood of v_2..v_n, one vertex short of
    the A side, so the full A window violates the marriage condition.
    """
    if n < 1:
        raise InvalidVertex("the deficient window needs n >= 1")
    return materialize(Truncation(oracle_counterexample(), n, EXPLICIT_B, b_window=n))


def glue(m: BipartiteGraph, g: BipartiteGraph) -> BipartiteGraph:
    """Join two bipartite graphs through two fresh hub vertices.

    The result keeps both graphs intact, unions their sides, and adds two
    new B-vertices adjacent to every A-vertex of the union. Vertex id spaces
    must be disjoint; use :func:`~doublehall.core.reindexed` first when they
    are not. The hubs take the two B-indices after the largest one in use
    and are labeled hub0 and hub1.
    """
    shared = (set(m.a_vertices) & set(g.a_vertices)) | (
        set(m.b_vertices) & set(g.b_vertices)
    )
    if shared:
        raise IdCollision(f"graphs share vertex ids, e.g. {sorted(shared)[0]!r}")
    top_b = max((v[1] for v in m.b_vertices + g.b_vertices), default=-1)
    hubs = [bvert(top_b + 1), bvert(top_b + 2)]
    a_all = m.a_vertices + g.a_vertices
    b_all = list(m.b_vertices + g.b_vertices) + hubs
    edges = list(m.edges) + list(g.edges)
    edges.extend((x, h) for h in hubs for x in a_all)
    labels = dict(m.labels)
    labels.update(g.labels)
    labels[hubs[0]] = "hub0"
    labels[hubs[1]] = "hub1"
    return BipartiteGraph(a_all, b_all, edges, labels)
