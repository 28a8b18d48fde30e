"""Exact decision procedures on finite bipartite graphs.

Four solvers live here: the double Hall verifier (exhaustive subset scan
with monotonicity pruning), perfect A-matching with deficiency
certificates, disjoint-2-regular covers of a prescribed A-set, and single
A-covering cycles. All tie-breaking is lexicographic on vertex ids, so
every output is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .core import BipartiteGraph, Edge, Vertex
from .errors import InvalidVertex, TooSmall

DISJOINT_2REGULAR = "disjoint-2-regular"
SINGLE_CYCLE = "single-cycle"


@dataclass(frozen=True)
class DhpReport:
    """Outcome of the double Hall check.

    witness is present exactly when verdict is false, and is then a
    minimum-cardinality violating subset (ties broken lexicographically).
    """

    verdict: bool
    witness: tuple[Vertex, ...] | None
    subsets_examined: int
    pruned: int


@dataclass(frozen=True)
class MatchingCertificate:
    pairs: dict[Vertex, Vertex]

    def __post_init__(self):
        if len(set(self.pairs.values())) != len(self.pairs):
            raise InvalidVertex("matching reuses a B-vertex")


@dataclass(frozen=True)
class HallViolation:
    """An A-subset with fewer neighbors than members."""

    x: tuple[Vertex, ...]


@dataclass(frozen=True)
class CoverCertificate:
    """A verified family of disjoint cycles covering a prescribed A-set.

    components holds one edge list per cycle, in traversal order starting
    at the cycle's least vertex; covered is the A-set the family meets.
    """

    components: tuple[tuple[Edge, ...], ...]
    kind: str
    covered: frozenset[Vertex]

    def edges(self) -> frozenset[Edge]:
        return frozenset(e for comp in self.components for e in comp)


@dataclass(frozen=True)
class NoCover:
    target: tuple[Vertex, ...]


@dataclass(frozen=True)
class NoSingleCycle:
    target: tuple[Vertex, ...]


def check_dhp(g: BipartiteGraph) -> DhpReport:
    """Decide whether every A-subset of size >= 2 has enough twice-covered
    neighbors.

    Subsets are scanned depth-first in lexicographic order with incremental
    once/twice bitsets. Two prunings apply, both justified by monotonicity
    of the twice-covered set: a subtree whose twice-set already has |A|
    members can never fail, and a subtree whose subsets are at least as
    large as the best violation found so far cannot improve the witness.
    """
    m = len(g.a_vertices)
    if m < 2:
        raise TooSmall(f"double Hall property needs |A| >= 2, got {m}")
    a_list = g.a_vertices
    b_pos = {b: k for k, b in enumerate(g.b_vertices)}
    masks = []
    for a in a_list:
        mask = 0
        for b in g.neighbors_of(a):
            mask |= 1 << b_pos[b]
        masks.append(mask)

    best_size = m + 1
    best: tuple[int, ...] | None = None
    examined = 0
    pruned = 0

    def walk(start: int, chosen: tuple[int, ...], once: int, twice: int) -> None:
        nonlocal best_size, best, examined, pruned
        count = len(chosen)
        for i in range(start, m):
            if count + 1 >= best_size:
                # every subset below here is at least as large as the best
                # violation already in hand, and within a fixed size the
                # scan order is lexicographic, so nothing can improve
                pruned += 1
                break
            n_once = once | masks[i]
            n_twice = twice | (once & masks[i])
            if count + 1 >= 2:
                examined += 1
                if n_twice.bit_count() < count + 1:
                    best_size = count + 1
                    best = chosen + (i,)
                    continue
                if n_twice.bit_count() >= m:
                    # supersets only grow the twice-set, and their size
                    # stays at most m: no violation exists below
                    pruned += 1
                    continue
            walk(i + 1, chosen + (i,), n_once, n_twice)

    walk(0, (), 0, 0)
    witness = tuple(a_list[i] for i in best) if best is not None else None
    return DhpReport(
        verdict=witness is None,
        witness=witness,
        subsets_examined=examined,
        pruned=pruned,
    )


def find_perfect_A_matching(
    g: BipartiteGraph,
) -> MatchingCertificate | HallViolation:
    """Maximum bipartite matching, reported as a certificate.

    Runs Hopcroft-Karp. If the matching saturates A it is returned as is;
    otherwise the alternating-reachability cut from the unmatched
    A-vertices yields a set X with |N(X)| = |X| - deficiency, the standard
    Hall violator.
    """
    a_side = g.a_vertices
    adj = {a: g.neighbors_of(a) for a in a_side}
    match_a: dict[Vertex, Vertex] = {}
    match_b: dict[Vertex, Vertex] = {}

    def bfs_layers() -> tuple[bool, dict[Vertex, int]]:
        dist: dict[Vertex, int] = {}
        queue: deque[Vertex] = deque()
        for a in a_side:
            if a not in match_a:
                dist[a] = 0
                queue.append(a)
        reached_free = False
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                other = match_b.get(b)
                if other is None:
                    reached_free = True
                elif other not in dist:
                    dist[other] = dist[a] + 1
                    queue.append(other)
        return reached_free, dist

    def augment(a: Vertex, dist: dict[Vertex, int]) -> bool:
        for b in adj[a]:
            other = match_b.get(b)
            if other is None or (
                dist.get(other) == dist[a] + 1 and augment(other, dist)
            ):
                match_a[a] = b
                match_b[b] = a
                return True
        dist[a] = -1
        return False

    while True:
        reached_free, dist = bfs_layers()
        if not reached_free:
            break
        for a in a_side:
            if a not in match_a:
                augment(a, dist)

    if len(match_a) == len(a_side):
        return MatchingCertificate(dict(sorted(match_a.items())))

    # alternating reachability from the exposed A-vertices: every reached
    # B-vertex is matched (otherwise an augmenting path existed), so the
    # reached A-set beats its neighborhood by exactly the deficiency
    za = {a for a in a_side if a not in match_a}
    zb: set[Vertex] = set()
    stack = sorted(za)
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in zb:
                zb.add(b)
                other = match_b.get(b)
                if other is not None and other not in za:
                    za.add(other)
                    stack.append(other)
    return HallViolation(tuple(sorted(za)))


def _normalize_target(
    g: BipartiteGraph, target: Iterable[Vertex] | None
) -> tuple[Vertex, ...]:
    if target is None:
        return g.a_vertices
    out = tuple(sorted(set(target)))
    a_set = set(g.a_vertices)
    for v in out:
        if v not in a_set:
            raise InvalidVertex(f"target vertex {v!r} is not on the A side")
    return out


def _cycle_components(edge_set: set[Edge]) -> tuple[tuple[Edge, ...], ...]:
    """Split an all-degree-2 edge set into its cycles.

    Each cycle is reported in traversal order, starting at its least vertex
    and moving toward that vertex's lesser neighbor, so the output is a
    pure function of the edge set.
    """
    nbr: dict[Vertex, list[Vertex]] = {}
    for x, y in edge_set:
        nbr.setdefault(x, []).append(y)
        nbr.setdefault(y, []).append(x)
    for v in nbr:
        nbr[v].sort()
    seen: set[Vertex] = set()
    components = []
    for start in sorted(nbr):
        if start in seen:
            continue
        cycle_edges = []
        prev, cur = None, start
        while True:
            seen.add(cur)
            first, second = nbr[cur]
            nxt = first if prev is None or first != prev else second
            cycle_edges.append((cur, nxt) if cur[0] == "a" else (nxt, cur))
            prev, cur = cur, nxt
            if cur == start:
                break
        components.append(tuple(cycle_edges))
    return tuple(components)


def validate_cover(
    g: BipartiteGraph, cert: CoverCertificate
) -> None:
    """Recheck every certificate invariant; raises ValueError on any break.

    Solvers call this before returning, so a bad certificate can never
    escape quietly.
    """
    if cert.kind not in (DISJOINT_2REGULAR, SINGLE_CYCLE):
        raise ValueError(f"unknown certificate kind {cert.kind!r}")
    if cert.kind == SINGLE_CYCLE and len(cert.components) != 1:
        raise ValueError("single-cycle certificate must have one component")
    edge_pool = set(g.edges)
    seen_vertices: set[Vertex] = set()
    covered_a: set[Vertex] = set()
    for comp in cert.components:
        if not comp:
            raise ValueError("empty component")
        deg: dict[Vertex, int] = {}
        comp_set = set(comp)
        if len(comp_set) != len(comp):
            raise ValueError("component repeats an edge")
        for e in comp:
            if e not in edge_pool:
                raise ValueError(f"edge {e!r} is not in the parent graph")
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        for v, d in deg.items():
            if d != 2:
                raise ValueError(f"vertex {v!r} has degree {d} in its component")
        overlap = seen_vertices & deg.keys()
        if overlap:
            raise ValueError(f"components share vertex {sorted(overlap)[0]!r}")
        seen_vertices.update(deg)
        # connectivity: an all-degree-2 component is one cycle iff the edge
        # count equals the vertex count and a walk closes up
        if len(comp) != len(deg):
            raise ValueError("component is not a single cycle")
        walked = _cycle_components(comp_set)
        if len(walked) != 1:
            raise ValueError("component splits into several cycles")
        covered_a.update(v for v in deg if v[0] == "a")
    if covered_a != set(cert.covered):
        raise ValueError("covered set does not match the components")


def find_2regular_A_cover(
    g: BipartiteGraph, target: Iterable[Vertex] | None = None
) -> CoverCertificate | NoCover:
    """Exact search for disjoint cycles meeting A exactly in ``target``.

    Backtracks over the B-vertices in id order; each either stays out or
    contributes an unordered pair of edges to still-deficient targets. An
    edge set in which every used vertex has degree exactly 2 is
    automatically a disjoint union of cycles, so no shape check is needed
    during the search. NoCover is returned only after the whole space is
    exhausted.
    """
    target = _normalize_target(g, target)
    if len(target) < 2:
        raise TooSmall(f"cover target needs >= 2 vertices, got {len(target)}")
    tset = frozenset(target)
    b_order = g.b_vertices
    b_nbrs = [tuple(x for x in g.neighbors_of(b) if x in tset) for b in b_order]

    # potential[k][a] = how many of the b's from position k onward could
    # still give a an edge; used for the degree-feasibility prune
    suffix: list[dict[Vertex, int]] = [dict() for _ in range(len(b_order) + 1)]
    for k in range(len(b_order) - 1, -1, -1):
        cur = dict(suffix[k + 1])
        for x in b_nbrs[k]:
            cur[x] = cur.get(x, 0) + 1
        suffix[k] = cur

    deg = {a: 0 for a in target}
    chosen: list[tuple[Vertex, Vertex, Vertex]] = []  # (b, x, y)

    def deficit_ok(k: int) -> bool:
        pot = suffix[k]
        return all(deg[a] + pot.get(a, 0) >= 2 for a in target if deg[a] < 2)

    def solve(k: int) -> bool:
        if all(d == 2 for d in deg.values()):
            return True
        if k == len(b_order):
            return False
        if not deficit_ok(k):
            return False
        open_nbrs = [x for x in b_nbrs[k] if deg[x] < 2]
        for x, y in combinations(open_nbrs, 2):
            deg[x] += 1
            deg[y] += 1
            chosen.append((b_order[k], x, y))
            if solve(k + 1):
                return True
            chosen.pop()
            deg[x] -= 1
            deg[y] -= 1
        return solve(k + 1)

    if not solve(0):
        return NoCover(target)
    edge_set = set()
    for b, x, y in chosen:
        edge_set.add((x, b))
        edge_set.add((y, b))
    cert = CoverCertificate(_cycle_components(edge_set), DISJOINT_2REGULAR, tset)
    validate_cover(g, cert)
    return cert


def find_A_covering_cycle(
    g: BipartiteGraph, target: Iterable[Vertex] | None = None
) -> CoverCertificate | NoSingleCycle:
    """Exact search for one cycle whose A-vertices are exactly ``target``.

    Alternating depth-first construction from the least target. Any
    B-vertex may appear, each at most once. Prunes on the degree of
    still-unvisited targets in the unused graph and on connectivity of the
    remaining relevant vertices. Exhaustive, hence NoSingleCycle is a
    definite verdict.
    """
    target = _normalize_target(g, target)
    if len(target) < 2:
        raise TooSmall(f"cycle target needs >= 2 vertices, got {len(target)}")
    tset = frozenset(target)
    start = target[0]
    used_b: set[Vertex] = set()
    visited: set[Vertex] = {start}
    path: list[Vertex] = [start]  # alternating a, b, a, ..., a

    def b_open(a: Vertex) -> list[Vertex]:
        return [b for b in g.neighbors_of(a) if b not in used_b]

    def feasible(cur: Vertex) -> bool:
        # each unvisited target still needs two distinct unused connectors;
        # cur and start need one each
        for a in target:
            if a in visited and a != cur and a != start:
                continue
            need = 1 if a in (cur, start) else 2
            if len(b_open(a)) < need:
                return False
        # the unvisited targets plus both loose ends must be mutually
        # reachable through unused B-vertices
        relevant = {a for a in target if a not in visited}
        relevant.add(cur)
        relevant.add(start)
        frontier = [min(relevant)]
        reach_a = {min(relevant)}
        seen_b: set[Vertex] = set()
        while frontier:
            v = frontier.pop()
            for b in g.neighbors_of(v):
                if b in used_b or b in seen_b:
                    continue
                seen_b.add(b)
                for a2 in g.neighbors_of(b):
                    if a2 in relevant and a2 not in reach_a:
                        reach_a.add(a2)
                        frontier.append(a2)
        return reach_a == relevant

    def extend(cur: Vertex) -> bool:
        if len(visited) == len(target):
            for b in b_open(cur):
                if g.has_edge(start, b):
                    used_b.add(b)
                    path.append(b)
                    return True
            return False
        if not feasible(cur):
            return False
        for b in b_open(cur):
            for a2 in g.neighbors_of(b):
                if a2 not in tset or a2 in visited:
                    continue
                used_b.add(b)
                visited.add(a2)
                path.append(b)
                path.append(a2)
                if extend(a2):
                    return True
                path.pop()
                path.pop()
                visited.discard(a2)
                used_b.discard(b)
        return False

    if not extend(start):
        return NoSingleCycle(target)
    edges = []
    ring = path + [start]
    for u, v in zip(ring, ring[1:]):
        edges.append((u, v) if u[0] == "a" else (v, u))
    cert = CoverCertificate(
        _cycle_components(set(edges)), SINGLE_CYCLE, tset
    )
    validate_cover(g, cert)
    return cert


def classify_B_degrees(
    g: BipartiteGraph, full_a: int | None = None
) -> dict[str, tuple[Vertex, ...]]:
    """Partition B into degree-2 vertices, full vertices (N(v) = A), and
    the rest.

    A vertex qualifying for both classes (as in a complete graph on two
    A-vertices) is reported as degree-2; that precedence gates the
    restricted-degree cycle solver, which treats degree-2 vertices as the
    scarce resource.
    """
    if full_a is None:
        full_a = len(g.a_vertices)
    deg2, full, other = [], [], []
    for b in g.b_vertices:
        d = g.degree(b)
        if d == 2:
            deg2.append(b)
        elif d == full_a:
            full.append(b)
        else:
            other.append(b)
    return {
        "deg2": tuple(deg2),
        "full": tuple(full),
        "other": tuple(other),
    }
