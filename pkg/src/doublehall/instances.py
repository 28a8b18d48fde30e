"""Seeded generators and hand-built fixtures for the test suites.

Everything here is deterministic given a `random.Random` instance or fixed
parameters. The surgery scenarios carry their spanning tree and window
cycle explicitly instead of deriving them, so the shapes under test are
exactly the documented ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    A_SIDE,
    B_SIDE,
    BipartiteGraph,
    SubgraphEdgeSet,
    Vertex,
    avert,
    bvert,
)
from .nst import TreeOrder
from .solve import SINGLE_CYCLE, CoverCertificate, check_dhp, validate_cover

__all__ = [
    "SurgeryScenario",
    "absorb_fixture",
    "alternating_spine",
    "cycles_with_hubs",
    "random_bipartite",
    "random_connected_bipartite",
    "random_degree_class_instance",
    "random_dhp_instance",
    "scenario_from_json_dict",
    "scenario_to_json_dict",
    "surgery_scenario_case1",
    "surgery_scenario_case2",
    "surgery_scenario_settled",
]


def random_bipartite(rng: random.Random, na: int, nb: int, p: float) -> BipartiteGraph:
    """Graph on ``na`` + ``nb`` vertices; each cross edge appears with probability ``p``."""
    a = [avert(i) for i in range(na)]
    b = [bvert(j) for j in range(nb)]
    edges = [(x, y) for x in a for y in b if rng.random() < p]
    return BipartiteGraph(a, b, edges)


def random_dhp_instance(rng: random.Random, max_a: int = 8) -> BipartiteGraph:
    """Rejection-sample a random graph until it has the double Hall property.

    Densities are biased high so the acceptance rate stays useful: with
    edge probability p every A-pair needs two common neighbors among the
    B-side, and thin graphs almost never deliver that.
    """
    while True:
        na = rng.randint(2, max_a)
        nb = na + rng.randint(2, 6)
        p = rng.uniform(0.7, 0.95)
        g = random_bipartite(rng, na, nb, p)
        if check_dhp(g).verdict:
            return g


def random_degree_class_instance(rng: random.Random, max_a: int = 6) -> BipartiteGraph:
    """Double-Hall instance whose B-degrees all lie in {2, |A|}.

    Two B-vertices adjacent to all of A play the full-degree class; the
    rest are degree-2 connectors on random A-pairs. Any double-Hall
    violation is repaired by adding one more connector inside the reported
    witness set, which strictly enlarges that set's common neighborhood
    and never shrinks any other, so the loop terminates.
    """
    na = rng.randint(3, max_a)
    idx = list(range(na))
    pairs: list[tuple[int, int]] = []
    for _ in range(rng.randint(na, 2 * na)):
        i, j = rng.sample(idx, 2)
        pairs.append((min(i, j), max(i, j)))

    def build() -> BipartiteGraph:
        a = [avert(i) for i in idx]
        b = [bvert(k) for k in range(len(pairs) + 2)]
        edges: list[tuple[Vertex, Vertex]] = []
        for k, (i, j) in enumerate(pairs):
            edges.append((avert(i), bvert(k)))
            edges.append((avert(j), bvert(k)))
        for hub in (len(pairs), len(pairs) + 1):
            edges.extend((avert(i), bvert(hub)) for i in idx)
        return BipartiteGraph(a, b, edges)

    g = build()
    while True:
        report = check_dhp(g)
        if report.verdict:
            return g
        witness = sorted(i for _, i in report.witness)
        i, j = rng.sample(witness, 2)
        pairs.append((min(i, j), max(i, j)))
        g = build()


def absorb_fixture(
    rng: random.Random,
) -> tuple[BipartiteGraph, SubgraphEdgeSet, tuple[Vertex, ...]]:
    """A degree-deficient subgraph whose repairs are forced, plus its pool.

    The parent chains together one to five copies of a five-vertex block.
    In block ``k`` the subgraph is the path ``v - x - m - y - w`` with both
    outer B-vertices ``v`` and ``w`` at degree one; the parent additionally
    holds the edge ``y v``, so the only legal swap connects ``y`` to ``v``
    and surrenders ``w``, retiring both deficiencies in one step. Decoy
    parent-only edges between blocks land on middle vertices and never
    create an alternative partner.

    Returns the parent graph, the deficient subgraph, and the pool of
    A-vertices the swaps may draw from (here: all of them).
    """
    blocks = rng.randint(1, 5)
    a_ids: list[Vertex] = []
    b_ids: list[Vertex] = []
    parent_edges: list[tuple[Vertex, Vertex]] = []
    sub_edges: list[tuple[Vertex, Vertex]] = []
    for k in range(blocks):
        x, y = avert(2 * k), avert(2 * k + 1)
        v, w, mid = bvert(3 * k), bvert(3 * k + 1), bvert(3 * k + 2)
        a_ids += [x, y]
        b_ids += [v, w, mid]
        parent_edges += [(x, v), (x, mid), (y, mid), (y, w), (y, v)]
        sub_edges += [(x, v), (x, mid), (y, mid), (y, w)]
    for _ in range(rng.randint(0, blocks)):
        x = avert(rng.randrange(2 * blocks))
        mid = bvert(3 * rng.randrange(blocks) + 2)
        if (x, mid) not in parent_edges:
            parent_edges.append((x, mid))
    g = BipartiteGraph(a_ids, b_ids, parent_edges)
    return g, SubgraphEdgeSet(g, sub_edges), tuple(a_ids)


def random_connected_bipartite(
    rng: random.Random, max_vertices: int = 50
) -> BipartiteGraph:
    """Connected graph grown tree-first, then thickened with random chords."""
    nv = rng.randint(2, max_vertices)
    na = rng.randint(1, nv - 1)
    nb = nv - na
    a = [avert(i) for i in range(na)]
    b = [bvert(j) for j in range(nb)]
    arrivals = a[1:] + b[1:]
    rng.shuffle(arrivals)
    placed = {A_SIDE: [a[0]], B_SIDE: [b[0]]}
    edges: list[tuple[Vertex, Vertex]] = [(a[0], b[0])]
    for v in arrivals:
        other = B_SIDE if v[0] == A_SIDE else A_SIDE
        anchor = rng.choice(placed[other])
        edges.append((v, anchor) if v[0] == A_SIDE else (anchor, v))
        placed[v[0]].append(v)
    for _ in range(rng.randint(0, nv)):
        edges.append((rng.choice(a), rng.choice(b)))
    return BipartiteGraph(a, b, edges)


def alternating_spine(n_a: int) -> BipartiteGraph:
    """The path a_0 - b_0 - a_1 - b_1 - ... - a_{n_a - 1}."""
    a = [avert(i) for i in range(n_a)]
    b = [bvert(i) for i in range(max(0, n_a - 1))]
    edges: list[tuple[Vertex, Vertex]] = []
    for i in range(n_a - 1):
        edges.append((avert(i), bvert(i)))
        edges.append((avert(i + 1), bvert(i)))
    return BipartiteGraph(a, b, edges)


def cycles_with_hubs() -> BipartiteGraph:
    """Two disjoint six-cycles whose A-sides are joined by two full hubs.

    The hubs b_6 and b_7 are adjacent to every A-vertex, so the B-degree
    classes come out as {2, |A|} exactly and the full-degree pair plays
    the separator role in the end-count audit.
    """
    edges: list[tuple[Vertex, Vertex]] = []
    for base in (0, 3):
        for k in range(3):
            edges.append((avert(base + k), bvert(base + k)))
            edges.append((avert(base + (k + 1) % 3), bvert(base + k)))
    for hub in (6, 7):
        edges.extend((avert(i), bvert(hub)) for i in range(6))
    a = [avert(i) for i in range(6)]
    b = [bvert(j) for j in range(8)]
    return BipartiteGraph(a, b, edges)


@dataclass(frozen=True)
class SurgeryScenario:
    """A graph, its rooted normal tree, a window cycle, and the cut levels
    one rerouting round works between."""

    graph: BipartiteGraph
    tree: TreeOrder
    cover: CoverCertificate
    branch_index: int
    n0: int
    n1: int


def _tree(spec: dict[Vertex, tuple[Vertex | None, int]]) -> TreeOrder:
    parent = {v: p for v, (p, _) in spec.items()}
    level = {v: lv for v, (_, lv) in spec.items()}
    root = next(v for v, (p, _) in spec.items() if p is None)
    return TreeOrder(root, parent, level)


def _cycle_certificate(
    g: BipartiteGraph, walk: list[Vertex]
) -> CoverCertificate:
    edges: list[tuple[Vertex, Vertex]] = []
    for x, y in zip(walk, walk[1:] + walk[:1]):
        edges.append((x, y) if x[0] == A_SIDE else (y, x))
    covered = frozenset(v for v in walk if v[0] == A_SIDE)
    cert = CoverCertificate((tuple(edges),), SINGLE_CYCLE, covered)
    validate_cover(g, cert)
    return cert


def surgery_scenario_case1() -> SurgeryScenario:
    """Rerouting fixture whose pivot connector hangs off the branch.

    The window cycle a0 b0 a1 b1 a2 b5 a3 b7 covers the four A-vertices
    below the deep cut; the deepest branch continues a3 - b3 - a4 - b4 -
    a5 - b6, and the cycle edge pair at b5 is the one the round removes.
    The connector b5 is a leaf off the branch, which is what
    distinguishes this shape from its sibling fixture.
    """
    a = [avert(i) for i in range(6)]
    b = [bvert(j) for j in range(9)]
    edges = [
        (avert(0), bvert(0)),
        (avert(1), bvert(0)),
        (avert(1), bvert(8)),
        (avert(2), bvert(8)),
        (avert(1), bvert(1)),
        (avert(2), bvert(1)),
        (avert(2), bvert(2)),
        (avert(3), bvert(2)),
        (avert(2), bvert(5)),
        (avert(3), bvert(5)),
        (avert(0), bvert(7)),
        (avert(3), bvert(7)),
        (avert(3), bvert(3)),
        (avert(4), bvert(3)),
        (avert(4), bvert(4)),
        (avert(5), bvert(4)),
        (avert(2), bvert(6)),
        (avert(5), bvert(6)),
    ]
    g = BipartiteGraph(a, b, edges)
    t = _tree(
        {
            avert(0): (None, 0),
            bvert(0): (avert(0), 1),
            avert(1): (bvert(0), 2),
            bvert(8): (avert(1), 3),
            avert(2): (bvert(8), 4),
            bvert(1): (avert(2), 5),
            bvert(2): (avert(2), 5),
            avert(3): (bvert(2), 6),
            bvert(3): (avert(3), 7),
            bvert(5): (avert(3), 7),
            bvert(7): (avert(3), 7),
            avert(4): (bvert(3), 8),
            bvert(4): (avert(4), 9),
            avert(5): (bvert(4), 10),
            bvert(6): (avert(5), 11),
        }
    )
    walk = [
        avert(0),
        bvert(0),
        avert(1),
        bvert(1),
        avert(2),
        bvert(5),
        avert(3),
        bvert(7),
    ]
    return SurgeryScenario(g, t, _cycle_certificate(g, walk), 0, 2, 8)


def surgery_scenario_case2() -> SurgeryScenario:
    """Rerouting fixture whose pivot connector lies on the branch itself.

    Here the removable cycle edge pair sits at b2, the tree parent of the
    deep A-vertex a3, so the round peels the cycle open along the branch
    rather than at a leaf connector.
    """
    a = [avert(i) for i in range(6)]
    b = [bvert(j) for j in (0, 1, 2, 3, 4, 5, 6, 9)]
    edges = [
        (avert(0), bvert(0)),
        (avert(1), bvert(0)),
        (avert(1), bvert(1)),
        (avert(2), bvert(1)),
        (avert(2), bvert(2)),
        (avert(3), bvert(2)),
        (avert(1), bvert(9)),
        (avert(3), bvert(9)),
        (avert(0), bvert(5)),
        (avert(2), bvert(5)),
        (avert(3), bvert(3)),
        (avert(4), bvert(3)),
        (avert(4), bvert(4)),
        (avert(5), bvert(4)),
        (avert(2), bvert(6)),
        (avert(5), bvert(6)),
    ]
    g = BipartiteGraph(a, b, edges)
    t = _tree(
        {
            avert(0): (None, 0),
            bvert(0): (avert(0), 1),
            avert(1): (bvert(0), 2),
            bvert(1): (avert(1), 3),
            avert(2): (bvert(1), 4),
            bvert(2): (avert(2), 5),
            bvert(5): (avert(2), 5),
            avert(3): (bvert(2), 6),
            bvert(3): (avert(3), 7),
            bvert(9): (avert(3), 7),
            avert(4): (bvert(3), 8),
            bvert(4): (avert(4), 9),
            avert(5): (bvert(4), 10),
            bvert(6): (avert(5), 11),
        }
    )
    walk = [
        avert(0),
        bvert(0),
        avert(1),
        bvert(9),
        avert(3),
        bvert(2),
        avert(2),
        bvert(5),
    ]
    return SurgeryScenario(g, t, _cycle_certificate(g, walk), 0, 2, 8)


def surgery_scenario_settled() -> SurgeryScenario:
    """Fixture whose branch holds no A-vertex beyond the deep cut.

    The round has nothing to reroute and must return the cycle unchanged
    with an empty step log.
    """
    a = [avert(i) for i in range(4)]
    b = [bvert(j) for j in (0, 1, 2, 5, 9)]
    edges = [
        (avert(0), bvert(0)),
        (avert(1), bvert(0)),
        (avert(1), bvert(1)),
        (avert(2), bvert(1)),
        (avert(2), bvert(2)),
        (avert(3), bvert(2)),
        (avert(1), bvert(9)),
        (avert(3), bvert(9)),
        (avert(0), bvert(5)),
        (avert(2), bvert(5)),
    ]
    g = BipartiteGraph(a, b, edges)
    t = _tree(
        {
            avert(0): (None, 0),
            bvert(0): (avert(0), 1),
            avert(1): (bvert(0), 2),
            bvert(1): (avert(1), 3),
            avert(2): (bvert(1), 4),
            bvert(2): (avert(2), 5),
            bvert(5): (avert(2), 5),
            avert(3): (bvert(2), 6),
            bvert(9): (avert(3), 7),
        }
    )
    walk = [
        avert(0),
        bvert(0),
        avert(1),
        bvert(9),
        avert(3),
        bvert(2),
        avert(2),
        bvert(5),
    ]
    return SurgeryScenario(g, t, _cycle_certificate(g, walk), 0, 2, 8)


def scenario_to_json_dict(s: SurgeryScenario) -> dict:
    """Serialize a scenario for the command-line surgery runner."""

    def enc(v: Vertex) -> list:
        return [v[0], v[1]]

    return {
        "graph": {
            "a": [i for _, i in s.graph.a_vertices],
            "b": [i for _, i in s.graph.b_vertices],
            "edges": [[enc(x), enc(y)] for x, y in sorted(s.graph.edges)],
        },
        "tree": {
            "root": enc(s.tree.root),
            "parent": [
                [enc(v), enc(p) if p is not None else None]
                for v, p in sorted(s.tree.parent.items())
            ],
            "level": [[enc(v), lv] for v, lv in sorted(s.tree.level.items())],
        },
        "cycle": [enc(v) for v in _walk_of(s.cover)],
        "branch_index": s.branch_index,
        "n0": s.n0,
        "n1": s.n1,
    }


def _walk_of(cover: CoverCertificate) -> list[Vertex]:
    """Recover a closed walk from a single-cycle certificate's edge list."""
    (component,) = cover.components
    succ: dict[Vertex, list[Vertex]] = {}
    for x, y in component:
        succ.setdefault(x, []).append(y)
        succ.setdefault(y, []).append(x)
    start = min(succ)
    walk = [start]
    prev: Vertex | None = None
    while True:
        here = walk[-1]
        nxt = [v for v in succ[here] if v != prev]
        prev = here
        if nxt[0] == start:
            return walk
        walk.append(nxt[0])


def scenario_from_json_dict(data: dict) -> SurgeryScenario:
    """Inverse of :func:`scenario_to_json_dict`; trusts the payload shape."""

    def dec(item: list) -> Vertex:
        return (item[0], int(item[1]))

    gd = data["graph"]
    g = BipartiteGraph(
        [avert(i) for i in gd["a"]],
        [bvert(i) for i in gd["b"]],
        [(dec(x), dec(y)) for x, y in gd["edges"]],
    )
    td = data["tree"]
    parent = {
        dec(v): (dec(p) if p is not None else None) for v, p in td["parent"]
    }
    level = {dec(v): int(lv) for v, lv in td["level"]}
    t = TreeOrder(dec(td["root"]), parent, level)
    walk = [dec(v) for v in data["cycle"]]
    return SurgeryScenario(
        g,
        t,
        _cycle_certificate(g, walk),
        int(data["branch_index"]),
        int(data["n0"]),
        int(data["n1"]),
    )
