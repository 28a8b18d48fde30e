"""Cover sequences over growing truncations and their stabilization limit.

The limit object of an increasing family of finite covers is approximated
by eventual stabilization: an edge present in every late item is kept, one
that still flips near the horizon is reported as unstable rather than
decided either way. The degree-one absorption surgery then repairs the
B-side deficiencies such a limit can leave behind, one edge swap at a
time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import A_SIDE, B_SIDE, BipartiteGraph, Edge, SubgraphEdgeSet, Vertex
from .errors import (
    BudgetExhausted,
    CoverExistenceViolation,
    HypothesisFailed,
    InvalidVertex,
    TooSmall,
    WindowNotStable,
)
from .oracles import DegreeHint, GraphOracle, materialize
from .solve import NoCover, check_dhp, find_2regular_A_cover


@dataclass(frozen=True)
class SubgraphSequence:
    """A run of covers, one per truncation, indexed 1..horizon."""

    items: tuple[SubgraphEdgeSet, ...]
    horizon: int
    oracle: GraphOracle | None = None

    def __post_init__(self):
        if self.horizon != len(self.items):
            raise ValueError(
                f"horizon {self.horizon} does not match {len(self.items)} items"
            )


@dataclass(frozen=True)
class StabilizationReport:
    """Late-behavior classification of every edge seen in a sequence.

    ``window`` is the number of trailing items the classification looked
    at. ``dropped`` edges appeared somewhere but were absent from the whole
    window; they are neither stable nor unstable.
    """

    stable_edges: frozenset[Edge]
    unstable: frozenset[Edge]
    limit_candidate: SubgraphEdgeSet
    dropped: frozenset[Edge]
    window: int
    oracle: GraphOracle | None = None


@dataclass(frozen=True)
class LimitDegreeReport:
    ok: bool
    offenders: tuple[tuple[Vertex, int], ...]
    degree_one: tuple[tuple[Vertex, DegreeHint | None], ...]


@dataclass(frozen=True)
class SurgeryStep:
    """One edge swap: what left the subgraph, what entered, and the pivot
    vertices the step revolved around."""

    removed: tuple[Edge, ...]
    added: tuple[Edge, ...]
    pivot: tuple[Vertex, ...]


def cover_sequence(oracle: GraphOracle, max_n: int) -> SubgraphSequence:
    """Disjoint-cycle covers of the canonical truncations at n = 1..max_n.

    Every truncation is re-checked for the double Hall property before its
    cover is searched. A failed check is a hypothesis violation, and an
    exhausted search contradicts the cover guarantee of double-Hall graphs
    that the construction rests on, so both abort loudly instead of
    returning a shorter sequence.
    """
    items: list[SubgraphEdgeSet] = []
    for n in range(1, max_n + 1):
        g = materialize(oracle.canonical_truncation(n))
        report = check_dhp(g)
        if not report.verdict:
            raise HypothesisFailed(
                f"truncation n={n} of family {oracle.family!r} fails the"
                " double Hall property",
                offender=report.witness,
            )
        cover = find_2regular_A_cover(g)
        if isinstance(cover, NoCover):
            raise CoverExistenceViolation(
                f"dHp truncation n={n} of family {oracle.family!r} has no"
                " disjoint-cycle cover, which no double-Hall graph should"
                " lack",
                graph=g,
                target=cover.target,
            )
        items.append(SubgraphEdgeSet(g, cover.edges()))
    return SubgraphSequence(tuple(items), len(items), oracle)


def stabilize(seq: SubgraphSequence) -> StabilizationReport:
    """Classify every edge of the sequence by its late behavior.

    The decision window is the last quarter of the horizon, never fewer
    than two items. Edges present throughout the window are stable, edges
    that both appear and vanish inside it are unstable, and edges absent
    from the whole window were dropped earlier and stay out of the limit.
    """
    if seq.horizon < 4:
        raise TooSmall(f"stabilization needs horizon >= 4, got {seq.horizon}")
    q = max(2, (seq.horizon + 3) // 4)
    tail = seq.items[-q:]
    every: set[Edge] = set()
    for item in seq.items:
        every.update(item.edges)
    stable: set[Edge] = set()
    unstable: set[Edge] = set()
    dropped: set[Edge] = set()
    for e in every:
        hits = sum(1 for item in tail if e in item.edges)
        if hits == len(tail):
            stable.add(e)
        elif hits == 0:
            dropped.add(e)
        else:
            unstable.add(e)
    limit = SubgraphEdgeSet(seq.items[-1].parent, stable)
    return StabilizationReport(
        frozenset(stable),
        frozenset(unstable),
        limit,
        frozenset(dropped),
        q,
        seq.oracle,
    )


def check_limit_degrees(
    report: StabilizationReport, window: Iterable[Vertex]
) -> LimitDegreeReport:
    """Audit limit degrees on a stabilized window.

    A-vertices in the window must have limit degree exactly 2; B-vertices
    may not exceed 2 anywhere in the limit (a union of disjoint cycles can
    never give them more). Degree-1 B-vertices are reported together with
    the family's degree hint: a vertex stuck at degree one in the limit is
    only consistent with the construction when its full-family degree is
    unbounded or cofinite, so the hint is the evidence a caller wants next.
    """
    win = sorted(set(window))
    limit = report.limit_candidate
    touched = {v for e in report.unstable for v in e}
    for v in win:
        if v in touched:
            raise WindowNotStable(
                f"window vertex {v!r} is incident to an unstable edge"
            )
    offenders: list[tuple[Vertex, int]] = []
    for v in win:
        d = limit.degree(v)
        if v[0] == A_SIDE and d != 2:
            offenders.append((v, d))
        elif v[0] == B_SIDE and d > 2:
            offenders.append((v, d))
    win_set = set(win)
    degree_one: list[tuple[Vertex, DegreeHint | None]] = []
    for b in limit.side_vertices(B_SIDE):
        d = limit.degree(b)
        if d > 2 and b not in win_set:
            offenders.append((b, d))
        if d == 1:
            hint = (
                report.oracle.b_degree_hint(b[1])
                if report.oracle is not None
                else None
            )
            degree_one.append((b, hint))
    return LimitDegreeReport(not offenders, tuple(offenders), tuple(degree_one))


def absorb_degree_one(
    parent: BipartiteGraph,
    h: SubgraphEdgeSet,
    abar: Iterable[Vertex],
    steps: int,
) -> tuple[SubgraphEdgeSet, list[SurgeryStep]]:
    """Swap degree-one B-vertices up to degree two, one edge at a time.

    Deficient B-vertices queue at even labels in id order. A step takes the
    lowest live label v_k, connects it to the least eligible swap partner
    u_k from ``abar`` (not yet protected, adjacent to v_k in the parent but
    not in the subgraph, currently at degree 2), and pays for the new edge
    by removing one of u_k's old edges. The surrendered neighbor is the
    relay: at degree zero it leaves the subgraph, at degree one it queues
    at the first free odd label above k. Both A-vertices a step touches
    become protected from later swaps, so a finished repair stays finished.

    Relays are chosen degree-1-first (the swap then retires two
    deficiencies at once), least id as the tie-break. Labels whose vertex
    was resolved in passing are skipped without consuming a step.
    """
    if h.parent != parent:
        raise InvalidVertex("subgraph does not belong to the given parent")
    pool = sorted(set(abar))
    for a in pool:
        if a[0] != A_SIDE:
            raise InvalidVertex(f"swap pool must be A-side, got {a!r}")
        if a not in parent:
            raise InvalidVertex(f"{a!r} is not a vertex of the parent")
    for a in h.side_vertices(A_SIDE):
        if h.degree(a) != 2:
            raise HypothesisFailed(
                f"A-vertex {parent.label(a)} has degree {h.degree(a)},"
                " expected exactly 2",
                offender=a,
            )
    for b in h.side_vertices(B_SIDE):
        if h.degree(b) > 2:
            raise HypothesisFailed(
                f"B-vertex {parent.label(b)} has degree {h.degree(b)} > 2",
                offender=b,
            )

    current = h
    slots: dict[int, Vertex] = {}
    for i, b in enumerate(
        sorted(v for v in h.side_vertices(B_SIDE) if h.degree(v) == 1)
    ):
        slots[2 * i] = b
    protected: set[Vertex] = set()
    log: list[SurgeryStep] = []
    next_odd = 1

    while len(log) < steps and slots:
        k = min(slots)
        v_k = slots.pop(k)
        if v_k not in current or current.degree(v_k) != 1:
            continue
        x_k = current.neighbors_of(v_k)[0]
        u_k = None
        for a in pool:
            if a in protected or not parent.has_edge(a, v_k):
                continue
            if a not in current or current.degree(a) != 2:
                continue
            if current.has_edge(a, v_k):
                continue
            u_k = a
            break
        if u_k is None:
            raise BudgetExhausted(
                f"no eligible swap partner for {parent.label(v_k)} in the"
                " given pool",
                blocker=v_k,
            )
        candidates = current.neighbors_of(u_k)
        ones = [w for w in candidates if current.degree(w) == 1]
        relay = min(ones) if ones else min(candidates)
        current = current.replace(remove=[(u_k, relay)], add=[(u_k, v_k)])
        protected.update((x_k, u_k))
        log.append(SurgeryStep(((u_k, relay),), ((u_k, v_k),), (v_k, u_k, relay)))
        if relay in current and current.degree(relay) == 1:
            while next_odd in slots or next_odd <= k:
                next_odd += 2
            slots[next_odd] = relay
    return current, log
