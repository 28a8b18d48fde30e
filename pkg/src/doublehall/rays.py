"""Finite-budget simulators of the path and ray constructions on lazy
oracles.

Three builders live here. The greedy builder grows a simple alternating
path that sweeps up the least unvisited A-vertex through a fresh
intermediate and two fresh connectors, attaching at the older endpoint each
round. The economical builder grows a double-ray segment by alternately
appending, on the right and then the left, the order-minimal A-vertex that
an unused connector can reach. Ray peeling repeats the economical
construction, removing each finished segment before the next starts, with
a pseudo-isolation check guarding every round.

Every budget is a count of enumeration positions to scan; running out is
an explicit BudgetExhausted, never a silent stop or an infinite loop.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import A_SIDE, B_SIDE, Vertex, avert, bvert
from .errors import (
    BudgetExhausted,
    HypothesisFailed,
    InvalidVertex,
    Undecidable,
)
from .oracles import COFINITE, FINITE, GraphOracle

GREEDY = "greedy"
ECONOMICAL = "economical"

RIGHT = "right"
LEFT = "left"


@dataclass(frozen=True)
class StepRecord:
    """One trace entry: what was chosen, what was rejected and why."""

    kind: str
    payload: dict


@dataclass(frozen=True)
class RayState:
    """An alternating path (greedy mode) or double-ray segment (economical
    mode) under construction.

    vertices always alternates A, B, A, ..., A; both endpoints stay on the
    A side. next_attach names the end the next extension touches: the
    greedy builder alternates ends because each round's new vertex becomes
    the newest endpoint, and the economical builder alternates by
    definition (tail = right, head = left). pending_min tracks the least
    enumeration position that might still be unused, purely as a scan
    floor. The trace records every construction step for the post-hoc
    audits.
    """

    mode: str
    vertices: tuple[Vertex, ...] = ()
    next_attach: str = "tail"
    pending_min: int = 0
    trace: tuple[StepRecord, ...] = ()

    @property
    def used(self) -> frozenset[Vertex]:
        return frozenset(self.vertices)

    @property
    def endpoints(self) -> tuple[Vertex, ...]:
        if not self.vertices:
            return ()
        return (self.vertices[0], self.vertices[-1])

    @property
    def a_indices(self) -> frozenset[int]:
        return frozenset(i for side, i in self.vertices if side == A_SIDE)

    def with_record(self, record: StepRecord) -> "RayState":
        return dataclasses.replace(self, trace=self.trace + (record,))


def greedy_start() -> RayState:
    return RayState(mode=GREEDY)


def economical_start(start_index: int) -> RayState:
    if start_index < 0:
        raise InvalidVertex("start index must be nonnegative")
    return RayState(
        mode=ECONOMICAL,
        vertices=(avert(start_index),),
        next_attach="tail",
        pending_min=0,
    )


def validate_ray_state(oracle: GraphOracle, state: RayState) -> None:
    """Recheck simplicity, alternation, and oracle adjacency of the path."""
    vs = state.vertices
    if len(set(vs)) != len(vs):
        raise ValueError("path repeats a vertex")
    for k, v in enumerate(vs):
        want = A_SIDE if k % 2 == 0 else B_SIDE
        if v[0] != want:
            raise ValueError(f"position {k} breaks A/B alternation: {v!r}")
    if vs and (vs[0][0] != A_SIDE or vs[-1][0] != A_SIDE):
        raise ValueError("both endpoints must be A-vertices")
    for x, y in zip(vs, vs[1:]):
        a, b = (x, y) if x[0] == A_SIDE else (y, x)
        if not oracle.adjacency(a[1], b[1]):
            raise ValueError(f"{a!r} and {b!r} are not adjacent in the oracle")


def _least_unused_a(
    state: RayState, budget: int, forbidden: frozenset[Vertex]
) -> int | None:
    used = state.used
    for i in range(state.pending_min, budget):
        v = avert(i)
        if v not in used and v not in forbidden:
            return i
    return None


def _advance_floor(state: RayState) -> int:
    used = state.used
    floor = state.pending_min
    while avert(floor) in used:
        floor += 1
    return floor


def _exact_commons(oracle: GraphOracle, x: int, y: int) -> list[int]:
    out = oracle.common_neighbors(x, y)
    if out is None:
        raise Undecidable(
            f"the common neighborhood of a{x} and a{y} has no finite"
            " description; connector choice cannot be certified"
        )
    return out


def _fresh_bridge(
    oracle: GraphOracle,
    attach: int,
    v_new: int,
    cand: int,
    used: frozenset[Vertex],
) -> tuple[tuple[int, int] | None, str]:
    """Least fresh connector pair (u, w) for the bridge
    attach - u - cand - w - v_new, or a rejection reason."""
    us = [u for u in _exact_commons(oracle, attach, cand) if bvert(u) not in used]
    if not us:
        return None, "no-fresh-u"
    ws_all = _exact_commons(oracle, v_new, cand)
    for u in us:
        for w in ws_all:
            if w != u and bvert(w) not in used:
                return (u, w), ""
    return None, "no-fresh-w"


def _bootstrap(oracle: GraphOracle, state: RayState) -> RayState:
    commons01 = _exact_commons(oracle, 0, 1)
    if not commons01:
        raise HypothesisFailed(
            "a0 and a1 share no connector; the graph cannot be dHp",
            offender=avert(0),
        )
    u1 = commons01[0]
    commons02 = [u for u in _exact_commons(oracle, 0, 2) if u != u1]
    if not commons02:
        raise HypothesisFailed(
            "a0 and a2 share no connector besides the one already used",
            offender=avert(2),
        )
    u2 = commons02[0]
    vertices = (avert(2), bvert(u2), avert(0), bvert(u1), avert(1))
    record = StepRecord(
        "bootstrap",
        {"v0": 0, "v1": 1, "v2": 2, "u1": u1, "u2": u2},
    )
    out = dataclasses.replace(
        state,
        vertices=vertices,
        next_attach="tail",
        trace=state.trace + (record,),
    )
    out = dataclasses.replace(out, pending_min=_advance_floor(out))
    validate_ray_state(oracle, out)
    return out


def greedy_extend(
    oracle: GraphOracle, state: RayState, budget: int
) -> RayState:
    """One round of the greedy sweep.

    On an empty state, performs the bootstrap: the first three A-vertices
    joined into a 5-vertex path through two distinct connectors. Otherwise
    bridges from the older endpoint through a fresh intermediate to the
    least unvisited A-vertex. The intermediate is the least index for which
    both bridge connectors exist fresh; every smaller index is recorded
    with its rejection reason.
    """
    if not oracle.b_locally_finite:
        raise HypothesisFailed(
            "the greedy builder needs a locally finite B side, and"
            f" family {oracle.family!r} does not declare one"
        )
    if state.mode != GREEDY:
        raise InvalidVertex(f"state has mode {state.mode!r}, expected greedy")
    if not state.vertices:
        return _bootstrap(oracle, state)

    used = state.used
    attach_vertex = (
        state.vertices[-1] if state.next_attach == "tail" else state.vertices[0]
    )
    attach = attach_vertex[1]
    v_new = _least_unused_a(state, budget, frozenset())
    if v_new is None:
        raise BudgetExhausted(
            f"no unvisited A-vertex within the first {budget} positions",
            blocker=attach_vertex,
        )
    rejected: list[tuple[int, str]] = []
    choice: tuple[int, tuple[int, int]] | None = None
    for cand in range(budget):
        if avert(cand) in used or cand == v_new:
            continue
        pair, reason = _fresh_bridge(oracle, attach, v_new, cand, used)
        if pair is None:
            rejected.append((cand, reason))
            continue
        choice = (cand, pair)
        break
    if choice is None:
        raise BudgetExhausted(
            f"no intermediate with fresh connectors within {budget} positions",
            blocker=avert(v_new),
        )
    v_s, (u_s, w_s) = choice
    segment = (bvert(u_s), avert(v_s), bvert(w_s), avert(v_new))
    if state.next_attach == "tail":
        vertices = state.vertices + segment
        next_attach = "head"
    else:
        vertices = tuple(reversed(segment)) + state.vertices
        next_attach = "tail"
    record = StepRecord(
        "extend",
        {
            "attach": attach,
            "v_new": v_new,
            "v_s": v_s,
            "u_s": u_s,
            "w_s": w_s,
            "rejected": tuple(rejected),
        },
    )
    out = dataclasses.replace(
        state,
        vertices=vertices,
        next_attach=next_attach,
        trace=state.trace + (record,),
    )
    out = dataclasses.replace(out, pending_min=_advance_floor(out))
    validate_ray_state(oracle, out)
    return out


def audit_greedy_trace(oracle: GraphOracle, state: RayState) -> int:
    """Independently replay a greedy trace and recheck every choice.

    For each extension this confirms the new vertex was the least
    unvisited, the connectors were fresh members of the right common
    neighborhoods, and every smaller intermediate candidate really had no
    fresh connector pair. Returns the number of records checked; raises
    ValueError on the first discrepancy.
    """
    used: set[Vertex] = set()
    checked = 0
    for record in state.trace:
        if record.kind == "bootstrap":
            p = record.payload
            if (p["v0"], p["v1"], p["v2"]) != (0, 1, 2):
                raise ValueError("bootstrap must take the first three A-vertices")
            commons01 = _exact_commons(oracle, 0, 1)
            if p["u1"] != commons01[0]:
                raise ValueError("bootstrap u1 is not the least common connector")
            commons02 = [u for u in _exact_commons(oracle, 0, 2) if u != p["u1"]]
            if p["u2"] != commons02[0]:
                raise ValueError("bootstrap u2 is not the least fresh connector")
            used.update(
                {avert(0), avert(1), avert(2), bvert(p["u1"]), bvert(p["u2"])}
            )
        elif record.kind == "extend":
            p = record.payload
            frozen = frozenset(used)
            floor = 0
            while avert(floor) in used:
                floor += 1
            if p["v_new"] != floor:
                raise ValueError(
                    f"extension took a{p['v_new']} but a{floor} was the least"
                    " unvisited"
                )
            for cand, _ in p["rejected"]:
                pair, _ = _fresh_bridge(oracle, p["attach"], p["v_new"], cand, frozen)
                if pair is not None:
                    raise ValueError(
                        f"candidate a{cand} was rejected but has a fresh bridge"
                    )
            if avert(p["v_s"]) in used:
                raise ValueError(f"intermediate a{p['v_s']} was already visited")
            pair, _ = _fresh_bridge(
                oracle, p["attach"], p["v_new"], p["v_s"], frozen
            )
            if pair != (p["u_s"], p["w_s"]):
                raise ValueError(
                    f"connector pair for a{p['v_s']} should be {pair}, trace"
                    f" has ({p['u_s']}, {p['w_s']})"
                )
            used.update(
                {
                    avert(p["v_new"]),
                    avert(p["v_s"]),
                    bvert(p["u_s"]),
                    bvert(p["w_s"]),
                }
            )
        else:
            raise ValueError(f"unexpected record kind {record.kind!r}")
        checked += 1
    if used != set(state.vertices):
        raise ValueError("trace does not reconstruct the path's vertex set")
    return checked


def economical_step(
    oracle: GraphOracle,
    state: RayState,
    budget: int,
    order: Sequence[int] | None = None,
    forbidden: frozenset[Vertex] = frozenset(),
) -> RayState:
    """Extend the double-ray segment by one vertex on the due side.

    The candidate scan walks ``order`` (enumeration index order when None)
    over the first ``budget`` positions and takes the first unused,
    unforbidden A-vertex that shares an unused connector with the due
    endpoint; the connector is the least such. Rejections are recorded
    with reasons so the minimality audit can replay them.
    """
    if state.mode != ECONOMICAL:
        raise InvalidVertex(
            f"state has mode {state.mode!r}, expected economical"
        )
    if not state.vertices:
        raise InvalidVertex("economical extension needs a started segment")
    side = RIGHT if state.next_attach == "tail" else LEFT
    endpoint_vertex = (
        state.vertices[-1] if side == RIGHT else state.vertices[0]
    )
    endpoint = endpoint_vertex[1]
    used = state.used
    candidates: Iterable[int]
    if order is None:
        candidates = range(budget)
    else:
        candidates = list(order)[:budget]
    rejected: list[tuple[int, str]] = []
    chosen: tuple[int, int] | None = None
    for cand in candidates:
        v = avert(cand)
        if v in used:
            continue
        if v in forbidden:
            rejected.append((cand, "forbidden"))
            continue
        connector = None
        for u in _exact_commons(oracle, endpoint, cand):
            if bvert(u) not in used and bvert(u) not in forbidden:
                connector = u
                break
        if connector is None:
            rejected.append((cand, "no-unused-connector"))
            continue
        chosen = (cand, connector)
        break
    if chosen is None:
        raise BudgetExhausted(
            f"no addable A-vertex within {budget} scan positions from"
            f" endpoint a{endpoint}",
            blocker=endpoint_vertex,
        )
    cand, connector = chosen
    if side == RIGHT:
        vertices = state.vertices + (bvert(connector), avert(cand))
        next_attach = "head"
    else:
        vertices = (avert(cand), bvert(connector)) + state.vertices
        next_attach = "tail"
    record = StepRecord(
        side,
        {
            "endpoint": endpoint,
            "chosen": cand,
            "connector": connector,
            "rejected": tuple(rejected),
            "forbidden": tuple(sorted(forbidden)),
        },
    )
    out = dataclasses.replace(
        state,
        vertices=vertices,
        next_attach=next_attach,
        trace=state.trace + (record,),
    )
    out = dataclasses.replace(out, pending_min=_advance_floor(out))
    validate_ray_state(oracle, out)
    return out


def audit_economical_minimality(oracle: GraphOracle, state: RayState) -> int:
    """Replay an economical trace and confirm order-minimality throughout.

    For every step: the chosen vertex was the least unused allowed
    candidate with an unused connector, the connector was the least unused
    one, and every smaller candidate really had none. Returns the number
    of steps checked; raises ValueError on the first discrepancy.
    """
    if state.mode != ECONOMICAL or not state.vertices:
        raise InvalidVertex("need a started economical state")
    start = None
    for record in state.trace:
        if record.kind not in (RIGHT, LEFT):
            continue
        if start is None:
            # the start vertex is whichever A-vertex the first step's
            # endpoint names
            start = record.payload["endpoint"]
            break
    if start is None:
        return 0
    used: set[Vertex] = {avert(start)}
    checked = 0
    for record in state.trace:
        if record.kind not in (RIGHT, LEFT):
            continue
        p = record.payload
        forbidden = set(p["forbidden"])
        endpoint = p["endpoint"]
        if avert(endpoint) not in used:
            raise ValueError(f"endpoint a{endpoint} is not on the replayed path")
        for cand in range(p["chosen"]):
            v = avert(cand)
            if v in used or v in forbidden:
                continue
            for u in _exact_commons(oracle, endpoint, cand):
                if bvert(u) not in used and bvert(u) not in forbidden:
                    raise ValueError(
                        f"a{cand} < a{p['chosen']} was addable via b{u}"
                    )
        connectors = [
            u
            for u in _exact_commons(oracle, endpoint, p["chosen"])
            if bvert(u) not in used and bvert(u) not in forbidden
        ]
        if not connectors or connectors[0] != p["connector"]:
            raise ValueError(
                f"connector b{p['connector']} is not the least unused one"
            )
        used.add(avert(p["chosen"]))
        used.add(bvert(p["connector"]))
        checked += 1
    if used != set(state.vertices):
        raise ValueError("trace does not reconstruct the segment's vertex set")
    return checked


@dataclass(frozen=True)
class PseudoIsolationQuery:
    """Ask whether v has no vertex at distance exactly 2 in G minus f."""

    v: int
    f: frozenset[Vertex]

    def __post_init__(self):
        if avert(self.v) in self.f:
            raise InvalidVertex("the forbidden set must not contain v itself")


def pseudo_isolated_witness(
    oracle: GraphOracle, q: PseudoIsolationQuery, scan_limit: int = 4096
) -> bool:
    """Exact pseudo-isolation check against a finite forbidden set.

    True means: every surviving neighbor of v has all its own neighbors
    inside f ∪ {v}, so nothing sits at distance exactly 2 from v once f is
    removed. False is always backed by a concrete distance-2 witness found
    through the adjacency predicate. When neither can be established (a
    surviving neighbor carries an unbounded degree hint and no witness
    turned up within the scan) the answer is Undecidable, never a guess.
    """
    f_a = {i for side, i in q.f if side == A_SIDE}
    f_b = {j for side, j in q.f if side == B_SIDE}

    nv = oracle.a_neighbors(q.v)
    if nv is not None:
        survivors: Iterable[int] = (j for j in nv if j not in f_b)
        exhaustive = True
    else:
        survivors = (
            j
            for j in range(scan_limit)
            if j not in f_b and oracle.adjacency(q.v, j)
        )
        exhaustive = False

    unresolved: int | None = None
    for j in survivors:
        hint = oracle.b_degree_hint(j)
        if hint.kind == FINITE:
            for w in range(hint.bound + 1):
                if w != q.v and w not in f_a and oracle.adjacency(w, j):
                    return False
        elif hint.kind == COFINITE:
            w = 0
            while w in hint.excluded or w == q.v or w in f_a:
                w += 1
            if not oracle.adjacency(w, j):
                raise HypothesisFailed(
                    f"cofinite hint for b{j} contradicts the adjacency"
                    " predicate",
                    offender=bvert(j),
                )
            return False
        else:
            hit = False
            for w in range(scan_limit):
                if w != q.v and w not in f_a and oracle.adjacency(w, j):
                    hit = True
                    break
            if hit:
                return False
            if unresolved is None:
                unresolved = j
    if unresolved is not None:
        raise Undecidable(
            f"b{unresolved} survives the forbidden set with an unbounded"
            " degree hint and no reachable witness; emptiness cannot be"
            " confirmed"
        )
    if not exhaustive:
        raise Undecidable(
            f"a{q.v} has no declared neighbor bound; only the first"
            f" {scan_limit} connector positions were cleared"
        )
    return True


def peel_rays(
    oracle: GraphOracle,
    rounds: int,
    budget: int,
    steps_per_round: int = 6,
) -> list[RayState]:
    """Repeated economical construction with removal between rounds.

    Each round starts from the least A-vertex not on any earlier segment,
    first confirming that vertex is not pseudo-isolated relative to
    everything already removed. Segments are pairwise disjoint by
    construction; a round that runs out of budget keeps its partial
    segment with the exhaustion recorded in its trace.
    """
    if rounds < 0:
        raise InvalidVertex("rounds must be nonnegative")
    removed: set[Vertex] = set()
    segments: list[RayState] = []
    for _ in range(rounds):
        start = None
        for i in range(budget):
            if avert(i) not in removed:
                start = i
                break
        if start is None:
            raise BudgetExhausted(
                f"no unused A-vertex within the first {budget} positions"
            )
        query = PseudoIsolationQuery(start, frozenset(removed))
        # distance-2 witnesses for an A-vertex at position s can sit at
        # connector positions on the order of s^2 in diagonal enumerations,
        # so the clearing scan must outgrow the A-side budget quadratically
        scan = max(256, 2 * budget * budget + 4 * budget)
        if pseudo_isolated_witness(oracle, query, scan_limit=scan):
            raise HypothesisFailed(
                f"a{start} is pseudo-isolated relative to the removed"
                " segments; the peeling hypothesis fails",
                offender=avert(start),
            )
        state = economical_start(start)
        state = state.with_record(
            StepRecord(
                "round-start",
                {"start": start, "removed": tuple(sorted(removed))},
            )
        )
        for _ in range(steps_per_round):
            try:
                state = economical_step(
                    oracle, state, budget, forbidden=frozenset(removed)
                )
            except BudgetExhausted as exc:
                state = state.with_record(
                    StepRecord("budget-exhausted", {"reason": str(exc)})
                )
                break
        removed.update(state.vertices)
        segments.append(state)
    return segments
