"""Cover sequences, edge stabilization, limit degrees, degree-one repair."""

import random

import pytest

from doublehall.core import A_SIDE, B_SIDE, BipartiteGraph, SubgraphEdgeSet, avert, bvert
from doublehall.errors import (
    BudgetExhausted,
    HypothesisFailed,
    InvalidVertex,
    TooSmall,
    WindowNotStable,
)
from doublehall.instances import absorb_fixture
from doublehall.limits import (
    SubgraphSequence,
    absorb_degree_one,
    check_limit_degrees,
    cover_sequence,
    stabilize,
)
from doublehall.oracles import (
    COFINITE,
    counterexample_hall_window,
    oracle_counterexample,
    oracle_h,
)
from doublehall.solve import HallViolation, find_perfect_A_matching


def edge(i, j):
    return (avert(i), bvert(j))


def four_cycle():
    g = BipartiteGraph(
        [avert(0), avert(1)],
        [bvert(0), bvert(1)],
        [(a, b) for a in (avert(0), avert(1)) for b in (bvert(0), bvert(1))],
    )
    return g


def constant_sequence(g, edges, n):
    items = tuple(SubgraphEdgeSet(g, edges) for _ in range(n))
    return SubgraphSequence(items, n)


# -- cover sequences -------------------------------------------------------


def test_cover_sequence_produces_one_valid_cover_per_truncation():
    seq = cover_sequence(oracle_h(), 4)
    assert seq.horizon == 4
    assert len(seq.items) == 4
    for n, item in enumerate(seq.items, start=1):
        a_side = item.parent.a_vertices
        assert len(a_side) == n + 1
        for a in a_side:
            assert item.degree(a) == 2
        for b in item.side_vertices(B_SIDE):
            assert item.degree(b) <= 2


def test_cover_sequence_zero_horizon_is_empty():
    seq = cover_sequence(oracle_h(), 0)
    assert seq.items == ()
    assert seq.horizon == 0


def test_cover_sequence_survives_the_matchingless_family():
    """Covers exist along the canonical windows even where matchings fail."""
    seq = cover_sequence(oracle_counterexample(), 4)
    assert seq.horizon == 4
    res = find_perfect_A_matching(counterexample_hall_window(4))
    assert isinstance(res, HallViolation)
    assert len(res.x) == 5


def test_sequence_rejects_a_horizon_mismatch():
    g = four_cycle()
    items = (SubgraphEdgeSet(g, g.edges),)
    with pytest.raises(ValueError, match="horizon"):
        SubgraphSequence(items, 3)


# -- stabilization ---------------------------------------------------------


def test_stabilize_needs_four_items():
    with pytest.raises(TooSmall):
        stabilize(cover_sequence(oracle_h(), 3))


def test_constant_sequence_is_entirely_stable():
    g = four_cycle()
    rep = stabilize(constant_sequence(g, g.edges, 5))
    assert rep.stable_edges == g.edges
    assert rep.unstable == frozenset()
    assert rep.dropped == frozenset()
    assert rep.limit_candidate.edges == g.edges
    assert rep.window == 2


def test_alternating_matchings_are_entirely_unstable():
    g = four_cycle()
    m1 = [edge(0, 0), edge(1, 1)]
    m2 = [edge(0, 1), edge(1, 0)]
    items = tuple(SubgraphEdgeSet(g, m) for m in (m1, m2, m1, m2))
    rep = stabilize(SubgraphSequence(items, 4))
    assert rep.stable_edges == frozenset()
    assert rep.unstable == frozenset(m1 + m2)
    assert rep.dropped == frozenset()
    assert rep.limit_candidate.edges == frozenset()


def test_edge_absent_from_the_whole_window_counts_as_dropped():
    g = four_cycle()
    early = [edge(0, 0), edge(1, 1)]
    late = [edge(0, 1), edge(1, 0)]
    items = tuple(
        SubgraphEdgeSet(g, m) for m in (early, early, late, late, late, late)
    )
    rep = stabilize(SubgraphSequence(items, 6))
    assert rep.dropped == frozenset(early)
    assert rep.stable_edges == frozenset(late)
    assert rep.unstable == frozenset()


def test_staircase_limit_at_horizon_eight_golden():
    rep = stabilize(cover_sequence(oracle_h(), 8))
    assert rep.window == 2
    assert rep.stable_edges == frozenset(
        edge(i, j)
        for i, j in [
            (0, 0), (0, 1), (1, 0), (1, 1),
            (2, 2), (2, 3), (3, 2), (3, 3),
            (4, 4), (4, 5), (5, 4), (5, 5),
            (6, 6), (6, 7), (7, 6),
        ]
    )
    assert rep.unstable == frozenset(
        edge(i, j) for i, j in [(7, 7), (7, 8), (8, 7), (8, 8)]
    )
    assert rep.dropped == frozenset(
        edge(i, j) for i, j in [(1, 2), (2, 1), (3, 4), (4, 3), (5, 6), (6, 5)]
    )
    assert rep.limit_candidate.edges == rep.stable_edges
    assert rep.oracle is not None and rep.oracle.family == "h"


def test_classification_partitions_everything_seen():
    seq = cover_sequence(oracle_h(), 8)
    rep = stabilize(seq)
    seen = frozenset(e for item in seq.items for e in item.edges)
    assert rep.stable_edges | rep.unstable | rep.dropped == seen
    assert rep.stable_edges & rep.unstable == frozenset()
    assert rep.stable_edges & rep.dropped == frozenset()
    assert rep.unstable & rep.dropped == frozenset()
    last = seq.items[-1].edges
    assert rep.stable_edges <= last
    assert rep.dropped & last == frozenset()
    for e in rep.stable_edges:
        assert all(e in item.edges for item in seq.items[-rep.window:])


def test_longer_horizons_only_destabilize_edges_that_really_flip():
    """An edge stable at horizon h stays stable at horizon H unless some
    later cover actually drops it (replay over the shared prefix)."""
    full = cover_sequence(oracle_h(), 10)
    rep_full = stabilize(full)
    for h in range(4, 10):
        prefix = SubgraphSequence(full.items[:h], h, full.oracle)
        rep_h = stabilize(prefix)
        for e in rep_h.stable_edges:
            if e not in rep_full.stable_edges:
                assert any(e not in item.edges for item in full.items[h:])


# -- limit degree audit ----------------------------------------------------


def test_limit_degrees_on_a_constant_cycle_window():
    g = four_cycle()
    rep = stabilize(constant_sequence(g, g.edges, 4))
    deg = check_limit_degrees(rep, g.a_vertices)
    assert deg.ok
    assert deg.offenders == ()
    assert deg.degree_one == ()


def test_limit_degrees_on_the_staircase_window():
    rep = stabilize(cover_sequence(oracle_h(), 8))
    deg = check_limit_degrees(rep, [avert(i) for i in range(7)])
    assert deg.ok
    assert deg.offenders == ()
    assert len(deg.degree_one) == 1
    b, hint = deg.degree_one[0]
    assert b == bvert(7)
    assert hint is not None and hint.kind == COFINITE


def test_limit_degrees_refuse_vertices_on_unstable_edges():
    rep = stabilize(cover_sequence(oracle_h(), 8))
    with pytest.raises(WindowNotStable):
        check_limit_degrees(rep, [avert(7)])


def test_limit_degrees_flag_wrong_a_degree_and_heavy_b():
    a = [avert(i) for i in range(3)]
    b = [bvert(j) for j in range(4)]
    edges = [(x, bvert(0)) for x in a]
    edges += [(avert(0), bvert(1)), (avert(1), bvert(2)), (avert(2), bvert(3))]
    g = BipartiteGraph(a, b, edges)
    rep = stabilize(constant_sequence(g, edges, 4))
    deg = check_limit_degrees(rep, a)
    assert not deg.ok
    # b0 carries all three A-vertices, one more than any disjoint union of
    # cycles could give it
    assert (bvert(0), 3) in deg.offenders
    assert {v for v, _ in deg.degree_one} == {bvert(1), bvert(2), bvert(3)}
    assert all(hint is None for _, hint in deg.degree_one)


def test_limit_degrees_catch_a_deficient_window_vertex():
    g = four_cycle()
    rep = stabilize(constant_sequence(g, [edge(0, 0), edge(1, 0), edge(1, 1)], 4))
    deg = check_limit_degrees(rep, [avert(0), avert(1)])
    assert not deg.ok
    assert (avert(0), 1) in deg.offenders


# -- degree-one absorption -------------------------------------------------


def test_absorb_repairs_each_fixture_block_in_one_step():
    rng = random.Random(7)
    parent, h, pool = absorb_fixture(rng)
    blocks = len(pool) // 2
    final, log = absorb_degree_one(parent, h, pool, steps=10)
    assert len(log) == blocks
    for k, step in enumerate(log):
        y, v, w = avert(2 * k + 1), bvert(3 * k), bvert(3 * k + 1)
        assert step.pivot == (v, y, w)
        assert step.removed == ((y, w),)
        assert step.added == ((y, v),)
    for b in final.side_vertices(B_SIDE):
        assert final.degree(b) != 1
    for a in final.side_vertices(A_SIDE):
        assert final.degree(a) == 2
    # the input subgraph is untouched
    assert h.degree(bvert(0)) == 1


@pytest.mark.parametrize("seed", range(5))
def test_absorb_invariants_replay(seed):
    """Every completed step keeps A 2-regular, keeps B at most 2, and
    strictly shrinks the number of degree-one B-vertices."""
    rng = random.Random(seed)
    parent, h, pool = absorb_fixture(rng)
    final, log = absorb_degree_one(parent, h, pool, steps=20)

    def deficiency(sub):
        return sum(1 for b in sub.side_vertices(B_SIDE) if sub.degree(b) == 1)

    cur = h
    count = deficiency(cur)
    for step in log:
        cur = cur.replace(remove=step.removed, add=step.added)
        nxt = deficiency(cur)
        assert nxt < count
        count = nxt
        for a in cur.side_vertices(A_SIDE):
            assert cur.degree(a) == 2
        for b in cur.side_vertices(B_SIDE):
            assert cur.degree(b) <= 2
    assert cur == final
    assert count == 0


def test_absorb_on_a_clean_subgraph_is_a_no_op():
    g = four_cycle()
    h = SubgraphEdgeSet(g, g.edges)
    final, log = absorb_degree_one(g, h, g.a_vertices, steps=5)
    assert log == []
    assert final == h


def test_absorb_zero_steps_changes_nothing():
    rng = random.Random(3)
    parent, h, pool = absorb_fixture(rng)
    final, log = absorb_degree_one(parent, h, pool, steps=0)
    assert log == []
    assert final == h


def test_absorb_without_partners_names_the_blocked_vertex():
    rng = random.Random(5)
    parent, h, _ = absorb_fixture(rng)
    with pytest.raises(BudgetExhausted) as exc:
        absorb_degree_one(parent, h, (), steps=5)
    assert exc.value.blocker == bvert(0)


def test_absorb_rejects_a_foreign_subgraph():
    rng = random.Random(1)
    parent, h, pool = absorb_fixture(rng)
    other = four_cycle()
    with pytest.raises(InvalidVertex, match="belong"):
        absorb_degree_one(other, h, pool, steps=1)


def test_absorb_validates_the_pool():
    g = four_cycle()
    h = SubgraphEdgeSet(g, g.edges)
    with pytest.raises(InvalidVertex, match="A-side"):
        absorb_degree_one(g, h, [bvert(0)], steps=1)
    with pytest.raises(InvalidVertex, match="not a vertex"):
        absorb_degree_one(g, h, [avert(9)], steps=1)


def test_absorb_requires_two_regular_a_side():
    g = four_cycle()
    h = SubgraphEdgeSet(g, [edge(0, 0), edge(1, 0), edge(1, 1)])
    with pytest.raises(HypothesisFailed) as exc:
        absorb_degree_one(g, h, g.a_vertices, steps=1)
    assert exc.value.offender == avert(0)


def test_absorb_requires_light_b_side():
    a = [avert(i) for i in range(3)]
    b = [bvert(0), bvert(1), bvert(2), bvert(3)]
    edges = [(x, bvert(0)) for x in a]
    edges += [(avert(0), bvert(1)), (avert(1), bvert(2)), (avert(2), bvert(3))]
    g = BipartiteGraph(a, b, edges)
    h = SubgraphEdgeSet(g, edges)
    with pytest.raises(HypothesisFailed) as exc:
        absorb_degree_one(g, h, a, steps=1)
    assert exc.value.offender == bvert(0)
