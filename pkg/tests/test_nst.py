"""Tree orders, normal spanning trees, claim audits, and branch surgery."""

import dataclasses
import random

import pytest

from doublehall.core import BipartiteGraph, SubgraphEdgeSet, avert, bvert
from doublehall.errors import (
    BudgetExhausted,
    HypothesisFailed,
    InvalidVertex,
    NotConnected,
    TooSmall,
)
from doublehall.instances import (
    alternating_spine,
    cycles_with_hubs,
    random_connected_bipartite,
    scenario_from_json_dict,
    scenario_to_json_dict,
    surgery_scenario_case1,
    surgery_scenario_case2,
    surgery_scenario_settled,
)
from doublehall.nst import (
    CutLevels,
    TreeOrder,
    choose_cut_levels,
    claim_checks,
    normal_spanning_tree,
    normality_offenders,
    surgery_case,
)
from doublehall.oracles import Truncation, materialize, oracle_h, oracle_pair_gadget
from doublehall.solve import DISJOINT_2REGULAR, SINGLE_CYCLE, CoverCertificate


def star(leaves=4):
    a = [avert(i) for i in range(leaves)]
    return BipartiteGraph(a, [bvert(0)], [(x, bvert(0)) for x in a])


def spine_tree(n_a):
    g = alternating_spine(n_a)
    return g, normal_spanning_tree(g, avert(0))


# -- tree order construction ----------------------------------------------


def test_tree_rejects_root_off_level_zero():
    with pytest.raises(InvalidVertex, match="level 0"):
        TreeOrder(avert(0), {avert(0): None}, {avert(0): 1})


def test_tree_rejects_a_parented_root():
    with pytest.raises(InvalidVertex, match="root cannot"):
        TreeOrder(
            avert(0),
            {avert(0): bvert(0), bvert(0): None},
            {avert(0): 0, bvert(0): 1},
        )


def test_tree_rejects_orphans():
    with pytest.raises(InvalidVertex, match="lacks a parent"):
        TreeOrder(avert(0), {avert(0): None}, {avert(0): 0, bvert(0): 1})


def test_tree_rejects_level_jumps():
    with pytest.raises(InvalidVertex, match="extend"):
        TreeOrder(
            avert(0),
            {avert(0): None, bvert(0): avert(0)},
            {avert(0): 0, bvert(0): 2},
        )


# -- order queries ---------------------------------------------------------


def test_chain_walks_root_to_vertex():
    g, t = spine_tree(4)
    assert t.chain(avert(3)) == (
        avert(0), bvert(0), avert(1), bvert(1), avert(2), bvert(2), avert(3),
    )
    assert t.chain(avert(0)) == (avert(0),)


def test_ancestry_and_comparability():
    _, t = spine_tree(4)
    assert t.is_ancestor(avert(1), avert(3))
    assert t.is_ancestor(avert(3), avert(3))
    assert not t.is_ancestor(avert(3), avert(1))
    assert t.comparable(avert(3), avert(1))
    ts = normal_spanning_tree(star(), bvert(0))
    assert not ts.comparable(avert(0), avert(1))


def test_tree_path_through_the_meet():
    _, t = spine_tree(4)
    assert t.tree_path(avert(1), avert(3)) == (
        avert(1), bvert(1), avert(2), bvert(2), avert(3),
    )
    ts = normal_spanning_tree(star(), bvert(0))
    assert ts.tree_path(avert(0), avert(2)) == (avert(0), bvert(0), avert(2))
    assert ts.tree_path(avert(1), avert(1)) == (avert(1),)


def test_level_slices_and_descendants():
    _, t = spine_tree(3)
    assert t.max_level() == 4
    assert t.at_level(2) == (avert(1),)
    assert t.below(2) == (avert(0), bvert(0))
    assert t.descendants(avert(1)) == (avert(2), bvert(1))
    assert t.descendants(avert(2)) == ()
    assert t.vertices() == (avert(0), avert(1), avert(2), bvert(0), bvert(1))


def test_deepest_branch_follows_depth_then_least_id():
    # b0 fans out to a shallow leaf a1 and a deeper arm through a2
    g = BipartiteGraph(
        [avert(i) for i in range(4)],
        [bvert(0), bvert(1)],
        [
            (avert(0), bvert(0)),
            (avert(1), bvert(0)),
            (avert(2), bvert(0)),
            (avert(2), bvert(1)),
            (avert(3), bvert(1)),
        ],
    )
    t = normal_spanning_tree(g, avert(0))
    assert t.deepest_branch(avert(0)) == (
        avert(0), bvert(0), avert(2), bvert(1), avert(3),
    )
    ts = normal_spanning_tree(star(), bvert(0))
    # all leaves tie at depth 1, so the least id wins
    assert ts.deepest_branch(bvert(0)) == (bvert(0), avert(0))


def test_order_queries_reject_foreign_vertices():
    _, t = spine_tree(3)
    with pytest.raises(InvalidVertex):
        t.level_of(avert(9))
    with pytest.raises(InvalidVertex):
        t.children(bvert(9))


# -- normal spanning trees ------------------------------------------------


def test_spanning_a_path_reproduces_the_path():
    g, t = spine_tree(3)
    assert t.root == avert(0)
    assert t.parent_of(bvert(0)) == avert(0)
    assert t.parent_of(avert(1)) == bvert(0)
    assert [t.level_of(v) for v in (avert(0), bvert(0), avert(1), bvert(1), avert(2))] == [0, 1, 2, 3, 4]
    assert normality_offenders(g, t) == ()


def test_spanning_a_cycle_leaves_a_comparable_chord():
    g = BipartiteGraph(
        [avert(0), avert(1)],
        [bvert(0), bvert(1)],
        [(a, b) for a in (avert(0), avert(1)) for b in (bvert(0), bvert(1))],
    )
    t = normal_spanning_tree(g, avert(0))
    assert t.chain(bvert(1)) == (avert(0), bvert(0), avert(1), bvert(1))
    # the chord a0 - b1 joins the ends of the chain
    assert t.comparable(avert(0), bvert(1))
    assert normality_offenders(g, t) == ()


def test_spanning_a_star_from_either_side():
    g = star()
    tb = normal_spanning_tree(g, bvert(0))
    assert all(tb.level_of(avert(i)) == 1 for i in range(4))
    ta = normal_spanning_tree(g, avert(0))
    assert ta.level_of(bvert(0)) == 1
    assert all(ta.level_of(avert(i)) == 2 for i in range(1, 4))


def test_spanning_tree_requires_connectivity():
    g = BipartiteGraph(
        [avert(0), avert(1)],
        [bvert(0), bvert(1)],
        [(avert(0), bvert(0)), (avert(1), bvert(1))],
    )
    with pytest.raises(NotConnected):
        normal_spanning_tree(g, avert(0))


def test_spanning_tree_requires_a_known_root():
    g, _ = spine_tree(2)
    with pytest.raises(InvalidVertex):
        normal_spanning_tree(g, avert(9))


def test_spanning_tree_is_deterministic():
    g = cycles_with_hubs()
    t1 = normal_spanning_tree(g, avert(0))
    t2 = normal_spanning_tree(g, avert(0))
    assert t1.parent == t2.parent
    assert t1.level == t2.level


@pytest.mark.parametrize("seed", range(25))
def test_depth_first_trees_are_normal_and_spanning(seed):
    g = random_connected_bipartite(random.Random(seed), max_vertices=30)
    root = g.a_vertices[0]
    t = normal_spanning_tree(g, root)
    assert normality_offenders(g, t) == ()
    assert set(t.vertices()) == set(g.vertices())


def test_offenders_flag_an_incomparable_edge():
    g = BipartiteGraph(
        [avert(0), avert(1)],
        [bvert(0), bvert(1)],
        [(a, b) for a in (avert(0), avert(1)) for b in (bvert(0), bvert(1))],
    )
    # hand-built non-normal tree: both B-vertices hang off a0 directly
    t = TreeOrder(
        avert(0),
        {avert(0): None, bvert(0): avert(0), bvert(1): avert(0), avert(1): bvert(0)},
        {avert(0): 0, bvert(0): 1, bvert(1): 1, avert(1): 2},
    )
    assert normality_offenders(g, t) == ((avert(1), bvert(1)),)


# -- cut levels ------------------------------------------------------------


def test_cut_levels_on_the_long_spine():
    g, t = spine_tree(8)
    assert choose_cut_levels(g, t) == CutLevels(2, 14, True)


def test_cut_levels_respect_b_side_parity():
    g = alternating_spine(24)
    t = normal_spanning_tree(g, bvert(0))
    assert choose_cut_levels(g, t) == CutLevels(3, 23, True)


def test_cut_levels_need_a_deep_enough_tree():
    g, t = spine_tree(1)
    with pytest.raises(TooSmall, match="exceeds"):
        choose_cut_levels(g, t)


def test_cut_levels_sit_above_full_hubs_or_fail():
    g = cycles_with_hubs()
    t = normal_spanning_tree(g, avert(0))
    # both hubs land deep on the chain, pushing the cut past the tree
    with pytest.raises(TooSmall, match="exceeds"):
        choose_cut_levels(g, t)


def test_cut_levels_exhaust_on_a_short_window():
    g, t = spine_tree(2)
    with pytest.raises(BudgetExhausted) as exc:
        choose_cut_levels(g, t)
    assert exc.value.blocker == avert(1)


def test_cut_levels_need_a_vertices():
    g = BipartiteGraph([], [bvert(0)], [])
    t = TreeOrder(bvert(0), {bvert(0): None}, {bvert(0): 0})
    with pytest.raises(TooSmall, match="no A-vertices"):
        choose_cut_levels(g, t)


# -- claim audits ----------------------------------------------------------


def test_claims_on_a_pair_gadget_window():
    g = materialize(Truncation(oracle_pair_gadget(), 3))
    t = normal_spanning_tree(g, avert(0))
    rep = claim_checks(g, t)
    assert rep.level_a_counts == (1, 0, 1, 0, 1, 0, 1, 0)
    assert rep.successor_offenders == ()
    assert rep.b_infinite == ()
    assert rep.cut_level == 2
    assert rep.end_proxy == 1
    assert rep.claim2_verdict == "empty-binf"
    assert rep.branch_components == ((avert(2), 2, True), (bvert(1), 0, False))


def test_claims_on_the_hubbed_cycles():
    g = cycles_with_hubs()
    t = normal_spanning_tree(g, avert(0))
    rep = claim_checks(g, t)
    assert rep.b_infinite == (bvert(6), bvert(7))
    assert rep.successor_offenders == ()
    assert rep.end_proxy == 1
    assert rep.claim2_verdict == "consistent"
    assert rep.branch_components == ()
    assert sum(rep.level_a_counts) == 6


def test_claims_flag_a_crowded_b_successor_set():
    g = star()
    t = normal_spanning_tree(g, bvert(0))
    rep = claim_checks(g, t)
    assert rep.successor_offenders == (bvert(0),)
    assert rep.b_infinite == (bvert(0),)
    assert rep.claim2_verdict == "violated"
    assert rep.end_proxy == 4


def test_claims_reject_middling_b_degrees():
    g = materialize(oracle_h().canonical_truncation(5))
    t = normal_spanning_tree(g, avert(0))
    with pytest.raises(HypothesisFailed) as exc:
        claim_checks(g, t)
    assert "v2 has degree 5" in str(exc.value)
    assert "neither 2 nor |A| = 6" in str(exc.value)
    assert exc.value.offender == bvert(2)


def test_claims_accept_an_explicit_cut_level():
    g = materialize(Truncation(oracle_pair_gadget(), 3))
    t = normal_spanning_tree(g, avert(0))
    rep = claim_checks(g, t, n0=4)
    assert rep.cut_level == 4


# -- branch surgery --------------------------------------------------------


def test_surgery_reroutes_past_a_tree_consistent_connector():
    sc = surgery_scenario_case1()
    new, steps = surgery_case(
        sc.graph, sc.tree, sc.cover, sc.branch_index, sc.n0, sc.n1
    )
    (step,) = steps
    assert step.pivot == (avert(2), bvert(5), avert(3))
    assert step.removed == ((avert(2), bvert(5)), (avert(3), bvert(5)))
    assert step.added == (
        (avert(2), bvert(6)),
        (avert(5), bvert(6)),
        (avert(5), bvert(4)),
        (avert(4), bvert(4)),
    )
    degs = {v[1]: new.degree(v) for v in new.side_vertices("a")}
    assert degs == {0: 2, 1: 2, 2: 2, 3: 1, 4: 1, 5: 2}
    for b in new.side_vertices("b"):
        assert new.degree(b) <= 2


def test_surgery_reroutes_below_the_pivot_itself():
    sc = surgery_scenario_case2()
    new, steps = surgery_case(
        sc.graph, sc.tree, sc.cover, sc.branch_index, sc.n0, sc.n1
    )
    (step,) = steps
    assert step.pivot == (avert(3), bvert(2), avert(2))
    assert step.removed == ((avert(2), bvert(2)), (avert(3), bvert(2)))
    assert step.added == (
        (avert(2), bvert(6)),
        (avert(5), bvert(6)),
        (avert(5), bvert(4)),
        (avert(4), bvert(4)),
    )
    degs = {v[1]: new.degree(v) for v in new.side_vertices("a")}
    assert degs == {0: 2, 1: 2, 2: 2, 3: 1, 4: 1, 5: 2}


def test_surgery_cases_share_the_loose_end_discipline():
    """Exactly one covered A-vertex loses an edge; the others keep both."""
    for sc in (surgery_scenario_case1(), surgery_scenario_case2()):
        new, steps = surgery_case(
            sc.graph, sc.tree, sc.cover, sc.branch_index, sc.n0, sc.n1
        )
        (step,) = steps
        covered = sc.cover.covered
        dangling = [a for a in new.side_vertices("a") if new.degree(a) == 1]
        assert len(dangling) == 2
        assert sum(1 for a in dangling if a in covered) == 1
        for a in covered:
            if a not in dangling:
                assert new.degree(a) == 2


def test_surgery_settles_when_the_branch_stops_short():
    sc = surgery_scenario_settled()
    new, steps = surgery_case(
        sc.graph, sc.tree, sc.cover, sc.branch_index, sc.n0, sc.n1
    )
    assert steps == []
    assert new == SubgraphEdgeSet(sc.graph, sc.cover.edges())


def test_surgery_rejects_multi_component_covers():
    sc = surgery_scenario_case1()
    multi = dataclasses.replace(sc.cover, kind=DISJOINT_2REGULAR)
    with pytest.raises(HypothesisFailed, match="single-cycle"):
        surgery_case(sc.graph, sc.tree, multi, sc.branch_index, sc.n0, sc.n1)


def test_surgery_rejects_a_cover_missing_window_vertices():
    sc = surgery_scenario_case1()
    short = dataclasses.replace(
        sc.cover, covered=sc.cover.covered - {avert(0)}
    )
    with pytest.raises(HypothesisFailed, match="window"):
        surgery_case(sc.graph, sc.tree, short, sc.branch_index, sc.n0, sc.n1)


def test_surgery_rejects_a_branch_index_out_of_range():
    sc = surgery_scenario_case1()
    with pytest.raises(InvalidVertex, match="branch index"):
        surgery_case(sc.graph, sc.tree, sc.cover, 5, sc.n0, sc.n1)


def test_surgery_rejects_a_degenerate_cycle():
    sc = surgery_scenario_case1()
    broken = CoverCertificate(
        components=(((avert(0), bvert(0)), (avert(1), bvert(0))),),
        kind=SINGLE_CYCLE,
        covered=sc.cover.covered,
    )
    with pytest.raises(HypothesisFailed, match="cycle edges"):
        surgery_case(sc.graph, sc.tree, broken, sc.branch_index, sc.n0, sc.n1)


# -- scenario serialization -------------------------------------------------


@pytest.mark.parametrize(
    "build",
    [surgery_scenario_case1, surgery_scenario_case2, surgery_scenario_settled],
)
def test_scenarios_roundtrip_through_json(build):
    sc = build()
    back = scenario_from_json_dict(scenario_to_json_dict(sc))
    assert back.graph == sc.graph
    assert back.tree.root == sc.tree.root
    assert back.tree.parent == sc.tree.parent
    assert back.tree.level == sc.tree.level
    assert back.cover == sc.cover
    assert (back.branch_index, back.n0, back.n1) == (
        sc.branch_index, sc.n0, sc.n1,
    )
