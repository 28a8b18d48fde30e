"""Lazy families: adjacency laws, degree hints, truncation windows, gluing."""

from itertools import combinations

import pytest

from doublehall.core import avert, bvert, neighbors2, BipartiteGraph, reindexed
from doublehall.errors import IdCollision, InvalidVertex, UnboundedClosure
from doublehall.oracles import (
    COFINITE,
    EXPLICIT_B,
    FAMILIES,
    FINITE,
    N2_CLOSURE,
    N_CLOSURE,
    UNBOUNDED,
    Truncation,
    counterexample_hall_window,
    counterexample_window,
    gamma_window,
    glue,
    materialize,
    oracle_counterexample,
    oracle_gamma,
    oracle_h,
    oracle_pair_gadget,
)
from doublehall.solve import check_dhp


# -- staircase family ----------------------------------------------------


def test_staircase_adjacency_examples():
    o = oracle_h()
    assert o.adjacency(0, 1)
    assert not o.adjacency(0, 2)
    assert o.adjacency(3, 4)
    assert not o.adjacency(3, 5)


def test_staircase_neighbor_list_length():
    o = oracle_h()
    assert o.a_neighbors(3) == [0, 1, 2, 3, 4]


def test_staircase_common_neighbors_form():
    o = oracle_h()
    assert o.common_neighbors(2, 5) == [0, 1, 2, 3]
    with pytest.raises(InvalidVertex):
        o.common_neighbors(2, 2)


def test_staircase_closed_form_two_witness_counts():
    """|N2(X)| = (second largest index of X) + 2, exhaustively to n = 8."""
    o = oracle_h()
    for n in range(1, 9):
        g = materialize(o.canonical_truncation(n))
        a = g.a_vertices
        for k in range(2, len(a) + 1):
            for xs in combinations(a, k):
                second = sorted(i for _, i in xs)[-2]
                assert len(neighbors2(g, xs)) == second + 2


def test_staircase_labels():
    o = oracle_h()
    assert o.a_label(0) == "u0"
    assert o.b_label(3) == "v3"


# -- hub family ----------------------------------------------------------


def test_hub_family_adjacency_examples():
    o = oracle_gamma()
    assert o.adjacency(o.a_encode(5, 3), o.hub_index(0))
    assert not o.adjacency(o.a_encode(1, 0), o.hub_index(3))
    assert o.adjacency(o.a_encode(1, 0), o.hub_index(2))
    # staircase edges stay inside their copy
    assert o.adjacency(o.a_encode(0, 1), o.copy_b_index(0, 2))
    assert not o.adjacency(o.a_encode(0, 1), o.copy_b_index(1, 0))


def test_hub_family_pairing_roundtrips():
    o = oracle_gamma()
    for c in range(6):
        for i in range(6):
            assert o.a_decode(o.a_encode(c, i)) == (c, i)
            assert o.b_decode(o.copy_b_index(c, i)) == (c, i)
    for s in range(6):
        assert o.b_decode(o.hub_index(s)) == (None, s)


def test_hub_family_enumeration_is_injective():
    o = oracle_gamma()
    codes = [o.a_encode(c, i) for c in range(8) for i in range(8)]
    assert len(set(codes)) == len(codes)


def test_hub_family_labels():
    o = oracle_gamma()
    assert o.a_label(o.a_encode(2, 1)) == "u1^2"
    assert o.b_label(o.hub_index(4)) == "y4"


def test_gamma_window_shape_and_property():
    g = gamma_window(2, 2, 2)
    assert len(g.a_vertices) == 4
    assert len(g.b_vertices) == 6
    assert check_dhp(g).verdict


def test_gamma_window_rejects_empty_copies():
    with pytest.raises(InvalidVertex):
        gamma_window(0, 2, 2)


# -- matching-defying family ---------------------------------------------


def test_matching_defying_adjacency_examples():
    o = oracle_counterexample()
    assert o.adjacency(2, 1)
    assert not o.adjacency(2, 2)
    assert o.adjacency(0, 9)
    assert o.adjacency(1, 9)
    assert o.adjacency(5, 0)


def test_matching_defying_universal_vertices_have_no_list():
    o = oracle_counterexample()
    assert o.a_neighbors(0) is None
    assert o.a_neighbors(1) is None
    assert o.a_neighbors(4) == [0, 1, 2, 3]


def test_matching_defying_windows():
    g = counterexample_window(4)
    assert len(g.a_vertices) == 5
    assert len(g.b_vertices) == 5
    h = counterexample_hall_window(4)
    assert len(h.a_vertices) == 5
    assert len(h.b_vertices) == 4
    with pytest.raises(InvalidVertex):
        counterexample_hall_window(0)


def test_matching_defying_n2_closure_is_unbounded():
    o = oracle_counterexample()
    with pytest.raises(UnboundedClosure):
        materialize(Truncation(o, 3, N2_CLOSURE))


# -- pair-gadget family --------------------------------------------------


def test_gadget_enumeration_is_colexicographic():
    o = oracle_pair_gadget()
    order = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (0, 4)]
    want = 0
    for i, j in order:
        for k in (0, 1):
            assert o.gadget_index(i, j, k) == want
            assert o.gadget_decode(want) == (i, j, k)
            want += 1


def test_gadget_common_neighbors():
    o = oracle_pair_gadget()
    assert o.common_neighbors(0, 5) == [
        o.gadget_index(0, 5, 0),
        o.gadget_index(0, 5, 1),
    ]
    assert o.common_neighbors(5, 0) == o.common_neighbors(0, 5)


def test_gadget_two_witness_candidates():
    o = oracle_pair_gadget()
    assert len(o.n2_candidates([0, 1, 2])) == 6


def test_gadget_degree_hint_is_finite_with_pair_bound():
    o = oracle_pair_gadget()
    hint = o.b_degree_hint(o.gadget_index(1, 2, 0))
    assert hint.kind == FINITE
    assert hint.bound == 2


def test_gadget_labels():
    o = oracle_pair_gadget()
    assert o.b_label(o.gadget_index(0, 5, 1)) == "b0_5_1"


# -- truncations and materialization -------------------------------------


def test_materialize_smallest_staircase_window():
    g = materialize(oracle_h().canonical_truncation(1))
    assert g.a_vertices == (avert(0), avert(1))
    assert g.b_vertices == (bvert(0), bvert(1))


def test_materialize_degenerate_window_has_empty_b_side():
    g = materialize(oracle_h().canonical_truncation(0))
    assert len(g.a_vertices) == 1
    assert g.b_vertices == ()


def test_materialize_gadget_window_closes_over_pairs():
    g = materialize(oracle_pair_gadget().canonical_truncation(2))
    assert len(g.a_vertices) == 3
    assert len(g.b_vertices) == 6
    assert g.num_edges() == 12


def test_materialize_refuses_unbounded_neighbor_closure():
    o = oracle_pair_gadget()
    with pytest.raises(UnboundedClosure):
        materialize(Truncation(o, 2, N_CLOSURE))


def test_materialize_explicit_b_window():
    o = oracle_counterexample()
    g = materialize(Truncation(o, 3, EXPLICIT_B, b_window=2))
    assert g.b_vertices == (bvert(0), bvert(1))


def test_truncation_window_bound_is_inclusive():
    g = materialize(oracle_h().canonical_truncation(2))
    assert avert(2) in g


def test_n2_closure_stable_under_window_growth():
    """The B side a window settles on never changes in a larger window."""
    for family in ("h", "gamma", "pair-gadget"):
        o = FAMILIES[family]()
        for n in range(1, 5):
            small = materialize(o.canonical_truncation(n))
            big = materialize(o.canonical_truncation(n + 3))
            recomputed = neighbors2(big, small.a_vertices)
            assert recomputed == frozenset(small.b_vertices), (family, n)


def test_materialized_labels_come_from_the_oracle():
    g = materialize(oracle_h().canonical_truncation(2))
    assert g.label(avert(0)) == "u0"
    assert g.label(bvert(2)) == "v2"


# -- degree hints vs adjacency -------------------------------------------


SCAN = 40


def hint_matches_adjacency(oracle, b_index: int) -> bool:
    hint = oracle.b_degree_hint(b_index)
    hits = [i for i in range(SCAN) if oracle.adjacency(i, b_index)]
    if hint.kind == FINITE:
        return all(i <= hint.bound for i in hits)
    if hint.kind == COFINITE:
        return hits == [i for i in range(SCAN) if i not in hint.excluded]
    return hint.kind == UNBOUNDED


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_degree_hints_agree_with_adjacency(family):
    oracle = FAMILIES[family]()
    for b_index in range(30):
        assert hint_matches_adjacency(oracle, b_index), (family, b_index)


# -- gluing ----------------------------------------------------------------


def k22_at(a0: int, b0: int) -> BipartiteGraph:
    a = [avert(a0), avert(a0 + 1)]
    b = [bvert(b0), bvert(b0 + 1)]
    return BipartiteGraph(a, b, [(x, y) for x in a for y in b])


def test_glue_counts():
    g = glue(k22_at(0, 0), k22_at(2, 2))
    assert len(g.a_vertices) == 4
    assert len(g.b_vertices) == 6
    assert g.num_edges() == 16


def test_glue_rejects_id_overlap():
    with pytest.raises(IdCollision):
        glue(k22_at(0, 0), k22_at(0, 5))
    with pytest.raises(IdCollision):
        glue(k22_at(0, 0), k22_at(5, 1))


def test_glue_keeps_both_sides_induced():
    m, g = k22_at(0, 0), k22_at(2, 2)
    out = glue(m, g)
    for part in (m, g):
        for e in part.edges:
            assert out.has_edge(*e)
    assert out.label(out.b_vertices[-2]) == "hub0"
    assert out.label(out.b_vertices[-1]) == "hub1"


def test_glue_is_total_even_without_the_property():
    path = BipartiteGraph(
        [avert(0), avert(1)],
        [bvert(0)],
        [(avert(0), bvert(0)), (avert(1), bvert(0))],
    )
    assert not check_dhp(path).verdict
    out = glue(path, reindexed(path, a_start=2, b_start=1))
    assert len(out.b_vertices) == 4
    # adding the two hubs actually repairs this particular pair
    assert check_dhp(out).verdict


def test_glue_preserves_the_property_on_samples():
    import random

    from doublehall.instances import random_dhp_instance

    rng = random.Random(5)
    for _ in range(10):
        g1 = random_dhp_instance(rng, max_a=4)
        g2 = reindexed(
            random_dhp_instance(rng, max_a=4),
            a_start=len(g1.a_vertices),
            b_start=len(g1.b_vertices),
        )
        assert check_dhp(glue(g1, g2)).verdict
