"""Acceptance criteria bundled as callable, timed checks.

Each criterion is a standalone function returning a :class:`CriterionResult`;
the registry at the bottom groups them into named bundles for the command
line. Criteria never raise on a mere failure: they capture the first
offending detail and report it, so a suite run always produces a full
table. Genuine programming errors still propagate.
"""

from __future__ import annotations

import inspect
import random
import time
from dataclasses import dataclass
from itertools import combinations

from .core import (
    A_SIDE,
    B_SIDE,
    BipartiteGraph,
    Vertex,
    avert,
    bvert,
    neighbors,
    neighbors2,
    reindexed,
)
from .errors import BudgetExhausted, DoubleHallError
from .instances import (
    absorb_fixture,
    random_bipartite,
    random_connected_bipartite,
    random_degree_class_instance,
    random_dhp_instance,
    surgery_scenario_case1,
    surgery_scenario_case2,
    surgery_scenario_settled,
)
from .limits import absorb_degree_one, check_limit_degrees, cover_sequence, stabilize
from .nst import normal_spanning_tree, normality_offenders, surgery_case
from .oracles import (
    FINITE,
    N2_CLOSURE,
    Truncation,
    counterexample_hall_window,
    gamma_window,
    glue,
    materialize,
    oracle_counterexample,
    oracle_h,
    oracle_pair_gadget,
)
from .rays import (
    PseudoIsolationQuery,
    audit_economical_minimality,
    audit_greedy_trace,
    economical_start,
    economical_step,
    greedy_extend,
    greedy_start,
    pseudo_isolated_witness,
    validate_ray_state,
)
from .solve import (
    CoverCertificate,
    HallViolation,
    check_dhp,
    find_2regular_A_cover,
    find_A_covering_cycle,
    find_perfect_A_matching,
)

__all__ = [
    "BUNDLES",
    "CRITERIA",
    "TIME_LIMITS",
    "CriterionResult",
    "brute_force_dhp",
    "format_result",
    "run_all",
    "run_bundle",
    "run_criterion",
]

DEFAULT_SEED = 101


@dataclass(frozen=True)
class CriterionResult:
    ident: str
    title: str
    passed: bool
    detail: str
    seconds: float


def brute_force_dhp(g: BipartiteGraph) -> tuple[bool, tuple[Vertex, ...] | None]:
    """Prune-free reference check: scan every A-subset of size >= 2.

    Deliberately built on nothing but `itertools.combinations` and the
    plain neighborhood helpers, so it shares no code path with the bitset
    solver it cross-checks. Subsets are scanned smallest-first and in
    lexicographic order within a size, which makes the first violator
    found here the canonical one.
    """
    a = g.a_vertices
    if len(a) < 2:
        raise ValueError("need at least two A-vertices")
    for k in range(2, len(a) + 1):
        for combo in combinations(a, k):
            if len(neighbors2(g, combo)) < k:
                return False, combo
    return True, None


def _result(ident: str, title: str, started: float, failure: str | None, detail: str) -> CriterionResult:
    elapsed = time.perf_counter() - started
    if failure is None:
        return CriterionResult(ident, title, True, detail, elapsed)
    return CriterionResult(ident, title, False, failure, elapsed)


def c01_checker_equivalence(seed: int = DEFAULT_SEED, samples: int = 1000) -> CriterionResult:
    """check_dhp agrees with the prune-free scan, verdict and witness both."""
    started = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    for trial in range(samples):
        na = rng.randint(2, 6)
        nb = rng.randint(1, 6)
        g = random_bipartite(rng, na, nb, rng.uniform(0.1, 0.9))
        expect_verdict, expect_witness = brute_force_dhp(g)
        report = check_dhp(g)
        if report.verdict != expect_verdict or (
            not report.verdict and report.witness != expect_witness
        ):
            failure = (
                f"trial {trial}: solver said {report.verdict}/{report.witness}, "
                f"reference said {expect_verdict}/{expect_witness}"
            )
            break
    return _result(
        "1",
        "double-Hall checker matches the prune-free reference",
        started,
        failure,
        f"{samples} random graphs, identical verdicts and violators",
    )


def c02_family_truncations(max_n: int = 8) -> CriterionResult:
    """Every canonical family window passes the double-Hall check."""
    started = time.perf_counter()
    failure = None
    checked = 0
    for n in range(1, max_n + 1):
        g = materialize(oracle_h().canonical_truncation(n))
        if not check_dhp(g).verdict:
            failure = f"staircase window n={n} failed"
            break
        checked += 1
    if failure is None:
        for inner in range(1, 4):
            g = gamma_window(3, inner, 3)
            if not check_dhp(g).verdict:
                failure = f"hub-family window inner={inner} failed"
                break
            checked += 1
    if failure is None:
        for n in range(1, max_n + 1):
            g = materialize(oracle_counterexample().canonical_truncation(n))
            if not check_dhp(g).verdict:
                failure = f"matching-defying window n={n} failed"
                break
            checked += 1
    return _result(
        "2",
        "family truncations all have the double Hall property",
        started,
        failure,
        f"{checked} windows across three families",
    )


def c03_hall_failure(max_n: int = 10) -> CriterionResult:
    """The matching-defying family fails Hall's condition by exactly one."""
    started = time.perf_counter()
    failure = None
    for n in range(3, max_n + 1):
        g = counterexample_hall_window(n)
        res = find_perfect_A_matching(g)
        if not isinstance(res, HallViolation):
            failure = f"n={n}: a perfect matching was found"
            break
        x = res.x
        if set(x) != set(g.a_vertices):
            failure = f"n={n}: violator is {x}, expected the whole A-window"
            break
        if len(neighbors(g, x)) != len(x) - 1:
            failure = f"n={n}: |N(X)| = {len(neighbors(g, x))}, expected {len(x) - 1}"
            break
    return _result(
        "3",
        "Hall violators on the matching-defying windows are tight",
        started,
        failure,
        f"windows n=3..{max_n}, violator = full A-side, deficiency exactly 1",
    )


def c04_cover_existence(
    seed: int = DEFAULT_SEED + 3, samples: int = 200, amax: int = 8
) -> CriterionResult:
    """Double-Hall graphs always yield disjoint-cycle covers of any target."""
    started = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    solved = 0
    for trial in range(samples):
        g = random_dhp_instance(rng, max_a=amax)
        a = list(g.a_vertices)
        targets = [a]
        for _ in range(5):
            targets.append(rng.sample(a, rng.randint(2, len(a))))
        for target in targets:
            res = find_2regular_A_cover(g, target=target)
            if not isinstance(res, CoverCertificate):
                failure = (
                    f"trial {trial}: no cover for target {sorted(target)} "
                    f"on a verified double-Hall graph ({len(a)} A-vertices); "
                    "every such graph must carry one"
                )
                break
            solved += 1
        if failure:
            break
    return _result(
        "4",
        "2-regular covers exist for every target on double-Hall graphs",
        started,
        failure,
        f"{solved} cover instances across {samples} graphs, all certified",
    )


def c05_single_cycles(
    seed: int = DEFAULT_SEED + 4, samples: int = 100, amax: int = 6
) -> CriterionResult:
    """Restricted degree classes admit one cycle through the whole A-side."""
    started = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    for trial in range(samples):
        g = random_degree_class_instance(rng, max_a=amax)
        res = find_A_covering_cycle(g, target=list(g.a_vertices))
        if not isinstance(res, CoverCertificate):
            failure = (
                f"trial {trial}: no single covering cycle on a degree-class "
                f"{{2, |A|}} double-Hall instance with |A|={len(g.a_vertices)}"
            )
            break
    return _result(
        "5",
        "single A-covering cycles exist in the {2, |A|} degree class",
        started,
        failure,
        f"{samples} seeded instances, every A-side toured by one cycle",
    )


def c06_greedy_path(budget: int = 50, rounds: int = 10) -> CriterionResult:
    """Ten greedy extensions sweep up exactly the first 21 A-vertices."""
    started = time.perf_counter()
    failure = None
    oracle = oracle_pair_gadget()
    state = greedy_start()
    try:
        for _ in range(rounds):
            state = greedy_extend(oracle, state, budget)
        validate_ray_state(oracle, state)
    except DoubleHallError as exc:
        return _result("6", "greedy double-ray prefix sweeps the enumeration", started, f"builder aborted: {exc}", "")
    got = state.a_indices
    want = set(range(2 * rounds + 1))
    audited = audit_greedy_trace(oracle, state)
    if got != want:
        failure = f"A-indices {sorted(got)} != first {len(want)} enumeration vertices"
    elif not got >= set(range(rounds + 1)):
        failure = "A-set does not even cover the first half of the enumeration"
    elif state.vertices[0][0] != A_SIDE or state.vertices[-1][0] != A_SIDE:
        failure = "path endpoints are not both on the A-side"
    elif audited != rounds:
        failure = f"trace audit replayed {audited} records, expected {rounds}"
    return _result(
        "6",
        "greedy double-ray prefix sweeps the enumeration",
        started,
        failure,
        f"{rounds} extensions, A-set = first {len(want)} vertices, "
        f"both endpoints on A, {audited} trace records revalidated",
    )


def c07_economical_minimality(steps: int = 20, budget: int = 200) -> CriterionResult:
    """Every economical step withstands a post-hoc minimality audit."""
    started = time.perf_counter()
    failure = None
    oracle = oracle_pair_gadget()
    state = economical_start(0)
    try:
        for _ in range(steps):
            state = economical_step(oracle, state, budget)
        validate_ray_state(oracle, state)
        audited = audit_economical_minimality(oracle, state)
    except DoubleHallError as exc:
        return _result("7", "economical steps are minimal in hindsight", started, f"builder aborted: {exc}", "")
    if audited != steps:
        failure = f"audit confirmed {audited} steps, expected {steps}"
    return _result(
        "7",
        "economical steps are minimal in hindsight",
        started,
        failure,
        f"{steps} alternating extensions, each chose the least admissible vertex",
    )


def c08_stabilized_cover_degrees(max_n: int = 8, window_top: int = 6) -> CriterionResult:
    """The stabilized cover sequence has the right limit degrees."""
    started = time.perf_counter()
    failure = None
    seq = cover_sequence(oracle_h(), max_n)
    rep = stabilize(seq)
    window = [avert(i) for i in range(window_top + 1)]
    deg = check_limit_degrees(rep, window)
    if not deg.ok:
        failure = f"degree audit failed at {deg.offenders}"
    else:
        bad = [(v, h) for v, h in deg.degree_one if h is None or h.kind == FINITE]
        if bad:
            failure = f"degree-1 vertices without an infinite-degree hint: {bad}"
    return _result(
        "8",
        "stabilized covers have degree 2 on A and bounded B-degrees",
        started,
        failure,
        f"horizon {max_n}, window a0..a{window_top}: A-degrees exactly 2, "
        f"B-degrees <= 2, {len(deg.degree_one)} degree-1 vertex carries a "
        "cofinite hint",
    )


def _replay_absorb(g, h, log) -> str | None:
    current = h
    deficient = sum(1 for b in current.side_vertices(B_SIDE) if current.degree(b) == 1)
    for i, step in enumerate(log):
        current = current.replace(remove=step.removed, add=step.added)
        now = sum(1 for b in current.side_vertices(B_SIDE) if current.degree(b) == 1)
        if now >= deficient:
            return f"step {i} did not decrease the degree-1 count ({deficient} -> {now})"
        deficient = now
        for a in current.side_vertices(A_SIDE):
            if current.degree(a) != 2:
                return f"step {i} broke A-degree 2 at {a}"
    if deficient:
        return f"{deficient} degree-1 vertices left after the log"
    return None


def _audit_surgery_scenario(scen) -> str | None:
    out, steps = surgery_case(
        scen.graph, scen.tree, scen.cover, scen.branch_index, scen.n0, scen.n1
    )
    if len(steps) != 1:
        return f"expected one rerouting step, got {len(steps)}"
    step = steps[0]
    w, u, v = step.pivot
    if u in out:
        return f"evicted connector {u} still carries subgraph edges"
    dangling = [x for x in out.side_vertices(A_SIDE) if out.degree(x) == 1]
    if len(dangling) != 2:
        return f"expected two dangling path ends, got {dangling}"
    loose = set(dangling)
    for a in scen.cover.covered:
        want = 1 if a in loose else 2
        if out.degree(a) != want:
            return f"covered vertex {a} has degree {out.degree(a)}, expected {want}"
    if len(loose & set(scen.cover.covered)) != 1:
        return "exactly one dangling end should come from the old cycle"
    return None


def c09_surgery_invariants(seed: int = DEFAULT_SEED + 8, samples: int = 50) -> CriterionResult:
    """Edge-swap surgeries repair degrees without collateral damage."""
    started = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    for trial in range(samples):
        g, h, pool = absorb_fixture(rng)
        final, log = absorb_degree_one(g, h, pool, steps=20)
        err = _replay_absorb(g, h, log)
        if err:
            failure = f"absorb trial {trial}: {err}"
            break
        if final != h.replace(
            remove=[e for s in log for e in s.removed],
            add=[e for s in log for e in s.added],
        ):
            failure = f"absorb trial {trial}: log does not reproduce the result"
            break
    if failure is None:
        for name, scen in (
            ("off-branch", surgery_scenario_case1()),
            ("on-branch", surgery_scenario_case2()),
        ):
            err = _audit_surgery_scenario(scen)
            if err:
                failure = f"{name} rerouting fixture: {err}"
                break
    if failure is None:
        scen = surgery_scenario_settled()
        out, steps = surgery_case(
            scen.graph, scen.tree, scen.cover, scen.branch_index, scen.n0, scen.n1
        )
        if steps != [] or out.edges != scen.cover.edges():
            failure = "settled fixture was not a no-op"
    return _result(
        "9",
        "surgeries fix degree-1 vertices and leave bystanders alone",
        started,
        failure,
        f"{samples} absorb fixtures replayed step by step; both rerouting "
        "fixtures and the settled fixture audited",
    )


def c10_normal_trees(seed: int = DEFAULT_SEED + 9, samples: int = 100) -> CriterionResult:
    """Depth-first spanning trees always pass the comparability audit."""
    started = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    for trial in range(samples):
        g = random_connected_bipartite(rng, max_vertices=50)
        t = normal_spanning_tree(g, avert(0))
        bad = normality_offenders(g, t)
        if bad:
            failure = f"trial {trial}: incomparable edges {bad}"
            break
        if set(t.vertices()) != set(g.vertices()):
            failure = f"trial {trial}: tree does not span the graph"
            break
    return _result(
        "10",
        "spanning trees keep every edge between comparable vertices",
        started,
        failure,
        f"{samples} random connected graphs up to 50 vertices, no offenders",
    )


def c11_gluing(
    seed: int = DEFAULT_SEED + 10, samples: int = 50, amax: int = 5
) -> CriterionResult:
    """Joining two double-Hall graphs through two hubs preserves the property."""
    started = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    for trial in range(samples):
        g1 = random_dhp_instance(rng, max_a=amax)
        g2 = reindexed(
            random_dhp_instance(rng, max_a=amax),
            a_start=len(g1.a_vertices),
            b_start=len(g1.b_vertices),
        )
        glued = glue(g1, g2)
        report = check_dhp(glued)
        if not report.verdict:
            failure = f"trial {trial}: glued graph has violator {report.witness}"
            break
    return _result(
        "11",
        "hub-gluing preserves the double Hall property",
        started,
        failure,
        f"{samples} glued pairs, every result passed the exact checker",
    )


def c12_pseudo_isolation(max_j: int = 8, forbidden_size: int = 3) -> CriterionResult:
    """Pseudo-isolation is decided correctly on both reference families."""
    started = time.perf_counter()
    failure = None
    oracle = oracle_counterexample()
    for j in range(2, max_j + 1):
        q = PseudoIsolationQuery(j, frozenset(bvert(i) for i in range(j)))
        if pseudo_isolated_witness(oracle, q) is not True:
            failure = f"vertex {j} with its whole neighborhood removed was not isolated"
            break
    checked = 0
    if failure is None:
        gadgets = oracle_pair_gadget()
        pool = [avert(i) for i in range(1, 5)] + [bvert(j) for j in range(6)]
        for r in range(forbidden_size + 1):
            for f in combinations(pool, r):
                q = PseudoIsolationQuery(0, frozenset(f))
                if pseudo_isolated_witness(gadgets, q) is not False:
                    failure = f"a_0 was declared isolated by f={f}"
                    break
                checked += 1
            if failure:
                break
    return _result(
        "12",
        "pseudo-isolation verdicts match the family structure",
        started,
        failure,
        f"positive witnesses for j=2..{max_j}; {checked} forbidden sets of "
        f"size <= {forbidden_size} all refuted for the pair-gadget root",
    )


CRITERIA = {
    "1": c01_checker_equivalence,
    "2": c02_family_truncations,
    "3": c03_hall_failure,
    "4": c04_cover_existence,
    "5": c05_single_cycles,
    "6": c06_greedy_path,
    "7": c07_economical_minimality,
    "8": c08_stabilized_cover_degrees,
    "9": c09_surgery_invariants,
    "10": c10_normal_trees,
    "11": c11_gluing,
    "12": c12_pseudo_isolation,
}

TIME_LIMITS = {
    "1": 10.0,
    "2": 60.0,
    "3": 5.0,
    "4": 300.0,
    "5": 300.0,
    "6": 5.0,
    "7": 5.0,
    "8": 120.0,
    "9": 30.0,
    "10": 10.0,
    "11": 60.0,
    "12": 30.0,
}

BUNDLES = {
    "families": ("2", "3", "11"),
    "covers": ("1", "4", "5"),
    "rays": ("6", "7", "12"),
    "limits": ("8", "10"),
    "surgery": ("9",),
}


def run_criterion(ident: str, **overrides) -> CriterionResult:
    """Run one criterion, passing through only the overrides it accepts."""
    fn = CRITERIA[ident]
    accepted = set(inspect.signature(fn).parameters)
    kwargs = {k: v for k, v in overrides.items() if k in accepted}
    return fn(**kwargs)


def run_bundle(name: str, **overrides) -> list[CriterionResult]:
    if name not in BUNDLES:
        raise KeyError(name)
    return [run_criterion(ident, **overrides) for ident in BUNDLES[name]]


def run_all(**overrides) -> list[CriterionResult]:
    return [run_criterion(ident, **overrides) for ident in CRITERIA]


def format_result(res: CriterionResult) -> str:
    mark = "PASS" if res.passed else "FAIL"
    return f"criterion {res.ident:>2}: {mark}  {res.title} ({res.seconds:.2f}s) - {res.detail}"
