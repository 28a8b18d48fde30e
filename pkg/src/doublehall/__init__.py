"""Double Hall property toolkit.

A bipartite graph with sides A and B has the double Hall property when
|A| >= 2 and every subset X of A with at least two vertices has at least
|X| vertices in B adjacent to two or more members of X. This package
bundles exact finite checkers and cover solvers around that notion,
lazily-evaluated infinite graph families with explicit truncation
windows, finite-budget simulators of the ray and cycle constructions
those families support, and the stabilization / spanning-tree / surgery
machinery used to push finite covers toward infinite ones.
"""

from .core import (
    A_SIDE,
    B_SIDE,
    BipartiteGraph,
    Edge,
    SubgraphEdgeSet,
    Vertex,
    avert,
    bvert,
    components_after_removal,
    induced_subgraph,
    neighbors,
    neighbors2,
    reindexed,
)
from .errors import (
    BudgetExhausted,
    CoverExistenceViolation,
    DoubleHallError,
    FormatError,
    HypothesisFailed,
    IdCollision,
    InvalidVertex,
    NotConnected,
    TooSmall,
    UnboundedClosure,
    Undecidable,
    WindowNotStable,
)
from .graphio import dump_json, from_json_dict, load_json, to_dot, to_json_dict
from .limits import (
    LimitDegreeReport,
    StabilizationReport,
    SubgraphSequence,
    SurgeryStep,
    absorb_degree_one,
    check_limit_degrees,
    cover_sequence,
    stabilize,
)
from .nst import (
    ClaimReport,
    CutLevels,
    TreeOrder,
    choose_cut_levels,
    claim_checks,
    normal_spanning_tree,
    normality_offenders,
    surgery_case,
)
from .oracles import (
    COFINITE,
    EXPLICIT_B,
    FAMILIES,
    FINITE,
    N2_CLOSURE,
    N_CLOSURE,
    UNBOUNDED,
    CopiesWithHubsOracle,
    DegreeHint,
    GraphOracle,
    MatchingDefyingOracle,
    PairGadgetOracle,
    StaircaseOracle,
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
from .rays import (
    PseudoIsolationQuery,
    RayState,
    StepRecord,
    audit_economical_minimality,
    audit_greedy_trace,
    economical_start,
    economical_step,
    greedy_extend,
    greedy_start,
    peel_rays,
    pseudo_isolated_witness,
    validate_ray_state,
)
from .solve import (
    DISJOINT_2REGULAR,
    SINGLE_CYCLE,
    CoverCertificate,
    DhpReport,
    HallViolation,
    MatchingCertificate,
    NoCover,
    NoSingleCycle,
    check_dhp,
    classify_B_degrees,
    find_2regular_A_cover,
    find_A_covering_cycle,
    find_perfect_A_matching,
    validate_cover,
)

__version__ = "0.1.0"

__all__ = [
    "A_SIDE",
    "B_SIDE",
    "BipartiteGraph",
    "BudgetExhausted",
    "COFINITE",
    "ClaimReport",
    "CopiesWithHubsOracle",
    "CoverCertificate",
    "CoverExistenceViolation",
    "CutLevels",
    "DISJOINT_2REGULAR",
    "DegreeHint",
    "DhpReport",
    "DoubleHallError",
    "EXPLICIT_B",
    "Edge",
    "FAMILIES",
    "FINITE",
    "FormatError",
    "GraphOracle",
    "HallViolation",
    "HypothesisFailed",
    "IdCollision",
    "InvalidVertex",
    "LimitDegreeReport",
    "MatchingCertificate",
    "MatchingDefyingOracle",
    "N2_CLOSURE",
    "N_CLOSURE",
    "NoCover",
    "NoSingleCycle",
    "NotConnected",
    "PairGadgetOracle",
    "PseudoIsolationQuery",
    "RayState",
    "SINGLE_CYCLE",
    "StabilizationReport",
    "StaircaseOracle",
    "StepRecord",
    "SubgraphEdgeSet",
    "SubgraphSequence",
    "SurgeryStep",
    "TooSmall",
    "TreeOrder",
    "Truncation",
    "UNBOUNDED",
    "UnboundedClosure",
    "Undecidable",
    "Vertex",
    "WindowNotStable",
    "absorb_degree_one",
    "audit_economical_minimality",
    "audit_greedy_trace",
    "avert",
    "bvert",
    "check_dhp",
    "check_limit_degrees",
    "choose_cut_levels",
    "claim_checks",
    "classify_B_degrees",
    "components_after_removal",
    "counterexample_hall_window",
    "counterexample_window",
    "cover_sequence",
    "dump_json",
    "economical_start",
    "economical_step",
    "find_2regular_A_cover",
    "find_A_covering_cycle",
    "find_perfect_A_matching",
    "from_json_dict",
    "gamma_window",
    "glue",
    "greedy_extend",
    "greedy_start",
    "induced_subgraph",
    "load_json",
    "materialize",
    "neighbors",
    "neighbors2",
    "normal_spanning_tree",
    "normality_offenders",
    "oracle_counterexample",
    "oracle_gamma",
    "oracle_h",
    "oracle_pair_gadget",
    "peel_rays",
    "pseudo_isolated_witness",
    "reindexed",
    "stabilize",
    "to_dot",
    "to_json_dict",
    "validate_cover",
    "validate_ray_state",
]
