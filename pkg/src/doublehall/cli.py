"""Command-line entry point wiring the solvers, oracles, and simulators.

Commands print a short human summary by default or one machine-readable
JSON report with --json; file outputs (-o, --dot) are written either way
and recorded in the report's manifest. Reports contain no timestamps and
all randomness flows through explicit seeds, so re-running a command
reproduces its output byte for byte.

Exit codes: 0 = found/true/pass, 1 = not found/false/fail, 2 = usage or
input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .core import (
    A_SIDE,
    BipartiteGraph,
    Vertex,
    avert,
    neighbors,
    reindexed,
)
from .errors import (
    BudgetExhausted,
    CoverExistenceViolation,
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
from .graphio import dump_json, load_json, to_dot
from .instances import (
    scenario_from_json_dict,
    scenario_to_json_dict,
    surgery_scenario_case1,
    surgery_scenario_case2,
    surgery_scenario_settled,
)
from .limits import check_limit_degrees, cover_sequence, stabilize
from .nst import (
    choose_cut_levels,
    claim_checks,
    normal_spanning_tree,
    surgery_case,
)
from .oracles import (
    EXPLICIT_B,
    FAMILIES,
    N2_CLOSURE,
    N_CLOSURE,
    Truncation,
    counterexample_hall_window,
    glue,
    materialize,
)
from .rays import (
    audit_economical_minimality,
    audit_greedy_trace,
    economical_start,
    economical_step,
    greedy_extend,
    greedy_start,
    peel_rays,
    validate_ray_state,
)
from .solve import (
    CoverCertificate,
    MatchingCertificate,
    check_dhp,
    classify_B_degrees,
    find_2regular_A_cover,
    find_A_covering_cycle,
    find_perfect_A_matching,
)
from .suites import BUNDLES, CRITERIA, format_result, run_criterion

USAGE_ERROR = 2
NEGATIVE = 1
FOUND = 0


class _Usage(Exception):
    """Raised by handlers for input problems argparse cannot catch."""


# --------------------------------------------------------------------------
# report plumbing


def _manifest(args: argparse.Namespace, digest_src: bytes, outputs: list[str]) -> dict:
    skip = {"func", "command", "json"}
    flags = {
        k.replace("_", "-"): v
        for k, v in sorted(vars(args).items())
        if k not in skip and v is not None
    }
    return {
        "command": args.command,
        "flags": flags,
        "input_digest": hashlib.sha256(digest_src).hexdigest(),
        "seed": getattr(args, "seed", None),
        "outputs": sorted(outputs),
    }


def _emit(args: argparse.Namespace, report: dict, human: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


def _write(path: str, text: str, outputs: list[str]) -> None:
    Path(path).write_text(text)
    outputs.append(path)


def _label_edge(g: BipartiteGraph, e) -> list[str]:
    return [g.label(e[0]), g.label(e[1])]


# --------------------------------------------------------------------------
# graph acquisition


def _add_graph_source(p: argparse.ArgumentParser, positional: bool = True) -> None:
    if positional:
        p.add_argument("graph", nargs="?", help="JSON graph file")
    p.add_argument("--input", "-i", dest="input", help="JSON graph file (alias)")
    p.add_argument(
        "--family",
        choices=sorted(FAMILIES),
        help="generate the window of a built-in family instead of reading a file",
    )
    p.add_argument("--n", type=int, help="family window size (largest A-index)")
    p.add_argument(
        "--closure",
        choices=("canonical", "n2", "n", "explicit", "hall"),
        help="how the family window's B-side is closed off "
        "(default: the family's canonical window; 'hall' trims the B-side "
        "to the neighbors of A minus its two universal members and only "
        "exists for the matching-defying family)",
    )
    p.add_argument("--b-window", type=int, help="B-side size for --closure explicit")


def _family_graph(args: argparse.Namespace) -> tuple[BipartiteGraph, str]:
    if args.n is None:
        raise _Usage("--family needs --n")
    if args.n < 0:
        raise _Usage("--n must be nonnegative")
    closure = args.closure or "canonical"
    key = f"family={args.family} n={args.n} closure={closure} b_window={args.b_window}"
    oracle = FAMILIES[args.family]()
    if closure == "hall":
        if args.family != "counterexample":
            raise _Usage("--closure hall only applies to the matching-defying family")
        return counterexample_hall_window(args.n), key
    if closure == "canonical":
        return materialize(oracle.canonical_truncation(args.n)), key
    if closure == "explicit":
        if args.b_window is None:
            raise _Usage("--closure explicit needs --b-window")
        t = Truncation(oracle, args.n, EXPLICIT_B, b_window=args.b_window)
        return materialize(t), key
    mode = N2_CLOSURE if closure == "n2" else N_CLOSURE
    return materialize(Truncation(oracle, args.n, mode)), key


def _load_graph(args: argparse.Namespace, default_hall: bool = False) -> tuple[BipartiteGraph, bytes]:
    """Read the positional/--input file, or build the --family window."""
    path = getattr(args, "graph", None) or args.input
    if path is not None:
        text = Path(path).read_text()
        return load_json(text), text.encode()
    if args.family is None:
        raise _Usage("give a graph file or --family/--n")
    if default_hall and args.family == "counterexample" and args.closure is None:
        args.closure = "hall"
    g, key = _family_graph(args)
    return g, key.encode()


def _parse_target(g: BipartiteGraph, spec: str | None) -> list[Vertex]:
    if spec is None or spec == "all":
        return list(g.a_vertices)
    try:
        ids = sorted({int(tok) for tok in spec.split(",") if tok.strip() != ""})
    except ValueError as exc:
        raise _Usage(f"--target wants comma-separated A-indices or 'all': {exc}")
    target = [avert(i) for i in ids]
    for v in target:
        if v not in g:
            raise _Usage(f"target vertex a{v[1]} is not in the graph")
    return target


def _parse_vertex(token: str) -> Vertex:
    side, idx = token[:1], token[1:]
    if side not in ("a", "b") or not idx.isdigit():
        raise _Usage(f"vertex tokens look like a0 or b12, got {token!r}")
    return (side, int(idx))


# --------------------------------------------------------------------------
# handlers


def cmd_gen(args: argparse.Namespace) -> int:
    g, key = _family_graph(args)
    outputs: list[str] = []
    if args.output:
        _write(args.output, dump_json(g), outputs)
    if args.dot:
        _write(args.dot, to_dot(g), outputs)
    report = {
        "manifest": _manifest(args, key.encode(), outputs),
        "result": {
            "a": len(g.a_vertices),
            "b": len(g.b_vertices),
            "edges": g.num_edges(),
        },
    }
    if not args.output:
        report["result"]["graph"] = json.loads(dump_json(g))
    human = [
        f"{args.family} window n={args.n}: |A|={len(g.a_vertices)} "
        f"|B|={len(g.b_vertices)} edges={g.num_edges()}"
    ]
    if not args.output and not args.json:
        human.append(dump_json(g).rstrip("\n"))
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return FOUND


def cmd_check_dhp(args: argparse.Namespace) -> int:
    g, src = _load_graph(args)
    report_in = check_dhp(g)
    outputs: list[str] = []
    result = {
        "verdict": report_in.verdict,
        "witness": sorted(g.label(v) for v in report_in.witness)
        if report_in.witness
        else None,
        "subsets_examined": report_in.subsets_examined,
        "pruned": report_in.pruned,
    }
    if args.dot:
        bad = set(report_in.witness or ())
        edges = [e for e in g.edges if e[0] in bad]
        _write(args.dot, to_dot(g, highlight=edges), outputs)
    report = {"manifest": _manifest(args, src, outputs), "result": result}
    if report_in.verdict:
        human = [
            f"double Hall property holds "
            f"({report_in.subsets_examined} subsets examined, {report_in.pruned} pruned)"
        ]
    else:
        human = [
            "double Hall property FAILS at X = "
            + "{" + ", ".join(result["witness"]) + "}"
        ]
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return FOUND if report_in.verdict else NEGATIVE


def cmd_match(args: argparse.Namespace) -> int:
    g, src = _load_graph(args, default_hall=True)
    res = find_perfect_A_matching(g)
    outputs: list[str] = []
    if isinstance(res, MatchingCertificate):
        pairs = sorted(res.pairs.items())
        result = {
            "matched": True,
            "pairs": [[g.label(x), g.label(y)] for x, y in pairs],
        }
        human = [f"perfect A-matching with {len(pairs)} edges"]
        code = FOUND
        if args.dot:
            _write(args.dot, to_dot(g, highlight=pairs), outputs)
    else:
        hood = neighbors(g, res.x)
        result = {
            "matched": False,
            "violator": sorted(g.label(v) for v in res.x),
            "violator_size": len(res.x),
            "neighborhood_size": len(hood),
        }
        human = [
            f"no perfect A-matching: |N(X)| = {len(hood)} < {len(res.x)} = |X| "
            f"at X = {{{', '.join(result['violator'])}}}"
        ]
        code = NEGATIVE
    report = {"manifest": _manifest(args, src, outputs), "result": result}
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return code


def _cover_like(args: argparse.Namespace, solver, describe: str) -> int:
    g, src = _load_graph(args)
    target = _parse_target(g, args.target)
    res = solver(g, target=target)
    outputs: list[str] = []
    if isinstance(res, CoverCertificate):
        result = {
            "found": True,
            "kind": res.kind,
            "components": [
                [_label_edge(g, e) for e in comp] for comp in res.components
            ],
            "covered": sorted(g.label(v) for v in res.covered),
        }
        human = [
            f"{describe}: {len(res.components)} component(s) covering "
            f"{len(res.covered)} A-vertices"
        ]
        if args.dot:
            _write(args.dot, to_dot(g, highlight=res.edges()), outputs)
        code = FOUND
    else:
        result = {
            "found": False,
            "target": sorted(g.label(v) for v in res.target),
        }
        human = [f"{describe}: none exists for the requested target"]
        code = NEGATIVE
    if args.output:
        _write(args.output, json.dumps(result, indent=2, sort_keys=True) + "\n", outputs)
    report = {"manifest": _manifest(args, src, outputs), "result": result}
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return code


def cmd_cover(args: argparse.Namespace) -> int:
    return _cover_like(args, find_2regular_A_cover, "disjoint-cycle cover")


def cmd_cycle(args: argparse.Namespace) -> int:
    return _cover_like(args, find_A_covering_cycle, "single covering cycle")


def cmd_classify(args: argparse.Namespace) -> int:
    g, src = _load_graph(args)
    classes = classify_B_degrees(g)
    result = {
        kind: sorted(g.label(v) for v in members)
        for kind, members in classes.items()
    }
    report = {"manifest": _manifest(args, src, []), "result": result}
    human = [
        f"degree 2: {len(classes['deg2'])}, full: {len(classes['full'])}, "
        f"other: {len(classes['other'])}"
    ]
    for kind in ("deg2", "full", "other"):
        if classes[kind]:
            human.append(f"  {kind}: {', '.join(result[kind])}")
    _emit(args, report, human)
    return FOUND


def _record_dicts(state) -> list[dict]:
    return [{"kind": r.kind, **dict(r.payload)} for r in state.trace]


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.family not in FAMILIES:
        raise _Usage("simulate needs --family")
    oracle = FAMILIES[args.family]()
    key = (
        f"simulate proof={args.proof} family={args.family} steps={args.steps} "
        f"budget={args.budget} start={args.start} rounds={args.rounds}"
    )
    outputs: list[str] = []
    exhausted: str | None = None
    segments: list[list[str]] = []
    trace: list[dict] = []
    audited = 0
    if args.proof == "peel":
        try:
            states = peel_rays(oracle, args.rounds, args.budget)
        except (BudgetExhausted, HypothesisFailed) as exc:
            print(f"peel failed: {exc}", file=sys.stderr)
            return NEGATIVE
        for st in states:
            segments.append([oracle_label(oracle, v) for v in st.vertices])
            trace.extend(_record_dicts(st))
    else:
        builder_state = greedy_start() if args.proof == "greedy-cycle" else economical_start(args.start)
        step = greedy_extend if args.proof == "greedy-cycle" else economical_step
        for _ in range(args.steps):
            try:
                builder_state = step(oracle, builder_state, args.budget)
            except BudgetExhausted as exc:
                exhausted = str(exc)
                break
        validate_ray_state(oracle, builder_state)
        audit = (
            audit_greedy_trace
            if args.proof == "greedy-cycle"
            else audit_economical_minimality
        )
        audited = audit(oracle, builder_state)
        segments.append([oracle_label(oracle, v) for v in builder_state.vertices])
        trace = _record_dicts(builder_state)
        if args.dot:
            g = _segment_graph(oracle, builder_state.vertices)
            _write(args.dot, to_dot(g, highlight=_segment_edges(builder_state.vertices)), outputs)
    result = {
        "proof": args.proof,
        "segments": segments,
        "steps_applied": len(trace),
        "audited_records": audited,
        "exhausted": exhausted,
    }
    report = {"manifest": _manifest(args, key.encode(), outputs), "result": result}
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for rec in trace:
            print(json.dumps(rec, sort_keys=True))
        for i, seg in enumerate(segments):
            print(f"segment {i}: " + " - ".join(seg))
        if exhausted:
            print(f"stopped early: {exhausted}")
        for p in outputs:
            print(f"wrote {p}")
    return NEGATIVE if exhausted else FOUND


def oracle_label(oracle, v: Vertex) -> str:
    return oracle.a_label(v[1]) if v[0] == A_SIDE else oracle.b_label(v[1])


def _segment_graph(oracle, vertices) -> BipartiteGraph:
    a = sorted(v for v in vertices if v[0] == A_SIDE)
    b = sorted(v for v in vertices if v[0] != A_SIDE)
    return BipartiteGraph(a, b, _segment_edges(vertices))


def _segment_edges(vertices) -> list:
    out = []
    for x, y in zip(vertices, vertices[1:]):
        out.append((x, y) if x[0] == A_SIDE else (y, x))
    return out


def cmd_flimit(args: argparse.Namespace) -> int:
    if args.family not in FAMILIES:
        raise _Usage("flimit needs --family")
    oracle = FAMILIES[args.family]()
    window_top = args.window_top if args.window_top is not None else max(0, args.horizon - 2)
    key = f"flimit family={args.family} horizon={args.horizon} window_top={window_top}"
    seq = cover_sequence(oracle, args.horizon)
    rep = stabilize(seq)
    window = [avert(i) for i in range(window_top + 1)]
    deg = check_limit_degrees(rep, window)
    outputs: list[str] = []
    if args.dot:
        last = seq.items[-1].parent
        _write(
            args.dot,
            to_dot(last, highlight=sorted(rep.stable_edges), dashed=sorted(rep.unstable)),
            outputs,
        )
    result = {
        "horizon": args.horizon,
        "stable_edges": len(rep.stable_edges),
        "unstable_edges": len(rep.unstable),
        "dropped_edges": len(rep.dropped),
        "window_top": window_top,
        "window_ok": deg.ok,
        "offenders": [[oracle_label(oracle, v), d] for v, d in deg.offenders],
        "degree_one": [
            [oracle_label(oracle, v), hint.kind if hint else None]
            for v, hint in deg.degree_one
        ],
    }
    report = {"manifest": _manifest(args, key.encode(), outputs), "result": result}
    human = [
        f"horizon {args.horizon}: {len(rep.stable_edges)} stable, "
        f"{len(rep.unstable)} unstable, {len(rep.dropped)} dropped edges",
        f"window a0..a{window_top}: degrees "
        + ("ok" if deg.ok else f"BAD at {result['offenders']}"),
    ]
    for v, kind in result["degree_one"]:
        human.append(f"  degree-1 vertex {v} carries hint: {kind}")
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return FOUND if deg.ok else NEGATIVE


def cmd_nst(args: argparse.Namespace) -> int:
    g, src = _load_graph(args)
    root = _parse_vertex(args.root)
    if root not in g:
        raise _Usage(f"root {args.root} is not in the graph")
    t = normal_spanning_tree(g, root)
    result: dict = {
        "root": g.label(root),
        "vertices": len(t.vertices()),
        "max_level": t.max_level(),
        "level_sizes": [len(t.at_level(i)) for i in range(t.max_level() + 1)],
        "normal": True,
    }
    human = [
        f"normal spanning tree from {g.label(root)}: depth {t.max_level()}, "
        f"{len(t.vertices())} vertices, normality audit passed"
    ]
    if args.claims:
        rep = claim_checks(g, t)
        result["claims"] = {
            "level_a_counts": list(rep.level_a_counts),
            "successor_offenders": [g.label(v) for v in rep.successor_offenders],
            "b_infinite": [g.label(v) for v in rep.b_infinite],
            "cut_level": rep.cut_level,
            "end_proxy": rep.end_proxy,
            "claim2_verdict": rep.claim2_verdict,
            "branch_components": [
                [g.label(v), size, deep] for v, size, deep in rep.branch_components
            ],
        }
        human.append(
            f"claims: end proxy {rep.end_proxy} vs |B^inf| {len(rep.b_infinite)} "
            f"-> {rep.claim2_verdict}; "
            f"{len(rep.successor_offenders)} successor offender(s)"
        )
    if args.cuts:
        cuts = choose_cut_levels(g, t)
        result["cut_levels"] = {"n0": cuts.n0, "n1": cuts.n1, "bumped": cuts.bumped}
        human.append(
            f"cut levels: n0={cuts.n0}, n1={cuts.n1}"
            + (" (parity bump applied)" if cuts.bumped else "")
        )
    report = {"manifest": _manifest(args, src, []), "result": result}
    _emit(args, report, human)
    return FOUND


_SCENARIOS = {
    "case1": surgery_scenario_case1,
    "case2": surgery_scenario_case2,
    "settled": surgery_scenario_settled,
}


def cmd_surgery(args: argparse.Namespace) -> int:
    outputs: list[str] = []
    if args.input:
        text = Path(args.input).read_text()
        try:
            scen = scenario_from_json_dict(json.loads(text))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad scenario file: {exc}") from exc
        src = text.encode()
    elif args.scenario:
        scen = _SCENARIOS[args.scenario]()
        src = f"scenario={args.scenario}".encode()
    else:
        raise _Usage("surgery needs --scenario or --input")
    if args.emit_scenario:
        _write(
            args.emit_scenario,
            json.dumps(scenario_to_json_dict(scen), indent=2, sort_keys=True) + "\n",
            outputs,
        )
    g = scen.graph
    out, steps = surgery_case(g, scen.tree, scen.cover, scen.branch_index, scen.n0, scen.n1)
    detected = None
    if steps:
        (step,) = steps
        w, u, v = step.pivot
        on_branch = scen.tree.parent_of(w) == u or scen.tree.parent_of(v) == u
        detected = "case2" if on_branch else "case1"
    if args.case != "auto" and detected is not None and args.case != detected:
        print(f"detected {detected}, but --case {args.case} was demanded", file=sys.stderr)
        return NEGATIVE
    result = {
        "case": detected,
        "steps": [
            {
                "pivot": [g.label(v) for v in s.pivot],
                "removed": [_label_edge(g, e) for e in s.removed],
                "added": [_label_edge(g, e) for e in s.added],
            }
            for s in steps
        ],
        "edges_after": [_label_edge(g, e) for e in sorted(out.edges)],
        "dangling": sorted(
            g.label(v) for v in out.side_vertices(A_SIDE) if out.degree(v) == 1
        ),
    }
    if args.dot:
        removed = [e for s in steps for e in s.removed]
        added = [e for s in steps for e in s.added]
        _write(args.dot, to_dot(g, highlight=added, dashed=removed), outputs)
    if args.output:
        _write(args.output, json.dumps(result, indent=2, sort_keys=True) + "\n", outputs)
    report = {"manifest": _manifest(args, src, outputs), "result": result}
    if steps:
        human = [
            f"one rerouting step ({detected}): pivot "
            + " / ".join(result["steps"][0]["pivot"]),
            f"  removed {len(steps[0].removed)} edge(s), added {len(steps[0].added)}",
            f"  dangling path ends: {', '.join(result['dangling'])}",
        ]
    else:
        human = ["branch already settled: no-op round"]
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return FOUND


def cmd_glue(args: argparse.Namespace) -> int:
    text1 = Path(args.left).read_text()
    text2 = Path(args.right).read_text()
    g1, g2 = load_json(text1), load_json(text2)
    if args.reindex:
        g2 = reindexed(
            g2,
            a_start=(max(i for _, i in g1.a_vertices) + 1 if g1.a_vertices else 0),
            b_start=(max(i for _, i in g1.b_vertices) + 1 if g1.b_vertices else 0),
        )
    glued = glue(g1, g2)
    outputs: list[str] = []
    if args.output:
        _write(args.output, dump_json(glued), outputs)
    if args.dot:
        _write(args.dot, to_dot(glued), outputs)
    result = {
        "a": len(glued.a_vertices),
        "b": len(glued.b_vertices),
        "edges": glued.num_edges(),
    }
    report = {
        "manifest": _manifest(args, (text1 + "\x00" + text2).encode(), outputs),
        "result": result,
    }
    if not args.output:
        report["result"]["graph"] = json.loads(dump_json(glued))
    human = [
        f"glued: |A|={result['a']} |B|={result['b']} edges={result['edges']} "
        "(two fresh hub vertices adjacent to all of A)"
    ]
    if not args.output and not args.json:
        human.append(dump_json(glued).rstrip("\n"))
    human.extend(f"wrote {p}" for p in outputs)
    _emit(args, report, human)
    return FOUND


def cmd_suite(args: argparse.Namespace) -> int:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["samples"] = args.samples
    if args.amax is not None:
        overrides["amax"] = args.amax
    if args.name == "all":
        idents = list(CRITERIA)
    elif args.name in BUNDLES:
        idents = list(BUNDLES[args.name])
    elif args.name in CRITERIA:
        idents = [args.name]
    else:
        raise _Usage(
            f"unknown suite {args.name!r}; choose from "
            f"{', '.join(sorted(BUNDLES))}, a criterion id 1..12, or 'all'"
        )
    results = [run_criterion(ident, **overrides) for ident in idents]
    key = f"suite {args.name} overrides={sorted(overrides.items())}"
    report = {
        "manifest": _manifest(args, key.encode(), []),
        "result": [
            {
                "id": r.ident,
                "title": r.title,
                "passed": r.passed,
                "detail": r.detail,
            }
            for r in results
        ],
    }
    human = [format_result(r) for r in results]
    failing = [r.ident for r in results if not r.passed]
    if failing:
        human.append("FAILING: " + ", ".join(failing))
    _emit(args, report, human)
    return FOUND if not failing else NEGATIVE


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doublehall",
        description="Exact double-Hall checkers, cover solvers, infinite-family "
        "windows, and finite-budget construction simulators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, output=True, dot=True):
        if output:
            p.add_argument("-o", "--output", help="write the main artifact here")
        if dot:
            p.add_argument("--dot", help="write a DOT rendering here")
        p.add_argument("--json", action="store_true", help="print one JSON report")

    p = sub.add_parser("gen", help="materialize a family window to JSON")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--closure",
        choices=("canonical", "n2", "n", "explicit", "hall"),
        default=None,
    )
    p.add_argument("--b-window", type=int)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check-dhp", help="exact double Hall property check")
    _add_graph_source(p)
    common(p, output=False)
    p.set_defaults(func=cmd_check_dhp)

    p = sub.add_parser("match", help="perfect A-matching or Hall violator")
    _add_graph_source(p)
    common(p, output=False)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("cover", help="disjoint cycles covering a target A-set")
    _add_graph_source(p)
    p.add_argument("--target", help="comma-separated A-indices, or 'all'")
    common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("cycle", help="one cycle through a target A-set")
    _add_graph_source(p)
    p.add_argument("--target", help="comma-separated A-indices, or 'all'")
    common(p)
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("classify", help="B-side degree classes {2, |A|, other}")
    _add_graph_source(p)
    common(p, output=False, dot=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="trace a finite-budget ray construction")
    p.add_argument(
        "--proof",
        choices=("greedy-cycle", "economical", "peel"),
        required=True,
        help="which construction to trace",
    )
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--start", type=int, default=0, help="economical start vertex")
    p.add_argument("--rounds", type=int, default=2, help="peel rounds")
    common(p, output=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("flimit", help="stabilize a cover sequence and audit degrees")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--window-top", type=int, help="largest A-index audited")
    common(p, output=False)
    p.set_defaults(func=cmd_flimit)

    p = sub.add_parser("nst", help="normal spanning tree with order queries")
    _add_graph_source(p)
    p.add_argument("--root", required=True, help="root vertex, e.g. a0")
    p.add_argument("--claims", action="store_true", help="run the structural claim audit")
    p.add_argument("--cuts", action="store_true", help="choose surgery cut levels")
    common(p, output=False, dot=False)
    p.set_defaults(func=cmd_nst)

    p = sub.add_parser("surgery", help="one window-cycle rerouting round")
    p.add_argument("--scenario", choices=sorted(_SCENARIOS), help="built-in fixture")
    p.add_argument("--input", "-i", help="scenario JSON file")
    p.add_argument("--case", choices=("auto", "case1", "case2"), default="auto")
    p.add_argument(
        "--emit-scenario", help="write the scenario itself as JSON before running"
    )
    common(p)
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("glue", help="join two graphs through two fresh hubs")
    p.add_argument("left", help="first JSON graph")
    p.add_argument("right", help="second JSON graph")
    p.add_argument(
        "--reindex",
        action="store_true",
        help="shift the second graph's ids past the first instead of failing on overlap",
    )
    common(p)
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("suite", help="run an acceptance bundle")
    p.add_argument("name", help=f"one of {', '.join(sorted(BUNDLES))}, 1..12, or 'all'")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--amax", type=int)
    common(p, output=False, dot=False)
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (FormatError, InvalidVertex, IdCollision, TooSmall, UnboundedClosure) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (
        BudgetExhausted,
        CoverExistenceViolation,
        HypothesisFailed,
        NotConnected,
        Undecidable,
        WindowNotStable,
    ) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return NEGATIVE
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
