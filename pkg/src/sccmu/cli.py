"""Command-line front end: ``sccmu <group> <command> ...``.

Results go to stdout (JSON with ``--json``), diagnostics to stderr.  Exit
status is 0 on success, 1 when a check fails (a sweep finds a counterexample,
a falsifier finds no witness, validation rejects a file) and 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import automata as au
from . import formula as fm
from . import games
from .bench import BenchError, bench_kernels, bench_modelcheck, bench_reachability, family_graph
from .collapse import buchi_to_cobuchi, find_disagreement_outside_scck
from .gamma import (PN, WEAK_CANDIDATES, GammaError, box_star_gamma_semantic, falsify_weak,
                    gamma_arena, gamma_winner, make_b_gamma, make_box_star_gamma_automaton)
from .graph import (ColoredGraph, GraphError, cycle_graph, is_pseudotree, make_gk, make_nloop,
                    max_scc_size, random_graph, random_scck, sample_rng)
from .sweeps import SUITES, SweepConfig, SweepError, run_suite

BUILTIN_AUTOMATA = {
    "b-gamma": make_b_gamma,
    "box-star-gamma": make_box_star_gamma_automaton,
    **{f"weak-{k}": f for k, f in WEAK_CANDIDATES.items()},
}


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_graph(path: str) -> ColoredGraph:
    try:
        return ColoredGraph.from_dict(_load_json(path))
    except GraphError as exc:
        raise CliError(f"{path}: {exc}") from None


def load_automaton(spec: str) -> au.ParityAutomaton:
    """A JSON file, or ``builtin:<name>`` for the automata shipped with the package."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_AUTOMATA:
            raise CliError(f"unknown builtin automaton {name!r}; known: {', '.join(BUILTIN_AUTOMATA)}")
        return BUILTIN_AUTOMATA[name]()
    try:
        return au.ParityAutomaton.from_dict(_load_json(spec))
    except au.AutomatonError as exc:
        raise CliError(f"{spec}: {exc}") from None


def emit(args, data, text: str | None = None):
    if args.json or text is None:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def info(msg: str):
    print(msg, file=sys.stderr)


# graph

def cmd_graph_gen(args) -> int:
    if args.family == "gk":
        g = make_gk(args.k)
    elif args.family == "nloop":
        g = make_nloop()
    elif args.family == "cycle":
        g = cycle_graph(args.colors)
    elif args.family == "scck":
        g = random_scck(sample_rng(args.seed, args.index), args.k, args.max_vertices)
    else:
        g = random_graph(sample_rng(args.seed, args.index), args.max_vertices)
    print(g.to_json())
    return 0


def cmd_graph_validate(args) -> int:
    try:
        g = ColoredGraph.from_dict(_load_json(args.file))
    except GraphError as exc:
        info(f"{args.file}: invalid graph: {exc}")
        return 1
    summary = {"vertices": len(g), "edges": len(g.edges), "max_scc_size": max_scc_size(g),
               "pseudotree": is_pseudotree(g)}
    if args.canonical:
        print(g.to_json())
    else:
        emit(args, summary, f"ok: {len(g)} vertices, {len(g.edges)} edges, "
                            f"largest s.c.c. {summary['max_scc_size']}, pseudotree={summary['pseudotree']}")
    return 0


# formula

def _parse_formula(text: str) -> fm.Formula:
    try:
        return fm.parse(text)
    except fm.ParseError as exc:
        raise CliError(f"parse error: {exc}") from None


def cmd_formula_parse(args) -> int:
    s = _parse_formula(args.formula)
    emit(args, {"formula": fm.to_text(s), "sentence": fm.is_sentence(s)}, fm.to_text(s))
    return 0


def cmd_formula_classify(args) -> int:
    s = _parse_formula(args.formula)
    try:
        level = fm.classify(s)
    except fm.FormulaError as exc:
        raise CliError(str(exc)) from None
    emit(args, {"formula": fm.to_text(s), "kind": level.kind, "index": level.index}, str(level))
    return 0


def cmd_formula_eval(args) -> int:
    s = _parse_formula(args.formula)
    g = load_graph(args.graph)
    try:
        vs = fm.evaluate(g, s)
    except fm.FormulaError as exc:
        raise CliError(str(exc)) from None
    emit(args, {"vertices": sorted(vs), "holds_at_point": g.point in vs},
         f"{'true' if g.point in vs else 'false'} at point; holds at {sorted(vs)}")
    return 0


# game

def cmd_game_solve(args) -> int:
    try:
        a = games.ParityArena.from_dict(_load_json(args.file))
    except games.ArenaError as exc:
        raise CliError(f"{args.file}: {exc}") from None
    sol = games.solve(a)
    data = sol.to_dict()
    data["start_winner"] = games.PLAYER_NAMES[sol.winner(a.start)]
    if args.verify:
        data["verified"] = (games.verify_strategy(a, sol.strategy_even, games.EVEN, sol.even_region)
                            and games.verify_strategy(a, sol.strategy_odd, games.ODD, sol.odd_region))
    emit(args, data, f"{data['start_winner']} wins from {a.start}; Even region {data['even_region']}")
    return 0 if data.get("verified", True) else 1


# automaton

def cmd_automaton_accept(args) -> int:
    a, g = load_automaton(args.automaton), load_graph(args.graph)
    try:
        verdict = au.accepts(a, g)
    except au.AutomatonError as exc:
        raise CliError(str(exc)) from None
    emit(args, {"accepts": verdict}, "accepts" if verdict else "rejects")
    return 0


def cmd_automaton_normalize(args) -> int:
    print(json.dumps(au.normalize_to_covers(load_automaton(args.automaton)).to_dict()))
    return 0


def cmd_automaton_classify(args) -> int:
    a = load_automaton(args.automaton)
    data = {"states": len(a.states), "weak": au.is_weak(a), "buchi": au.is_buchi(a),
            "cobuchi": au.is_cobuchi(a), "cover_only": a.is_cover_only()}
    emit(args, data, ", ".join(f"{k}={v}" for k, v in data.items()))
    return 0


def cmd_automaton_validate(args) -> int:
    try:
        a = au.ParityAutomaton.from_dict(_load_json(args.automaton))
    except au.AutomatonError as exc:
        info(f"{args.automaton}: invalid automaton: {exc}")
        return 1
    print(json.dumps(a.to_dict()))
    return 0


# collapse

def cmd_collapse_run(args) -> int:
    b = load_automaton(args.automaton)
    try:
        c = buchi_to_cobuchi(b, args.k)
    except au.AutomatonError as exc:
        raise CliError(str(exc)) from None
    info(f"coBuchi automaton with {len(c.states)} states (window {len(b.states) * args.k})")
    out = {"automaton": c.to_dict()}
    if args.check:
        g = load_graph(args.check)
        out["buchi_accepts"] = au.accepts(b, g)
        out["cobuchi_accepts"] = au.accepts(c, g)
        out["scc_bound_holds"] = max_scc_size(g) <= args.k
    print(json.dumps(out))
    return 0


def _print_report(args, report) -> int:
    cfg = report["config"]
    emit(args, report, f"{cfg['suite']}: {report['passed']}/{cfg['samples']} agree"
                       + (f"; first failure at sample {report['failing_samples'][0]}" if report["failed"] else ""))
    return 1 if report["failed"] else 0


def cmd_collapse_sweep(args) -> int:
    suite = "collapse-soundness" if args.soundness else "collapse-equivalence"
    report = run_suite(SweepConfig(suite, args.seed, args.samples, args.max_vertices, args.k, args.mutate))
    if args.mutate:
        # a corrupted construction is expected to disagree somewhere
        emit(args, report, f"mutated window: {report['failed']} disagreements in {args.samples} samples")
        return 0 if report["failed"] else 1
    return _print_report(args, report)


def cmd_collapse_disagree(args) -> int:
    b = load_automaton(args.automaton)
    g = find_disagreement_outside_scck(b, args.k, args.bound)
    if g is None:
        emit(args, {"graph": None}, f"no disagreement on cycles up to length {args.bound}")
        return 0
    c = buchi_to_cobuchi(b, args.k)
    emit(args, {"graph": g.to_dict(), "buchi_accepts": au.accepts(b, g), "cobuchi_accepts": au.accepts(c, g)},
         f"cycle {''.join('F' if g.colors[v] else 'N' for v in range(len(g)))}: "
         f"Buchi {au.accepts(b, g)}, coBuchi {au.accepts(c, g)}")
    return 0


# gamma

def cmd_gamma_solve(args) -> int:
    g = load_graph(args.graph)
    try:
        v = gamma_winner(g)
    except GraphError as exc:
        raise CliError(str(exc)) from None
    data = v.to_dict()
    if args.verify:
        player = games.EVEN if v.winner == PN else games.ODD
        a = gamma_arena(g)
        region = v.pn_region if v.winner == PN else frozenset(range(len(g))) - v.pn_region
        data["verified"] = games.verify_strategy(a, v.strategy, player, region)
    emit(args, data, f"{v.winner} wins")
    return 0 if data.get("verified", True) else 1


def cmd_gamma_check_bstar(args) -> int:
    g = load_graph(args.graph)
    try:
        sem = box_star_gamma_semantic(g)
    except GraphError as exc:
        raise CliError(str(exc)) from None
    aut = au.accepts(make_box_star_gamma_automaton(), g)
    emit(args, {"semantic": sem, "automaton": aut}, f"semantic {sem}, automaton {aut}")
    return 0 if sem == aut else 1


def cmd_gamma_falsify(args) -> int:
    w = load_automaton(args.automaton)
    try:
        report = falsify_weak(w)
    except GammaError as exc:
        info(f"no verified witness: {exc}")
        return 1
    except au.AutomatonError as exc:
        raise CliError(str(exc)) from None
    emit(args, report.to_dict(), f"witness with {len(report.counterexample)} vertices: "
                                 f"automaton {report.automaton_verdict}, box-star-Gamma {report.semantic_verdict}\n"
                                 + "\n".join(f"  {s}" for s in report.derivation))
    return 0


def cmd_gamma_automaton(args) -> int:
    print(json.dumps(BUILTIN_AUTOMATA[args.name]().to_dict()))
    return 0


# sweeps and bench

def cmd_sweep(args) -> int:
    return _print_report(args, run_suite(SweepConfig(args.suite, args.seed, args.samples,
                                                     args.max_vertices, args.k)))


def cmd_bench(args) -> int:
    a = load_automaton(args.automaton)
    if args.collapse:
        a = buchi_to_cobuchi(a, args.collapse)
    if args.kernels:
        data = bench_kernels(a, args.family, args.sizes, args.repeats)
        text = "\n".join(f"{k}: slope {v['slope']:.2f}, medians {['%.4f' % m for m in v['medians']]}"
                         for k, v in data.items() if k != "speedup")
        if "speedup" in data:
            text += f"\nspeedup: {['%.1f' % s for s in data['speedup']]}"
        emit(args, data, text)
        return 0
    report = bench_modelcheck(a, args.family, args.sizes, args.repeats)
    data = report.to_dict()
    if args.baseline:
        data["baseline"] = bench_reachability(args.sizes if args.family == "chain" else
                                              [len(family_graph('gk', s)) for s in args.sizes], args.repeats).to_dict()
    text = (f"{report.label}: slope {report.slope:.2f} over vertices {report.vertices} "
            f"(medians {['%.4f' % m for m in report.medians]}; {report.note})")
    if args.baseline:
        text += f"\nbaseline reachability: slope {data['baseline']['slope']:.2f}"
    emit(args, data, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="sccmu", description=__doc__.splitlines()[0], parents=[common])
    groups = p.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help_):
        q = group.add_parser(name, help=help_, parents=[common])
        q.set_defaults(fn=fn)
        return q

    g = groups.add_parser("graph", help="colored graphs").add_subparsers(dest="cmd", required=True)
    q = sub(g, "gen", cmd_graph_gen, "generate a graph")
    q.add_argument("family", choices=["gk", "nloop", "cycle", "scck", "random"])
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--max-vertices", type=int, default=10)
    q.add_argument("--index", type=int, default=0, help="sample index within the seeded stream")
    q.add_argument("--colors", default="NNNF", help="cycle colors, e.g. NNNF")
    q = sub(g, "validate", cmd_graph_validate, "check a graph file")
    q.add_argument("file")
    q.add_argument("--canonical", action="store_true", help="print the re-serialized graph")

    f = groups.add_parser("formula", help="mu-calculus formulas").add_subparsers(dest="cmd", required=True)
    sub(f, "parse", cmd_formula_parse, "parse and pretty-print").add_argument("formula")
    sub(f, "classify", cmd_formula_classify, "syntactic alternation level").add_argument("formula")
    q = sub(f, "eval", cmd_formula_eval, "evaluate on a graph")
    q.add_argument("formula")
    q.add_argument("graph")

    gm = groups.add_parser("game", help="parity games").add_subparsers(dest="cmd", required=True)
    q = sub(gm, "solve", cmd_game_solve, "solve a parity arena")
    q.add_argument("file")
    q.add_argument("--verify", action="store_true")

    a = groups.add_parser("automaton", help="parity automata (file or builtin:<name>)").add_subparsers(
        dest="cmd", required=True)
    q = sub(a, "accept", cmd_automaton_accept, "acceptance verdict")
    q.add_argument("automaton")
    q.add_argument("graph")
    sub(a, "normalize", cmd_automaton_normalize, "rewrite to cover clauses").add_argument("automaton")
    sub(a, "classify", cmd_automaton_classify, "weak / Buchi / coBuchi").add_argument("automaton")
    sub(a, "validate", cmd_automaton_validate, "check and re-serialize").add_argument("automaton")

    c = groups.add_parser("collapse", help="Buchi to coBuchi window construction").add_subparsers(
        dest="cmd", required=True)
    q = sub(c, "run", cmd_collapse_run, "build the coBuchi automaton")
    q.add_argument("automaton")
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--check", metavar="GRAPH")
    q = sub(c, "sweep", cmd_collapse_sweep, "random equivalence sweep")
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--samples", type=int, default=200)
    q.add_argument("--max-vertices", type=int, default=10)
    q.add_argument("--mutate", action="store_true", help="use window W-1; disagreements expected")
    q.add_argument("--soundness", action="store_true", help="unbounded graphs, check coBuchi => Buchi")
    q = sub(c, "disagree", cmd_collapse_disagree, "search cycles outside SCCk")
    q.add_argument("automaton")
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--bound", type=int, default=6)

    gg = groups.add_parser("gamma", help="the game Gamma and box-star-Gamma").add_subparsers(
        dest="cmd", required=True)
    q = sub(gg, "solve", cmd_gamma_solve, "winner of Gamma at the point")
    q.add_argument("graph")
    q.add_argument("--verify", action="store_true")
    sub(gg, "check-bstar", cmd_gamma_check_bstar, "box-star-Gamma: semantic vs automaton").add_argument("graph")
    sub(gg, "falsify", cmd_gamma_falsify, "witness against a weak automaton").add_argument("automaton")
    sub(gg, "automaton", cmd_gamma_automaton, "print a builtin automaton").add_argument(
        "name", choices=sorted(BUILTIN_AUTOMATA))

    q = groups.add_parser("sweep", help="run a named randomized suite", parents=[common])
    q.set_defaults(fn=cmd_sweep)
    q.add_argument("suite", choices=sorted(SUITES))
    q.add_argument("--samples", type=int, default=200)
    q.add_argument("--max-vertices", type=int, default=10)
    q.add_argument("--k", type=int, default=1)

    q = groups.add_parser("bench", help="model-checking scaling", parents=[common])
    q.set_defaults(fn=cmd_bench)
    q.add_argument("--automaton", default="builtin:b-gamma")
    q.add_argument("--collapse", type=int, default=1, metavar="K",
                   help="collapse the automaton for SCCk first (0 disables; default 1)")
    q.add_argument("--family", choices=["gk", "chain"], default="gk")
    q.add_argument("--sizes", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    q.add_argument("--repeats", type=int, default=5)
    q.add_argument("--baseline", action="store_true", help="also time BFS reachability")
    q.add_argument("--kernels", action="store_true", help="compare compiled and pure-Python solvers")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, SweepError, BenchError, GraphError, au.AutomatonError) as exc:
        info(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
