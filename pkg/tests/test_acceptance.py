"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines, or
``python3 tests/test_acceptance.py`` for the lines alone.
"""
import time

import pytest

from sccmu.automata import accepts, is_cobuchi
from sccmu.bench import bench_modelcheck
from sccmu.collapse import buchi_to_cobuchi, find_disagreement_outside_scck
from sccmu.formula import Atom, box_star, classify, diamond_star, parse
from sccmu.games import brute_force_solve, random_arena, small_arena_family, solve
from sccmu.gamma import (PN, WEAK_CANDIDATES, box_star_gamma_semantic, falsify_weak, gamma_winner,
                         make_b_gamma, make_box_star_gamma_automaton)
from sccmu.graph import (bisimilar, cycle_graph, graft, in_scck, is_pseudotree, make_gk, make_nloop,
                         pseudotree_of, random_graph, random_scck, sample_rng)
from sccmu.sweeps import random_buchi

SEED = 2024


def criterion_1():
    family = bad = 0
    for a in small_arena_family(5, priorities=(0, 1), max_branching=2):
        family += 1
        bad += solve(a).even_region != brute_force_solve(a)[0]
    for i in range(1000):
        a = random_arena(sample_rng(SEED + 1, i), max_positions=8)
        bad += solve(a).even_region != brute_force_solve(a)[0]
    return bad == 0, f"{family} family arenas + 1000 random, {bad} disagreements", 60


def criterion_2():
    b = make_b_gamma()
    graphs = [random_graph(sample_rng(SEED + 2, i), 10) for i in range(500)]
    graphs += [make_gk(k) for k in range(1, 5)] + [make_nloop()]
    bad = sum(accepts(b, g) != (gamma_winner(g).winner == PN) for g in graphs)
    return bad == 0, f"{len(graphs)} graphs, {bad} disagreements", 60


def criterion_3():
    bad = not_cobuchi = 0
    for k in (1, 2):
        for i in range(100):
            rng = sample_rng(SEED + 3 + k, i)
            b = random_buchi(rng, max_states=3)
            g = random_scck(rng, k, 10)
            c = buchi_to_cobuchi(b, k)
            not_cobuchi += not is_cobuchi(c)
            bad += accepts(b, g) != accepts(c, g)
    return bad == 0 and not_cobuchi == 0, f"200 pairs, {bad} disagreements, {not_cobuchi} not coBuchi", 300


def criterion_4():
    bad = checked = 0
    for i in range(200):
        rng = sample_rng(SEED + 4, i)
        b = random_buchi(rng, max_states=3)
        g = random_graph(rng, 10)
        if accepts(buchi_to_cobuchi(b, 1), g):
            checked += 1
            bad += not accepts(b, g)
    return bad == 0, f"200 graphs, {checked} accepted by C, {bad} rejected by B", 300


def criterion_5():
    b = make_b_gamma()
    g = find_disagreement_outside_scck(b, 1, 6)
    if g is None:
        return False, "no disagreement found", 30
    bv, cv = accepts(b, g), accepts(buchi_to_cobuchi(b, 1), g)
    shape = "NNNF 4-cycle" if g == cycle_graph("NNNF") else f"{len(g)}-vertex graph"
    return bv != cv, f"{shape}, B accepts={bv}, C accepts={cv}", 30


def criterion_6():
    a = make_box_star_gamma_automaton()
    bad = 0
    for i in range(500):
        g = random_scck(sample_rng(SEED + 6, i), 1, 10)
        bad += accepts(a, g) != box_star_gamma_semantic(g)
    gk_ok = all(accepts(a, make_gk(k)) and box_star_gamma_semantic(make_gk(k)) for k in range(1, 5))
    nloop_ok = not accepts(a, make_nloop())
    grafts_ok = 0
    for i in range(20):
        rng = sample_rng(SEED + 60, i)
        host = make_gk(rng.randint(1, 3)) if i % 2 else pseudotree_of(random_scck(rng, 1, 8))
        at = rng.choice(sorted(host.reachable(host.point)))
        g = graft(host, at, make_nloop())
        grafts_ok += in_scck(g, 1) and not accepts(a, g) and not box_star_gamma_semantic(g)
    ok = bad == 0 and gk_ok and nloop_ok and grafts_ok == 20
    return ok, (f"500 SCC1 graphs ({bad} disagreements), G_1..G_4 accepted={gk_ok}, "
                f"N_loop rejected={nloop_ok}, {grafts_ok}/20 grafts rejected"), 120


def criterion_7():
    parts, ok, slowest = [], True, 0.0
    for name, make in WEAK_CANDIDATES.items():
        w = make()
        t = time.perf_counter()
        r = falsify_weak(w)
        slowest = max(slowest, time.perf_counter() - t)
        g = r.counterexample
        a, s = accepts(w, g), box_star_gamma_semantic(g)
        good = in_scck(g, 1) and a != s and (a, s) == (r.automaton_verdict, r.semantic_verdict)
        ok &= good
        parts.append(f"{name}: {r.kind} ({'verified' if good else 'NOT verified'})")
    return ok and slowest < 120, "; ".join(parts), 3 * 120


def criterion_8():
    bad = 0
    autos = (make_b_gamma(), make_box_star_gamma_automaton())
    for i in range(200):
        g = random_scck(sample_rng(SEED + 8, i), 1, 10)
        p = pseudotree_of(g)
        bad += not (bisimilar(g, p) and is_pseudotree(p) and all(accepts(x, g) == accepts(x, p) for x in autos))
    return bad == 0, f"200 SCC1 graphs, {bad} failures", 120


TABLE = [
    (parse("P & <>Q"), "Delta0"),
    (box_star(Atom("P")), "Pi1"),
    (diamond_star(Atom("P")), "Sigma1"),
    (parse("G P"), "Pi1"),
    (parse("F P"), "Sigma1"),
    (parse("nu X. mu Y. (P & <>X) | <>Y"), "Pi2"),
    (parse("mu X. nu Y. (P | <>X) & []Y"), "Sigma2"),
    (parse("nu X. mu Y. (P & []X) | []Y"), "Pi2"),
]


def criterion_9():
    wrong = [(f, want, str(classify(f))) for f, want in TABLE if str(classify(f)) != want]
    return not wrong, f"{len(TABLE) - len(wrong)}/{len(TABLE)} formulas classified as expected", 30


def criterion_10():
    c = buchi_to_cobuchi(make_b_gamma(), 1)
    r = bench_modelcheck(c, "gk", [1, 2, 3, 4, 5, 6], repeats=3)
    return r.slope <= 2.5, f"slope {r.slope:.2f} over |V| = {r.vertices}", 300


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_criterion(n: int) -> tuple[bool, str]:
    t = time.perf_counter()
    ok, detail, limit = CRITERIA[n - 1]()
    elapsed = time.perf_counter() - t
    ok = ok and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} [{elapsed:.1f}s, limit {limit}s]"
    return ok, line


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, capsys):
    ok, line = run_criterion(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(n) for n in range(1, len(CRITERIA) + 1)]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
