"""Reproducible randomized cross-checks.

Every suite draws sample ``i`` from its own stream ``sample_rng(seed, i)``,
so reports are identical for identical configurations whatever the number
of worker threads (``SCCMU_THREADS``).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product

from . import automata as au
from .collapse import buchi_to_cobuchi
from .gamma import PN, box_star_gamma_semantic, gamma_winner, make_b_gamma, make_box_star_gamma_automaton
from .games import brute_force_solve, random_arena, solve
from .graph import (bisimilar, in_scck, is_pseudotree, pseudotree_of, random_graph, random_scck,
                    sample_rng, scc_decompose)


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    suite: str
    seed: int = 0
    samples: int = 200
    max_vertices: int = 10
    k: int = 1
    mutate: bool = False

    def __post_init__(self):
        if self.samples < 1 or self.max_vertices < 1 or self.k < 1:
            raise SweepError("samples, max_vertices and k must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise SweepError("seed must be a 64-bit unsigned integer")
        if self.suite not in SUITES:
            raise SweepError(f"unknown suite {self.suite!r}; known: {', '.join(sorted(SUITES))}")


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SCCMU_THREADS", "1")))
    except ValueError:
        return 1


def ring_automaton(rng, n: int) -> au.ParityAutomaton:
    """Büchi automaton whose plays rotate through ``s0 .. s{n-1}``, plus random noise clauses."""
    base = au.random_automaton(rng, n, kinds=au.KINDS, max_clauses=1, max_width=2)
    states = base.states
    delta = {}
    for (q, letter), cs in base.delta.items():
        i = states.index(q)
        delta[(q, letter)] = (au.cover(states[(i + 1) % n]), au.cover()) + cs
    prio = {q: 1 for q in states}
    prio[states[rng.randrange(n)]] = 0
    return au.ParityAutomaton(states, base.predicates, delta, base.initial, prio)


def random_buchi(rng, max_states: int = 3) -> au.ParityAutomaton:
    n = rng.randint(1, max_states)
    if rng.random() < 0.25:
        return ring_automaton(rng, n)
    return au.random_automaton(rng, n, kinds=au.KINDS, max_clauses=3, max_width=3, min_clauses=1)


def _brute_scc(g) -> set:
    reach = {v: set(g.reachable(v)) for v in g.vertices}
    return {frozenset(w for w in g.vertices if w in reach[v] and v in reach[w]) for v in g.vertices}


# Each check returns None on agreement or a JSON-able description of the failure.

def _scc_oracle(cfg, rng):
    g = random_graph(rng, cfg.max_vertices)
    got = {frozenset(b) for b in scc_decompose(g).components}
    if got != _brute_scc(g):
        return {"graph": g.to_dict()}


def _game_oracle(cfg, rng):
    a = random_arena(rng, min(cfg.max_vertices, 8))
    even, _ = brute_force_solve(a)
    if solve(a).even_region != even:
        return {"arena": a.to_dict()}


_B_GAMMA = make_b_gamma()
_BOX_STAR = make_box_star_gamma_automaton()


def _bgamma_vs_gamma(cfg, rng):
    g = random_graph(rng, cfg.max_vertices)
    a, s = au.accepts(_B_GAMMA, g), gamma_winner(g).winner == PN
    if a != s:
        return {"graph": g.to_dict(), "automaton": a, "game": s}


def _collapse_equivalence(cfg, rng):
    b = random_buchi(rng)
    g = random_scck(rng, cfg.k, cfg.max_vertices)
    window = len(b.states) * cfg.k - 1 if cfg.mutate else None
    if window == 0:
        window = None
    c = buchi_to_cobuchi(b, cfg.k, window=window)
    x, y = au.accepts(b, g), au.accepts(c, g)
    if x != y or not au.is_cobuchi(c):
        return {"automaton": b.to_dict(), "graph": g.to_dict(), "buchi": x, "cobuchi": y}


def _collapse_soundness(cfg, rng):
    b = random_buchi(rng)
    g = random_graph(rng, cfg.max_vertices)
    y = au.accepts(buchi_to_cobuchi(b, cfg.k), g)
    if y and not au.accepts(b, g):
        return {"automaton": b.to_dict(), "graph": g.to_dict()}


def _bstar_vs_semantic(cfg, rng):
    g = random_scck(rng, 1, cfg.max_vertices)
    a, s = au.accepts(_BOX_STAR, g), box_star_gamma_semantic(g)
    if a != s:
        return {"graph": g.to_dict(), "automaton": a, "semantic": s}


def _pseudotree_invariance(cfg, rng):
    g = random_scck(rng, 1, cfg.max_vertices)
    p = pseudotree_of(g)
    problems = []
    if not bisimilar(g, p):
        problems.append("not bisimilar")
    if not is_pseudotree(p):
        problems.append("not a pseudotree")
    if not in_scck(p, 1):
        problems.append("not in SCC1")
    for name, a in (("B_Gamma", _B_GAMMA), ("box-star-Gamma", _BOX_STAR)):
        if au.accepts(a, g) != au.accepts(a, p):
            problems.append(f"{name} verdict changes")
    if problems:
        return {"graph": g.to_dict(), "problems": problems}


SUITES = {
    "scc-oracle": _scc_oracle,
    "game-oracle": _game_oracle,
    "bgamma-vs-gamma": _bgamma_vs_gamma,
    "collapse-equivalence": _collapse_equivalence,
    "collapse-soundness": _collapse_soundness,
    "bstar-vs-semantic": _bstar_vs_semantic,
    "pseudotree-invariance": _pseudotree_invariance,
}


def run_suite(cfg: SweepConfig) -> dict:
    check = SUITES[cfg.suite]

    def one(i: int):
        return check(cfg, sample_rng(cfg.seed, i))

    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = list(pool.map(one, range(cfg.samples)))
    failures = [(i, r) for i, r in enumerate(results) if r is not None]
    return {
        "config": asdict(cfg),
        "passed": cfg.samples - len(failures),
        "failed": len(failures),
        "failing_samples": [i for i, _ in failures],
        "first_counterexample": ({"sample": failures[0][0], **failures[0][1]} if failures else None),
    }


def small_graphs(max_vertices: int):
    """Every graph over ``{F}`` with at most ``max_vertices`` vertices, pointed at 0."""
    from .graph import ColoredGraph
    for n in range(1, max_vertices + 1):
        pairs = [(u, v) for u in range(n) for v in range(n)]
        for mask in range(2 ** len(pairs)):
            edges = [p for b, p in enumerate(pairs) if mask >> b & 1]
            for colors in product((False, True), repeat=n):
                yield ColoredGraph.build(range(n), edges, ("F",),
                                         [("F", v) for v in range(n) if colors[v]], 0)
