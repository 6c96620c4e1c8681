"""The game Γ, its Büchi automaton, the property □*Γ, and a falsifier for weak automata.

In Γ(G, v0) a token starts at the point.  On N vertices player PN moves it
along an edge, on F vertices player PF does; PN wins a play that visits F
vertices infinitely often, and a player without a move loses.  □*Γ holds
at the point when PN wins Γ from every reachable vertex.

Weak automata cannot express □*Γ on graphs whose strongly connected
components are single vertices.  :func:`falsify_weak` turns that argument
into a search: given a weak automaton it returns such a graph on which the
automaton and □*Γ disagree.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import (AutomatonError, ParityAutomaton, accepts, accepts_from, box, cover,
                       dia, is_weak, make_automaton, normalize_to_covers, play, restrict,
                       strategy_graph)
from .games import EVEN, ParityArena, solve
from .graph import (F, ColoredGraph, GraphError, gk_vertex, graft, in_scck, make_gk,
                    make_nloop)

PN, PF = "PN", "PF"
N_LETTER: tuple = ()
F_LETTER = (F,)


class GammaError(RuntimeError):
    """Raised when the falsifier cannot produce a verified witness."""


@dataclass(frozen=True)
class GammaVerdict:
    winner: str
    strategy: dict
    pn_region: frozenset

    def to_dict(self) -> dict:
        return {"winner": self.winner,
                "strategy": {str(k): v for k, v in sorted(self.strategy.items())},
                "pn_region": sorted(self.pn_region)}


def _check_colors(g: ColoredGraph):
    if tuple(g.predicates) != (F,):
        raise GraphError(f"the game needs graphs over the single predicate F, got {list(g.predicates)}")


def gamma_arena(g: ColoredGraph) -> ParityArena:
    """Positions are vertices; PN (Even) owns N vertices, F vertices have priority 0."""
    _check_colors(g)
    owner = tuple(EVEN if not g.colors[v] else 1 for v in range(len(g)))
    prio = tuple(0 if g.colors[v] else 1 for v in range(len(g)))
    return ParityArena(owner, prio, tuple(tuple(g.succ[v]) for v in range(len(g))), g.point)


def gamma_winner(g: ColoredGraph) -> GammaVerdict:
    a = gamma_arena(g)
    sol = solve(a)
    if g.point in sol.even_region:
        return GammaVerdict(PN, dict(sol.strategy_even), sol.even_region)
    return GammaVerdict(PF, dict(sol.strategy_odd), sol.even_region)


def box_star_gamma_semantic(g: ColoredGraph) -> bool:
    """PN wins Γ from every vertex reachable from the point."""
    region = gamma_winner(g).pn_region
    return all(v in region for v in g.reachable(g.point))


def make_b_gamma() -> ParityAutomaton:
    """Büchi automaton for Γ: qN/qF track the color of the current vertex."""
    return make_automaton(
        ["q0", "qN", "qF"], [F],
        {("q0", N_LETTER): [dia("qN"), dia("qF")],
         ("qN", N_LETTER): [dia("qN"), dia("qF")],
         ("q0", F_LETTER): [box("qN", "qF")],
         ("qF", F_LETTER): [box("qN", "qF")],
         ("qN", F_LETTER): [],
         ("qF", N_LETTER): []},
        "q0", {"q0": 0, "qN": 1, "qF": 0})


def make_box_star_gamma_automaton() -> ParityAutomaton:
    """Büchi automaton for □*Γ.

    ``u`` restarts Γ at every vertex.  ``qN`` and ``qF`` stand for the
    conjunction of ``u`` with the Γ state of that name, so a successor
    marked by them needs no separate ``u`` mark.
    """
    on_n = [cover("qN"), cover("u", "qN"), cover("qF"), cover("u", "qF")]
    on_f = [box("qN", "qF")]
    return make_automaton(
        ["u", "qN", "qF"], [F],
        {("u", N_LETTER): on_n, ("qN", N_LETTER): on_n,
         ("u", F_LETTER): on_f, ("qF", F_LETTER): on_f,
         ("qN", F_LETTER): [], ("qF", N_LETTER): []},
        "u", {"u": 0, "qN": 1, "qF": 0})


# Weak candidates

def weak_one_state() -> ParityAutomaton:
    """One even state that accepts every graph."""
    both = [cover("q0"), cover()]
    return make_automaton(["q0"], [F], {("q0", N_LETTER): both, ("q0", F_LETTER): both},
                          "q0", {"q0": 0})


def weak_always_f() -> ParityAutomaton:
    """□*F: every reachable vertex is F."""
    return make_automaton(["u"], [F], {("u", F_LETTER): [cover("u"), cover()], ("u", N_LETTER): []},
                          "u", {"u": 0})


def weak_reach_f() -> ParityAutomaton:
    """``s`` must reach an F vertex on every branch it keeps; ``t`` accepts anything."""
    anything = [cover("t"), cover()]
    return make_automaton(
        ["s", "t"], [F],
        {("s", N_LETTER): [cover("s"), cover("s", "t")],
         ("s", F_LETTER): anything,
         ("t", N_LETTER): anything, ("t", F_LETTER): anything},
        "s", {"s": 1, "t": 0})


WEAK_CANDIDATES = {
    "one-state": weak_one_state,
    "always-F": weak_always_f,
    "reach-F": weak_reach_f,
}


# Falsifier

@dataclass
class WitnessReport:
    counterexample: ColoredGraph
    automaton_verdict: bool
    semantic_verdict: bool
    derivation: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        return self.derivation[-1] if self.derivation else ""

    def to_dict(self) -> dict:
        return {"counterexample": self.counterexample.to_dict(),
                "automaton_verdict": self.automaton_verdict,
                "semantic_verdict": self.semantic_verdict,
                "derivation": list(self.derivation)}


def verify_witness(w: ParityAutomaton, g: ColoredGraph) -> tuple[bool, bool] | None:
    """Fresh verdicts ``(accepts, □*Γ)`` if ``g`` is an SCC1 graph telling them apart."""
    if not in_scck(g, 1):
        return None
    a, s = accepts(w, g), box_star_gamma_semantic(g)
    return (a, s) if a != s else None


def _reachable_labels(succ: dict, root) -> list:
    order, seen = [root], {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in succ[x]:
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    return order


def strategy_path(succ: dict, root, target) -> list:
    """Shortest path of strategy-graph labels from ``root`` to ``target``."""
    parent = {root: None}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for y in succ[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    out = [target]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out[::-1]


def path_graft(host: ColoredGraph, path: list, donor: ColoredGraph) -> ColoredGraph:
    """Unfold the strategy path ``(q_0, x_0) .. (q_m, x_m)`` and hang ``donor`` at its end.

    Fresh copies ``c_0 .. c_{m-1}`` of the path vertices keep all their
    original successors in ``host`` and add ``c_{i+1}``; the last copy is
    the donor's point.  Duplicator replays the host strategy off the path
    and the donor strategy at its end, so acceptance carries over whenever
    the final state accepts the donor.
    """
    base = len(host)
    m = len(path) - 1
    donor_base = base + m
    edges = list(host.edges)
    sat = list(host.sat)

    def copy_id(i: int) -> int:
        return base + i if i < m else donor_base + donor.point

    for i in range(m):
        v = path[i][1]
        edges.append((copy_id(i), copy_id(i + 1)))
        edges.extend((copy_id(i), w) for w in host.succ[v])
        sat.extend((p, copy_id(i)) for p in host.colors[v])
    edges.extend((donor_base + a, donor_base + b) for a, b in donor.edges)
    sat.extend((p, donor_base + v) for p, v in donor.sat)
    vertices = range(donor_base + len(donor))
    g = ColoredGraph.build(vertices, edges, host.predicates, sat, copy_id(0))
    return g.restrict_to_reachable().canonical()


def _label(v: int, k: int) -> str:
    i, j = divmod(v, 2 ** k + 2)
    return f"v_{i}" if j == 0 else f"v_{i},{j}"


def falsify_weak(w: ParityAutomaton) -> WitnessReport:
    """An SCC1 graph on which the weak automaton ``w`` and □*Γ disagree."""
    if set(w.predicates) != {F}:
        raise AutomatonError("falsify_weak expects an automaton over the single predicate F")
    w = normalize_to_covers(w)
    if not is_weak(w):
        raise AutomatonError("falsify_weak expects a weak automaton")
    nloop = make_nloop()
    trace: list = []

    def done(g: ColoredGraph, step: str) -> WitnessReport:
        verdicts = verify_witness(w, g)
        if verdicts is None:
            raise GammaError(f"candidate from step {step!r} does not verify; trace {trace}")
        return WitnessReport(g, verdicts[0], verdicts[1], trace + [step])

    if accepts(w, nloop):
        return done(nloop, "accepts-N_loop")
    h = len(w.states)
    gk = make_gk(h)
    game = play(w, gk)
    if not game.accepted:
        return done(gk, f"rejected-G_{h}")

    sg, labels = strategy_graph(game)
    succ = {labels[i]: [labels[j] for j in sg.succ[i]] for i in range(len(labels))}
    n = 2 ** h + 1
    root = (w.initial, gk.point)
    level = 0
    while True:
        if level >= h:
            raise GammaError(f"ran out of chains; trace {trace}")
        reach = _reachable_labels(succ, root)
        chain = {gk_vertex(h, level, j) for j in range(n + 1)}
        top = w.priority[root[0]]
        drops = [x for x in reach if x[1] in chain and w.priority[x[0]] < top]
        if drops:
            nxt = gk_vertex(h, level + 1)
            below = _reachable_labels(succ, drops[0])
            q1 = next(x for x in below if x[1] == nxt)
            sub = restrict(w, q1[0])
            trace.append(f"drop at ({drops[0][0]}, {_label(drops[0][1], h)}) to "
                         f"({q1[0]}, {_label(nxt, h)}); {len(sub.states)} states left")
            root = q1
            level += 1
            continue
        levels = [frozenset(q for q, v in reach if v == gk_vertex(h, level, i)) for i in range(1, n + 1)]
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if levels[i] == levels[j]), None)
        if pair is None:
            raise GammaError(f"no repeated level on chain {level}; trace {trace}")
        i, j = pair
        trace.append(f"chain {level}: Q_{i + 1} = Q_{j + 1} = {{{', '.join(sorted(levels[i]))}}}")
        for q in sorted(levels[i]):
            if not accepts_from(w, q, nloop):
                continue
            at = gk_vertex(h, level, i + 1)
            trace.append(f"q* = {q} accepts N_loop")
            plain = graft(gk, at, nloop)
            if verify_witness(w, plain):
                return done(plain, f"pumped-N_loop-graft at {_label(at, h)}")
            path = strategy_path(succ, (w.initial, gk.point), (q, at))
            return done(path_graft(gk, path, nloop),
                        f"pumped-N_loop-graft along a {len(path) - 1}-step strategy path")
        raise GammaError(f"no state of Q_{i + 1} accepts N_loop; trace {trace}")
