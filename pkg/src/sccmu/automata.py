"""Parity automata over pointed colored graphs.

Transitions map a state and a letter (a set of predicates) to a disjunction
of clauses.  Three clause kinds are supported:

``cover(q1..qn)``
    every ``qi`` marks some successor and every successor is marked by some
    ``qi``; ``cover()`` holds exactly at vertices without successors.
``dia(q1..qn)``
    every ``qi`` marks some successor.
``box(q1..qn)``
    every successor is marked by some ``qi``.

Acceptance is decided by the Duplicator/Spoiler game, encoded as a min-parity
arena and handed to :func:`sccmu.games.solve`.  Duplicator is Even.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .games import EVEN, ODD, ParityArena, Solution, solve
from .graph import ColoredGraph

COVER, DIA, BOX = "cover", "dia", "box"
KINDS = (COVER, DIA, BOX)


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Clause:
    kind: str
    states: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise AutomatonError(f"unknown clause kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(map(str, self.states))})"


def cover(*states) -> Clause:
    return Clause(COVER, tuple(states))


def dia(*states) -> Clause:
    return Clause(DIA, tuple(states))


def box(*states) -> Clause:
    return Clause(BOX, tuple(states))


def letters(predicates: Iterable[str]) -> list:
    """The alphabet: every subset of ``predicates``."""
    preds = sorted(predicates)
    return [frozenset(c) for r in range(len(preds) + 1) for c in combinations(preds, r)]


@dataclass(frozen=True, eq=False)
class ParityAutomaton:
    states: tuple
    predicates: tuple
    delta: Mapping
    initial: str
    priority: Mapping

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise AutomatonError("duplicate state names")
        if self.initial not in known:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for q in self.states:
            if q not in self.priority:
                raise AutomatonError(f"state {q!r} has no priority")
        preds = set(self.predicates)
        for (q, letter), clauses in self.delta.items():
            if q not in known:
                raise AutomatonError(f"transition from unknown state {q!r}")
            if not letter <= preds:
                raise AutomatonError(f"letter {sorted(letter)} uses undeclared predicates")
            for c in clauses:
                for s in c.states:
                    if s not in known:
                        raise AutomatonError(f"clause {c} names unknown state {s!r}")

    def transitions(self, q, letter: frozenset) -> tuple:
        """Clauses of ``delta(q, letter)``; missing entries mean false."""
        return self.delta.get((q, letter), ())

    def with_initial(self, q) -> "ParityAutomaton":
        if q not in self.priority:
            raise AutomatonError(f"{q!r} is not a state")
        return replace(self, initial=q)

    def clauses(self):
        for (q, letter), cs in self.delta.items():
            for c in cs:
                yield q, letter, c

    def is_cover_only(self) -> bool:
        return all(c.kind == COVER for _, _, c in self.clauses())

    def __repr__(self) -> str:
        return f"ParityAutomaton(states={self.states!r}, initial={self.initial!r})"

    # JSON

    def to_dict(self) -> dict:
        delta = []
        for (q, letter), cs in sorted(self.delta.items(), key=lambda kv: (self.states.index(kv[0][0]), sorted(kv[0][1]))):
            delta.append({
                "state": q,
                "letter": sorted(letter),
                "clauses": [{"kind": c.kind, "states": list(c.states)} for c in cs],
            })
        return {
            "states": list(self.states),
            "predicates": list(self.predicates),
            "priorities": {q: self.priority[q] for q in self.states},
            "initial": self.initial,
            "delta": delta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ParityAutomaton":
        try:
            delta: dict = {}
            for i, entry in enumerate(d["delta"]):
                key = (entry["state"], frozenset(entry["letter"]))
                if key in delta:
                    raise AutomatonError(f"delta[{i}]: duplicate entry for {entry['state']!r}, {entry['letter']}")
                delta[key] = tuple(Clause(c["kind"], tuple(c["states"])) for c in entry["clauses"])
            return cls(tuple(d["states"]), tuple(d["predicates"]), delta, d["initial"],
                       {q: int(p) for q, p in d["priorities"].items()})
        except (KeyError, TypeError) as exc:
            raise AutomatonError(f"bad automaton document: missing or malformed {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "ParityAutomaton":
        return cls.from_dict(json.loads(text))


def make_automaton(states: Sequence, predicates: Sequence[str], table: Mapping,
                   initial, priority: Mapping) -> ParityAutomaton:
    """Build from ``{(state, letter): [clauses]}`` where a letter is any iterable of predicates."""
    delta = {(q, frozenset(letter)): tuple(cs) for (q, letter), cs in table.items()}
    return ParityAutomaton(tuple(states), tuple(sorted(predicates)), delta, initial, dict(priority))


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def normalize_to_covers(a: ParityAutomaton) -> ParityAutomaton:
    """Equivalent automaton using cover clauses only.

    A fresh state ``q_t`` accepting every graph (priority 0) absorbs the
    unconstrained successors of ``dia`` clauses (``dia()`` is true, so it
    becomes ``cover(q_t) | cover()``); ``box(S)`` becomes the
    disjunction of ``cover(S')`` over all subsets ``S'`` of ``S``.
    """
    if a.is_cover_only():
        return a
    qt = _fresh("q_t", a.states)
    delta: dict = {}
    for key, cs in a.delta.items():
        out: list = []
        for c in cs:
            if c.kind == COVER:
                new = [c]
            elif c.kind == DIA:
                # an empty conjunction of diamonds also holds at leaves
                new = [cover(*c.states, qt)] if c.states else [cover(qt), cover()]
            else:
                uniq = tuple(dict.fromkeys(c.states))
                new = [cover(*sub) for r in range(len(uniq), -1, -1) for sub in combinations(uniq, r)]
            for n in new:
                if n not in out:
                    out.append(n)
        delta[key] = tuple(out)
    for letter in letters(a.predicates):
        delta[(qt, letter)] = (cover(qt), cover())
    prio = dict(a.priority)
    prio[qt] = 0
    return ParityAutomaton(a.states + (qt,), a.predicates, delta, a.initial, prio)


def is_weak(a: ParityAutomaton) -> bool:
    return all(a.priority[s] <= a.priority[q] for q, _, c in a.clauses() for s in c.states)


def is_buchi(a: ParityAutomaton) -> bool:
    return set(a.priority.values()) <= {0, 1}


def is_cobuchi(a: ParityAutomaton) -> bool:
    return set(a.priority.values()) <= {1, 2}


def restrict(a: ParityAutomaton, q) -> ParityAutomaton:
    """``a`` restricted to the states reachable from ``q``, with ``q`` initial."""
    keep = {q}
    stack = [q]
    while stack:
        s = stack.pop()
        for (p, _), cs in a.delta.items():
            if p != s:
                continue
            for c in cs:
                for t in c.states:
                    if t not in keep:
                        keep.add(t)
                        stack.append(t)
    states = tuple(s for s in a.states if s in keep)
    delta = {k: v for k, v in a.delta.items() if k[0] in keep}
    return ParityAutomaton(states, a.predicates, delta, q, {s: a.priority[s] for s in states})


# Acceptance game

def _check_alphabet(a: ParityAutomaton, g: ColoredGraph):
    if set(a.predicates) != set(g.predicates):
        raise AutomatonError(
            f"automaton predicates {sorted(a.predicates)} differ from graph predicates {sorted(g.predicates)}")


@dataclass
class AcceptanceGame:
    """The acceptance arena of ``automaton`` on ``graph`` together with its solution.

    Position labels: ``("state", q, v)`` owned by Duplicator, who picks a
    clause; ``("clause", q, v, i)`` owned by Spoiler, who challenges either an
    obligation ``("obl", q, v, i, qi)`` or a successor ``("succ", q, v, i, w)``;
    Duplicator answers with a witness successor or a state respectively.
    """
    automaton: ParityAutomaton
    graph: ColoredGraph
    arena: ParityArena
    index: dict
    solution: Solution = field(repr=False)

    @property
    def accepted(self) -> bool:
        return self.arena.start in self.solution.even_region

    def wins(self, q, v) -> bool:
        pos = self.index.get(("state", q, v))
        return pos is not None and pos in self.solution.even_region

    def marking(self, q, v) -> frozenset:
        """Pairs ``(q', w)`` Duplicator's positional strategy marks at ``(q, v)``."""
        arena, strat = self.arena, self.solution.strategy_even
        pos = self.index[("state", q, v)]
        if pos not in strat:
            raise AutomatonError(f"Duplicator does not win at {(q, v)}")
        clause_pos = strat[pos]
        out = set()
        for challenge in arena.moves[clause_pos]:
            answer = strat[challenge]
            _, q2, w = arena.labels[answer]
            out.add((q2, w))
        return frozenset(out)


def acceptance_arena(a: ParityAutomaton, g: ColoredGraph) -> tuple[ParityArena, dict]:
    """Arena (reachable from ``(initial, point)``) plus its label index."""
    if not a.is_cover_only():
        raise AutomatonError("acceptance_arena needs a cover-only automaton; call normalize_to_covers")
    _check_alphabet(a, g)
    labels: list = []
    index: dict = {}
    owner: list = []
    prio: list = []
    moves: list = []

    def add(label, who, p) -> int:
        pos = index.get(label)
        if pos is None:
            pos = len(labels)
            index[label] = pos
            labels.append(label)
            owner.append(who)
            prio.append(p)
            moves.append(None)
        return pos

    start = add(("state", a.initial, g.point), EVEN, a.priority[a.initial])
    todo = [start]
    while todo:
        pos = todo.pop()
        _, q, v = labels[pos]
        p = a.priority[q]
        succ = g.succ[v]
        out = []
        for i, c in enumerate(a.transitions(q, g.colors[v])):
            cpos = add(("clause", q, v, i), ODD, p)
            out.append(cpos)
            challenges = []
            for qi in dict.fromkeys(c.states):
                opos = add(("obl", q, v, i, qi), EVEN, p)
                challenges.append(opos)
                answers = []
                for w in succ:
                    t = ("state", qi, w)
                    new = t not in index
                    answers.append(add(t, EVEN, a.priority[qi]))
                    if new:
                        todo.append(answers[-1])
                moves[opos] = tuple(answers)
            for w in succ:
                spos = add(("succ", q, v, i, w), EVEN, p)
                challenges.append(spos)
                answers = []
                for qi in dict.fromkeys(c.states):
                    t = ("state", qi, w)
                    new = t not in index
                    answers.append(add(t, EVEN, a.priority[qi]))
                    if new:
                        todo.append(answers[-1])
                moves[spos] = tuple(answers)
            moves[cpos] = tuple(challenges)
        moves[pos] = tuple(out)
    arena = ParityArena(tuple(owner), tuple(prio), tuple(moves), start, tuple(labels))
    return arena, index


def play(a: ParityAutomaton, g: ColoredGraph) -> AcceptanceGame:
    """Build and solve the acceptance game (normalizing ``a`` first if needed)."""
    a = normalize_to_covers(a)
    arena, index = acceptance_arena(a, g)
    return AcceptanceGame(a, g, arena, index, solve(arena))


def accepts(a: ParityAutomaton, g: ColoredGraph) -> bool:
    return play(a, g).accepted


def accepts_from(a: ParityAutomaton, q, g: ColoredGraph) -> bool:
    """Acceptance by ``a`` started in state ``q`` instead of its initial state."""
    return accepts(a.with_initial(q), g)


# Reference construction with explicit markings (test oracle)

def clause_satisfied(c: Clause, marking: Mapping) -> bool:
    """Does ``marking`` (successor -> set of states) satisfy the clause?"""
    if c.kind in (COVER, DIA):
        for s in c.states:
            if not any(s in ms for ms in marking.values()):
                return False
    if c.kind in (COVER, BOX):
        allowed = set(c.states)
        for ms in marking.values():
            if not ms & allowed:
                return False
    return True


def explicit_marking_arena(a: ParityAutomaton, g: ColoredGraph) -> ParityArena:
    """Acceptance arena with one Duplicator move per satisfying marking.

    Exponential in ``|Q| * |Succ(v)|``; meant only as an independent check
    of :func:`acceptance_arena` on tiny inputs.  Accepts every clause kind.
    """
    _check_alphabet(a, g)
    subsets = [frozenset(c) for r in range(len(a.states) + 1) for c in combinations(a.states, r)]
    labels: list = []
    index: dict = {}
    owner: list = []
    prio: list = []
    moves: list = []

    def add(label, who, p) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
            owner.append(who)
            prio.append(p)
            moves.append(())
        return index[label]

    start = add(("state", a.initial, g.point), EVEN, a.priority[a.initial])
    todo = [start]
    seen = {start}
    while todo:
        pos = todo.pop()
        _, q, v = labels[pos]
        succ = g.succ[v]
        clauses = a.transitions(q, g.colors[v])
        out = []
        for choice in product(subsets, repeat=len(succ)):
            m = dict(zip(succ, choice))
            if not any(clause_satisfied(c, m) for c in clauses):
                continue
            pairs = frozenset((s, w) for w, ms in m.items() for s in ms)
            mpos = add(("marking", q, v, pairs), ODD, a.priority[q])
            out.append(mpos)
            targets = []
            for s, w in sorted(pairs, key=repr):
                t = add(("state", s, w), EVEN, a.priority[s])
                targets.append(t)
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
            moves[mpos] = tuple(targets)
        moves[pos] = tuple(out)
    return ParityArena(tuple(owner), tuple(prio), tuple(moves), start, tuple(labels))


def accepts_explicit(a: ParityAutomaton, g: ColoredGraph) -> bool:
    arena = explicit_marking_arena(a, g)
    return arena.start in solve(arena).even_region


# Strategy trees

@dataclass
class StrategyTree:
    label: tuple
    children: list = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def labels(self) -> set:
        out = {self.label}
        for c in self.children:
            out |= c.labels()
        return out


def strategy_graph(game: AcceptanceGame) -> tuple[ColoredGraph, list]:
    """Pairs ``(q, v)`` reachable under Duplicator's positional strategy.

    Returned as a colored graph (vertex ``i`` has the color of ``labels[i][1]``
    and edges follow the markings) plus the list of labels.  Its projection
    to the second component is a bisimulation onto the input graph.
    """
    if not game.accepted:
        raise AutomatonError("automaton rejects the graph; no winning strategy to extract")
    g = game.graph
    root = (game.automaton.initial, g.point)
    ids = {root: 0}
    labels = [root]
    edges = []
    stack = [root]
    while stack:
        q, v = stack.pop()
        for pair in sorted(game.marking(q, v), key=repr):
            if pair not in ids:
                ids[pair] = len(labels)
                labels.append(pair)
                stack.append(pair)
            edges.append((ids[(q, v)], ids[pair]))
    sat = [(p, i) for i, (_, v) in enumerate(labels) for p in g.colors[v]]
    return ColoredGraph.build(range(len(labels)), edges, g.predicates, sat, 0), labels


def strategy_tree(a: ParityAutomaton, g: ColoredGraph, depth_bound: int) -> StrategyTree:
    """Duplicator's winning strategy unfolded to ``depth_bound`` rounds."""
    game = play(a, g)
    sg, labels = strategy_graph(game)

    def unfold(i: int, depth: int) -> StrategyTree:
        node = StrategyTree(labels[i])
        if depth < depth_bound:
            node.children = [unfold(j, depth + 1) for j in sg.succ[i]]
        return node

    return unfold(0, 0)


def random_automaton(rng, n_states: int, predicates: Sequence[str] = ("F",),
                     priorities: Sequence[int] = (0, 1), kinds: Sequence[str] = (COVER,),
                     max_clauses: int = 2, max_width: int = 2,
                     min_clauses: int = 0) -> ParityAutomaton:
    """Random automaton with states ``s0..s{n-1}``, ``s0`` initial."""
    states = tuple(f"s{i}" for i in range(n_states))
    prio = {q: rng.choice(priorities) for q in states}
    delta = {}
    for q in states:
        for letter in letters(predicates):
            cs = []
            for _ in range(rng.randint(min_clauses, max_clauses)):
                width = rng.randint(0, max_width)
                c = Clause(rng.choice(kinds), tuple(sorted({rng.choice(states) for _ in range(width)})))
                if c not in cs:
                    cs.append(c)
            delta[(q, letter)] = tuple(cs)
    return ParityAutomaton(states, tuple(sorted(predicates)), delta, states[0], prio)
