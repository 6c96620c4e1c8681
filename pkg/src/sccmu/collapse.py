"""Büchi to coBüchi collapse on graphs with small strongly connected components.

A state of the coBüchi automaton is a window: the last ``W = |Q| * k``
states of the Büchi automaton visited along a play (fewer during warm-up).
A window is final (priority 2) when it is full and contains a Büchi-final
state; otherwise it gets priority 1.  Every clause of the source transition
relation is kept with its states replaced by the shifted windows, so
``dia`` and ``box`` clauses are supported alongside ``cover``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .automata import AutomatonError, Clause, ParityAutomaton, accepts, is_buchi, letters
from .graph import ColoredGraph, cycle_graph, max_scc_size


@dataclass(frozen=True)
class ListState:
    window: tuple

    def __post_init__(self):
        if not self.window:
            raise AutomatonError("a list state is nonempty")

    @property
    def last(self):
        return self.window[-1]

    def shift(self, q, width: int) -> "ListState":
        w = self.window if len(self.window) < width else self.window[1:]
        return ListState(w + (q,))

    @property
    def name(self) -> str:
        return "[" + ",".join(map(str, self.window)) + "]"


def buchi_to_cobuchi(b: ParityAutomaton, k: int, *, window: int | None = None) -> ParityAutomaton:
    """coBüchi automaton equivalent to ``b`` on graphs whose s.c.c. have at most ``k`` vertices.

    ``window`` overrides the width ``|Q| * k``; it exists to run mutation
    checks and should be left alone otherwise.
    """
    if not is_buchi(b):
        raise AutomatonError("buchi_to_cobuchi needs a Büchi automaton (priorities in {0, 1})")
    if k < 1:
        raise AutomatonError("k must be positive")
    width = len(b.states) * k if window is None else window
    if width < 1:
        raise AutomatonError("window width must be positive")
    alphabet = letters(b.predicates)
    start = ListState((b.initial,))
    seen = {start: start.name}
    names = {start.name: start}
    todo = [start]
    delta: dict = {}
    while todo:
        lst = todo.pop()
        for letter in alphabet:
            clauses = []
            for c in b.transitions(lst.last, letter):
                targets = []
                for q in c.states:
                    nxt = lst.shift(q, width)
                    if nxt not in seen:
                        if nxt.name in names:
                            raise AutomatonError(f"state names collide on {nxt.name}")
                        seen[nxt] = nxt.name
                        names[nxt.name] = nxt
                        todo.append(nxt)
                    targets.append(seen[nxt])
                clauses.append(Clause(c.kind, tuple(targets)))
            if clauses:
                delta[(seen[lst], letter)] = tuple(clauses)
    order = sorted(seen, key=lambda s: (len(s.window), [b.states.index(q) for q in s.window]))
    prio = {}
    for s in order:
        full = len(s.window) == width
        prio[s.name] = 2 if full and any(b.priority[q] == 0 for q in s.window) else 1
    return ParityAutomaton(tuple(s.name for s in order), b.predicates, delta, start.name, prio)


def find_disagreement_outside_scck(b: ParityAutomaton, k: int, search_bound: int,
                                   *, collapsed: ParityAutomaton | None = None) -> ColoredGraph | None:
    """Smallest F/N-colored cycle (longer than ``k``) telling ``b`` and its collapse apart.

    Cycles of length ``k+1 .. search_bound`` are tried in order of length,
    colorings in lexicographic order with N before F.  Returns ``None`` if
    every candidate agrees.
    """
    if set(b.predicates) != {"F"}:
        raise AutomatonError("the cycle search colors vertices with the single predicate F")
    c = collapsed if collapsed is not None else buchi_to_cobuchi(b, k)
    for length in range(k + 1, search_bound + 1):
        for colors in product("NF", repeat=length):
            g = cycle_graph(colors)
            if max_scc_size(g) <= k:
                continue
            if accepts(b, g) != accepts(c, g):
                return g
    return None
