"""Finite min-parity games.

Positions are ``0..n-1``.  Even (player 0) wins an infinite play iff the
smallest priority occurring infinitely often is even; a player who has to
move from a position without moves loses.

The solver is Zielonka's recursive algorithm.  Its inner loop lives in a
compiled extension (``_zielonka``); when that is not built, or when
``SCCMU_PURE=1`` is set, the pure-Python kernel is used instead.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import combinations, product
from math import gcd
from typing import Mapping, Sequence

from .graph import strongly_connected_components

EVEN, ODD = 0, 1
PLAYER_NAMES = ("Even", "Odd")

if os.environ.get("SCCMU_PURE") == "1":
    from . import _zielonka_py as _kernel
    BACKEND = "python"
else:
    try:
        from . import _zielonka as _kernel
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _zielonka_py as _kernel
        BACKEND = "python"


class ArenaError(ValueError):
    pass


@dataclass(frozen=True)
class ParityArena:
    owner: tuple
    priority: tuple
    moves: tuple
    start: int = 0
    labels: tuple | None = None

    def __post_init__(self):
        n = len(self.owner)
        if len(self.priority) != n or len(self.moves) != n:
            raise ArenaError("owner, priority and moves must have equal length")
        if n and not 0 <= self.start < n:
            raise ArenaError(f"start {self.start} out of range")
        for v, ms in enumerate(self.moves):
            for w in ms:
                if not 0 <= w < n:
                    raise ArenaError(f"move {v} -> {w} leaves the arena")
        for v, o in enumerate(self.owner):
            if o not in (EVEN, ODD):
                raise ArenaError(f"position {v}: owner must be 0 (Even) or 1 (Odd)")
        if any(p < 0 for p in self.priority):
            raise ArenaError("priorities must be natural numbers")

    def __len__(self) -> int:
        return len(self.owner)

    def csr(self):
        indptr, indices = [0], []
        for ms in self.moves:
            indices.extend(ms)
            indptr.append(len(indices))
        rev: list = [[] for _ in self.owner]
        for v, ms in enumerate(self.moves):
            for w in ms:
                rev[w].append(v)
        rindptr, rindices = [0], []
        for ps in rev:
            rindices.extend(ps)
            rindptr.append(len(rindices))
        return indptr, indices, rindptr, rindices

    def to_dict(self) -> dict:
        return {
            "owner": [PLAYER_NAMES[o] for o in self.owner],
            "priority": list(self.priority),
            "moves": [list(m) for m in self.moves],
            "start": self.start,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParityArena":
        try:
            owner = tuple(PLAYER_NAMES.index(o) if isinstance(o, str) else int(o)
                          for o in d["owner"])
            return cls(owner, tuple(int(p) for p in d["priority"]),
                       tuple(tuple(int(w) for w in m) for m in d["moves"]),
                       int(d.get("start", 0)))
        except (KeyError, ValueError, TypeError) as exc:
            raise ArenaError(f"bad arena document: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "ParityArena":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Solution:
    even_region: frozenset
    odd_region: frozenset
    strategy_even: Mapping[int, int]
    strategy_odd: Mapping[int, int]

    def winner(self, v: int) -> int:
        return EVEN if v in self.even_region else ODD

    def region(self, player: int) -> frozenset:
        return self.even_region if player == EVEN else self.odd_region

    def strategy(self, player: int) -> Mapping[int, int]:
        return self.strategy_even if player == EVEN else self.strategy_odd

    def to_dict(self) -> dict:
        return {
            "even_region": sorted(self.even_region),
            "odd_region": sorted(self.odd_region),
            "strategy_even": {str(k): v for k, v in sorted(self.strategy_even.items())},
            "strategy_odd": {str(k): v for k, v in sorted(self.strategy_odd.items())},
        }


def solve(a: ParityArena, *, kernel=None) -> Solution:
    """Winning regions and positional winning strategies for both players."""
    kernel = kernel or _kernel
    winner, strat = kernel.zielonka(a.owner, a.priority, *a.csr())
    even = frozenset(v for v, w in enumerate(winner) if w == EVEN)
    odd = frozenset(v for v, w in enumerate(winner) if w == ODD)
    s_even = {v: strat[v] for v in even if a.owner[v] == EVEN}
    s_odd = {v: strat[v] for v in odd if a.owner[v] == ODD}
    return Solution(even, odd, s_even, s_odd)


def _outcomes(a: ParityArena, choice: Sequence[int]) -> list:
    """Winner from every start when each position's move is fixed by ``choice``.

    ``choice[v]`` is -1 at dead ends.  Each start leads into a lasso; its
    cycle's least priority decides, a dead end is lost by its owner.
    """
    n = len(a)
    result = [-1] * n
    for s in range(n):
        if result[s] >= 0:
            continue
        path, where = [], {}
        v = s
        while v >= 0 and result[v] < 0 and v not in where:
            where[v] = len(path)
            path.append(v)
            v = choice[v]
        if v < 0:
            w = 1 - a.owner[path[-1]]
        elif result[v] >= 0:
            w = result[v]
        else:
            w = min(a.priority[u] for u in path[where[v]:]) & 1
        for u in path:
            result[u] = w
    return result


def brute_force_solve(a: ParityArena, *, bound: int = 8) -> tuple[frozenset, frozenset]:
    """Winning regions by exhaustive search over positional strategy pairs.

    Sound because parity games are positionally determined: Even wins from
    ``v`` iff one positional Even strategy beats every positional Odd reply.
    """
    n = len(a)
    if n > bound:
        raise ArenaError(f"brute_force_solve: {n} positions exceeds the bound {bound}")
    options = [tuple(ms) if ms else (-1,) for ms in a.moves]
    even_pos = [v for v in range(n) if a.owner[v] == EVEN]
    odd_pos = [v for v in range(n) if a.owner[v] == ODD]
    won = set()
    for es in product(*(options[v] for v in even_pos)):
        safe = set(range(n))
        for os_ in product(*(options[v] for v in odd_pos)):
            choice = [0] * n
            for v, c in zip(even_pos, es):
                choice[v] = c
            for v, c in zip(odd_pos, os_):
                choice[v] = c
            out = _outcomes(a, choice)
            safe = {v for v in safe if out[v] == EVEN}
            if not safe:
                break
        won |= safe
    even = frozenset(won)
    return even, frozenset(range(n)) - even


def verify_strategy(a: ParityArena, strategy: Mapping[int, int], player: int,
                    region) -> bool:
    """Does ``strategy`` win for ``player`` from every position of ``region``?

    Fixes the player's moves, keeps all opponent moves, and checks the part
    reachable from ``region``: no dead end of the player, and no cycle whose
    least priority has the opponent's parity.
    """
    for v, w in strategy.items():
        if w not in a.moves[v]:
            raise ArenaError(f"strategy picks illegal move {v} -> {w}")
    succ: dict = {}
    stack = list(region)
    seen = set(stack)
    while stack:
        v = stack.pop()
        if a.owner[v] == player:
            if not a.moves[v] or v not in strategy:
                return False
            nxt = (strategy[v],)
        else:
            nxt = tuple(a.moves[v])
        succ[v] = nxt
        for w in nxt:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    bad = sorted({a.priority[v] for v in seen if a.priority[v] & 1 != player})
    for p in bad:
        keep = {v for v in seen if a.priority[v] >= p}
        sub = {v: [w for w in succ[v] if w in keep] for v in keep}
        for comp in strongly_connected_components(sorted(keep), sub):
            if not any(a.priority[v] == p for v in comp):
                continue
            if len(comp) > 1 or comp[0] in sub[comp[0]]:
                return False
    return True


def random_arena(rng, max_positions: int = 8, max_priority: int = 3,
                 max_branching: int = 3) -> ParityArena:
    n = rng.randint(1, max_positions)
    owner = tuple(rng.randint(0, 1) for _ in range(n))
    prio = tuple(rng.randint(0, max_priority) for _ in range(n))
    moves = tuple(tuple(sorted(set(rng.randrange(n) for _ in range(rng.randint(0, max_branching)))))
                  for _ in range(n))
    return ParityArena(owner, prio, moves, 0)


def _move_sets(n: int, max_branching: int) -> list:
    return [c for r in range(max_branching + 1) for c in combinations(range(n), r)]


def arena_family_size(n: int, n_priorities: int = 2, max_branching: int = 2) -> int:
    """Number of arenas with ``n`` positions in the small exhaustive family."""
    return (2 * n_priorities * len(_move_sets(n, max_branching))) ** n


def arena_from_index(n: int, index: int, priorities: Sequence[int] = (0, 1),
                     max_branching: int = 2) -> ParityArena:
    """Decode ``index`` (mixed radix, one digit triple per position) into an arena."""
    sets = _move_sets(n, max_branching)
    owner, prio, moves = [], [], []
    for _ in range(n):
        index, o = divmod(index, 2)
        index, p = divmod(index, len(priorities))
        index, m = divmod(index, len(sets))
        owner.append(o)
        prio.append(priorities[p])
        moves.append(sets[m])
    return ParityArena(tuple(owner), tuple(prio), tuple(moves), 0)


def small_arena_family(max_positions: int = 5, priorities: Sequence[int] = (0, 1),
                       max_branching: int = 2, per_size_cap: int = 60_000):
    """Fixed enumeration of the small-arena family.

    Sizes whose family has at most ``per_size_cap`` members are enumerated
    completely; larger sizes are walked with a fixed stride coprime to the
    family size, so every digit position is exercised evenly.
    """
    for n in range(1, max_positions + 1):
        total = arena_family_size(n, len(priorities), max_branching)
        if total <= per_size_cap:
            indices = range(total)
        else:
            stride = total // per_size_cap
            while gcd(stride, total) != 1:
                stride += 1
            indices = ((i * stride) % total for i in range(per_size_cap))
        for idx in indices:
            yield arena_from_index(n, idx, priorities, max_branching)
