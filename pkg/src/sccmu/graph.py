"""Pointed, predicate-colored directed graphs.

Vertices are integers, edges are ordered pairs and every vertex carries the
set of predicates it satisfies (its *color*).  Graphs are immutable; all
operations below return new graphs.
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

F = "F"
N_COLOR: frozenset = frozenset()
F_COLOR: frozenset = frozenset({F})


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ColoredGraph:
    vertices: tuple
    edges: tuple
    predicates: tuple
    sat: tuple
    point: int

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        if self.point not in vs:
            raise GraphError(f"point {self.point!r} is not a vertex")
        for u, v in self.edges:
            if u not in vs or v not in vs:
                raise GraphError(f"edge ({u}, {v}) leaves the vertex set")
        preds = set(self.predicates)
        for p, v in self.sat:
            if p not in preds:
                raise GraphError(f"undeclared predicate {p!r}")
            if v not in vs:
                raise GraphError(f"sat pair ({p}, {v}) names an unknown vertex")

    @classmethod
    def build(cls, vertices: Iterable[int], edges: Iterable, predicates: Iterable[str],
              sat: Iterable, point: int) -> "ColoredGraph":
        """Normalising constructor: sorts and deduplicates every component."""
        return cls(
            vertices=tuple(sorted(set(vertices))),
            edges=tuple(sorted({(u, v) for u, v in edges})),
            predicates=tuple(sorted(set(predicates))),
            sat=tuple(sorted({(p, v) for p, v in sat})),
            point=point,
        )

    @cached_property
    def succ(self) -> dict:
        out = {v: [] for v in self.vertices}
        for u, v in self.edges:
            out[u].append(v)
        return {v: tuple(ws) for v, ws in out.items()}

    @cached_property
    def pred(self) -> dict:
        out = {v: [] for v in self.vertices}
        for u, v in self.edges:
            out[v].append(u)
        return {v: tuple(ws) for v, ws in out.items()}

    @cached_property
    def colors(self) -> dict:
        out = {v: set() for v in self.vertices}
        for p, v in self.sat:
            out[v].add(p)
        return {v: frozenset(ps) for v, ps in out.items()}

    def color(self, v: int) -> frozenset:
        return self.colors[v]

    def has_loop(self, v: int) -> bool:
        return v in self.succ[v]

    def __len__(self) -> int:
        return len(self.vertices)

    def repoint(self, v: int) -> "ColoredGraph":
        if v not in self.colors:
            raise GraphError(f"{v!r} is not a vertex")
        return ColoredGraph(self.vertices, self.edges, self.predicates, self.sat, v)

    def reachable(self, start: int | None = None) -> list:
        """Vertices reachable from ``start`` (default: the point), in BFS order."""
        start = self.point if start is None else start
        seen = {start}
        order = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.succ[u]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order

    def restrict_to_reachable(self) -> "ColoredGraph":
        keep = set(self.reachable())
        return ColoredGraph.build(
            keep,
            [(u, v) for u, v in self.edges if u in keep],
            self.predicates,
            [(p, v) for p, v in self.sat if v in keep],
            self.point,
        )

    def canonical(self) -> "ColoredGraph":
        """Renumber vertices 0..n-1 in BFS order from the point.

        Unreachable vertices follow in their original order.  Two generated
        graphs are considered equal in tests when their canonical forms are.
        """
        order = self.reachable()
        seen = set(order)
        order += [v for v in self.vertices if v not in seen]
        ren = {v: i for i, v in enumerate(order)}
        return ColoredGraph.build(
            range(len(order)),
            [(ren[u], ren[v]) for u, v in self.edges],
            self.predicates,
            [(p, ren[v]) for p, v in self.sat],
            0,
        )

    # JSON

    def to_dict(self) -> dict:
        return {
            "predicates": list(self.predicates),
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "sat": [list(s) for s in self.sat],
            "point": self.point,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ColoredGraph":
        try:
            for key in ("predicates", "vertices", "edges", "sat", "point"):
                if key not in d:
                    raise GraphError(f"missing key {key!r}")
            for i, e in enumerate(d["edges"]):
                if not (isinstance(e, (list, tuple)) and len(e) == 2):
                    raise GraphError(f"edges[{i}]: expected a pair, got {e!r}")
            for i, s in enumerate(d["sat"]):
                if not (isinstance(s, (list, tuple)) and len(s) == 2):
                    raise GraphError(f"sat[{i}]: expected a pair, got {s!r}")
            return cls.build(d["vertices"], [tuple(e) for e in d["edges"]], d["predicates"],
                             [tuple(s) for s in d["sat"]], d["point"])
        except TypeError as exc:
            raise GraphError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "ColoredGraph":
        return cls.from_dict(json.loads(text))


def fn_graph(colors: Sequence[frozenset | str], edges: Iterable, point: int = 0,
             predicates: Iterable[str] = (F,)) -> ColoredGraph:
    """Shorthand for graphs over ``{F}``: colors given as ``"F"``/``"N"`` strings or sets."""
    sat = []
    for v, c in enumerate(colors):
        if isinstance(c, str):
            c = F_COLOR if c == "F" else N_COLOR
        sat.extend((p, v) for p in c)
    return ColoredGraph.build(range(len(colors)), edges, predicates, sat, point)


# Strongly connected components

@dataclass(frozen=True)
class SccDecomposition:
    components: tuple
    # blocks listed so that every edge between distinct blocks goes forward
    topo_order: tuple = field(default=())

    def block_of(self) -> dict:
        return {v: i for i, blk in enumerate(self.components) for v in blk}


def strongly_connected_components(nodes: Iterable, succ) -> list:
    """Tarjan's algorithm, iterative.  ``succ`` maps a node to its successors.

    Components come out in reverse topological order (sinks first).
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    blocks: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                blk = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    blk.append(w)
                    if w == v:
                        break
                blocks.append(blk)
    return blocks


def scc_decompose(g: ColoredGraph) -> SccDecomposition:
    """Strongly connected components of ``g``, listed in topological order.

    A loop never enlarges a component: a reflexive vertex alone in its
    component is a block of size 1.
    """
    blocks = [tuple(sorted(b)) for b in strongly_connected_components(g.vertices, g.succ)]
    blocks.reverse()
    return SccDecomposition(tuple(blocks), tuple(range(len(blocks))))


def max_scc_size(g: ColoredGraph) -> int:
    return max(len(b) for b in scc_decompose(g).components)


def in_scck(g: ColoredGraph, k: int) -> bool:
    return max_scc_size(g) <= k


def is_pseudotree(g: ColoredGraph) -> bool:
    """True iff removing all loops leaves a tree rooted at the point."""
    indeg = {v: 0 for v in g.vertices}
    for u, v in g.edges:
        if u != v:
            indeg[v] += 1
    if indeg[g.point] != 0:
        return False
    if any(d != 1 for v, d in indeg.items() if v != g.point):
        return False
    # in-degree one everywhere else: a tree iff everything is reachable
    return len(g.reachable()) == len(g.vertices)


def pseudotree_of(g: ColoredGraph) -> ColoredGraph:
    """Finite pseudotree bisimilar to ``g`` (which must lie in SCC1).

    Loops are removed, the remaining acyclic graph is unfolded from the
    point, and every copy of a reflexive vertex gets its loop back.
    """
    if not in_scck(g, 1):
        raise GraphError("pseudotree_of needs a graph in SCC1; the unfolding would be infinite")
    loops = {v for v in g.vertices if g.has_loop(v)}
    vertices, edges, sat = [], [], []
    # iterative DFS over paths; each path becomes one tree vertex
    stack = [(g.point, None)]
    while stack:
        v, parent = stack.pop()
        me = len(vertices)
        vertices.append(me)
        sat.extend((p, me) for p in g.colors[v])
        if parent is not None:
            edges.append((parent, me))
        if v in loops:
            edges.append((me, me))
        for w in reversed(g.succ[v]):
            if w != v:
                stack.append((w, me))
    return ColoredGraph.build(vertices, edges, g.predicates, sat, 0).canonical()


def bisimulation_classes(g: ColoredGraph, h: ColoredGraph) -> tuple[dict, dict]:
    """Coarsest bisimulation on the disjoint union of ``g`` and ``h``.

    Returns block ids for the vertices of each graph.  Plain signature
    refinement: split blocks by (color, set of successor blocks) until stable.
    """
    nodes = [(0, v) for v in g.vertices] + [(1, v) for v in h.vertices]
    graphs = (g, h)
    succ = {(s, v): [(s, w) for w in graphs[s].succ[v]] for s, v in nodes}
    colors = {(s, v): graphs[s].colors[v] for s, v in nodes}
    ids: dict = {}
    block = {x: ids.setdefault(colors[x], len(ids)) for x in nodes}
    n_blocks = len(ids)
    while True:
        ids = {}
        new = {}
        for x in nodes:
            sig = (block[x], frozenset(block[y] for y in succ[x]))
            new[x] = ids.setdefault(sig, len(ids))
        block = new
        if len(ids) == n_blocks:
            break
        n_blocks = len(ids)
    return ({v: block[(0, v)] for v in g.vertices}, {v: block[(1, v)] for v in h.vertices})


def bisimilar(g: ColoredGraph, h: ColoredGraph, *, witness: bool = False):
    """Are the points of ``g`` and ``h`` bisimilar?

    With ``witness=True`` returns ``(answer, relation)`` where ``relation`` is
    the set of related vertex pairs of the coarsest bisimulation.
    """
    if set(g.predicates) != set(h.predicates):
        raise GraphError("bisimilar: graphs use different predicate sets")
    bg, bh = bisimulation_classes(g, h)
    ok = bg[g.point] == bh[h.point]
    if not witness:
        return ok
    by_block: dict = {}
    for w, b in bh.items():
        by_block.setdefault(b, []).append(w)
    rel = {(v, w) for v, b in bg.items() for w in by_block.get(b, ())}
    return ok, rel


# Witness graphs

def gk_vertex(k: int, i: int, j: int = 0) -> int:
    """Id of ``v_i`` (j == 0) or ``v_{i,j}`` in :func:`make_gk`."""
    n = 2 ** k + 1
    if not (0 <= i <= k and 0 <= j <= n) or (i == k and j):
        raise GraphError(f"no vertex ({i}, {j}) in G_{k}")
    return i * (n + 1) + j


def make_gk(k: int) -> ColoredGraph:
    """The chain ``v_0, v_{0,1..n}, v_1, ..., v_k`` with ``n = 2**k + 1``.

    Every ``v_i`` is a reflexive F vertex, the ``v_{i,j}`` are irreflexive N
    vertices, the point is ``v_0``.
    """
    if k < 1:
        raise GraphError("G_k is defined for k >= 1")
    n = 2 ** k + 1
    total = k * (n + 1) + 1
    edges = [(v, v + 1) for v in range(total - 1)]
    f_vertices = [gk_vertex(k, i) for i in range(k + 1)]
    edges += [(v, v) for v in f_vertices]
    return ColoredGraph.build(range(total), edges, (F,), [(F, v) for v in f_vertices], 0)


def make_nloop() -> ColoredGraph:
    return ColoredGraph.build([0], [(0, 0)], (F,), [], 0)


def graft(host: ColoredGraph, at: int, donor: ColoredGraph) -> ColoredGraph:
    """Replace the subtree of the pseudotree ``host`` below ``at`` by ``donor``.

    Edges that entered ``at`` now enter the donor's point.  The result is
    canonically renumbered.
    """
    if not is_pseudotree(host):
        raise GraphError("graft: host must be a pseudotree")
    if at not in set(host.reachable()):
        raise GraphError(f"graft: vertex {at!r} is not reachable from the point")
    if set(host.predicates) != set(donor.predicates):
        raise GraphError("graft: host and donor use different predicate sets")
    removed = set(host.reachable(at))
    kept = [v for v in host.vertices if v not in removed]
    shift = max(host.vertices) + 1
    dmap = {v: shift + i for i, v in enumerate(donor.vertices)}
    dpoint = dmap[donor.point]
    edges = [(dmap[u], dmap[v]) for u, v in donor.edges]
    for u, v in host.edges:
        if u in removed:
            continue
        edges.append((u, dpoint if v == at else v))
    sat = [(p, v) for p, v in host.sat if v not in removed]
    sat += [(p, dmap[v]) for p, v in donor.sat]
    point = dpoint if at == host.point else host.point
    out = ColoredGraph.build(kept + list(dmap.values()), edges, host.predicates, sat, point)
    return out.restrict_to_reachable().canonical()


# Random generation

def sample_rng(seed: int, index: int = 0) -> random.Random:
    """Independent stream for sample ``index`` of the run seeded with ``seed``."""
    return random.Random(f"{seed}:{index}")


def random_scck(seed, k: int, max_vertices: int, predicates: Sequence[str] = (F,),
                loop_prob: float = 0.4, edge_prob: float = 0.3) -> ColoredGraph:
    """Random graph in SCCk with every vertex reachable from the (source) point.

    Blocks of size <= k are laid out in a line; each block is strongly
    connected (a cycle plus random chords), inter-block edges only go forward
    and every block gets at least one edge from an earlier block.
    ``seed`` may be an int or a :class:`random.Random`.
    """
    if k < 1 or max_vertices < 1:
        raise GraphError("random_scck: bounds must be positive")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(1, max_vertices)
    blocks, v = [], 0
    while v < n:
        size = min(rng.randint(1, k), n - v)
        blocks.append(list(range(v, v + size)))
        v += size
    edges = set()
    for blk in blocks:
        if len(blk) == 1:
            if rng.random() < loop_prob:
                edges.add((blk[0], blk[0]))
            continue
        for a, b in zip(blk, blk[1:] + blk[:1]):
            edges.add((a, b))
        for a, b in product(blk, blk):
            if rng.random() < edge_prob / 2:
                edges.add((a, b))
    for bi in range(1, len(blocks)):
        earlier = [u for blk in blocks[:bi] for u in blk]
        edges.add((rng.choice(earlier), rng.choice(blocks[bi])))
        for u in earlier:
            for w in blocks[bi]:
                if rng.random() < edge_prob / len(blocks[bi]):
                    edges.add((u, w))
    sat = [(p, u) for u in range(n) for p in predicates if rng.random() < 0.5]
    return ColoredGraph.build(range(n), edges, predicates, sat, 0)


def random_graph(seed, max_vertices: int, predicates: Sequence[str] = (F,),
                 edge_prob: float = 0.3) -> ColoredGraph:
    """Unconstrained random graph (no bound on component size)."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(1, max_vertices)
    edges = [(u, v) for u in range(n) for v in range(n) if rng.random() < edge_prob]
    sat = [(p, u) for u in range(n) for p in predicates if rng.random() < 0.5]
    return ColoredGraph.build(range(n), edges, predicates, sat, 0)


def cycle_graph(colors: Sequence[str]) -> ColoredGraph:
    """Directed cycle ``0 -> 1 -> ... -> n-1 -> 0`` colored by ``"F"``/``"N"``."""
    n = len(colors)
    return fn_graph(colors, [(i, (i + 1) % n) for i in range(n)])
