import json
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from sccmu.graph import (ColoredGraph, GraphError, bisimilar, cycle_graph, fn_graph, gk_vertex, graft,
                         in_scck, is_pseudotree, make_gk, make_nloop, max_scc_size, pseudotree_of,
                         random_graph, random_scck, sample_rng, scc_decompose,
                         strongly_connected_components)


def mutual_reachability(n, edges):
    reach = [[i == j for j in range(n)] for i in range(n)]
    for u, v in edges:
        reach[u][v] = True
    for m in range(n):
        for i in range(n):
            if reach[i][m]:
                for j in range(n):
                    if reach[m][j]:
                        reach[i][j] = True
    return {frozenset(j for j in range(n) if reach[i][j] and reach[j][i]) for i in range(n)}


@st.composite
def small_graphs(draw, max_vertices=6, predicates=("F",)):
    n = draw(st.integers(1, max_vertices))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    sat = draw(st.sets(st.tuples(st.sampled_from(predicates), st.integers(0, n - 1))))
    return ColoredGraph.build(range(n), edges, predicates, sat, 0)


# SCC

def test_scc_singleton_and_loop():
    assert scc_decompose(fn_graph("N", [])).components == ((0,),)
    assert scc_decompose(make_nloop()).components == ((0,),)
    assert max_scc_size(make_nloop()) == 1


def test_scc_two_cycle():
    g = fn_graph("NN", [(0, 1), (1, 0)])
    assert scc_decompose(g).components == ((0, 1),)
    assert not in_scck(g, 1)
    assert in_scck(g, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_scc_exhaustive_against_reachability(n):
    pairs = list(product(range(n), repeat=2))
    for mask in range(2 ** len(pairs)):
        edges = [p for b, p in enumerate(pairs) if mask >> b & 1]
        succ = {v: [w for u, w in edges if u == v] for v in range(n)}
        got = {frozenset(b) for b in strongly_connected_components(range(n), succ)}
        assert got == mutual_reachability(n, edges), edges


@given(small_graphs(max_vertices=5))
def test_scc_five_vertices_against_reachability(g):
    got = {frozenset(b) for b in scc_decompose(g).components}
    assert got == mutual_reachability(len(g), g.edges)


@given(small_graphs())
def test_scc_topological_order(g):
    dec = scc_decompose(g)
    where = dec.block_of()
    assert sorted(v for b in dec.components for v in b) == list(g.vertices)
    for u, v in g.edges:
        assert where[u] <= where[v]


def test_scc_of_gk_and_random_dags():
    assert max_scc_size(make_gk(1)) == 1
    for i in range(50):
        rng = sample_rng(11, i)
        n = rng.randint(1, 8)
        edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.4]
        edges += [(v, v) for v in range(n) if rng.random() < 0.5]
        assert in_scck(fn_graph("N" * n, edges), 1)


# Pseudotrees

def test_is_pseudotree_cases():
    assert is_pseudotree(make_gk(1))
    assert not is_pseudotree(fn_graph("NN", [(0, 1), (1, 0)]))
    assert is_pseudotree(fn_graph("NNNN", [(0, 1), (0, 2), (2, 3)]))
    assert not is_pseudotree(fn_graph("NNN", [(0, 1), (0, 2), (1, 2)]))
    assert is_pseudotree(make_nloop())


def test_pseudotree_of_diamond_duplicates_sink():
    g = fn_graph("NNNF", [(0, 1), (0, 2), (1, 3), (2, 3)])
    p = pseudotree_of(g)
    assert len(p) == 5
    assert is_pseudotree(p)
    assert bisimilar(g, p)
    assert sum(1 for v in p.vertices if p.colors[v]) == 2


def test_pseudotree_of_keeps_loops():
    g = fn_graph("FN", [(0, 0), (0, 1)])
    p = pseudotree_of(g)
    assert p.edges == ((0, 0), (0, 1))
    assert p.colors[0] == frozenset({"F"})


def test_pseudotree_of_rejects_big_components():
    with pytest.raises(GraphError):
        pseudotree_of(cycle_graph("NF"))


def test_pseudotree_of_is_idempotent_up_to_bisimulation():
    g = make_gk(2)
    p = pseudotree_of(g)
    assert p == g.canonical()
    assert bisimilar(p, pseudotree_of(p))


def test_pseudotree_of_random_scc1():
    for i in range(200):
        g = random_scck(sample_rng(12, i), 1, 10)
        p = pseudotree_of(g)
        assert is_pseudotree(p) and in_scck(p, 1) and bisimilar(g, p)


# Bisimulation

def test_bisimilar_basics():
    g = make_gk(1)
    assert bisimilar(g, g)
    f_loop = fn_graph("F", [(0, 0)])
    assert not bisimilar(f_loop, make_nloop())
    # an N loop is bisimilar to an N 2-cycle
    assert bisimilar(make_nloop(), cycle_graph("NN"))


def test_bisimilar_predicate_mismatch():
    with pytest.raises(GraphError):
        bisimilar(make_nloop(), fn_graph([set()], [], predicates=("F", "P")))


@given(small_graphs(), small_graphs())
def test_bisimulation_witness_satisfies_clauses(g, h):
    ok, rel = bisimilar(g, h, witness=True)
    assert ok == ((g.point, h.point) in rel)
    for v, w in rel:
        assert g.colors[v] == h.colors[w]
        for v2 in g.succ[v]:
            assert any((v2, w2) in rel for w2 in h.succ[w])
        for w2 in h.succ[w]:
            assert any((v2, w2) in rel for v2 in g.succ[v])


@given(small_graphs(4), small_graphs(4), small_graphs(4))
def test_bisimilar_is_an_equivalence(a, b, c):
    assert bisimilar(a, a)
    assert bisimilar(a, b) == bisimilar(b, a)
    if bisimilar(a, b) and bisimilar(b, c):
        assert bisimilar(a, c)


# Witness graphs

def test_g1_shape():
    g = make_gk(1)
    assert len(g) == 5
    assert [("F" if g.colors[v] else "N") for v in range(5)] == list("FNNNF")
    assert g.edges == ((0, 0), (0, 1), (1, 2), (2, 3), (3, 4), (4, 4))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_gk_counts(k):
    g = make_gk(k)
    assert len(g) == (k + 1) + k * (2 ** k + 1)
    assert is_pseudotree(g) and in_scck(g, 1)
    for i in range(k + 1):
        v = gk_vertex(k, i)
        assert g.has_loop(v) and g.colors[v] == frozenset({"F"})
    for i in range(k):
        for j in range(1, 2 ** k + 2):
            v = gk_vertex(k, i, j)
            assert not g.has_loop(v) and not g.colors[v]


def test_gk_rejects_zero():
    with pytest.raises(GraphError):
        make_gk(0)


def test_nloop():
    g = make_nloop()
    assert len(g) == 1 and g.edges == ((0, 0),) and not g.colors[0]
    assert is_pseudotree(g) and in_scck(g, 1)


# Random generation

def test_random_scck_deterministic():
    a = random_scck(sample_rng(5, 3), 2, 10)
    b = random_scck(sample_rng(5, 3), 2, 10)
    assert a.to_json() == b.to_json()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_random_scck_bound(k):
    for i in range(1000 if k == 1 else 300):
        g = random_scck(sample_rng(13, i), k, 10)
        assert in_scck(g, k)
        assert len(g.reachable()) == len(g)


# Graft

def test_graft_at_root_gives_donor():
    donor = make_gk(1)
    assert graft(make_gk(2), 0, donor) == donor.canonical()


def test_graft_nloop_into_g1():
    g = graft(make_gk(1), gk_vertex(1, 0, 2), make_nloop())
    assert len(g) == 3
    assert g.edges == ((0, 0), (0, 1), (1, 2), (2, 2))
    assert not g.colors[2]


def test_graft_errors():
    host = fn_graph("NN", [(1, 0)])
    with pytest.raises(GraphError):
        graft(host, 1, make_nloop())
    with pytest.raises(GraphError):
        graft(cycle_graph("NN"), 0, make_nloop())


def test_graft_preserves_scc1():
    for i in range(100):
        rng = sample_rng(14, i)
        host = pseudotree_of(random_scck(rng, 1, 8))
        donor = random_scck(rng, 1, 5)
        at = rng.choice(host.vertices)
        assert in_scck(graft(host, at, donor), 1)


# JSON

def test_json_round_trip_is_byte_stable():
    text = make_gk(1).to_json()
    assert ColoredGraph.from_json(text).to_json() == text


@given(small_graphs(predicates=("F", "P")))
def test_json_round_trip(g):
    assert ColoredGraph.from_json(g.to_json()) == g


@pytest.mark.parametrize("doc", [
    {"predicates": ["F"], "vertices": [0], "edges": [[0, 1]], "sat": [], "point": 0},
    {"predicates": ["F"], "vertices": [0], "edges": [[0]], "sat": [], "point": 0},
    {"predicates": ["F"], "vertices": [0], "edges": [], "sat": [["P", 0]], "point": 0},
    {"predicates": ["F"], "vertices": [0], "edges": [], "sat": [], "point": 3},
    {"predicates": ["F"], "vertices": [0], "edges": []},
])
def test_malformed_graphs_rejected(doc):
    with pytest.raises(GraphError):
        ColoredGraph.from_json(json.dumps(doc))


def test_random_graph_deterministic():
    assert random_graph(sample_rng(1, 2), 8) == random_graph(sample_rng(1, 2), 8)
