import pytest

from sccmu import automata as au
from sccmu.automata import (AutomatonError, Clause, ParityAutomaton, acceptance_arena, accepts,
                            accepts_explicit, accepts_from, box, cover, dia, is_buchi, is_cobuchi,
                            is_weak, make_automaton, normalize_to_covers, play, random_automaton,
                            restrict, strategy_graph, strategy_tree)
from sccmu.collapse import buchi_to_cobuchi
from sccmu.formula import parse, satisfies
from sccmu.gamma import (PN, gamma_winner, make_b_gamma, make_box_star_gamma_automaton, weak_always_f,
                         weak_reach_f)
from sccmu.games import solve
from sccmu.graph import (bisimilar, fn_graph, gk_vertex, make_gk, make_nloop, pseudotree_of,
                         random_graph, random_scck, sample_rng)
from sccmu.sweeps import small_graphs

LEAF_ONLY = make_automaton(["q"], ["F"], {("q", ()): [cover()], ("q", ("F",)): [cover()]}, "q", {"q": 0})


def test_normalize_leaves_cover_automata_alone():
    a = weak_always_f()
    assert normalize_to_covers(a) is a


def test_normalize_diamond_keeps_buchi():
    a = make_automaton(["q0", "q1"], ["F"],
                       {("q0", ()): [dia("q1")], ("q1", ("F",)): [cover("q1"), cover()]},
                       "q0", {"q0": 1, "q1": 0})
    n = normalize_to_covers(a)
    assert n.transitions("q0", frozenset()) == (cover("q1", "q_t"),)
    assert n.priority["q_t"] == 0
    assert is_buchi(n) and n.is_cover_only()


def test_normalize_box_of_b_gamma():
    n = normalize_to_covers(make_b_gamma())
    assert set(n.transitions("qF", frozenset({"F"}))) == {
        cover("qN", "qF"), cover("qN"), cover("qF"), cover()}
    assert len(n.states) == 4


def test_normalize_empty_diamond_holds_at_leaves():
    a = make_automaton(["q"], ["F"], {("q", ()): [dia()]}, "q", {"q": 1})
    leaf = fn_graph("N", [])
    assert accepts(a, leaf) and accepts_explicit(a, leaf)


def test_normalized_b_gamma_matches_game():
    n = normalize_to_covers(make_b_gamma())
    for i in range(200):
        g = random_graph(sample_rng(41, i), 8)
        arena, _ = acceptance_arena(n, g)
        assert (arena.start in solve(arena).even_region) == (gamma_winner(g).winner == PN)


def test_normalization_preserves_language_against_explicit_oracle():
    for i in range(600):
        rng = sample_rng(42, i)
        a = random_automaton(rng, rng.randint(1, 3), kinds=au.KINDS, max_width=3)
        g = random_graph(rng, 3)
        assert accepts_explicit(a, g) == accepts_explicit(normalize_to_covers(a), g)


def test_class_predicates():
    bg = make_b_gamma()
    assert is_buchi(bg) and not is_weak(bg) and not is_cobuchi(bg)
    assert is_cobuchi(buchi_to_cobuchi(bg, 1))
    assert is_weak(weak_reach_f()) and is_weak(weak_always_f())


def test_acceptance_arena_leaf_cases():
    assert accepts(LEAF_ONLY, fn_graph("N", []))
    assert not accepts(LEAF_ONLY, make_nloop())


def test_acceptance_arena_needs_covers():
    with pytest.raises(AutomatonError):
        acceptance_arena(make_b_gamma(), make_nloop())


def test_alphabet_mismatch():
    with pytest.raises(AutomatonError):
        accepts(LEAF_ONLY, fn_graph([set()], [], predicates=("P",)))


def test_decomposed_game_matches_explicit_markings():
    # every graph with at most 3 vertices, each against its own random automaton
    # with at most 2 states, plus all graphs with at most 2 vertices against 40 more
    graphs = list(small_graphs(3))
    assert len(graphs) == 2 * 2 + 16 * 4 + 512 * 8
    for i, g in enumerate(graphs):
        rng = sample_rng(43, i)
        a = random_automaton(rng, rng.randint(1, 2), priorities=(0, 1, 2, 3))
        assert accepts(a, g) == accepts_explicit(a, g), (a.to_json(), g.to_json())
    for j in range(40):
        a = random_automaton(sample_rng(44, j), 2, priorities=(0, 1, 2, 3), max_clauses=3)
        for g in graphs[:68]:
            assert accepts(a, g) == accepts_explicit(a, g)


def test_accepts_from_initial_is_accepts():
    for i in range(100):
        rng = sample_rng(45, i)
        a = random_automaton(rng, 3, kinds=au.KINDS)
        g = random_graph(rng, 6)
        assert accepts_from(a, a.initial, g) == accepts(a, g)


def test_b_gamma_examples():
    assert accepts(make_b_gamma(), make_gk(1))
    assert not accepts(make_b_gamma(), make_nloop())


def test_box_star_f_automaton_matches_formula():
    s = parse("nu X. F & []X")
    u = weak_always_f()
    for i in range(200):
        g = random_graph(sample_rng(46, i), 8)
        assert accepts(u, g) == satisfies(g, s)


def test_bisimulation_invariance():
    fixed = [make_b_gamma(), make_box_star_gamma_automaton(), weak_always_f(), weak_reach_f(),
             random_automaton(sample_rng(47), 3, kinds=au.KINDS, min_clauses=1)]
    for i in range(200):
        g = random_scck(sample_rng(48, i), 1, 8)
        p = pseudotree_of(g)
        for a in fixed:
            assert accepts(a, g) == accepts(a, p)


def test_restrict():
    r = restrict(normalize_to_covers(weak_reach_f()), "t")
    assert r.states == ("t",) and r.initial == "t"


# Strategy trees

def test_strategy_tree_root_and_children():
    g = make_gk(1)
    t = strategy_tree(make_b_gamma(), g, 6)
    assert t.label == ("q0", 0)

    def check(node, depth):
        for c in node.children:
            assert c.label[1] in g.succ[node.label[1]]
            check(c, depth + 1)
        if depth < 6:
            assert {c.label[1] for c in node.children} == set(g.succ[node.label[1]])
    check(t, 0)


def test_strategy_tree_rejected_input():
    with pytest.raises(AutomatonError):
        strategy_tree(make_b_gamma(), make_nloop(), 3)


def test_strategy_graph_is_bisimilar_to_input():
    checked = 0
    for i in range(200):
        rng = sample_rng(49, i)
        a = random_automaton(rng, rng.randint(1, 3), kinds=au.KINDS, min_clauses=1)
        g = random_graph(rng, 6)
        game = play(a, g)
        if not game.accepted:
            continue
        sg, labels = strategy_graph(game)
        assert labels[0] == (a.initial, g.point)
        assert bisimilar(sg, g)
        checked += 1
    assert checked > 50


def test_chain_levels_nonempty_on_gk():
    game = play(weak_reach_f(), make_gk(2))
    _, labels = strategy_graph(game)
    for i in range(2):
        for j in range(1, 6):
            assert any(v == gk_vertex(2, i, j) for _, v in labels)


# JSON

def test_automaton_json_round_trip():
    for a in (make_b_gamma(), make_box_star_gamma_automaton(), buchi_to_cobuchi(make_b_gamma(), 1)):
        b = ParityAutomaton.from_json(a.to_json())
        assert b.to_json() == a.to_json()
        assert dict(b.delta) == dict(a.delta)


def test_missing_letter_means_false():
    a = ParityAutomaton.from_dict({"states": ["q"], "predicates": ["F"], "priorities": {"q": 0},
                                   "initial": "q", "delta": []})
    assert not accepts(a, make_nloop())


@pytest.mark.parametrize("doc", [
    {"states": ["q"], "predicates": ["F"], "priorities": {}, "initial": "q", "delta": []},
    {"states": ["q"], "predicates": ["F"], "priorities": {"q": 0}, "initial": "r", "delta": []},
    {"states": ["q"], "predicates": ["F"], "priorities": {"q": 0}, "initial": "q",
     "delta": [{"state": "q", "letter": [], "clauses": [{"kind": "cover", "states": ["z"]}]}]},
    {"states": ["q"], "predicates": ["F"], "priorities": {"q": 0}, "initial": "q",
     "delta": [{"state": "q", "letter": [], "clauses": [{"kind": "both", "states": []}]}]},
    {"states": ["q"], "predicates": ["F"], "priorities": {"q": 0}, "initial": "q",
     "delta": [{"state": "q", "letter": ["G"], "clauses": []}]},
    {"states": ["q"], "predicates": ["F"], "initial": "q", "delta": []},
])
def test_malformed_automata_rejected(doc):
    with pytest.raises(AutomatonError):
        ParityAutomaton.from_dict(doc)


def test_clause_str():
    assert str(Clause("box", ("a", "b"))) == "box(a, b)"
