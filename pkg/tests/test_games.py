import pytest
from hypothesis import given, strategies as st

from sccmu import _zielonka_py, games
from sccmu.games import (EVEN, ODD, ArenaError, ParityArena, arena_family_size, brute_force_solve,
                         random_arena, small_arena_family, solve, verify_strategy)
from sccmu.graph import sample_rng

KERNELS = [_zielonka_py]
try:
    from sccmu import _zielonka
    KERNELS.append(_zielonka)
except ImportError:
    pass


@st.composite
def arenas(draw, max_positions=7, max_priority=3):
    n = draw(st.integers(1, max_positions))
    owner = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    prio = tuple(draw(st.lists(st.integers(0, max_priority), min_size=n, max_size=n)))
    moves = tuple(tuple(sorted(draw(st.sets(st.integers(0, n - 1), max_size=3)))) for _ in range(n))
    return ParityArena(owner, prio, moves)


def test_even_self_loop_priority_zero():
    sol = solve(ParityArena((EVEN,), (0,), ((0,),)))
    assert sol.even_region == {0} and sol.strategy_even == {0: 0}


def test_stuck_player_loses():
    assert solve(ParityArena((ODD,), (1,), ((),))).even_region == {0}
    assert solve(ParityArena((EVEN,), (0,), ((),))).odd_region == {0}


def test_min_convention():
    a = ParityArena((EVEN, ODD), (1, 2), ((1,), (0,)))
    assert solve(a).odd_region == {0, 1}
    assert brute_force_solve(a)[1] == {0, 1}


@pytest.mark.parametrize("p", [0, 1, 2, 3])
@pytest.mark.parametrize("owner", [EVEN, ODD])
def test_single_loop(p, owner):
    even, odd = brute_force_solve(ParityArena((owner,), (p,), ((0,),)))
    assert (even == {0}) == (p % 2 == 0)
    assert solve(ParityArena((owner,), (p,), ((0,),))).even_region == even


def test_brute_force_bound():
    with pytest.raises(ArenaError):
        brute_force_solve(ParityArena((0,) * 9, (0,) * 9, ((),) * 9))


def test_family_sizes():
    assert [arena_family_size(n) for n in (1, 2, 3)] == [8, 256, 21952]


def test_small_family_exhaustive_up_to_three():
    arenas_ = list(small_arena_family(max_positions=3, per_size_cap=10 ** 6))
    assert len(arenas_) == 8 + 256 + 21952
    for a in arenas_[:2000]:
        assert solve(a).even_region == brute_force_solve(a)[0]


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
@given(arenas())
def test_kernel_matches_brute_force(kernel, a):
    sol = solve(a, kernel=kernel)
    assert sol.even_region == brute_force_solve(a)[0]
    assert sol.even_region | sol.odd_region == set(range(len(a)))
    assert not sol.even_region & sol.odd_region
    assert verify_strategy(a, sol.strategy_even, EVEN, sol.even_region)
    assert verify_strategy(a, sol.strategy_odd, ODD, sol.odd_region)


@pytest.mark.skipif(len(KERNELS) < 2, reason="compiled kernel not built")
def test_kernels_agree_on_larger_arenas():
    for i in range(200):
        a = random_arena(sample_rng(31, i), 60, 6, 4)
        r1 = solve(a, kernel=KERNELS[0])
        r2 = solve(a, kernel=KERNELS[1])
        assert r1.even_region == r2.even_region
        assert verify_strategy(a, r2.strategy_even, EVEN, r2.even_region)
        assert verify_strategy(a, r2.strategy_odd, ODD, r2.odd_region)


def test_backend_reported():
    assert games.BACKEND in ("cython", "python")


def test_verify_strategy_catches_corruption():
    # Even must go 0 -> 1 (priority 0 loop); 0 -> 2 leads to an odd loop
    a = ParityArena((EVEN, EVEN, EVEN), (1, 0, 1), ((1, 2), (1,), (2,)))
    sol = solve(a)
    assert 0 in sol.even_region
    assert verify_strategy(a, {0: 1, 1: 1}, EVEN, {0})
    assert not verify_strategy(a, {0: 2, 1: 1, 2: 2}, EVEN, {0})
    with pytest.raises(ArenaError):
        verify_strategy(a, {0: 0}, EVEN, {0})


def test_verify_strategy_empty_region():
    a = ParityArena((EVEN,), (1,), ((0,),))
    assert verify_strategy(a, {}, EVEN, set())


def test_arena_json_round_trip():
    a = random_arena(sample_rng(32), 8)
    b = ParityArena.from_dict(a.to_dict())
    assert b == a


@pytest.mark.parametrize("doc", [
    {"owner": ["Even"], "priority": [0], "moves": [[1]]},
    {"owner": ["Nobody"], "priority": [0], "moves": [[]]},
    {"owner": ["Even"], "priority": [-1], "moves": [[]]},
    {"owner": ["Even"], "priority": [0]},
])
def test_arena_rejects_malformed(doc):
    with pytest.raises(ArenaError):
        ParityArena.from_dict(doc)
