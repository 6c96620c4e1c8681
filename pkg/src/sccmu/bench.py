"""Wall-clock scaling of model checking and of the two parity-game kernels."""
from __future__ import annotations

import math
import platform
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from . import _zielonka_py, games
from .automata import acceptance_arena, accepts, normalize_to_covers
from .graph import F, ColoredGraph, make_gk

FAMILIES = ("gk", "chain")


class BenchError(ValueError):
    pass


@dataclass
class BenchReport:
    label: str
    sizes: list
    vertices: list
    samples: list
    medians: list
    slope: float
    note: str

    def to_dict(self) -> dict:
        return asdict(self)


def machine_note() -> str:
    return f"{platform.python_implementation()} {platform.python_version()} on {platform.machine()}, kernel={games.BACKEND}"


MAX_GK = 16  # G_16 already has over a million vertices


def chain_graph(n: int) -> ColoredGraph:
    """Path ``0 -> ... -> n-1``; every fourth vertex and the last are reflexive F vertices."""
    f = [v for v in range(n) if v % 4 == 0 or v == n - 1]
    edges = [(v, v + 1) for v in range(n - 1)] + [(v, v) for v in f]
    return ColoredGraph.build(range(n), edges, (F,), [(F, v) for v in f], 0)


def family_graph(family: str, size: int) -> ColoredGraph:
    if family == "gk":
        if not 1 <= size <= MAX_GK:
            raise BenchError(f"gk sizes are chain indices k in 1..{MAX_GK}, got {size}")
        return make_gk(size)
    if family == "chain":
        return chain_graph(size)
    raise BenchError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    fit = statistics.linear_regression([math.log(x) for x in xs], [math.log(max(y, 1e-9)) for y in ys])
    return fit.slope


def _measure(label: str, sizes: Sequence[int], inputs: Sequence, fn: Callable, weights: Sequence[int],
             repeats: int) -> BenchReport:
    if len(sizes) < 5:
        raise BenchError("at least 5 sizes are needed for a slope")
    if list(sizes) != sorted(set(sizes)):
        raise BenchError("sizes must be strictly increasing")
    samples, medians = [], []
    for x in inputs:
        fn(x)  # warm-up, discarded
        runs = []
        for _ in range(repeats):
            t = time.perf_counter()
            fn(x)
            runs.append(time.perf_counter() - t)
        samples.append(runs)
        medians.append(statistics.median(runs))
    return BenchReport(label, list(sizes), list(weights), samples, medians,
                       loglog_slope(weights, medians), machine_note())


def bench_modelcheck(automaton, family: str, sizes: Sequence[int], repeats: int = 5) -> BenchReport:
    """Time ``accepts(automaton, g)`` on growing members of a graph family.

    The slope is fitted against the vertex count of each instance.
    """
    graphs = [family_graph(family, s) for s in sizes]
    return _measure(f"accepts on {family}", sizes, graphs, lambda g: accepts(automaton, g),
                    [len(g) for g in graphs], repeats)


def bench_reachability(sizes: Sequence[int], repeats: int = 5) -> BenchReport:
    """Linear-time baseline: BFS over chain graphs."""
    graphs = [chain_graph(s) for s in sizes]
    return _measure("reachability on chain", sizes, graphs, lambda g: g.reachable(g.point),
                    [len(g) for g in graphs], repeats)


def bench_kernels(automaton, family: str, sizes: Sequence[int], repeats: int = 5) -> dict:
    """Solve the same acceptance arenas with the compiled and the pure-Python kernel."""
    a = normalize_to_covers(automaton)
    arenas = [acceptance_arena(a, family_graph(family, s))[0] for s in sizes]
    weights = [len(x) for x in arenas]
    kernels = {"python": _zielonka_py}
    try:
        from . import _zielonka
        kernels["cython"] = _zielonka
    except ImportError:
        pass
    out = {}
    for name, k in kernels.items():
        out[name] = _measure(f"zielonka[{name}] on {family}", sizes, arenas,
                             lambda ar, k=k: games.solve(ar, kernel=k), weights, repeats).to_dict()
    if "cython" in out:
        out["speedup"] = [p / c if c else float("inf")
                          for p, c in zip(out["python"]["medians"], out["cython"]["medians"])]
    return out
