"""Seeded instance families shared by the test modules."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

from gridcleave.graph import (
    Graph,
    WeightAssignment,
    complete_graph,
    cycle_graph,
    icosahedron_graph,
    octahedron_graph,
    prism_graph,
    wheel_graph,
)
from gridcleave.oracle import balanced_pm1, gen_random


def random_sp_graph(n: int, rng: random.Random) -> Graph:
    """2-connected series-parallel graph: a cycle grown by parallel paths on existing edges."""
    g = cycle_graph(rng.randint(3, max(3, n // 2)))
    while g.n < n:
        a, b = rng.choice(g.edges())
        size = min(n - g.n, rng.randint(1, 3))
        chain = [a, *range(g.n, g.n + size), b]
        g = Graph(g.n + size, list(g.edges()) + list(zip(chain, chain[1:])))
    return g


def random_int_weights(n: int, rng: random.Random, spread: int = 5, zero_sum: bool = False) -> WeightAssignment:
    vals = [rng.randint(-spread, spread) for _ in range(n)]
    if zero_sum:
        vals[-1] -= sum(vals)
    return WeightAssignment(vals)


BCPI3_GRAPHS = (
    complete_graph(4),
    octahedron_graph(),
    wheel_graph(7),
    prism_graph(4),
    prism_graph(5),
    icosahedron_graph(),
    wheel_graph(9),
    prism_graph(6),
)


@functools.lru_cache(maxsize=None)
def bcpi3_corpus(count: int = 1500, seed: int = 1) -> tuple:
    """(graph, weights, (u, v, w)) with same-sign triples, +1/-1 and integer weights mixed."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = rng.choice(BCPI3_GRAPHS)
        if rng.random() < 0.5:
            if g.n % 2:
                continue
            p = balanced_pm1(g.n, rng)
        else:
            p = random_int_weights(g.n, rng, zero_sum=True)
        pos = [v for v in range(g.n) if p[v] > 0]
        neg = [v for v in range(g.n) if p[v] < 0]
        pools = [c for c in (pos, neg) if len(c) >= 3]
        if not pools:
            continue
        u, v, w = rng.sample(rng.choice(pools), 3)
        out.append((g, p, (u, v, w)))
    return tuple(out)


def two_connected(n: int, seed: int):
    return gen_random(n, 2, seed)


def three_connected(n: int, seed: int):
    return gen_random(n, 3, seed)


def fr(x) -> Fraction:
    return Fraction(x)
