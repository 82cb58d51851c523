"""Brute-force ground truth and instance generators.

Enumeration is exponential and guarded by a node cap (default 16, override
with the ``GRIDCLEAVE_CAP`` environment variable or an explicit argument).
"""

from __future__ import annotations

import functools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graph import (
    Graph,
    GraphError,
    Partition,
    PreconditionError,
    WeightAssignment,
    complete_graph,
    connected_induced,
    is_k_connected,
    prism_graph,
    subdivide,
    wheel_graph,
)

DEFAULT_CAP = 16


class CapExceeded(RuntimeError):
    """The graph is too large for exhaustive enumeration."""


def resolve_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("GRIDCLEAVE_CAP")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise PreconditionError(f"GRIDCLEAVE_CAP must be an integer, got {env!r}") from exc
    return DEFAULT_CAP


def connected_sets_with_root(g: Graph, root: int = 0) -> Iterator[frozenset[int]]:
    """Every connected node set containing ``root``, each exactly once."""

    def grow(current: frozenset[int], frontier: list[int], banned: set[int]) -> Iterator[frozenset[int]]:
        yield current
        frontier = list(frontier)
        banned = set(banned)
        while frontier:
            x = frontier.pop()
            banned.add(x)
            extra = [y for y in g.adj[x] if y not in current and y not in banned and y not in frontier]
            yield from grow(current | {x}, frontier + extra, banned)

    start = frozenset([root])
    yield from grow(start, sorted(g.adj[root], reverse=True), {root})


def enumerate_connected_partitions(g: Graph, p: WeightAssignment | None = None, cap: int | None = None) -> Iterator[Partition]:
    """All connected 2-partitions; the part holding node 0 comes first."""
    limit = resolve_cap(cap)
    if g.n > limit:
        raise CapExceeded(f"n = {g.n} exceeds the enumeration cap {limit}")
    if g.n < 2:
        return
    weights = p if p is not None else WeightAssignment([0] * g.n)
    everything = frozenset(range(g.n))
    for s in connected_sets_with_root(g, 0):
        if len(s) == g.n:
            continue
        rest = everything - s
        if connected_induced(g, rest):
            yield Partition.build((s, rest), weights)


@dataclass(frozen=True)
class FrontierPoint:
    imbalance: Fraction
    ratio: Fraction
    witness: Partition


def partition_scores(part: Partition, p: WeightAssignment, centered: bool) -> tuple[Fraction, Fraction]:
    shift = p.total / 2 if centered else Fraction(0)
    return max(abs(s - shift) for s in part.sums), part.size_ratio()


def best_frontier(g: Graph, p: WeightAssignment, centered: bool = False, cap: int | None = None) -> list[FrontierPoint]:
    """Pareto-minimal (imbalance, ratio) points over all connected 2-partitions, by imbalance."""
    best: dict[Fraction, tuple[Fraction, Partition]] = {}
    for part in enumerate_connected_partitions(g, p, cap):
        imb, ratio = partition_scores(part, p, centered)
        cur = best.get(imb)
        if cur is None or ratio < cur[0]:
            best[imb] = (ratio, part)
    out = []
    lowest = None
    for imb in sorted(best):
        ratio, part = best[imb]
        if lowest is None or ratio < lowest:
            out.append(FrontierPoint(imb, ratio, part))
            lowest = ratio
    return out


def frontier_admits(frontier: Sequence[FrontierPoint], c_p: Fraction, c_s: Fraction) -> bool:
    """True iff some connected partition meets both bounds (inclusive)."""
    return any(pt.imbalance <= c_p and pt.ratio <= c_s for pt in frontier)


def verify_partition(
    g: Graph,
    p: WeightAssignment,
    part: Partition,
    c_p: Fraction,
    c_s: Fraction,
    centered: bool = False,
) -> bool:
    """Both sides connected, imbalance at most ``c_p``, size ratio at most ``c_s``."""
    if len(part.parts) != 2:
        raise GraphError("verify_partition expects two parts")
    a, b = (set(x) for x in part.parts)
    if a & b or a | b != set(range(g.n)):
        raise GraphError("parts do not partition the node set")
    if not a or not b:
        return False
    fresh = Partition.build((a, b), p)
    if not connected_induced(g, a) or not connected_induced(g, b):
        return False
    imb, ratio = partition_scores(fresh, p, centered)
    return imb <= Fraction(c_p) and ratio <= Fraction(c_s)


# ---------------------------------------------------------------------------
# generators


def theta_with_paths(path_sizes: Sequence[int]) -> tuple[Graph, list[list[int]]]:
    """Terminals 0 and 1 joined by paths with the given interior node counts.

    Returns the graph and each path's interior listed from terminal 0.
    """
    edges = []
    paths = []
    nxt = 2
    for size in path_sizes:
        inner = list(range(nxt, nxt + size))
        nxt += size
        chain = [0, *inner, 1]
        edges.extend(zip(chain, chain[1:]))
        paths.append(inner)
    return Graph(nxt, edges), paths


# Candidate sign schemas for the series-parallel counterexample family. Each
# maps t to (terminal signs, pattern along a path from terminal 0).
def _schema_blocks(t: int) -> tuple[tuple[int, int], list[int]]:
    return (1, -1), [1] * (2 * t + 1) + [-1] * (2 * t + 1)


def _schema_blocks_flipped(t: int) -> tuple[tuple[int, int], list[int]]:
    return (1, -1), [-1] * (2 * t + 1) + [1] * (2 * t + 1)


def _schema_alternating(t: int) -> tuple[tuple[int, int], list[int]]:
    return (1, -1), [1 if i % 2 == 0 else -1 for i in range(4 * t + 2)]


FIG1_SCHEMAS = {
    "blocks": _schema_blocks,
    "blocks-flipped": _schema_blocks_flipped,
    "alternating": _schema_alternating,
}


def _fig1_instance(schema: str, s: int, t: int) -> tuple[Graph, WeightAssignment]:
    g, paths = theta_with_paths([4 * t + 2] * (2 * s + 1))
    (w0, w1), pattern = FIG1_SCHEMAS[schema](t)
    w = [0] * g.n
    w[0], w[1] = w0, w1
    for inner in paths:
        for x, sign in zip(inner, pattern):
            w[x] = sign
    return g, WeightAssignment(w)


def skew_bound_holds(g: Graph, p: WeightAssignment, cap: int | None = None) -> bool:
    """No connected partition with imbalance 0 and ratio below ``n/2 - 1``."""
    limit = Fraction(g.n, 2) - 1
    return not any(pt.imbalance == 0 and pt.ratio < limit for pt in best_frontier(g, p, cap=cap))


def imbalance_bound_holds(g: Graph, p: WeightAssignment, cap: int | None = None) -> bool:
    """No connected partition with ratio 1 and imbalance below ``n/6``."""
    limit = Fraction(g.n, 6)
    return not any(pt.ratio == 1 and pt.imbalance < limit for pt in best_frontier(g, p, cap=cap))


@functools.lru_cache(maxsize=None)
def fig1_schema() -> str:
    """First sign schema confirmed by enumeration at the smallest parameters of both lower bounds."""
    for name in FIG1_SCHEMAS:
        g0, p0 = _fig1_instance(name, 1, 0)
        g1, p1 = _fig1_instance(name, 1, 1)
        if skew_bound_holds(g0, p0) and imbalance_bound_holds(g1, p1, cap=max(g1.n, DEFAULT_CAP)):
            return name
    raise RuntimeError("no sign schema reproduces both lower bounds")


def gen_fig1(s: int, t: int) -> tuple[Graph, WeightAssignment]:
    """Two terminals joined by ``2s+1`` paths of ``4t+2`` interior nodes each, with +1/-1 weights."""
    if s < 1 or t < 0:
        raise PreconditionError("need s >= 1 and t >= 0")
    return _fig1_instance(fig1_schema(), s, t)


def balanced_pm1(n: int, rng: random.Random) -> WeightAssignment:
    if n % 2:
        raise PreconditionError("balanced +1/-1 weights need an even node count")
    w = [1] * (n // 2) + [-1] * (n // 2)
    rng.shuffle(w)
    return WeightAssignment(w)


def _attach(g: Graph, rng: random.Random, count: int, independent: bool) -> Graph:
    """Add ``count`` nodes, each joined to three existing nodes (keeps 3-connectivity)."""
    for _ in range(count):
        nodes = list(range(g.n))
        rng.shuffle(nodes)
        picked: list[int] = []
        for x in nodes:
            if independent and any(g.has_edge(x, y) for y in picked):
                continue
            picked.append(x)
            if len(picked) == 3:
                break
        if len(picked) < 3:
            picked = nodes[:3]
        new = g.n
        g = Graph(g.n + 1, list(g.edges()) + [(new, y) for y in picked])
    return g


def _random3(n: int, rng: random.Random) -> Graph:
    kinds = ["wheel", "grow", "cube-grow"]
    if n % 2 == 0 and n >= 6:
        kinds.append("prism")
    kind = rng.choice(kinds)
    if kind == "wheel":
        g = wheel_graph(n - 1)
    elif kind == "prism":
        g = prism_graph(n // 2)
    elif kind == "cube-grow" and n >= 8:
        g = _attach(prism_graph(4), rng, n - 8, independent=True)
    else:
        g = _attach(complete_graph(4), rng, n - 4, independent=False)
    extra = rng.randint(0, max(0, n // 4))
    edges = set(g.edges())
    for _ in range(extra):
        a, b = sorted(rng.sample(range(n), 2))
        edges.add((a, b))
    return Graph(n, sorted(edges))


def _random2(n: int, rng: random.Random) -> Graph:
    kind = rng.choice(["ears", "core", "core"]) if n >= 10 else "ears"
    if kind == "core":
        budget = rng.randint(1, max(1, n // 4 - 1))
        core_n = n - budget
        core = _random3(core_n, rng) if core_n >= 4 else complete_graph(4)
        g = core
        left = n - g.n
        while left > 0:
            size = min(left, rng.randint(1, 2))
            g = subdivide(g, rng.choice(g.edges()), size)
            left -= size
        return g
    start = rng.randint(3, max(3, n // 2))
    g = Graph(start, [(i, (i + 1) % start) for i in range(start)])
    while g.n < n:
        size = min(n - g.n, rng.randint(1, max(1, n // 3)))
        a, b = rng.sample(range(g.n), 2)
        chain = [a, *range(g.n, g.n + size), b]
        g = Graph(g.n + size, list(g.edges()) + list(zip(chain, chain[1:])))
    edges = set(g.edges())
    for _ in range(rng.randint(0, 2)):
        a, b = sorted(rng.sample(range(n), 2))
        edges.add((a, b))
    return Graph(n, sorted(edges))


def gen_random(n: int, connectivity: int, seed: int) -> tuple[Graph, WeightAssignment]:
    """Seeded 2- or 3-connected graph on ``n`` nodes with balanced +1/-1 weights."""
    if connectivity not in (2, 3):
        raise PreconditionError("connectivity must be 2 or 3")
    if n < 4 or n % 2:
        raise PreconditionError("n must be even and at least 4")
    rng = random.Random(f"{n}:{connectivity}:{seed}")
    for _ in range(200):
        g = _random3(n, rng) if connectivity == 3 else _random2(n, rng)
        if g.n == n and is_k_connected(g, connectivity):
            return g, balanced_pm1(n, rng)
    raise PreconditionError(f"could not generate a {connectivity}-connected graph on {n} nodes")
