from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcleave.graph import (
    Graph,
    GraphError,
    Partition,
    WeightAssignment,
    complete_graph,
    connected_induced,
    cycle_graph,
    is_k_connected,
    validate_instance,
)
from gridcleave.oracle import (
    CapExceeded,
    best_frontier,
    enumerate_connected_partitions,
    frontier_admits,
    gen_fig1,
    gen_random,
    skew_bound_holds,
    imbalance_bound_holds,
    resolve_cap,
    verify_partition,
)

F = Fraction


def brute_count(g: Graph) -> int:
    """Unordered connected 2-partitions counted over all subsets holding node 0."""
    rest = list(range(1, g.n))
    count = 0
    for r in range(len(rest)):
        for extra in itertools.combinations(rest, r):
            a = {0, *extra}
            b = set(range(g.n)) - a
            if b and connected_induced(g, a) and connected_induced(g, b):
                count += 1
    return count


def test_enumeration_examples():
    assert len(list(enumerate_connected_partitions(cycle_graph(3)))) == 3
    # four singleton splits and two splits into adjacent pairs
    assert len(list(enumerate_connected_partitions(cycle_graph(4)))) == 6
    assert len(list(enumerate_connected_partitions(complete_graph(4)))) == 7


@st.composite
def connected_graphs(draw, max_n: int = 8):
    n = draw(st.integers(2, max_n))
    tree = [(i, draw(st.integers(0, i - 1))) for i in range(1, n)]
    pairs = [e for e in itertools.combinations(range(n), 2) if (e[1], e[0]) not in tree and e not in tree]
    extra = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, [(b, a) for a, b in tree] + extra)


@given(connected_graphs())
@settings(max_examples=120, deadline=None)
def test_enumeration_matches_brute(g):
    parts = list(enumerate_connected_partitions(g))
    assert len(parts) == brute_count(g)
    assert len({frozenset(pt.parts) for pt in parts}) == len(parts)


@given(connected_graphs(), st.data())
@settings(max_examples=80, deadline=None)
def test_frontier_is_antichain(g, data):
    vals = data.draw(st.lists(st.integers(-3, 3), min_size=g.n, max_size=g.n))
    p = WeightAssignment(vals)
    front = best_frontier(g, p)
    for a, b in itertools.combinations(front, 2):
        assert not (a.imbalance <= b.imbalance and a.ratio <= b.ratio)
        assert not (b.imbalance <= a.imbalance and b.ratio <= a.ratio)
    for pt in front:
        assert verify_partition(g, p, pt.witness, pt.imbalance, pt.ratio)


def test_k4_frontier():
    front = best_frontier(complete_graph(4), WeightAssignment([1, 1, -1, -1]))
    assert (front[0].imbalance, front[0].ratio) == (0, 1)


def test_cap(monkeypatch):
    g = cycle_graph(18)
    with pytest.raises(CapExceeded):
        list(enumerate_connected_partitions(g))
    assert len(list(enumerate_connected_partitions(g, cap=18))) == 18 * 17 // 2
    monkeypatch.setenv("GRIDCLEAVE_CAP", "20")
    assert resolve_cap() == 20


def test_verify_partition_examples():
    g = complete_graph(4)
    p = WeightAssignment([1, 1, -1, -1])
    assert verify_partition(g, p, Partition.build(({0, 2}, {1, 3}), p), 0, 1)
    c = cycle_graph(4)
    q = WeightAssignment([1, -1, 1, -1])
    assert not verify_partition(c, q, Partition.build(({0, 2}, {1, 3}), q), 10, 10)
    assert verify_partition(c, q, Partition.build(({0}, {1, 2, 3}), q), 1, 3)
    assert not verify_partition(c, q, Partition.build(({0}, {1, 2, 3}), q), 1, F(29, 10))
    with pytest.raises(GraphError):
        verify_partition(c, q, Partition.build(({0}, {1, 2}), q), 1, 3)


def test_fig1_sizes():
    g, p = gen_fig1(1, 0)
    assert p.total == 0 and p.is_pm1()
    assert g.n == 8 and is_k_connected(g, 2)
    g, p = gen_fig1(2, 0)
    assert g.n == 12 and p.total == 0
    for s, t in [(1, 1), (2, 1), (1, 2)]:
        g, p = gen_fig1(s, t)
        assert g.n == 2 + (2 * s + 1) * (4 * t + 2) and p.total == 0
        assert sorted(g.degree(x) for x in range(g.n))[-2:] == [2 * s + 1] * 2


def test_fig1_lower_bounds_small():
    assert skew_bound_holds(*gen_fig1(1, 0))
    assert imbalance_bound_holds(*gen_fig1(1, 1), cap=20)


def test_gen_random_contract():
    g, p = gen_random(8, 3, 1)
    assert is_k_connected(g, 3) and p.total == 0
    g, p = gen_random(12, 2, 7)
    assert is_k_connected(g, 2) and p.total == 0
    validate_instance(g, p, "pm1")
    g2, p2 = gen_random(12, 2, 7)
    assert g2 == g and list(p2.values()) == list(p.values())


@given(st.sampled_from([4, 6, 8, 10, 14, 20]), st.sampled_from([2, 3]), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_gen_random_levels(n, k, seed):
    g, p = gen_random(n, k, seed)
    assert g.n == n and is_k_connected(g, k)
    validate_instance(g, p, "pm1")


def test_frontier_admits():
    front = best_frontier(cycle_graph(4), WeightAssignment([1, -1, 1, -1]))
    assert frontier_admits(front, F(0), F(1))
    assert not frontier_admits(front, F(0), F(1, 2))
