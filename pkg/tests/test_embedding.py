from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridcleave.dbcp import cut_triple
from gridcleave.embedding import (
    ANCHOR_POSITIONS,
    Embedding,
    convex_embedding,
    critical_directions,
    general_position_violations,
    harmonic_residuals,
    halfplane_violations,
    plain_embedding,
    projection_order,
    render_svg,
    sweep_directions,
    sweep_split,
    tailored_embedding,
    transposition_count,
)
from gridcleave.graph import (
    Partition,
    PreconditionError,
    WeightAssignment,
    complete_graph,
    octahedron_graph,
    prism_graph,
    wheel_graph,
)
from gridcleave.oracle import gen_random

F = Fraction


def test_k4_centroid():
    emb = convex_embedding(complete_graph(4), (0, 1, 2))
    assert emb.points[3] == (F(1, 3), F(1, 3))


def test_k4_weighted_spring():
    coeffs = {(0, 3): F(2), (1, 3): F(1), (2, 3): F(1), (0, 1): F(1), (0, 2): F(1), (1, 2): F(1)}
    emb = convex_embedding(complete_graph(4), (0, 1, 2), coeffs)
    assert emb.points[3] == (F(1, 4), F(1, 4))


def test_octahedron_interior_and_residuals():
    g = octahedron_graph()
    tri = next((a, b, c) for a, b in g.edges() for c in g.adj[a] if c > b and g.has_edge(b, c))
    emb = convex_embedding(g, tri)
    assert all(r == (0, 0) for r in harmonic_residuals(g, emb).values())
    for v, (x, y) in emb.points.items():
        if v not in tri:
            assert x > 0 and y > 0 and x + y < 1
    assert [emb.points[a] for a in tri] == list(ANCHOR_POSITIONS)


def test_convex_embedding_rejects_bad_anchors():
    with pytest.raises(PreconditionError):
        convex_embedding(complete_graph(4), (0, 0, 1))


@pytest.mark.parametrize("g", [complete_graph(4), prism_graph(3), prism_graph(6), wheel_graph(7), octahedron_graph()], ids=repr)
def test_tailored_embedding_predicates(g):
    ct = cut_triple(g)
    tail = tailored_embedding(g, ct.split, ct.triple)
    emb = tail.base
    assert halfplane_violations(emb, tail.split) == []
    assert all(r == (0, 0) for r in harmonic_residuals(g, emb).values())
    u, v, w = ct.triple
    assert (emb.points[u], emb.points[v], emb.points[w]) == ANCHOR_POSITIONS
    assert tail.g < tail.ceiling
    assert general_position_violations(emb) == []


def test_tailored_embedding_rejects_bad_split():
    g = complete_graph(4)
    with pytest.raises(PreconditionError):
        tailored_embedding(g, ({0}, {1, 2, 3}), (1, 2, 0))
    with pytest.raises(PreconditionError):
        tailored_embedding(g, ({0, 1}, {2, 3}), (0, 2, 3))


@given(st.integers(0, 10_000), st.sampled_from([8, 12, 16]))
@settings(max_examples=20, deadline=None)
def test_tailored_embedding_random(seed, n):
    g, _ = gen_random(n, 3, seed)
    ct = cut_triple(g)
    tail = tailored_embedding(g, ct.split, ct.triple, seed=seed)
    assert halfplane_violations(tail.base, tail.split) == []
    assert all(r == (0, 0) for r in harmonic_residuals(g, tail.base).values())
    assert tail.g < tail.ceiling


def points(*pts) -> Embedding:
    return Embedding({i: (F(x), F(y)) for i, (x, y) in enumerate(pts)}, (0, 1, 2), {})


def test_critical_direction_counts():
    assert len(critical_directions(points((0, 0), (1, 0), (0, 1)))) == 3
    four = critical_directions(points((0, 0), (1, 0), (0, 1), (F(1, 3), F(1, 4))))
    assert len(four) == 6
    merged = critical_directions(points((0, 0), (1, 0), (2, 0), (0, 1)))
    horizontal = [cd for cd in merged if len(cd.pairs) > 1]
    assert len(merged) == 4 and len(horizontal) == 1 and len(horizontal[0].pairs) == 3


def test_critical_directions_reject_coincident():
    with pytest.raises(PreconditionError):
        critical_directions(points((0, 0), (0, 0), (1, 1)))


def test_sweep_split_manual_sort():
    emb = convex_embedding(complete_graph(4), (0, 1, 2))
    d = (F(1), F(1, 100))
    keyed = sorted(emb.points, key=lambda v: emb.points[v][0] + emb.points[v][1] / 100)
    part = sweep_split(emb, d, 2)
    assert part.parts[0] == frozenset(keyed[:2])
    with pytest.raises(PreconditionError):
        sweep_split(emb, (F(1), F(0)), 2)
    with pytest.raises(PreconditionError):
        sweep_split(emb, d, 0)


def test_reversed_direction_swaps_halves():
    emb = plain_embedding(octahedron_graph(), (0, 1, 2))
    dirs = sweep_directions(critical_directions(emb))
    d = dirs[3]
    a = sweep_split(emb, d, 3)
    b = sweep_split(emb, (-d[0], -d[1]), 3)
    assert a.parts == b.parts[::-1]


def test_adjacent_gaps_move_one_node():
    emb = convex_embedding(complete_graph(4), (0, 1, 2))
    crit = critical_directions(emb)
    assert len(crit) == 6
    dirs = sweep_directions(crit)
    orders = [projection_order(emb, d) for d in dirs]
    for d1, d2, o1, o2 in zip(dirs, dirs[1:], orders, orders[1:]):
        assert transposition_count(o1, o2) == 1
        assert len(sweep_split(emb, d1, 2).parts[0] ^ sweep_split(emb, d2, 2).parts[0]) in (0, 2)
    assert orders[-1] == orders[0][::-1]


def test_transposition_count():
    assert transposition_count([1, 2, 3], [1, 2, 3]) == 0
    assert transposition_count([1, 2, 3], [2, 1, 3]) == 1
    assert transposition_count([1, 2, 3], [3, 2, 1]) == 3


def test_render_svg():
    g = complete_graph(4)
    emb = convex_embedding(g, (0, 1, 2))
    plain = render_svg(g, emb)
    assert plain.count('class="node"') == 4 and plain.count('class="edge"') == 6
    assert "legend" not in plain
    part = Partition.build(({0, 1}, {2, 3}), WeightAssignment([1, -1, 1, -1]))
    coloured = render_svg(g, emb, part, tailored=True)
    assert coloured == render_svg(g, emb, part, tailored=True)
    fills = {seg.split('fill="')[1].split('"')[0] for seg in coloured.splitlines() if 'class="node"' in seg}
    assert len(fills) == 2 and "legend" in coloured and 'id="guide-flat"' in coloured
