"""Convex X-embeddings, the tailored embedding, and rotating sweeps.

All coordinates are exact rationals. Directions are ``(dx, dy)`` pairs; a
node's projection onto direction ``d`` is ``x*dx + y*dy`` and sweeps order
nodes by ascending projection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import SingularSystemError, solve
from .graph import Graph, InternalError, Partition, PreconditionError, WeightAssignment, connected_induced

Point = tuple[Fraction, Fraction]
Direction = tuple[Fraction, Fraction]

ANCHOR_POSITIONS: tuple[Point, Point, Point] = (
    (Fraction(0), Fraction(0)),
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
)


@dataclass(frozen=True)
class Embedding:
    """Exact planar placement.

    ``anchors`` is the ordered triple mapped to (0,0), (1,0), (0,1).
    ``segments`` lists node groups deliberately placed on one segment
    (contracted pseudo-paths with their endpoints); collinearity inside a
    group is expected.
    """

    points: dict[int, Point]
    anchors: tuple[int, int, int]
    coefficients: dict[tuple[int, int], Fraction]
    segments: tuple[tuple[int, ...], ...] = ()

    def nodes(self) -> list[int]:
        return sorted(self.points)


@dataclass(frozen=True)
class TailoredEmbedding:
    base: Embedding
    g: Fraction
    split: tuple[frozenset[int], frozenset[int]]
    triple: tuple[int, int, int]  # (u, v, w)
    attempts: int = 1
    ceiling: int = 0


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def convex_embedding(g: Graph, anchors: Sequence[int], coefficients: Mapping[tuple[int, int], Fraction] | None = None) -> Embedding:
    """Solve the harmonic system exactly with ``anchors`` pinned to the unit triangle."""
    if len(anchors) != 3 or len(set(anchors)) != 3:
        raise PreconditionError("exactly three distinct anchors are required")
    coeffs: dict[tuple[int, int], Fraction] = {}
    for a, b in g.edges():
        c = Fraction(1) if coefficients is None else Fraction(coefficients.get((a, b), coefficients.get((b, a), 0)))
        if c <= 0:
            raise PreconditionError(f"elasticity of edge {(a, b)} must be positive")
        coeffs[(a, b)] = c
    pinned = {v: ANCHOR_POSITIONS[i] for i, v in enumerate(anchors)}
    free = [v for v in range(g.n) if v not in pinned]
    idx = {v: i for i, v in enumerate(free)}
    mat = [[Fraction(0)] * len(free) for _ in free]
    rhs = [[Fraction(0), Fraction(0)] for _ in free]
    for v in free:
        row = idx[v]
        for y in g.adj[v]:
            c = coeffs[_key(v, y)]
            mat[row][row] += c
            if y in pinned:
                rhs[row][0] += c * pinned[y][0]
                rhs[row][1] += c * pinned[y][1]
            else:
                mat[row][idx[y]] -= c
    try:
        sol = solve(mat, rhs)
    except SingularSystemError as exc:
        raise InternalError("harmonic system is singular; is the graph connected?") from exc
    points = dict(pinned)
    for v in free:
        points[v] = (sol[idx[v]][0], sol[idx[v]][1])
    emb = Embedding(points, tuple(anchors), coeffs)
    if any(r != (0, 0) for r in harmonic_residuals(g, emb).values()):
        raise InternalError("harmonic residual is not zero")
    return emb


def harmonic_residuals(g: Graph, emb: Embedding) -> dict[int, Point]:
    """``c_v f(v) - sum c_uv f(u)`` for every non-anchor node."""
    out = {}
    for v in range(g.n):
        if v in emb.anchors:
            continue
        rx = ry = Fraction(0)
        for y in g.adj[v]:
            c = emb.coefficients[_key(v, y)]
            rx += c * (emb.points[v][0] - emb.points[y][0])
            ry += c * (emb.points[v][1] - emb.points[y][1])
        out[v] = (rx, ry)
    return out


def perturbed_coefficients(g: Graph, base: Mapping[tuple[int, int], Fraction], seed: int) -> dict[tuple[int, int], Fraction]:
    """Multiply each coefficient by ``1 + k/K`` with ``K = n^4`` and seeded ``k``."""
    rng = random.Random(seed)
    big = max(g.n, 2) ** 4
    return {e: Fraction(base[e]) * (1 + Fraction(rng.randrange(1, big), big)) for e in g.edges()}


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def canonical_direction(dx: Fraction, dy: Fraction) -> tuple[Fraction, Fraction]:
    """Scale to a unique representative of the same line through the origin."""
    if dy < 0 or (dy == 0 and dx < 0):
        dx, dy = -dx, -dy
    if dy != 0:
        return (dx / dy, Fraction(1))
    return (Fraction(1), Fraction(0))


def general_position_violations(emb: Embedding) -> list[str]:
    """Collinear triples or parallel disjoint pairs outside the declared segments."""
    groups = [set(s) for s in emb.segments]

    def same_group(nodes: Iterable[int]) -> bool:
        ns = set(nodes)
        return any(ns <= grp for grp in groups)

    pts = emb.points
    nodes = emb.nodes()
    seen: dict[tuple[Fraction, Fraction], list[tuple[int, int]]] = {}
    out = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            if pts[a] == pts[b]:
                out.append(f"coincident {a},{b}")
                continue
            d = canonical_direction(pts[b][0] - pts[a][0], pts[b][1] - pts[a][1])
            seen.setdefault(d, []).append((a, b))
    for d, pairs in seen.items():
        if len(pairs) < 2:
            continue
        for i, p1 in enumerate(pairs):
            for p2 in pairs[i + 1 :]:
                if same_group(p1 + p2):
                    continue
                kind = "collinear" if set(p1) & set(p2) else "parallel"
                out.append(f"{kind} {p1} {p2}")
    return out


def halfplane_violations(emb: Embedding, split: tuple[Iterable[int], Iterable[int]]) -> list[int]:
    """Nodes breaking the three half-plane conditions of the tailored embedding."""
    side1, side2 = split
    bad = []
    half = Fraction(1, 2)
    for v in side1:
        if emb.points[v][1] < half:
            bad.append(v)
    for v in side2:
        x, y = emb.points[v]
        if x < y or x + 2 * y > 1:
            bad.append(v)
    return sorted(bad)


def check_cut_split(g: Graph, split: tuple[Iterable[int], Iterable[int]], triple: tuple[int, int, int]) -> list[str]:
    side1, side2 = (set(split[0]), set(split[1]))
    u, v, w = triple
    errs = []
    if side1 & side2 or side1 | side2 != set(range(g.n)):
        errs.append("sides are not a partition")
    if not side1 or not side2 or not connected_induced(g, side1) or not connected_induced(g, side2):
        errs.append("a side is empty or disconnected")
    if not (g.has_edge(u, w) and g.has_edge(v, w)):
        errs.append("w is not adjacent to both u and v")
    if w not in side1 or u not in side2 or v not in side2:
        errs.append("w must lie on the first side and u, v on the second")
    return errs


def tailored_embedding(
    g: Graph,
    split: tuple[Iterable[int], Iterable[int]],
    triple: tuple[int, int, int],
    seed: int = 0,
    max_attempts: int = 32,
    size_bound: Fraction | None = None,
) -> TailoredEmbedding:
    """Embedding pinning u, v, w with strong springs inside each side.

    ``size_bound`` overrides the default ``|V|/2`` cap on the second side
    (the contracted pipeline checks a weighted bound instead and passes a
    large value here).
    """
    side1, side2 = frozenset(split[0]), frozenset(split[1])
    u, v, w = triple
    errs = check_cut_split(g, (side1, side2), triple)
    limit = Fraction(g.n, 2) if size_bound is None else size_bound
    if len(side2) > limit:
        errs.append("second side exceeds half of the nodes")
    if errs:
        raise PreconditionError("invalid cut split: " + "; ".join(errs))
    n, m = g.n, g.m
    ceiling = 4 * n ** (2 * n + 2) * m
    for attempt in range(max_attempts):
        gval = 4 * n * n * m
        while True:
            base = {
                (a, b): Fraction(gval) if ((a in side1) == (b in side1)) else Fraction(1)
                for a, b in g.edges()
            }
            coeffs = perturbed_coefficients(g, base, seed + attempt)
            emb = convex_embedding(g, (u, v, w), coeffs)
            if not halfplane_violations(emb, (side1, side2)):
                break
            if gval >= ceiling:
                raise InternalError("half-plane conditions fail even at the worst-case elasticity")
            gval = min(gval * gval * m, ceiling)
        if not general_position_violations(emb):
            return TailoredEmbedding(emb, Fraction(gval), (side1, side2), (u, v, w), attempt + 1, ceiling)
    raise InternalError("could not reach general position after re-perturbing")


def plain_embedding(g: Graph, anchors: Sequence[int], seed: int = 0, max_attempts: int = 32) -> Embedding:
    """Unit elasticities, perturbed until the points are in general position."""
    unit = {e: Fraction(1) for e in g.edges()}
    for attempt in range(max_attempts):
        emb = convex_embedding(g, anchors, perturbed_coefficients(g, unit, seed + attempt))
        if not general_position_violations(emb):
            return emb
    raise InternalError("could not reach general position after re-perturbing")


# ---------------------------------------------------------------------------
# directions and sweeps


def _angle_key(d: Direction) -> tuple[int, Fraction]:
    """Sort key for upper-half-plane directions by angle in [0, pi)."""
    dx, dy = d
    if dy == 0:
        return (0, Fraction(0))
    return (1, -dx / dy)


@dataclass(frozen=True)
class CriticalDirection:
    direction: Direction
    pairs: tuple[tuple[int, int], ...]


def critical_directions(emb: Embedding) -> list[CriticalDirection]:
    """Directions, in [0, pi), at which some pair of points projects equally."""
    pts = emb.points
    nodes = emb.nodes()
    buckets: dict[Direction, list[tuple[int, int]]] = {}
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            ex, ey = pts[b][0] - pts[a][0], pts[b][1] - pts[a][1]
            if ex == 0 and ey == 0:
                raise PreconditionError(f"nodes {a} and {b} coincide")
            # perpendicular to the segment, normalised into the upper half-plane
            dx, dy = -ey, ex
            if dy < 0 or (dy == 0 and dx < 0):
                dx, dy = -dx, -dy
            norm = (dx / dy, Fraction(1)) if dy != 0 else (Fraction(1), Fraction(0))
            buckets.setdefault(norm, []).append((a, b))
    out = [CriticalDirection(d, tuple(p)) for d, p in buckets.items()]
    out.sort(key=lambda c: _angle_key(c.direction))
    return out


def sweep_directions(crit: Sequence[CriticalDirection]) -> list[Direction]:
    """Half-turn of non-critical directions: one before the first critical direction,
    one in each gap, one after the last; the last is the negation of the first."""
    if len(crit) < 2:
        raise PreconditionError("need at least two critical directions")
    c = [cd.direction for cd in crit]
    first = (c[0][0] - c[-1][0], c[0][1] - c[-1][1])
    mids = [first]
    for a, b in zip(c, c[1:]):
        mids.append((a[0] + b[0], a[1] + b[1]))
    mids.append((-first[0], -first[1]))
    return mids


def projection_order(emb: Embedding, d: Direction) -> list[int]:
    dx, dy = d
    keyed = sorted((emb.points[v][0] * dx + emb.points[v][1] * dy, v) for v in emb.points)
    for (k1, a), (k2, b) in zip(keyed, keyed[1:]):
        if k1 == k2:
            raise PreconditionError(f"projection tie between {a} and {b}; direction is critical")
    return [v for _, v in keyed]


def sweep_split(emb: Embedding, d: Direction, k: int, p: WeightAssignment | None = None) -> Partition:
    """First ``k`` nodes by projection form part 0, the rest part 1."""
    n = len(emb.points)
    if not 1 <= k < n:
        raise PreconditionError("k must satisfy 1 <= k < n")
    order = projection_order(emb, d)
    parts = (order[:k], order[k:])
    if p is None:
        p = WeightAssignment({v: 0 for v in emb.points})
    return Partition.build(parts, p)


def transposition_count(before: Sequence[int], after: Sequence[int]) -> int:
    """Number of adjacent swaps (inversions) turning ``before`` into ``after``."""
    pos = {v: i for i, v in enumerate(after)}
    seq = [pos[v] for v in before]
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv


@dataclass
class SweepRecord:
    """Trajectory of a rotating sweep."""

    directions: list[Direction] = field(default_factory=list)
    orders: list[list[int]] = field(default_factory=list)
    values: list[Fraction] = field(default_factory=list)
    connected: list[bool] = field(default_factory=list)
    k: int = 0
    critical: list[CriticalDirection] = field(default_factory=list)


# ---------------------------------------------------------------------------
# SVG


_PALETTE = ("#d1495b", "#00798c", "#edae49")


def render_svg(g: Graph, emb: Embedding, partition: Partition | None = None, tailored: bool = False, size: int = 480) -> str:
    """Deterministic SVG drawing of the embedding; optional part colouring and guide lines."""
    pad = 40
    span = size - 2 * pad

    def to_canvas(pt: Point) -> tuple[str, str]:
        x = pad + float(pt[0]) * span
        y = size - pad - float(pt[1]) * span
        return (f"{x:.3f}", f"{y:.3f}")

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    a0, a1, a2 = (to_canvas(p) for p in ANCHOR_POSITIONS)
    lines.append(
        f'<polygon class="anchor-triangle" points="{a0[0]},{a0[1]} {a1[0]},{a1[1]} {a2[0]},{a2[1]}" fill="none" stroke="#bbbbbb" stroke-dasharray="4 3"/>'
    )
    if tailored:
        guides = {
            "guide-flat": ((Fraction(0), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))),
            "guide-steep": ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1, 2))),
            "guide-diagonal": ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))),
        }
        for name, (p0, p1) in guides.items():
            c0, c1 = to_canvas(p0), to_canvas(p1)
            lines.append(
                f'<line class="guide" id="{name}" x1="{c0[0]}" y1="{c0[1]}" x2="{c1[0]}" y2="{c1[1]}" stroke="#999999" stroke-width="1"/>'
            )
    for a, b in g.edges():
        c0, c1 = to_canvas(emb.points[a]), to_canvas(emb.points[b])
        lines.append(f'<line class="edge" x1="{c0[0]}" y1="{c0[1]}" x2="{c1[0]}" y2="{c1[1]}" stroke="#555555" stroke-width="1.2"/>')
    owner: dict[int, int] = {}
    if partition is not None:
        for i, part in enumerate(partition.parts):
            for v in part:
                owner[v] = i
    for v in emb.nodes():
        c = to_canvas(emb.points[v])
        fill = _PALETTE[owner[v] % len(_PALETTE)] if v in owner else "#333333"
        lines.append(f'<circle class="node" id="n{v}" cx="{c[0]}" cy="{c[1]}" r="6" fill="{fill}" stroke="#000000"/>')
        lines.append(f'<text x="{c[0]}" y="{float(c[1]) - 9:.3f}" font-size="10" text-anchor="middle">{v}</text>')
    if partition is not None:
        for i in range(len(partition.parts)):
            y = 16 + 16 * i
            lines.append(f'<rect class="legend" x="{size - 110}" y="{y - 10}" width="12" height="12" fill="{_PALETTE[i % len(_PALETTE)]}"/>')
            lines.append(f'<text x="{size - 92}" y="{y}" font-size="11">part {i + 1} ({partition.sizes[i]} nodes)</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
