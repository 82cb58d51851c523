"""Doubly balanced connected 2-partitions.

Solvers balance supply/demand and part sizes together:

* ``dbcp_3`` / ``dbcp_3_general`` for 3-connected graphs (rotating sweep over
  a convex embedding, tailored when no triangle is used);
* ``dbcp_sep_case`` for a separation pair with small components;
* ``dbcp_2`` / ``dbcp_2_general`` for 2-connected graphs (contraction to a
  3-connected quotient or the separation-pair walk);
* ``two_color_partition`` for red/blue node sets.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .embedding import (
    Embedding,
    SweepRecord,
    TailoredEmbedding,
    critical_directions,
    general_position_violations,
    halfplane_violations,
    plain_embedding,
    projection_order,
    sweep_directions,
    tailored_embedding,
)
from .graph import (
    Graph,
    InternalError,
    Partition,
    PreconditionError,
    SeparationPair,
    WeightAssignment,
    connected_induced,
    is_k_connected,
    separation_components,
)
from .structure import (
    Case1,
    ContractedGraph,
    decompose_q,
    nonseparating_induced_cycle,
    pseudo_path,
    series_parallel_separation_pair,
    st_numbering,
)


@dataclass
class DbcpResult:
    """A connected 2-partition with the imbalance and size ratio it achieves."""

    partition: Partition
    achieved: tuple[Fraction, Fraction]
    trace: str
    centered: bool = False
    record: SweepRecord | None = None
    embedding: Embedding | None = None
    tailored: TailoredEmbedding | None = None
    details: dict = field(default_factory=dict)


def imbalance(part: Partition, p: WeightAssignment, centered: bool) -> Fraction:
    if centered:
        half = p.total / 2
        return max(abs(s - half) for s in part.sums)
    return max(abs(s) for s in part.sums)


def _finish(
    g: Graph,
    p: WeightAssignment,
    v1: Iterable[int],
    trace: str,
    c_p: Fraction,
    c_s: Fraction,
    centered: bool = False,
    **extra,
) -> DbcpResult:
    v1 = set(v1)
    part = Partition.build((v1, set(range(g.n)) - v1), p)
    if not part.parts[0] or not part.parts[1]:
        raise InternalError(f"{trace}: empty side")
    if not all(connected_induced(g, x) for x in part.parts):
        raise InternalError(f"{trace}: a side is disconnected")
    achieved = (imbalance(part, p, centered), part.size_ratio())
    if achieved[0] > c_p or achieved[1] > c_s:
        raise InternalError(f"{trace}: achieved {achieved} outside bound ({c_p}, {c_s})")
    return DbcpResult(part, achieved, trace, centered, **extra)


def _check_pm1(g: Graph, p: WeightAssignment) -> None:
    p.check_covers(g)
    if not p.is_pm1():
        raise PreconditionError("weights must all be +1 or -1")
    if p.total != 0:
        raise PreconditionError(f"p(V) must be 0, got {p.total}")


# ---------------------------------------------------------------------------
# cut triples


@dataclass(frozen=True)
class CutTriple:
    """``triple = (u, v, w)`` with w adjacent to u and v; ``split = (V1', V2')``."""

    triple: tuple[int, int, int]
    split: tuple[frozenset[int], frozenset[int]]
    case: str


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    """Lexicographically first triangle."""
    for a, b in g.edges():
        common = sorted(set(g.adj[a]) & set(g.adj[b]))
        common = [c for c in common if c > b]
        if common:
            return (a, b, common[0])
    return None


def cut_clause_violations(g: Graph, ct: CutTriple, weight: Callable[[Iterable[int]], int] | None = None, limit: Fraction | None = None) -> list[str]:
    """Check the five partition clauses (and a weighted size bound if given)."""
    side1, side2 = ct.split
    u, v, w = ct.triple
    errs = []
    if side1 & side2 or side1 | side2 != frozenset(range(g.n)):
        errs.append("not a partition")
    if not side1 or not side2 or not connected_induced(g, side1) or not connected_induced(g, side2):
        errs.append("side empty or disconnected")
    if not (g.has_edge(u, w) and g.has_edge(v, w)):
        errs.append("w not adjacent to u and v")
    if w not in side1 or u not in side2 or v not in side2:
        errs.append("triple on wrong sides")
    size = len(side2) if weight is None else weight(side2)
    bound = Fraction(g.n, 2) if limit is None else limit
    if size > bound:
        errs.append(f"second side size {size} exceeds {bound}")
    return errs


def _cycles(g: Graph) -> Iterator[tuple[int, ...]]:
    """Distinct nonseparating induced cycles, in a deterministic order."""
    seen = set()
    for a, b in g.edges():
        for z in range(g.n):
            if z in (a, b):
                continue
            c = nonseparating_induced_cycle(g, (a, b), z)
            key = frozenset(c)
            if key in seen:
                continue
            seen.add(key)
            yield c


def _arc_options(g: Graph, cycle: Sequence[int], size: Callable[[Sequence[int]], int]) -> list[tuple[int, int, tuple[int, int, int], frozenset[int]]]:
    """For outside nodes w with two cycle neighbours, the arcs between them."""
    cyc = list(cycle)
    pos = {x: i for i, x in enumerate(cyc)}
    inside = set(cyc)
    out = []
    for w in range(g.n):
        if w in inside:
            continue
        hits = sorted(pos[x] for x in g.adj[w] if x in inside)
        for i, j in itertools.combinations(hits, 2):
            arc1 = cyc[i : j + 1]
            arc2 = cyc[j:] + cyc[: i + 1]
            for arc in (arc1, arc2):
                out.append((size(arc), len(arc), (arc[0], arc[-1], w), frozenset(arc)))
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return out


def _cut_from_cycle(g: Graph, cycle: Sequence[int]) -> CutTriple | None:
    n = g.n
    cyc = list(cycle)
    if len(cyc) <= Fraction(n, 2) + 1:
        u, w, v = cyc[0], cyc[1], cyc[2]
        side2 = frozenset(cyc) - {w}
        return CutTriple((u, v, w), (frozenset(range(n)) - side2, side2), "i")
    opts = _arc_options(g, cyc, len)
    if not opts:
        return None
    _, _, triple, arc = opts[0]
    return CutTriple(triple, (frozenset(range(n)) - arc, arc), "ii")


def cut_triple(g: Graph, max_small: int | None = None, tries: int = 64) -> CutTriple:
    """Adjacent triple and connected split with ``|V2'| <= |V|/2``.

    With ``max_small`` set, further nonseparating cycles are examined until the
    second side has at most that many nodes; the smallest split seen is
    returned if none qualifies.
    """
    if not is_k_connected(g, 3):
        raise PreconditionError("cut_triple requires a 3-connected graph")
    best = None
    for idx, cyc in enumerate(_cycles(g)):
        ct = _cut_from_cycle(g, cyc)
        if ct is None:
            continue
        if cut_clause_violations(g, ct):
            continue
        if best is None or len(ct.split[1]) < len(best.split[1]):
            best = ct
        if max_small is None or len(best.split[1]) <= max_small or idx + 1 >= tries:
            break
    if best is None:
        raise InternalError("no valid cut triple found")
    return best


def cut_triples(g: Graph, limit: int = 16) -> list[CutTriple]:
    """Several valid cut triples from different cycles, smallest second side first."""
    out = []
    seen = set()
    for cyc in itertools.islice(_cycles(g), 4 * limit):
        ct = _cut_from_cycle(g, cyc)
        if ct is None or cut_clause_violations(g, ct):
            continue
        key = (ct.triple, ct.split[1])
        if key in seen:
            continue
        seen.add(key)
        out.append(ct)
        if len(out) >= limit:
            break
    out.sort(key=lambda c: len(c.split[1]))
    return out


def cut_triple_weighted(cg: ContractedGraph) -> CutTriple:
    """Cut triple on the quotient (local ids) whose second side has weighted size at most N/2."""
    qg = cg.quotient
    kept = cg.kept
    total = cg.total_n
    half = Fraction(total, 2)
    wmap = {}
    for (a, b), wt in cg.edge_weight.items():
        la, lb = kept.index(a), kept.index(b)
        wmap[(min(la, lb), max(la, lb))] = wt
    for a, b in qg.edges():
        if Fraction(wmap.get((a, b), 0)) >= Fraction(total, 4):
            raise PreconditionError("contracted edge weight must be below N/4")
    if not is_k_connected(qg, 3):
        raise PreconditionError("quotient must be 3-connected")

    def wsize(nodes: Iterable[int]) -> int:
        s = set(nodes)
        return len(s) + sum(wt for (a, b), wt in wmap.items() if a in s and b in s)

    def path_wsize(arc: Sequence[int]) -> int:
        return len(arc) + sum(wmap.get((min(x, y), max(x, y)), 0) for x, y in zip(arc, arc[1:]))

    nq = qg.n
    for cyc in _cycles(qg):
        cyc = list(cyc)
        ct = None
        if wsize(cyc) <= half + 1:
            u, w, v = cyc[0], cyc[1], cyc[2]
            side2 = frozenset(cyc) - {w}
            ct = CutTriple((u, v, w), (frozenset(range(nq)) - side2, side2), "a")
        else:
            opts = _arc_options(qg, cyc, path_wsize)
            label = "b" if len(cyc) > Fraction(nq, 2) else "c"
            for _, _, triple, arc in opts:
                cand = CutTriple(triple, (frozenset(range(nq)) - arc, arc), label)
                if not cut_clause_violations(qg, cand, wsize, half):
                    ct = cand
                    break
            if ct is None and not opts:
                ct = _case_c_tree(qg, cyc)
        if ct is not None and not cut_clause_violations(qg, ct, wsize, half):
            return ct
    raise InternalError("no weighted cut triple found")


def _case_c_tree(qg: Graph, cycle: Sequence[int]) -> CutTriple | None:
    """Every outside node sees at most one cycle node: pick a non-cut outside node.

    A BFS spanning tree of the outside part is used; a one-contact node that
    is a leaf works, otherwise an end of the longest tree path between
    one-contact nodes does.
    """
    inside = set(cycle)
    outside = sorted(set(range(qg.n)) - inside)
    contact = [x for x in outside if sum(1 for y in qg.adj[x] if y in inside) == 1]
    if not contact:
        return None
    root = outside[0]
    parent = {root: None}
    order = [root]
    for x in order:
        for y in qg.adj[x]:
            if y in inside or y in parent:
                continue
            parent[y] = x
            order.append(y)
    children = {x: 0 for x in outside}
    for x, par in parent.items():
        if par is not None:
            children[par] += 1

    def is_leaf(x: int) -> bool:
        deg = children[x] + (0 if parent[x] is None else 1)
        return deg <= 1

    leaves = [x for x in contact if is_leaf(x)]
    if leaves:
        w = leaves[0]
    else:
        def tree_path(a: int, b: int) -> int:
            anc = {}
            x, d = a, 0
            while x is not None:
                anc[x] = d
                x, d = parent[x], d + 1
            x, d = b, 0
            while x not in anc:
                x, d = parent[x], d + 1
            return d + anc[x]

        best = max(itertools.combinations(contact, 2), key=lambda pr: (tree_path(*pr), -pr[0], -pr[1]))
        w = best[0]
    rest = set(outside) - {w}
    if not connected_induced(qg, rest):
        raise InternalError("chosen one-contact node is a cut point")
    nbrs = sorted(y for y in qg.adj[w] if y in rest)
    u, v = nbrs[0], nbrs[1]
    side1 = frozenset(inside | {w})
    return CutTriple((u, v, w), (side1, frozenset(rest)), "c")


# ---------------------------------------------------------------------------
# sweeping


def full_sweep(g: Graph, emb: Embedding, p: WeightAssignment, k: int, centered: bool = False) -> SweepRecord:
    """Evaluate the first-``k`` split at every non-critical direction of a half-turn."""
    crit = critical_directions(emb)
    rec = SweepRecord(k=k, critical=crit)
    shift = p.total / 2 if centered else Fraction(0)
    everything = set(range(g.n))
    for d in sweep_directions(crit):
        order = projection_order(emb, d)
        first = set(order[:k])
        rec.directions.append(d)
        rec.orders.append(order)
        rec.values.append(p.sum(first) - shift)
        rec.connected.append(connected_induced(g, first) and connected_induced(g, everything - first))
    return rec


def sweep_invariant_violations(rec: SweepRecord, segments: Sequence[Sequence[int]] = ()) -> list[str]:
    """Adjacent directions differ by one adjacent swap unless a segment is crossed."""
    errs = []
    groups = [set(s) for s in segments]
    for i in range(1, len(rec.orders)):
        crit = rec.critical[i - 1]
        involved = {x for pr in crit.pairs for x in pr}
        on_segment = len(crit.pairs) > 1 and any(involved <= grp for grp in groups)
        before, after = rec.orders[i - 1], rec.orders[i]
        if on_segment:
            continue
        diff = [j for j in range(len(before)) if before[j] != after[j]]
        if len(crit.pairs) != 1:
            errs.append(f"step {i}: merged critical direction outside segments")
        elif diff and (len(diff) != 2 or diff[1] != diff[0] + 1 or before[diff[0]] != after[diff[1]]):
            errs.append(f"step {i}: order changed by more than one adjacent swap")
    return errs


def _connectivity_guaranteed(tail: TailoredEmbedding | None, k: int, n: int) -> bool:
    if tail is None:
        return True
    return len(tail.split[1]) <= min(k, n - k)


# ---------------------------------------------------------------------------
# 3-connected graphs


def _embeddings_3(g: Graph, seed: int, use_triangle: bool | None, max_small: int | None, k: int):
    """Yield (embedding, tailored-or-None, label) candidates in preference order."""
    tri = find_triangle(g) if use_triangle is not False else None
    if use_triangle and tri is None:
        raise PreconditionError("no triangle present")
    if tri is not None:
        for attempt in range(3):
            yield plain_embedding(g, tri, seed=seed + 101 * attempt), None, "triangle"
        if use_triangle:
            return
    first = cut_triple(g, max_small=max_small)
    tail = tailored_embedding(g, first.split, first.triple, seed=seed)
    yield tail.base, tail, "tailored." + first.case
    options = [first] + [c for c in cut_triples(g) if c != first]
    for attempt in range(3):
        for ct in options[1:] if attempt == 0 else options:
            tail = tailored_embedding(g, ct.split, ct.triple, seed=seed + 101 * attempt)
            yield tail.base, tail, "tailored." + ct.case


def dbcp_3(g: Graph, p: WeightAssignment, seed: int = 0, use_triangle: bool | None = None) -> DbcpResult:
    """Perfectly balanced connected halves of a 3-connected graph with +1/-1 weights.

    ``n = 0 mod 4`` gives equal sizes; ``n = 2 mod 4`` gives sizes
    ``n/2 + 1`` and ``n/2 - 1``. Both sums are zero.
    """
    _check_pm1(g, p)
    if not is_k_connected(g, 3):
        raise PreconditionError("dbcp_3 requires a 3-connected graph")
    n = g.n
    if n % 4 == 0:
        ks = [n // 2]
        max_small = None
    else:
        ks = [n // 2 + 1, n // 2 - 1]
        max_small = n // 2 - 1
    tried = 0
    for emb, tail, label in _embeddings_3(g, seed, use_triangle, max_small, ks[0]):
        for k in ks:
            tried += 1
            rec = full_sweep(g, emb, p, k)
            guaranteed = _connectivity_guaranteed(tail, k, n)
            if guaranteed and not all(rec.connected):
                raise InternalError("sweep produced a disconnected side where connectivity is guaranteed")
            hit = next((i for i, (val, ok) in enumerate(zip(rec.values, rec.connected)) if val == 0 and ok), None)
            if hit is None:
                continue
            v1 = set(rec.orders[hit][:k])
            if len(v1) < n - len(v1):
                v1 = set(range(n)) - v1
            trace = f"exact3.{label}" + (".early" if hit == 0 else "") + f".k{k}"
            res = _finish(g, p, v1, trace, Fraction(0), Fraction(1) if n % 4 == 0 else Fraction(n // 2 + 1, n // 2 - 1),
                          record=rec, embedding=emb, tailored=tail, details={"hit": hit, "attempts": tried, "guaranteed": guaranteed})
            if res.partition.sizes[0] - res.partition.sizes[1] != (0 if n % 4 == 0 else 2):
                raise InternalError("parity law violated")
            return res
    raise InternalError("no balanced direction found after exhausting embeddings")


def dbcp_3_general(g: Graph, p: WeightAssignment, seed: int = 0, use_triangle: bool | None = None) -> DbcpResult:
    """Halves (sizes differ by at most one) with ``|p(V_i) - p(V)/2| <= max|p|``."""
    p.check_covers(g)
    if not is_k_connected(g, 3):
        raise PreconditionError("dbcp_3_general requires a 3-connected graph")
    n = g.n
    k = (n + 1) // 2
    pmax = p.max_abs()
    for emb, tail, label in _embeddings_3(g, seed, use_triangle, None, k):
        rec = full_sweep(g, emb, p, k, centered=True)
        guaranteed = _connectivity_guaranteed(tail, k, n)
        if guaranteed and not all(rec.connected):
            raise InternalError("sweep produced a disconnected side where connectivity is guaranteed")
        hit = next((i for i, (val, ok) in enumerate(zip(rec.values, rec.connected)) if abs(val) <= pmax and ok), None)
        if hit is None:
            continue
        v1 = set(rec.orders[hit][:k])
        trace = f"centered3.{label}" + (".early" if hit == 0 else "")
        ratio = Fraction(k, n - k)
        return _finish(g, p, v1, trace, pmax, ratio, centered=True, record=rec, embedding=emb, tailored=tail, details={"hit": hit})
    raise InternalError("no balanced direction found after exhausting embeddings")


# ---------------------------------------------------------------------------
# separation pair with small components


def _pair_paths(g: Graph, pair: SeparationPair, q: int) -> tuple[list[int], list[int], dict]:
    """Group the pseudo-paths of the pair's components into two chains ``chain1``, ``chain2``.

    Each chain is a concatenation of pseudo-paths listed from ``u`` to ``v``,
    so every prefix (from the ``u`` end) plus ``u`` and every suffix plus
    ``v`` is connected. ``chain1`` is the longer one.
    """
    n = g.n
    u, v = pair.u, pair.v
    comps = separation_components(g, u, v)
    if len(comps) < 2:
        raise PreconditionError(f"{(u, v)} is not a separation pair")
    bound = Fraction((q - 1) * n, q)
    if any(len(c) >= bound for c in comps):
        raise PreconditionError(f"a component of {(u, v)} is not below (q-1)n/q")
    paths = [pseudo_path(g, c, u, v).interior for c in comps]
    paths.sort(key=lambda pth: (-len(pth), min(pth)))
    if len(paths[0]) >= Fraction(n, q):
        bins: list[list[tuple[int, ...]]] = [paths[1:], [paths[0]]]
    else:
        bins = [[], []]
        for pth in paths:
            tgt = 0 if sum(map(len, bins[0])) <= sum(map(len, bins[1])) else 1
            bins[tgt].append(pth)
    chains = [[x for pth in grp for x in pth] for grp in bins]
    chains.sort(key=len, reverse=True)
    info = {
        "pair": (u, v),
        "chain_sizes": (len(chains[0]), len(chains[1])),
        "chains_reach_floor": all(len(c) >= Fraction(n, q) - 1 for c in chains),
    }
    return chains[0], chains[1], info


def _grid_scan(g: Graph, p: WeightAssignment, u: int, chain1: list[int], chain2: list[int], tol: Fraction, c_s: Fraction, centered: bool):
    """All splits ``{u} + chain1[:i] + chain2[:j]``; return the best one within bounds."""
    n = g.n
    shift = p.total / 2 if centered else Fraction(0)
    best = None
    pre1 = [Fraction(0)]
    for x in chain1:
        pre1.append(pre1[-1] + p[x])
    pre2 = [Fraction(0)]
    for x in chain2:
        pre2.append(pre2[-1] + p[x])
    for i in range(len(chain1) + 1):
        for j in range(len(chain2) + 1):
            size = 1 + i + j
            if size >= n:
                continue
            s1 = p[u] + pre1[i] + pre2[j]
            dev = max(abs(s1 - shift), abs(p.total - s1 - shift))
            ratio = Fraction(max(size, n - size), min(size, n - size))
            if dev > tol or ratio > c_s:
                continue
            key = (dev, ratio, i, j)
            if best is None or key < best[0]:
                best = (key, i, j)
    if best is None:
        return None
    _, i, j = best
    return {u, *chain1[:i], *chain2[:j]}


def dbcp_sep_case(g: Graph, p: WeightAssignment, q: int, pair: SeparationPair, centered: bool = False) -> DbcpResult:
    """Walk along pseudo-paths of a separation pair whose components are below ``(q-1)n/q``.

    With +1/-1 weights the result has ``|p(V_i)| <= 1``; with ``centered``
    the bound is ``|p(V_i) - p(V)/2| <= max|p|``. Sizes are within ratio
    ``q - 1``.
    """
    p.check_covers(g)
    if q < 2:
        raise PreconditionError("q must be at least 2")
    if not centered:
        _check_pm1(g, p)
    n = g.n
    c_s = Fraction(q - 1)
    tol = p.max_abs() if centered else Fraction(1)
    chain1, chain2, info = _pair_paths(g, pair, q)
    u = pair.u
    if not centered:
        seeds = sorted({max(1, n // q), math.ceil(Fraction(n, q))})
        for a in seeds:
            found = _pair_walk(g, p, u, pair.v, chain1, chain2, q, a)
            if found is None:
                continue
            v1, label = found
            if a != seeds[0]:
                label += ".ceil"
            try:
                return _finish(g, p, v1, "pairwalk." + label, tol, c_s, details=info)
            except InternalError as exc:
                info.setdefault("walk_rejected", []).append(str(exc))
    v1 = _grid_scan(g, p, u, chain1, chain2, tol, c_s, centered)
    if v1 is not None:
        return _finish(g, p, v1, "pairwalk.grid", tol, c_s, centered, details=info)
    v1 = _prefix_search(g, p, pair, tol, c_s, centered)
    if v1 is not None:
        return _finish(g, p, v1, "pairwalk.prefixes", tol, c_s, centered, details=info)
    raise InternalError("no split of the separation-pair pseudo-paths meets the bounds")


def _prefix_search(g: Graph, p: WeightAssignment, pair: SeparationPair, tol: Fraction, c_s: Fraction, centered: bool, limit: int = 50000):
    """Independent ``u``-end prefixes of every pseudo-path of the pair, plus ``u``.

    Each such set is connected through ``u`` and its complement through
    ``v``. The search stops after ``limit`` combinations.
    """
    n = g.n
    u, v = pair.u, pair.v
    paths = [pseudo_path(g, c, u, v).interior for c in separation_components(g, u, v)]
    shift = p.total / 2 if centered else Fraction(0)
    prefix_sums = []
    for pth in paths:
        acc = [Fraction(0)]
        for x in pth:
            acc.append(acc[-1] + p[x])
        prefix_sums.append(acc)
    best = None
    for count, lengths in enumerate(itertools.product(*(range(len(pth) + 1) for pth in paths))):
        if count >= limit:
            break
        size = 1 + sum(lengths)
        if size >= n:
            continue
        s1 = p[u] + sum(ps[k] for ps, k in zip(prefix_sums, lengths))
        dev = max(abs(s1 - shift), abs(p.total - s1 - shift))
        ratio = Fraction(max(size, n - size), min(size, n - size))
        if dev <= tol and ratio <= c_s:
            key = (dev, ratio, lengths)
            if best is None or key < best[0]:
                best = (key, lengths)
    if best is None:
        return None
    chosen = {u}
    for pth, k in zip(paths, best[1]):
        chosen.update(pth[:k])
    return chosen


def _st_prefix_search(g: Graph, p: WeightAssignment, tol: Fraction, c_s: Fraction) -> set[int] | None:
    """Prefixes of st-numberings over all endpoint pairs, centred imbalance at most ``tol``.

    Every prefix of an st-numbering is connected and so is its complement.
    """
    n = g.n
    shift = p.total / 2
    for s_node, t_node in itertools.combinations(range(n), 2):
        order = st_numbering(g, s_node, t_node).order
        acc = Fraction(0)
        for size, x in enumerate(order[:-1], start=1):
            acc += p[x]
            if Fraction(max(size, n - size), min(size, n - size)) > c_s:
                continue
            if abs(acc - shift) <= tol:
                return set(order[:size])
    return None


def qualifying_pairs(g: Graph, q: int) -> list[SeparationPair]:
    """All separation pairs whose components are each below ``(q-1)n/q``."""
    bound = Fraction((q - 1) * g.n, q)
    out = []
    for a, b in itertools.combinations(range(g.n), 2):
        comps = separation_components(g, a, b)
        if len(comps) >= 2 and all(len(c) < bound for c in comps):
            out.append(SeparationPair(a, b, tuple(comps)))
    return out


def _pair_walk(g: Graph, p: WeightAssignment, u: int, v: int, chain1: list[int], chain2: list[int], q: int, a: int):
    """Seeded walk along the two chains; ``None`` if it gets stuck."""
    n = g.n
    seq1 = [u] + chain1
    a = min(a, len(seq1))
    cap = math.ceil(Fraction((q - 1) * n, q))
    start = seq1[:a]
    s0 = p.sum(start)
    if s0 == 0:
        return set(start), "start"
    sgn = 1 if s0 > 0 else -1

    def val(nodes: Iterable[int]) -> Fraction:
        return sgn * p.sum(nodes)

    grow = list(start)
    for x in seq1[a:]:
        if len(grow) >= cap:
            break
        grow.append(x)
        if val(grow) == 0:
            return set(grow), "first"
    # v joins before the second chain so that the grown set minus u stays connected
    for x in [v] + chain2[::-1]:
        if len(grow) >= cap:
            break
        grow.append(x)
        if val(grow) == 0:
            return set(grow) - {u}, "second"
    taken = set(grow)
    rest = [x for x in chain2 if x not in taken] + ([v] if v not in taken else [])
    deficit = -val(rest)
    if deficit <= 0:
        return None
    if val(start) >= deficit:
        acc = Fraction(0)
        for length, x in enumerate(seq1, start=1):
            acc += sgn * p[x]
            if acc == deficit:
                return set(seq1[:length]) | set(rest), "back.prefix"
        return None
    grow = list(start)
    for x in rest:
        grow.append(x)
        if val(grow) == 0:
            return set(grow), "back.extend"
    return None


def series_parallel_partition(g: Graph, p: WeightAssignment, centered: bool = False) -> DbcpResult:
    """Separation-pair walk with the pair found on a series-parallel derivation tree (ratio 2)."""
    pair = series_parallel_separation_pair(g)
    res = dbcp_sep_case(g, p, 3, pair, centered=centered)
    res.trace = "sp." + res.trace
    return res


# ---------------------------------------------------------------------------
# 2-connected graphs


def place_contracted(cg: ContractedGraph, tail: TailoredEmbedding, seed: int = 0, jitter: bool = False) -> tuple[Embedding, tuple[frozenset[int], frozenset[int]]] | None:
    """Lift a quotient embedding to all original nodes.

    Contracted pseudo-paths are spread along their edge at even spacing.
    With ``jitter`` each position moves by a seeded amount below a quarter
    of the spacing: exactly even spacing on two edges sharing an endpoint
    can create parallel pairs. On edges crossing between the two sides the
    nodes stay strictly above ``y = 1/2``. Returns ``None`` when the lifted
    points are not in general position.
    """
    rng = random.Random(seed)
    grain = max(cg.total_n, 2) ** 4
    kept = cg.kept
    base = tail.base
    points = {kept[i]: pt for i, pt in base.points.items()}
    side1 = {kept[i] for i in tail.split[0]}
    side2 = {kept[i] for i in tail.split[1]}
    half = Fraction(1, 2)
    lifted1, lifted2 = set(side1), set(side2)
    segments = []
    for (a, b), pp in sorted(cg.back_map.items()):
        if (a in side1) == (b in side1):
            x, z = a, b
            scale = Fraction(1)
            (lifted1 if a in side1 else lifted2).update(pp.interior)
        else:
            x, z = (a, b) if a in side1 else (b, a)
            yx, yz = points[x][1], points[z][1]
            if yx <= half:
                return None
            scale = (yx - half) / (yx - yz)
            lifted1.update(pp.interior)
        inner = cg.path(x, z)
        t = len(inner)
        px, pz = points[x], points[z]
        for idx, node in enumerate(inner, start=1):
            shift = Fraction(rng.randrange(-grain + 1, grain), 4 * grain) if jitter else 0
            lam = scale * (idx + shift) / (t + 1)
            points[node] = (px[0] + lam * (pz[0] - px[0]), px[1] + lam * (pz[1] - px[1]))
        segments.append((x, *inner, z))
    coeffs = {(min(kept[a], kept[b]), max(kept[a], kept[b])): c for (a, b), c in base.coefficients.items()}
    anchors = tuple(kept[i] for i in base.anchors)
    emb = Embedding(points, anchors, coeffs, tuple(segments))
    if general_position_violations(emb):
        return None
    split = (frozenset(lifted1), frozenset(lifted2))
    if halfplane_violations(emb, split):
        raise InternalError("lifted embedding breaks the half-plane conditions")
    return emb, split


def _jump_repair(rec: SweepRecord, p: WeightAssignment, i: int, sgn: int, accept: Callable[[Fraction], bool], shift: Fraction):
    """Fix a sweep step that jumped across the target at a segment direction.

    The nodes of the crossed segment sit in one consecutive block in the
    orders just before and just after; prefixes that end inside that block
    are tried, starting from the common part before the block.
    """
    k = rec.k
    crit = rec.critical[i - 1]
    block = {x for pr in crit.pairs for x in pr}
    before, after = rec.orders[i - 1], rec.orders[i]
    pos = sorted(before.index(x) for x in block)
    s0 = pos[0]
    if pos != list(range(s0, s0 + len(block))) or not s0 < k < s0 + len(block):
        return None
    common = before[:s0]
    if set(common) != set(after[:s0]):
        return None
    h0 = sgn * (p.sum(common) - shift)
    if accept(h0):
        return set(common), "common"
    order, label = (after, "after") if h0 > 0 else (before, "before")
    acc = h0
    for length in range(s0 + 1, k + 1):
        acc += sgn * p[order[length - 1]]
        if accept(acc):
            return set(order[:length]), label
    return None


def _contracted_sweep(g: Graph, p: WeightAssignment, cg: ContractedGraph, seed: int, centered: bool) -> DbcpResult:
    n = g.n
    ct = cut_triple_weighted(cg)
    qg = cg.quotient
    tol = p.max_abs() if centered else Fraction(1)
    shift = p.total / 2 if centered else Fraction(0)
    k = (n + 1) // 2 if centered else n // 2
    exact = (lambda h: h == 0) if not centered else (lambda h: abs(h) <= tol)
    prefix = "exact2.case2" if not centered else "centered2.case2"
    rejected = []
    for attempt in range(8):
        tail = tailored_embedding(qg, ct.split, ct.triple, seed=seed + 101 * attempt, size_bound=Fraction(qg.n))
        placed = place_contracted(cg, tail)
        if placed is None:
            placed = place_contracted(cg, tail, seed=seed + attempt, jitter=True)
        if placed is None:
            rejected.append("general position")
            continue
        emb, split = placed
        rec = full_sweep(g, emb, p, k, centered)
        guaranteed = len(split[1]) <= min(k, n - k)
        if guaranteed and not all(rec.connected):
            raise InternalError("sweep produced a disconnected side where connectivity is guaranteed")
        details = {"cut_case": ct.case, "attempt": attempt, "guaranteed": guaranteed, "quotient": qg}
        extra = dict(record=rec, embedding=emb, tailored=tail, details=details)
        hit = next((j for j, (val, ok) in enumerate(zip(rec.values, rec.connected)) if abs(val) <= tol and ok), None)
        first_bad = None
        if rec.values[0] != 0:
            sgn = 1 if rec.values[0] > 0 else -1
            first_bad = next((j for j, val in enumerate(rec.values) if sgn * val < -tol), None)
        if hit is not None and (first_bad is None or hit < first_bad):
            trace = prefix + ".sweep" + (".early" if hit == 0 else "")
            return _finish(g, p, rec.orders[hit][:k], trace, tol, Fraction(3), centered, **extra)
        if first_bad is not None:
            fixed = _jump_repair(rec, p, first_bad, sgn, exact, shift)
            if fixed is not None:
                v1, label = fixed
                try:
                    return _finish(g, p, v1, prefix + ".repair." + label, tol, Fraction(3), centered, **extra)
                except InternalError as exc:
                    rejected.append(str(exc))
            if hit is not None:
                trace = prefix + ".sweep.late"
                return _finish(g, p, rec.orders[hit][:k], trace, tol, Fraction(3), centered, **extra)
        rejected.append("no admissible direction")
    raise InternalError("contracted sweep failed: " + "; ".join(rejected))


def dbcp_2(g: Graph, p: WeightAssignment, seed: int = 0) -> DbcpResult:
    """Connected halves of a 2-connected graph with +1/-1 weights: ``|p(V_i)| <= 1``, ratio at most 3."""
    _check_pm1(g, p)
    if not is_k_connected(g, 2):
        raise PreconditionError("dbcp_2 requires a 2-connected graph")
    dec = decompose_q(g, 4)
    if isinstance(dec, Case1):
        res = dbcp_sep_case(g, p, 4, dec.pair)
        res.trace = "exact2.case1." + res.trace
        return res
    return _contracted_sweep(g, p, dec.contracted, seed, centered=False)


def dbcp_2_general(g: Graph, p: WeightAssignment, seed: int = 0) -> DbcpResult:
    """Like ``dbcp_2`` for arbitrary weights: ``|p(V_i) - p(V)/2| <= max|p|``, ratio at most 3."""
    p.check_covers(g)
    if not is_k_connected(g, 2):
        raise PreconditionError("dbcp_2_general requires a 2-connected graph")
    dec = decompose_q(g, 4)
    if isinstance(dec, Case1):
        pairs = [dec.pair] + [pr for pr in qualifying_pairs(g, 4) if pr.pair != dec.pair.pair]
        failures = []
        for idx, pair in enumerate(pairs):
            try:
                res = dbcp_sep_case(g, p, 4, pair, centered=True)
            except InternalError as exc:
                failures.append(f"{pair.pair}: {exc}")
                continue
            res.trace = "centered2.case1." + res.trace + (f".pair{idx}" if idx else "")
            return res
        v1 = _st_prefix_search(g, p, p.max_abs(), Fraction(3))
        if v1 is not None:
            return _finish(g, p, v1, "centered2.case1.stprefix", p.max_abs(), Fraction(3), centered=True, details={"pair_failures": failures})
        raise InternalError("no separation pair admits a split within bounds: " + "; ".join(failures))
    return _contracted_sweep(g, p, dec.contracted, seed, centered=True)


# ---------------------------------------------------------------------------
# red and blue nodes


def two_color_partition(g: Graph, red: Iterable[int], blue: Iterable[int], seed: int = 0) -> DbcpResult:
    """Connected 2-partition sharing red and blue nodes out evenly.

    3-connected graphs with an even number of each colour get exact halves
    of both colours. Otherwise each part ``i`` satisfies
    ``|r_i - (n_r/n_b) b_i| <= 1`` where ``r`` counts the rarer colour.
    Per-part colour counts and that deviation are stored in ``details``.
    """
    red_set, blue_set = set(red), set(blue)
    if red_set & blue_set or red_set | blue_set != set(range(g.n)):
        raise PreconditionError("red and blue must partition the nodes")
    if not is_k_connected(g, 2):
        raise PreconditionError("two-colour partition requires a 2-connected graph")
    if is_k_connected(g, 3):
        p = WeightAssignment([1 if x in red_set else -1 for x in range(g.n)])
        res = dbcp_3_general(g, p, seed=seed)
        mode = "3conn.exact" if len(red_set) % 2 == 0 and len(blue_set) % 2 == 0 else "3conn.offbyone"
    else:
        few, many = (red_set, blue_set) if len(red_set) <= len(blue_set) else (blue_set, red_set)
        ratio = Fraction(len(few), len(many))
        p = WeightAssignment([Fraction(1) if x in few else -ratio for x in range(g.n)])
        res = dbcp_2_general(g, p, seed=seed)
        mode = "2conn"
    parts = res.partition.parts
    rc = tuple(len(set(x) & red_set) for x in parts)
    bc = tuple(len(set(x) & blue_set) for x in parts)
    if len(red_set) <= len(blue_set):
        rare, common, c = rc, bc, Fraction(len(red_set), len(blue_set))
    else:
        rare, common, c = bc, rc, Fraction(len(blue_set), len(red_set))
    dev = tuple(abs(rare[i] - c * common[i]) for i in range(2))
    if mode == "3conn.exact" and (2 * rc[0] != len(red_set) or 2 * bc[0] != len(blue_set)):
        raise InternalError("even colour counts were not split exactly")
    if mode == "2conn" and max(dev) > 1:
        raise InternalError("colour ratio deviation exceeds 1")
    res.trace = "color." + mode + "." + res.trace
    res.details.update(red_counts=rc, blue_counts=bc, deviation=dev, mode=mode)
    return res
