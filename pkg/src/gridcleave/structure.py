"""Structural decompositions of 2- and 3-connected graphs.

Everything here is polynomial and validated rather than linear-time: the
routines build st-numberings from open ears, find nonseparating induced
cycles by iterative rerouting, grow nonseparating ear decompositions
greedily, and contract separation components into weighted edges.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    Graph,
    InternalError,
    PreconditionError,
    SeparationPair,
    components,
    connected_induced,
    is_k_connected,
    separation_components,
)


# ---------------------------------------------------------------------------
# helpers


def induced_subgraph(g: Graph, nodes: Iterable[int], extra_edges: Iterable[tuple[int, int]] = ()) -> tuple[Graph, list[int]]:
    """Relabel ``G[nodes]`` to ``0..k-1``; returns the subgraph and the local-to-original map."""
    order = sorted(set(nodes))
    index = {v: i for i, v in enumerate(order)}
    edges = {(index[a], index[b]) for a in order for b in g.adj[a] if b in index and a < b}
    for a, b in extra_edges:
        la, lb = index[a], index[b]
        edges.add((min(la, lb), max(la, lb)))
    return Graph(len(order), sorted(edges)), order


def _bfs_path(g: Graph, src: int, dst: int, allowed: set[int], banned_edge: tuple[int, int] | None = None) -> list[int] | None:
    """Shortest ``src``-``dst`` path whose interior stays inside ``allowed``."""
    prev = {src: src}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if banned_edge and {x, y} == set(banned_edge):
                continue
            if y in prev:
                continue
            if y != dst and y not in allowed:
                continue
            prev[y] = x
            if y == dst:
                path = [dst]
                while path[-1] != src:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(y)
    return None


# ---------------------------------------------------------------------------
# st-numbering


@dataclass(frozen=True)
class StNumbering:
    order: tuple[int, ...]
    s: int
    t: int

    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def prefix(self, i: int) -> frozenset[int]:
        """The first ``i`` nodes of the numbering."""
        return frozenset(self.order[:i])


def is_st_numbering(g: Graph, order: Sequence[int], s: int, t: int) -> bool:
    """Check first/last and the earlier-and-later neighbour condition."""
    if not order or order[0] != s or order[-1] != t or len(set(order)) != len(order):
        return False
    pos = {v: i for i, v in enumerate(order)}
    for i, v in enumerate(order[1:-1], start=1):
        ranks = [pos[y] for y in g.adj[v] if y in pos]
        if not ranks or min(ranks) >= i or max(ranks) <= i:
            return False
    return True


def st_numbering(g: Graph, s: int, t: int) -> StNumbering:
    """st-numbering of ``G + {s,t}`` built by inserting open ears.

    The graph is taken with a virtual ``{s,t}`` edge, so it only needs to be
    2-connected once that edge is present.
    """
    if s == t:
        raise PreconditionError("st-numbering needs distinct endpoints")
    h = g.with_edge(s, t)
    if h.n == 2:
        return StNumbering((s, t), s, t)
    if not is_k_connected(h, 2):
        raise PreconditionError("st-numbering requires a 2-connected graph (with the s-t edge added)")
    everything = set(range(h.n))
    first = _bfs_path(h, s, t, everything - {s, t}, banned_edge=(s, t))
    if first is None:
        raise InternalError("no s-t path avoiding the s-t edge in a 2-connected graph")
    order = list(first)
    visited = set(order)
    while len(visited) < h.n:
        ear = _find_open_ear(h, visited)
        a, interior, b = ear[0], ear[1:-1], ear[-1]
        ia, ib = order.index(a), order.index(b)
        if ia < ib:
            order[ia + 1 : ia + 1] = interior
        else:
            order[ib + 1 : ib + 1] = interior[::-1]
        visited.update(interior)
    result = StNumbering(tuple(order), s, t)
    if not is_st_numbering(h, result.order, s, t):
        raise InternalError("constructed order fails the st-numbering check")
    return result


def _find_open_ear(h: Graph, visited: set[int]) -> list[int]:
    """A path ``a, x, ..., y, b`` through unvisited nodes with distinct visited ends."""
    for a in sorted(visited):
        for x in h.adj[a]:
            if x in visited:
                continue
            prev = {x: None}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                ends = [b for b in h.adj[y] if b in visited and b != a]
                if ends:
                    path = [y]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return [a] + path[::-1] + [min(ends)]
                for z in h.adj[y]:
                    if z not in visited and z not in prev:
                        prev[z] = y
                        queue.append(z)
    raise PreconditionError("graph is not 2-connected: no open ear found")


# ---------------------------------------------------------------------------
# nonseparating induced cycles


def _chords(g: Graph, cycle: Sequence[int]) -> list[tuple[int, int]]:
    pos = {v: i for i, v in enumerate(cycle)}
    k = len(cycle)
    out = []
    for i, a in enumerate(cycle):
        for b in g.adj[a]:
            j = pos.get(b)
            if j is None or j <= i:
                continue
            if j - i not in (1, k - 1):
                out.append((i, j))
    return out


def is_nonseparating_induced_cycle(g: Graph, cycle: Sequence[int], through: tuple[int, int] | None = None, avoid: int | None = None) -> bool:
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    if any(not g.has_edge(cycle[i], cycle[(i + 1) % k]) for i in range(k)):
        return False
    if _chords(g, cycle):
        return False
    if through is not None:
        t, r = through
        if t not in cycle or r not in cycle:
            return False
        i, j = cycle.index(t), cycle.index(r)
        if (j - i) % k not in (1, k - 1):
            return False
    if avoid is not None and avoid in cycle:
        return False
    rest = set(range(g.n)) - set(cycle)
    return connected_induced(g, rest)


def enumerate_induced_cycles(g: Graph, limit: int = 14) -> list[tuple[int, ...]]:
    """All chordless cycles, each once, rotated to start at their minimum node.

    Exhaustive; intended as a test oracle on small graphs.
    """
    if g.n > limit:
        raise ValueError(f"enumeration limited to n <= {limit}")
    found: set[tuple[int, ...]] = set()

    def extend(path: list[int], on_path: set[int]) -> None:
        start, last = path[0], path[-1]
        for y in g.adj[last]:
            if y == start and len(path) >= 3:
                cyc = tuple(path)
                if not _chords(g, cyc):
                    # canonical direction: second node smaller than last
                    if cyc[1] < cyc[-1]:
                        found.add(cyc)
                continue
            if y <= start or y in on_path:
                continue
            # prune: y may not be adjacent to interior path nodes (chord)
            if any(g.has_edge(y, z) for z in path[1:-1]):
                continue
            path.append(y)
            on_path.add(y)
            extend(path, on_path)
            path.pop()
            on_path.discard(y)

    for s in range(g.n):
        extend([s], {s})
    return sorted(found)


def nonseparating_induced_cycle(g: Graph, through: tuple[int, int], avoid: int) -> tuple[int, ...]:
    """Chordless cycle through edge ``through``, missing ``avoid``, whose removal keeps G connected.

    Iterative improvement: start from a shortest path closed by the edge,
    then repeatedly reroute a stretch of the path through another bridge so
    that the component holding ``avoid`` grows, shortcutting chords as they
    appear. Returned as a node sequence starting ``t, ..., r``.
    """
    t, r = through
    u = avoid
    if not g.has_edge(t, r):
        raise PreconditionError(f"{through} is not an edge")
    if u in (t, r):
        raise PreconditionError("avoided node must differ from the edge endpoints")
    if not is_k_connected(g, 3):
        raise PreconditionError("nonseparating induced cycle requires a 3-connected graph")
    allowed = set(range(g.n)) - {u, t, r}
    path = _bfs_path(g, t, r, allowed, banned_edge=(t, r))
    if path is None:
        raise InternalError("no t-r path in G - u")
    for _ in range(g.n * g.n + 5):
        path = _shortcut_chords(g, path)
        rest = set(range(g.n)) - set(path)
        comps = components(g, rest)
        if len(comps) == 1:
            cycle = tuple(path)
            if not is_nonseparating_induced_cycle(g, cycle, through, u):
                raise InternalError("improvement produced an invalid cycle")
            return cycle
        path = _reroute(g, path, comps, u)
    raise InternalError("cycle improvement did not terminate")


def _shortcut_chords(g: Graph, path: list[int]) -> list[int]:
    """Remove chords of the cycle ``path + (r,t)`` keeping the closing edge."""
    while True:
        pos = {v: i for i, v in enumerate(path)}
        best = None
        for i, a in enumerate(path):
            for b in g.adj[a]:
                j = pos.get(b)
                if j is not None and j > i + 1 and not (i == 0 and j == len(path) - 1):
                    if best is None or (j - i) > (best[1] - best[0]):
                        best = (i, j)
        if best is None:
            return path
        i, j = best
        path = path[: i + 1] + path[j:]


def _reroute(g: Graph, path: list[int], comps: list[frozenset[int]], u: int) -> list[int]:
    pos = {v: i for i, v in enumerate(path)}
    home = next(c for c in comps if u in c)
    home_att = sorted({pos[y] for x in home for y in g.adj[x] if y in pos})
    for comp in comps:
        if comp is home:
            continue
        att = sorted({pos[y] for x in comp for y in g.adj[x] if y in pos})
        lo, hi = att[0], att[-1]
        if not any(lo < h < hi for h in home_att):
            continue
        a, b = path[lo], path[hi]
        detour = _bfs_path(g, a, b, set(comp), banned_edge=(a, b))
        if detour is None:
            raise InternalError("bridge does not connect its attachments")
        return path[:lo] + detour + path[hi + 1 :]
    raise InternalError("no bridge overlaps the avoided node's bridge; graph not 3-connected?")


# ---------------------------------------------------------------------------
# nonseparating ear decompositions


@dataclass(frozen=True)
class EarDecomposition:
    """``ears[0]`` is a cycle; every later ear is a path ``(a, x_1..x_k, b)``."""

    ears: tuple[tuple[int, ...], ...]
    through: tuple[int, int]
    avoided: int

    def interiors(self) -> list[tuple[int, ...]]:
        return [self.ears[0]] + [e[1:-1] for e in self.ears[1:]]

    def prefix_sets(self) -> list[frozenset[int]]:
        out, acc = [], set()
        for part in self.interiors():
            acc |= set(part)
            out.append(frozenset(acc))
        return out


def validate_ear_decomposition(g: Graph, ed: EarDecomposition) -> list[str]:
    """Return a list of violated invariants (empty when valid)."""
    errs: list[str] = []
    q0 = ed.ears[0]
    t, r = ed.through
    k = len(q0)
    if k < 3 or any(not g.has_edge(q0[i], q0[(i + 1) % k]) for i in range(k)):
        errs.append("first ear is not a cycle")
    if t not in q0 or r not in q0 or (q0.index(r) - q0.index(t)) % k not in (1, k - 1):
        errs.append("first ear misses the through edge")
    if ed.avoided in q0:
        errs.append("first ear contains the avoided node")
    covered = set(q0)
    last = len(ed.ears) - 1
    for idx, ear in enumerate(ed.ears):
        if idx > 0:
            a, inner, b = ear[0], ear[1:-1], ear[-1]
            if a == b or a not in covered or b not in covered:
                errs.append(f"ear {idx} endpoints not distinct earlier nodes")
            if not inner or any(x in covered for x in inner):
                errs.append(f"ear {idx} interior not new")
            if any(not g.has_edge(ear[i], ear[i + 1]) for i in range(len(ear) - 1)):
                errs.append(f"ear {idx} is not a path")
            covered |= set(inner)
            if idx == last and tuple(inner) != (ed.avoided,):
                errs.append("last ear does not consist of the avoided node alone")
        if idx < last:
            rest = set(range(g.n)) - covered
            if not connected_induced(g, rest):
                errs.append(f"remainder after ear {idx} disconnected")
            inner = ear if idx == 0 else ear[1:-1]
            if any(not any(y in rest for y in g.adj[x]) for x in inner):
                errs.append(f"ear {idx} has an interior node without outside neighbour")
    if covered != set(range(g.n)):
        errs.append("ears do not cover every node")
    return errs


def nonseparating_ear_decomposition(g: Graph, through: tuple[int, int], avoid: int) -> EarDecomposition:
    """Greedy nonseparating ear decomposition ending with the ear through ``avoid``.

    Candidates are tried shortest first, then lexicographically; a dead end
    triggers backtracking.
    """
    cycle = nonseparating_induced_cycle(g, through, avoid)
    u = avoid
    ears: list[tuple[int, ...]] = [cycle]
    covered = set(cycle)
    budget = [20000]

    def search() -> bool:
        rest = set(range(g.n)) - covered
        if rest == {u}:
            att = [y for y in g.adj[u] if y in covered]
            ears.append((att[0], u, att[1]))
            return True
        for ear in _candidate_ears(g, covered, rest, u):
            budget[0] -= 1
            if budget[0] < 0:
                return False
            inner = ear[1:-1]
            ears.append(ear)
            covered.update(inner)
            if search():
                return True
            ears.pop()
            covered.difference_update(inner)
        return False

    if not search():
        raise InternalError("no nonseparating ear decomposition found")
    ed = EarDecomposition(tuple(ears), (through[0], through[1]), u)
    errs = validate_ear_decomposition(g, ed)
    if errs:
        raise InternalError("ear decomposition invalid: " + "; ".join(errs))
    return ed


def _candidate_ears(g: Graph, covered: set[int], rest: set[int], u: int):
    """Yield valid ears by increasing interior length, lexicographic within a length."""
    free = rest - {u}
    for length in range(1, len(free) + 1):
        found = []
        for x1 in sorted(free):
            if not any(a in covered for a in g.adj[x1]):
                continue
            stack = [(x1,)]
            while stack:
                path = stack.pop()
                if len(path) == length:
                    ear = _close_ear(g, path, covered, rest)
                    if ear is not None:
                        found.append(ear)
                    continue
                for y in g.adj[path[-1]]:
                    if y in free and y not in path:
                        stack.append(path + (y,))
        for ear in sorted(set(found)):
            yield ear


def _close_ear(g: Graph, path: tuple[int, ...], covered: set[int], rest: set[int]) -> tuple[int, ...] | None:
    remaining = rest - set(path)
    if not connected_induced(g, remaining):
        return None
    if any(not any(y in remaining for y in g.adj[x]) for x in path):
        return None
    starts = [a for a in g.adj[path[0]] if a in covered]
    ends = [b for b in g.adj[path[-1]] if b in covered]
    for a in starts:
        for b in ends:
            if a != b:
                return (a,) + path + (b,)
    return None


# ---------------------------------------------------------------------------
# pseudo-paths


@dataclass(frozen=True)
class PseudoPath:
    interior: tuple[int, ...]
    endpoints: tuple[int, int]

    def __len__(self) -> int:
        return len(self.interior)

    def reversed(self) -> "PseudoPath":
        return PseudoPath(self.interior[::-1], self.endpoints[::-1])


def is_pseudo_path(g: Graph, u: int, v: int, interior: Sequence[int]) -> bool:
    seq = [u, *interior, v]
    pos = {x: i for i, x in enumerate(seq)}
    if len(pos) != len(seq):
        return False
    for i in range(1, len(seq) - 1):
        ranks = [pos[y] for y in g.adj[seq[i]] if y in pos]
        if not ranks or min(ranks) >= i or max(ranks) <= i:
            return False
    return True


def pseudo_path(g: Graph, component: Iterable[int], u: int, v: int) -> PseudoPath:
    """Order ``component`` as a pseudo-path from ``u`` to ``v`` via an st-numbering."""
    comp = set(component)
    if not comp or u in comp or v in comp:
        raise PreconditionError("component must be nonempty and exclude its attachment pair")
    if not connected_induced(g, comp):
        # unions of several separation components are allowed (contracted edges)
        for part in components(g, comp):
            _check_attachments(g, part, u, v)
    else:
        _check_attachments(g, comp, u, v)
    sub, back = induced_subgraph(g, comp | {u, v}, extra_edges=[(u, v)])
    local = {x: i for i, x in enumerate(back)}
    num = st_numbering(sub, local[u], local[v])
    interior = tuple(back[i] for i in num.order[1:-1])
    if not is_pseudo_path(g, u, v, interior):
        raise InternalError("st-numbering did not yield a pseudo-path")
    return PseudoPath(interior, (u, v))


def _check_attachments(g: Graph, comp: Iterable[int], u: int, v: int) -> None:
    comp = set(comp)
    nbrs = {y for x in comp for y in g.adj[x]} - comp
    if not nbrs <= {u, v}:
        raise PreconditionError("set is not a separation component of the given pair")
    if nbrs != {u, v}:
        raise PreconditionError("separation component must attach to both nodes of the pair")


# ---------------------------------------------------------------------------
# contraction dichotomy


@dataclass(frozen=True)
class ContractedGraph:
    """3-connected quotient whose edges may stand for contracted pseudo-paths.

    ``kept`` lists the surviving original nodes; ``quotient`` uses local ids
    ``0..len(kept)-1``. Edge keys in ``edge_weight``/``back_map`` are pairs of
    original ids ``(a, b)`` with ``a < b`` and the pseudo-path runs from a to b.
    """

    kept: tuple[int, ...]
    quotient: Graph
    edge_weight: dict[tuple[int, int], int]
    back_map: dict[tuple[int, int], PseudoPath]
    total_n: int

    def local(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.kept)}

    def weight(self, a: int, b: int) -> int:
        return self.edge_weight.get((min(a, b), max(a, b)), 0)

    def path(self, a: int, b: int) -> tuple[int, ...]:
        """Interior nodes of edge ``{a,b}`` listed from ``a`` towards ``b``."""
        key = (min(a, b), max(a, b))
        pp = self.back_map.get(key)
        if pp is None:
            return ()
        return pp.interior if key[0] == a else pp.interior[::-1]

    def weighted_size(self, nodes: Iterable[int]) -> int:
        s = set(nodes)
        return len(s) + sum(w for (a, b), w in self.edge_weight.items() if a in s and b in s)

    def expand(self, nodes: Iterable[int]) -> set[int]:
        """Original nodes of ``nodes`` plus interiors of edges internal to them."""
        s = set(nodes)
        out = set(s)
        for (a, b), pp in self.back_map.items():
            if a in s and b in s:
                out |= set(pp.interior)
        return out


@dataclass(frozen=True)
class Case1:
    pair: SeparationPair


@dataclass(frozen=True)
class Case2:
    contracted: ContractedGraph


def decompose_q(g: Graph, q: int) -> Case1 | Case2:
    """Either a separation pair with small components or a 3-connected contraction."""
    if q < 3:
        raise PreconditionError("q must be at least 3")
    if not is_k_connected(g, 2):
        raise PreconditionError("decompose_q requires a 2-connected graph")
    n = g.n
    bound = Fraction((q - 1) * n, q)
    nodes = set(range(n))
    # quotient edges: key (a,b) a<b -> set of contracted original nodes
    qedges: dict[tuple[int, int], set[int]] = {e: set() for e in g.edges()}

    def qadj() -> dict[int, set[int]]:
        adj = {v: set() for v in nodes}
        for a, b in qedges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    while True:
        adj = qadj()
        pair = _first_separation_pair(nodes, adj)
        if pair is None:
            break
        a, b = pair
        gcomps = separation_components(g, a, b)
        if all(len(c) < bound for c in gcomps):
            return Case1(SeparationPair(a, b, tuple(gcomps)))
        hcomps = _components_of(nodes - {a, b}, adj)
        sizes = []
        for comp in hcomps:
            inside = set(comp)
            for (x, y), s in qedges.items():
                if x in comp or y in comp:
                    inside |= s
            sizes.append((len(inside), inside, comp))
        sizes.sort(key=lambda t: (-t[0], min(t[2])))
        keep = sizes[0][2]
        key = (min(a, b), max(a, b))
        merged = set(qedges.get(key, set()))
        for _, inside, comp in sizes[1:]:
            merged |= inside
        for x, y in list(qedges):
            if (x not in keep and x not in (a, b)) or (y not in keep and y not in (a, b)):
                del qedges[(x, y)]
        nodes -= merged
        qedges[key] = merged
        if len(merged) >= Fraction(n, q):
            raise InternalError("contracted weight reached n/q")

    if len(nodes) >= 4:
        kept = tuple(sorted(nodes))
        local = {v: i for i, v in enumerate(kept)}
        quotient = Graph(len(kept), [(local[a], local[b]) for a, b in qedges])
        weights = {e: len(s) for e, s in qedges.items() if s}
        back = {e: pseudo_path(g, s, e[0], e[1]) for e, s in qedges.items() if s}
        cg = ContractedGraph(kept, quotient, weights, back, n)
        errs = validate_contracted(g, cg, q)
        if errs:
            raise InternalError("contraction invalid: " + "; ".join(errs))
        return Case2(cg)

    # the quotient collapsed to a triangle: some pair of G is balanced enough
    for a, b in itertools.combinations(range(n), 2):
        gcomps = separation_components(g, a, b)
        if len(gcomps) >= 2 and all(len(c) < bound for c in gcomps):
            return Case1(SeparationPair(a, b, tuple(gcomps)))
    raise InternalError("neither case of the dichotomy was found")


def _components_of(nodes: set[int], adj: dict[int, set[int]]) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(nodes):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in nodes and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _first_separation_pair(nodes: set[int], adj: dict[int, set[int]]) -> tuple[int, int] | None:
    if len(nodes) < 4:
        return None
    for a, b in itertools.combinations(sorted(nodes), 2):
        if len(_components_of(nodes - {a, b}, adj)) >= 2:
            return (a, b)
    return None


def validate_contracted(g: Graph, cg: ContractedGraph, q: int) -> list[str]:
    errs = []
    if not is_k_connected(cg.quotient, 3):
        errs.append("quotient not 3-connected")
    if len(cg.kept) + sum(cg.edge_weight.values()) != g.n:
        errs.append("node count not conserved")
    seen = set(cg.kept)
    for (a, b), pp in cg.back_map.items():
        if len(pp.interior) != cg.edge_weight.get((a, b), 0):
            errs.append(f"weight of {(a, b)} differs from its path length")
        if seen & set(pp.interior):
            errs.append(f"path of {(a, b)} overlaps other nodes")
        seen |= set(pp.interior)
        if not is_pseudo_path(g, a, b, pp.interior):
            errs.append(f"back-map of {(a, b)} is not a pseudo-path")
        if len(pp.interior) >= Fraction(g.n, q):
            errs.append(f"weight of {(a, b)} not below n/q")
    if seen != set(range(g.n)):
        errs.append("kept nodes and paths do not cover V")
    return errs


# ---------------------------------------------------------------------------
# series-parallel graphs


@dataclass
class SPNode:
    kind: str  # "edge", "S" or "P"
    terminals: tuple[int, int]
    nodes: frozenset[int]
    children: list["SPNode"] = field(default_factory=list)
    middle: int | None = None  # shared terminal of a series node


def series_parallel_tree(g: Graph) -> SPNode:
    """Derivation tree by repeated parallel merging and degree-2 series reduction."""
    edges: dict[int, SPNode] = {}
    for i, (a, b) in enumerate(g.edges()):
        edges[i] = SPNode("edge", (a, b), frozenset((a, b)))
    next_id = len(edges)
    changed = True
    while len(edges) > 1 and changed:
        changed = False
        groups: dict[frozenset[int], list[int]] = {}
        for eid, node in edges.items():
            groups.setdefault(frozenset(node.terminals), []).append(eid)
        for key, ids in sorted(groups.items(), key=lambda kv: sorted(kv[0])):
            if len(ids) < 2:
                continue
            a, b = sorted(key)
            kids: list[SPNode] = []
            for eid in ids:
                child = edges.pop(eid)
                kids.extend(child.children if child.kind == "P" else [child])
            edges[next_id] = SPNode("P", (a, b), frozenset().union(*(k.nodes for k in kids)), kids)
            next_id += 1
            changed = True
        if len(edges) == 1:
            break
        incident: dict[int, list[int]] = {}
        for eid, node in edges.items():
            for x in node.terminals:
                incident.setdefault(x, []).append(eid)
        for w in sorted(incident):
            ids = incident[w]
            if len(ids) != 2:
                continue
            e1, e2 = edges[ids[0]], edges[ids[1]]
            x = e1.terminals[0] if e1.terminals[1] == w else e1.terminals[1]
            y = e2.terminals[0] if e2.terminals[1] == w else e2.terminals[1]
            if x == y:
                continue
            del edges[ids[0]], edges[ids[1]]
            edges[next_id] = SPNode("S", (x, y), e1.nodes | e2.nodes, [e1, e2], middle=w)
            next_id += 1
            changed = True
            break
    if len(edges) != 1:
        raise PreconditionError("graph is not series-parallel")
    root = next(iter(edges.values()))
    if root.nodes != frozenset(range(g.n)):
        raise PreconditionError("graph is not connected")
    return root


def series_parallel_separation_pair(g: Graph) -> SeparationPair:
    """Separation pair whose components all have fewer than 2n/3 nodes."""
    if not is_k_connected(g, 2):
        raise PreconditionError("series_parallel_separation_pair requires a 2-connected graph")
    root = series_parallel_tree(g)
    n = g.n
    limit = Fraction(2 * n, 3)
    cur = root
    while True:
        big = max(cur.children, key=lambda c: len(c.nodes))
        if len(big.nodes) <= limit:
            break
        cur = big
    if cur.kind == "P":
        a, b = cur.terminals
    else:
        big = max(cur.children, key=lambda c: len(c.nodes))
        a, b = big.terminals
    comps = separation_components(g, a, b)
    if len(comps) < 2 or any(len(c) >= limit for c in comps):
        raise InternalError("derivation-tree walk did not give a balanced pair")
    return SeparationPair(min(a, b), max(a, b), tuple(comps))
