"""Graph representation, weights, partitions and connectivity queries.

Graphs are simple and undirected over node ids ``0..n-1``. All weights are
``fractions.Fraction`` so every comparison downstream is exact.
"""

from __future__ import annotations

import functools
import json
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Malformed graph or weight input."""


class PreconditionError(ValueError):
    """An algorithm was called on an instance outside its guarantee."""


class InternalError(RuntimeError):
    """A post-condition that the construction guarantees was violated."""


Edge = tuple[int, int]


class Graph:
    """Immutable simple undirected graph with sorted adjacency tuples."""

    __slots__ = ("n", "adj", "m", "_adjset")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise GraphError("node count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            if len(e) != 2:
                raise GraphError(f"edge {e!r} must have two endpoints")
            a, b = int(e[0]), int(e[1])
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) references a node outside 0..{n - 1}")
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            if b in nbrs[a]:
                raise GraphError(f"duplicate edge ({a}, {b})")
            nbrs[a].add(b)
            nbrs[b].add(a)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self._adjset: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in nbrs)
        self.m = sum(len(s) for s in nbrs) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adjset[a]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[Edge]:
        return [(a, b) for a in range(self.n) for b in self.adj[a] if a < b]

    def nodes(self) -> range:
        return range(self.n)

    def with_edge(self, a: int, b: int) -> "Graph":
        """Return a copy with edge ``{a, b}`` added (no-op if present)."""
        if self.has_edge(a, b):
            return self
        return Graph(self.n, self.edges() + [(a, b)])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def to_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise GraphError("boolean is not a weight")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"cannot parse rational {value!r}") from exc
    if isinstance(value, float):
        raise GraphError("floats are not accepted as weights; use 'num/den' strings")
    raise GraphError(f"unsupported weight type {type(value).__name__}")


class WeightAssignment(Mapping[int, Fraction]):
    """Exact rational supply/demand value per node."""

    def __init__(self, values: Mapping[int, object] | Sequence[object]):
        if isinstance(values, Mapping):
            items = {int(k): to_fraction(v) for k, v in values.items()}
        else:
            items = {i: to_fraction(v) for i, v in enumerate(values)}
        self._values = items
        self.total = sum(items.values(), Fraction(0))

    def __getitem__(self, v: int) -> Fraction:
        return self._values[v]

    def __iter__(self):
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def sum(self, nodes: Iterable[int]) -> Fraction:
        return sum((self._values[v] for v in nodes), Fraction(0))

    def max_abs(self) -> Fraction:
        return max((abs(x) for x in self._values.values()), default=Fraction(0))

    def is_pm1(self) -> bool:
        return all(abs(x) == 1 for x in self._values.values())

    def negated(self) -> "WeightAssignment":
        return WeightAssignment({k: -x for k, x in self._values.items()})

    def check_covers(self, g: Graph) -> None:
        missing = [v for v in g.nodes() if v not in self._values]
        if missing:
            raise GraphError(f"weight missing for node(s) {missing[:5]}")
        extra = [v for v in self._values if not 0 <= v < g.n]
        if extra:
            raise GraphError(f"weight given for unknown node(s) {extra[:5]}")

    def __repr__(self) -> str:
        return f"WeightAssignment({[str(self._values[k]) for k in sorted(self._values)]})"


@dataclass(frozen=True)
class Partition:
    """Disjoint node sets covering V, with cached sums and sizes."""

    parts: tuple[frozenset[int], ...]
    sums: tuple[Fraction, ...]
    sizes: tuple[int, ...]

    @classmethod
    def build(cls, parts: Sequence[Iterable[int]], p: WeightAssignment) -> "Partition":
        fs = tuple(frozenset(x) for x in parts)
        return cls(fs, tuple(p.sum(x) for x in fs), tuple(len(x) for x in fs))

    def validate(self, g: Graph, p: WeightAssignment | None = None) -> None:
        seen: set[int] = set()
        for part in self.parts:
            if seen & part:
                raise GraphError("partition parts overlap")
            seen |= part
        if seen != set(g.nodes()):
            raise GraphError("partition does not cover every node")
        if any(len(x) != s for x, s in zip(self.parts, self.sizes)):
            raise GraphError("cached sizes disagree with parts")
        if p is not None and any(p.sum(x) != s for x, s in zip(self.parts, self.sums)):
            raise GraphError("cached sums disagree with parts")

    def size_ratio(self) -> Fraction:
        lo, hi = min(self.sizes), max(self.sizes)
        if lo == 0:
            raise GraphError("empty part has no size ratio")
        return Fraction(hi, lo)

    def swapped(self) -> "Partition":
        return Partition(self.parts[::-1], self.sums[::-1], self.sizes[::-1])


@dataclass(frozen=True)
class SeparationPair:
    u: int
    v: int
    components: tuple[frozenset[int], ...] = field(default_factory=tuple)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)

    def max_component(self) -> int:
        return max(len(c) for c in self.components)


def _check_nodes(g: Graph, nodes: Iterable[int]) -> set[int]:
    s = set(nodes)
    for v in s:
        if not isinstance(v, int) or not 0 <= v < g.n:
            raise GraphError(f"node {v!r} out of range 0..{g.n - 1}")
    return s


def components(g: Graph, nodes: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components of ``G[nodes]`` ordered by smallest member."""
    allowed = set(g.nodes()) if nodes is None else set(nodes)
    seen: set[int] = set()
    out: list[frozenset[int]] = []
    for start in sorted(allowed):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y in allowed and y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out


def connected_induced(g: Graph, nodes: Iterable[int]) -> bool:
    """True iff ``G[nodes]`` is connected; empty and singleton sets count as connected."""
    s = _check_nodes(g, nodes)
    if len(s) <= 1:
        return True
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y in s and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(s)


def is_k_connected(g: Graph, k: int) -> bool:
    """Exhaustive check: ``n > k`` and no vertex set of size ``< k`` disconnects G."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    return _is_k_connected(g, k)


@functools.lru_cache(maxsize=512)
def _is_k_connected(g: Graph, k: int) -> bool:
    if g.n <= k:
        return False
    everything = set(g.nodes())
    for size in range(k):
        for cut in itertools.combinations(range(g.n), size):
            if not connected_induced(g, everything.difference(cut)):
                return False
    return True


def connectivity_level(g: Graph) -> int:
    """Largest k in 0..3 with ``is_k_connected(g, k)`` (0 means disconnected)."""
    level = 0
    for k in (1, 2, 3):
        if not is_k_connected(g, k):
            break
        level = k
    return level


def separation_components(g: Graph, a: int, b: int) -> list[frozenset[int]]:
    rest = set(g.nodes())
    rest.discard(a)
    rest.discard(b)
    return components(g, rest)


def find_separation_pairs(g: Graph) -> list[SeparationPair]:
    """All vertex pairs whose removal disconnects a 2-connected graph, in lexicographic order."""
    if not is_k_connected(g, 2):
        raise PreconditionError("find_separation_pairs requires a 2-connected graph")
    out = []
    for a, b in itertools.combinations(range(g.n), 2):
        comps = separation_components(g, a, b)
        if len(comps) >= 2:
            out.append(SeparationPair(a, b, tuple(comps)))
    return out


@dataclass(frozen=True)
class Diagnostics:
    connectivity: int
    total: Fraction
    pm1: bool
    n_mod_4: int
    n: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "connectivity": self.connectivity,
            "total": str(self.total),
            "pm1": self.pm1,
            "n_mod_4": self.n_mod_4,
        }


def validate_instance(g: Graph, p: WeightAssignment, regime: str = "general") -> Diagnostics:
    """Report connectivity level, ``p(V)``, the ±1 flag and ``n mod 4``.

    ``regime="pm1"`` additionally insists on ±1 weights with a zero total.
    """
    if regime not in ("pm1", "general"):
        raise ValueError("regime must be 'pm1' or 'general'")
    p.check_covers(g)
    diag = Diagnostics(connectivity_level(g), p.total, p.is_pm1(), g.n % 4, g.n)
    if regime == "pm1":
        if not diag.pm1:
            raise PreconditionError("weights are not all +1/-1")
        if diag.total != 0:
            raise PreconditionError(f"p(V) = {diag.total}, expected 0")
    return diag


# Standard small graphs used by tests, docs and generators.


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def wheel_graph(rim: int) -> Graph:
    """Hub 0 joined to a rim cycle 1..rim."""
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph(rim + 1, edges)


def prism_graph(k: int) -> Graph:
    """Cartesian product of a k-cycle with an edge (the cube when k=4)."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


def octahedron_graph() -> Graph:
    return Graph(6, [(a, b) for a, b in itertools.combinations(range(6), 2) if b != a + 3 or a >= 3])


def icosahedron_graph() -> Graph:
    edges = [
        (0, 1), (0, 5), (0, 7), (0, 8), (0, 11), (1, 2), (1, 5), (1, 6), (1, 8),
        (2, 3), (2, 6), (2, 8), (2, 9), (3, 4), (3, 6), (3, 9), (3, 10), (4, 5),
        (4, 6), (4, 10), (4, 11), (5, 6), (5, 11), (7, 8), (7, 9), (7, 10), (7, 11),
        (8, 9), (9, 10), (10, 11),
    ]
    return Graph(12, edges)


def theta_graph(paths: Sequence[int]) -> Graph:
    """Terminals 0 and 1 joined by internally disjoint paths with the given interior node counts."""
    edges: list[Edge] = []
    nxt = 2
    for length in paths:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph(nxt, edges)


def subdivide(g: Graph, edge: Edge, times: int) -> Graph:
    """Replace ``edge`` with a path through ``times`` new nodes."""
    a, b = edge
    if not g.has_edge(a, b):
        raise GraphError(f"no edge {edge}")
    edges = [e for e in g.edges() if set(e) != {a, b}]
    prev, nxt = a, g.n
    for _ in range(times):
        edges.append((prev, nxt))
        prev = nxt
        nxt += 1
    edges.append((prev, b))
    return Graph(nxt, edges)


# ---------------------------------------------------------------------------
# serialization


def format_rational(x: Fraction) -> str:
    """``"num/den"``, or a plain integer string when the denominator is 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def instance_to_dict(g: Graph, p: WeightAssignment) -> dict:
    return {
        "nodes": [{"id": v, "p": format_rational(p[v])} for v in range(g.n)],
        "edges": [[a, b] for a, b in g.edges()],
    }


def instance_from_dict(doc: object) -> tuple[Graph, WeightAssignment]:
    """Parse the JSON document model; raises ``GraphError`` on any malformation."""
    if not isinstance(doc, dict) or not isinstance(doc.get("nodes"), list) or not isinstance(doc.get("edges"), list):
        raise GraphError('expected an object with "nodes" and "edges" arrays')
    weights: dict[int, Fraction] = {}
    for entry in doc["nodes"]:
        if not isinstance(entry, dict) or "id" not in entry or "p" not in entry:
            raise GraphError('each node needs "id" and "p"')
        ident = entry["id"]
        if not isinstance(ident, int) or isinstance(ident, bool):
            raise GraphError(f"node id {ident!r} is not an integer")
        if ident in weights:
            raise GraphError(f"node id {ident} listed twice")
        if not isinstance(entry["p"], (str, int)) or isinstance(entry["p"], bool):
            raise GraphError(f"weight of node {ident} must be a rational string")
        weights[ident] = to_fraction(entry["p"])
    n = len(weights)
    if set(weights) != set(range(n)):
        raise GraphError("node ids must be exactly 0..n-1")
    edges = []
    for e in doc["edges"]:
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in e):
            raise GraphError(f"edge {e!r} is not a pair of integers")
        edges.append((e[0], e[1]))
    return Graph(n, edges), WeightAssignment(weights)


def dumps_instance(g: Graph, p: WeightAssignment) -> str:
    return json.dumps(instance_to_dict(g, p)) + "\n"


def loads_instance(text: str) -> tuple[Graph, WeightAssignment]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(doc)


def loads_edgelist(edges_text: str, weights_text: str) -> tuple[Graph, WeightAssignment]:
    """``u v`` per line plus a parallel ``id value`` file; ``#`` starts a comment."""

    def rows(text: str) -> list[list[str]]:
        out = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line.split())
        return out

    weights: dict[int, Fraction] = {}
    for row in rows(weights_text):
        if len(row) != 2:
            raise GraphError(f"weight line {' '.join(row)!r} must be 'id value'")
        try:
            ident = int(row[0])
        except ValueError as exc:
            raise GraphError(f"bad node id {row[0]!r}") from exc
        if ident in weights:
            raise GraphError(f"node id {ident} listed twice")
        weights[ident] = to_fraction(row[1])
    n = len(weights)
    if set(weights) != set(range(n)):
        raise GraphError("node ids must be exactly 0..n-1")
    edges = []
    for row in rows(edges_text):
        if len(row) != 2:
            raise GraphError(f"edge line {' '.join(row)!r} must be 'u v'")
        try:
            edges.append((int(row[0]), int(row[1])))
        except ValueError as exc:
            raise GraphError(f"bad edge {row!r}") from exc
    return Graph(n, edges), WeightAssignment(weights)


def dumps_edgelist(g: Graph, p: WeightAssignment) -> tuple[str, str]:
    edges = "".join(f"{a} {b}\n" for a, b in g.edges())
    weights = "".join(f"{v} {format_rational(p[v])}\n" for v in range(g.n))
    return edges, weights
