"""Connected partitions balanced on supply/demand only (two and three parts)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import (
    Graph,
    InternalError,
    Partition,
    PreconditionError,
    WeightAssignment,
    connected_induced,
    is_k_connected,
)
from .structure import StNumbering, induced_subgraph, nonseparating_ear_decomposition, st_numbering


@dataclass(frozen=True)
class BcpiResult:
    partition: Partition
    trace: str
    numbering: StNumbering | None = None


def _prefix_choice(weights: Sequence[Fraction]) -> tuple[int, int]:
    """First sign change of the prefix sums of ``weights``.

    The first prefix sum must be positive and the full sum non-positive.
    Returns ``(i_star, chosen)`` where ``i_star`` is the last positive prefix
    length and ``chosen`` is ``i_star`` or ``i_star + 1``, whichever has
    absolute sum at most half the crossing weight (ties keep ``i_star``).
    """
    acc = Fraction(0)
    for i, wgt in enumerate(weights):
        nxt = acc + wgt
        if i > 0 and acc > 0 and nxt <= 0:
            half = abs(wgt) / 2
            return i, (i if acc <= half else i + 1)
        acc = nxt
    raise InternalError("prefix sums never changed sign")


def bcpi_2(g: Graph, p: WeightAssignment, u: int, v: int) -> BcpiResult:
    """Two connected parts ``u in V1``, ``v in V2`` with ``|p(V_i)| <= max|p|/2``."""
    p.check_covers(g)
    if u == v:
        raise PreconditionError("u and v must differ")
    if not is_k_connected(g, 2):
        raise PreconditionError("bcpi_2 requires a 2-connected graph")
    if p.total != 0:
        raise PreconditionError(f"bcpi_2 requires p(V) = 0, got {p.total}")
    if p[u] * p[v] <= 0:
        raise PreconditionError("bcpi_2 requires p(u) and p(v) of the same strict sign")
    sign = 1 if p[u] > 0 else -1
    num = st_numbering(g, u, v)
    weights = [sign * p[x] for x in num.order]
    _, chosen = _prefix_choice(weights)
    part = Partition.build((num.order[:chosen], num.order[chosen:]), p)
    bound = p.max_abs() / 2
    if abs(part.sums[0]) > bound or not all(connected_induced(g, x) for x in part.parts):
        raise InternalError("bcpi_2 post-condition violated")
    return BcpiResult(part, "stprefix", num)


# ---------------------------------------------------------------------------
# three parts


def _two_sided(units: Sequence[Fraction]) -> tuple[int, int, str]:
    """Choose a prefix of units for part one and a suffix for part two.

    Requires the first and last unit weights positive and the total
    non-positive. Returns ``(a, b, label)``: part one is the first ``a``
    units, part two the last ``b`` units, with each part's absolute sum at
    most half of some single unit weight.
    """
    m = len(units)
    pref = [Fraction(0)]
    for wgt in units:
        pref.append(pref[-1] + wgt)
    total = pref[-1]
    if units[0] <= 0 or units[-1] <= 0 or total > 0:
        raise InternalError("two-sided split called outside its preconditions")
    # i_star: last positive prefix before the first non-positive one
    i_star = next(i for i in range(1, m) if pref[i] > 0 and pref[i + 1] <= 0)
    # suffix sums S_j = total - pref[j] (units j+1..m); j_star: max j with S_j <= 0
    j_star = max(j for j in range(0, m) if total - pref[j] <= 0)
    if i_star > j_star:
        raise InternalError("prefix crossing lies after suffix crossing")
    if i_star == j_star:
        x = abs(units[i_star])
        a_sum = pref[i_star]
        b_sum = total - pref[i_star + 1]
        if a_sum <= x / 2 and b_sum <= x / 2:
            return i_star, m - i_star - 1, "a.1"
        if a_sum > x / 2 and b_sum <= x / 2:
            return i_star + 1, m - i_star - 1, "a.2"
        if a_sum <= x / 2 and b_sum > x / 2:
            return i_star, m - i_star, "a.3"
        raise InternalError("both sides exceed half of the crossing weight")
    x1 = abs(units[i_star])
    a = i_star if pref[i_star] <= x1 / 2 else i_star + 1
    x2 = abs(units[j_star])
    b = m - j_star - 1 if total - pref[j_star + 1] <= x2 / 2 else m - j_star
    return a, b, "b"


def _check_three(g: Graph, p: WeightAssignment, parts: Sequence[set[int]], bound: Fraction, trace: str) -> Partition:
    part = Partition.build(parts, p)
    part.validate(g, p)
    if any(not x or not connected_induced(g, x) for x in part.parts):
        raise InternalError(f"bcpi_3 case {trace}: a part is empty or disconnected")
    if abs(part.sums[0]) > bound or abs(part.sums[1]) > bound or abs(part.sums[2]) > 2 * bound:
        raise InternalError(f"bcpi_3 case {trace}: imbalance bound violated")
    return part


def bcpi_3(g: Graph, p: WeightAssignment, u: int, v: int, w: int) -> BcpiResult:
    """Three connected parts around ``u``, ``v``, ``w`` with small imbalances.

    Walks a nonseparating ear decomposition through ``{u,v}`` avoiding ``w``.
    The returned trace names the case that fired, e.g. ``i.a.2`` or ``ii.b``.
    """
    p.check_covers(g)
    if len({u, v, w}) != 3:
        raise PreconditionError("u, v, w must be distinct")
    if not is_k_connected(g, 3):
        raise PreconditionError("bcpi_3 requires a 3-connected graph")
    if p.total != 0:
        raise PreconditionError(f"bcpi_3 requires p(V) = 0, got {p.total}")
    signs = {1 if p[x] > 0 else -1 if p[x] < 0 else 0 for x in (u, v, w)}
    if len(signs) != 1 or 0 in signs:
        raise PreconditionError("bcpi_3 requires p(u), p(v), p(w) all positive or all negative")
    sign = signs.pop()
    q = p if sign > 0 else p.negated()
    h = g.with_edge(u, v)
    ed = nonseparating_ear_decomposition(h, (u, v), w)
    bound = p.max_abs() / 2
    everything = set(range(g.n))

    # case (i): the first cycle already has non-positive weight
    cycle = list(ed.ears[0])
    v0 = set(cycle)
    if q.sum(v0) <= 0:
        # the cycle order starting at u and ending at v (the closing edge is u-v)
        iu = cycle.index(u)
        order = cycle[iu:] + cycle[:iu]
        if order[1] == v:
            order = [order[0]] + order[1:][::-1]
        a, b, label = _two_sided([q[x] for x in order])
        part1 = set(order[:a])
        part2 = set(order[len(order) - b :])
        trace = "i." + label
        parts = [part1, part2, everything - part1 - part2]
        return BcpiResult(_check_three(g, p, parts, bound, trace), trace)

    # case (ii): find the last prefix of ears with positive weight
    prefixes = ed.prefix_sets()
    j = next(i for i in range(len(prefixes) - 1) if q.sum(prefixes[i]) > 0 and q.sum(prefixes[i + 1]) <= 0)
    vj = prefixes[j]
    sub, back = induced_subgraph(h, vj)
    loc = {x: i for i, x in enumerate(back)}
    order = [back[i] for i in st_numbering(sub, loc[u], loc[v]).order]
    ear = list(ed.ears[j + 1])
    pos = {x: i for i, x in enumerate(order)}
    if pos[ear[0]] > pos[ear[-1]]:
        ear = ear[::-1]
    qs = ear[1:-1]
    x_idx, y_idx = pos[ear[0]] + 1, pos[ear[-1]] + 1  # 1-based positions

    # (ii)(a): a sign change of the st-prefix sums before v_y, or the mirrored suffix version
    found = _prefix_case(order, qs, x_idx, y_idx, q)
    if found is not None:
        part1, part2, label = found
        trace = "ii.a." + label
    else:
        rev = _prefix_case(order[::-1], qs[::-1], len(order) + 1 - y_idx, len(order) + 1 - x_idx, q)
        if rev is not None:
            part2, part1, label = rev
            trace = "ii.a." + label + ".mirror"
        else:
            # (ii)(b): both blocks positive, split the ear between them
            block1 = order[: y_idx - 1]
            block2 = order[y_idx - 1 :]
            units = [q.sum(block1)] + [q[x] for x in qs] + [q.sum(block2)]
            a, b, label = _two_sided(units)
            seq: list[list[int]] = [block1] + [[x] for x in qs] + [block2]
            part1 = {x for grp in seq[:a] for x in grp}
            part2 = {x for grp in seq[len(seq) - b :] for x in grp}
            trace = "ii.b." + label
    parts = [part1, part2, everything - part1 - part2]
    return BcpiResult(_check_three(g, p, parts, bound, trace), trace)


def _prefix_case(order: list[int], qs: list[int], x_idx: int, y_idx: int, q: WeightAssignment):
    """Case (ii)(a) with the crossing on the u side; ``None`` if it does not apply."""
    s = len(order)
    acc = Fraction(0)
    i_star = None
    for i in range(1, s):
        acc += q[order[i - 1]]
        nxt = acc + q[order[i]]
        if acc > 0 and nxt <= 0:
            i_star = i
            break
    if i_star is None or not i_star < y_idx - 1:
        return None
    crossing = abs(q[order[i_star]])
    p_star = q.sum(order[:i_star])
    first = i_star if p_star <= crossing / 2 else i_star + 1
    part1 = set(order[:first])
    part2_base = order[first:]
    base_sum = q.sum(part2_base)
    if first == i_star and base_sum <= 0:
        return part1, set(part2_base), "1"
    label = "2" if first == i_star else "3"
    # add ear nodes from the v_y end until the sign flips
    t = len(qs)

    def f(tt: int) -> Fraction:
        return base_sum + q.sum(qs[tt:])

    if f(0) > 0:
        # only reachable in the third bullet: the whole ear stays within bound
        if label != "3":
            raise InternalError("ear index t* missing in case (ii)(a)")
        return part1, set(part2_base) | set(qs), label
    t_star = next(tt for tt in range(t, 0, -1) if f(tt) > 0 and f(tt - 1) <= 0)
    half = abs(q[qs[t_star - 1]]) / 2
    cut = t_star if f(t_star) <= half else t_star - 1
    return part1, set(part2_base) | set(qs[cut:]), label
