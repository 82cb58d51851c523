"""Command-line front end.

Exit codes: 0 success, 1 internal failure, 2 parse or usage error,
3 failed precondition, 4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .bcpi import bcpi_2, bcpi_3
from .dbcp import (
    DbcpResult,
    cut_triple,
    cut_triple_weighted,
    dbcp_2,
    dbcp_2_general,
    dbcp_3,
    dbcp_3_general,
    dbcp_sep_case,
    find_triangle,
    place_contracted,
    qualifying_pairs,
    series_parallel_partition,
)
from .embedding import plain_embedding, render_svg, tailored_embedding
from .graph import (
    Graph,
    GraphError,
    InternalError,
    Partition,
    PreconditionError,
    WeightAssignment,
    connected_induced,
    dumps_edgelist,
    dumps_instance,
    format_rational,
    is_k_connected,
    loads_edgelist,
    loads_instance,
)
from .oracle import CapExceeded, best_frontier, frontier_admits, gen_fig1, gen_random, resolve_cap, verify_partition
from .structure import Case2, decompose_q

EXIT_OK, EXIT_INTERNAL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def load_instance(args: argparse.Namespace) -> tuple[Graph, WeightAssignment]:
    text = _read_text(args.input)
    if args.format == "edgelist":
        if not args.weights:
            raise UsageError("--format edgelist needs --weights FILE")
        return loads_edgelist(text, _read_text(args.weights))
    return loads_instance(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# partition


def _same_sign_nodes(p: WeightAssignment, count: int) -> list[int]:
    for sign in (1, -1):
        picked = [v for v in sorted(p) if sign * p[v] > 0]
        if len(picked) >= count:
            return picked[:count]
    raise PreconditionError(f"need {count} nodes whose weights share a strict sign")


def _terminals(args: argparse.Namespace, p: WeightAssignment, count: int) -> list[int]:
    if not args.terminals:
        return _same_sign_nodes(p, count)
    if len(args.terminals) != count:
        raise UsageError(f"--mode {args.mode} takes exactly {count} terminals")
    if any(not 0 <= x < len(p) for x in args.terminals):
        raise UsageError("terminal outside the node range")
    return list(args.terminals)


def _solve_dbcp(g: Graph, p: WeightAssignment, q: int, seed: int, centered: bool) -> tuple[DbcpResult, Fraction, Fraction]:
    """Dispatch to the doubly balanced solvers; returns the result and the bounds it must meet."""
    level3 = is_k_connected(g, 3)
    if not is_k_connected(g, 2):
        raise PreconditionError("the graph must be 2-connected (no cut node)")
    pm1 = p.is_pm1() and p.total == 0 and not centered
    pmax = p.max_abs()
    n = g.n
    if q != 4:
        if q < 2:
            raise PreconditionError("q must be at least 2")
        if q == 3 and pm1 and not level3:
            try:
                res = series_parallel_partition(g, p)
                return res, Fraction(1), Fraction(2)
            except PreconditionError:
                pass
        pairs = qualifying_pairs(g, q)
        if not pairs:
            raise PreconditionError(f"no separation pair has all components below (q-1)n/q for q={q}")
        res = dbcp_sep_case(g, p, q, pairs[0], centered=not pm1)
        return res, (Fraction(1) if pm1 else pmax), Fraction(q - 1)
    if level3 and pm1:
        bound_s = Fraction(1) if n % 4 == 0 else Fraction(n // 2 + 1, n // 2 - 1)
        return dbcp_3(g, p, seed=seed), Fraction(0), bound_s
    if level3:
        k = (n + 1) // 2
        return dbcp_3_general(g, p, seed=seed), pmax, Fraction(k, n - k)
    if pm1:
        return dbcp_2(g, p, seed=seed), Fraction(1), Fraction(3)
    return dbcp_2_general(g, p, seed=seed), pmax, Fraction(3)


def _partition_doc(part: Partition, trace: str, seed: int, extra: dict | None = None) -> dict:
    doc: dict = {}
    for i, side in enumerate(part.parts, start=1):
        doc[f"V{i}"] = sorted(side)
    doc["p"] = [format_rational(s) for s in part.sums]
    doc["sizes"] = list(part.sizes)
    doc["trace"] = trace
    doc["seed"] = seed
    if extra:
        doc.update(extra)
    return doc


def cmd_partition(args: argparse.Namespace) -> int:
    g, p = load_instance(args)
    p.check_covers(g)
    mode = args.mode
    if mode == "bcpi2":
        u, v = _terminals(args, p, 2)
        res = bcpi_2(g, p, u, v)
        part = res.partition
        if not all(connected_induced(g, x) for x in part.parts) or max(abs(s) for s in part.sums) > p.max_abs() / 2:
            raise InternalError("result failed re-verification")
        doc = _partition_doc(part, "bcpi2." + res.trace, args.seed, {"terminals": [u, v]})
    elif mode == "bcpi3":
        u, v, w = _terminals(args, p, 3)
        res = bcpi_3(g, p, u, v, w)
        part = res.partition
        half = p.max_abs() / 2
        if not all(x and connected_induced(g, x) for x in part.parts) or abs(part.sums[0]) > half or abs(part.sums[1]) > half or abs(part.sums[2]) > 2 * half:
            raise InternalError("result failed re-verification")
        doc = _partition_doc(part, "bcpi3." + res.trace, args.seed, {"terminals": [u, v, w]})
    else:
        if mode == "auto" and not is_k_connected(g, 2):
            raise PreconditionError("the graph must be 2-connected (no cut node)")
        res, c_p, c_s = _solve_dbcp(g, p, args.q, args.seed, args.centered)
        if not verify_partition(g, p, res.partition, c_p, c_s, centered=res.centered):
            raise InternalError("result failed re-verification")
        doc = _partition_doc(res.partition, res.trace, args.seed, {"bound": [format_rational(c_p), format_rational(c_s)]})
    _emit(json.dumps(doc) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# embed


def cmd_embed(args: argparse.Namespace) -> int:
    g, p = load_instance(args)
    p.check_covers(g)
    partition = None
    tailored = False
    if args.with_partition:
        res, c_p, c_s = _solve_dbcp(g, p, 4, args.seed, args.centered)
        if not verify_partition(g, p, res.partition, c_p, c_s, centered=res.centered):
            raise InternalError("result failed re-verification")
        partition = res.partition
        if res.embedding is not None:
            svg = render_svg(g, res.embedding, partition, tailored=res.tailored is not None)
            _emit(svg, args.out)
            return EXIT_OK
    if is_k_connected(g, 3):
        tri = find_triangle(g)
        if tri is not None and not args.tailored:
            emb = plain_embedding(g, tri, seed=args.seed)
        else:
            ct = cut_triple(g)
            emb = tailored_embedding(g, ct.split, ct.triple, seed=args.seed).base
            tailored = True
    elif is_k_connected(g, 2):
        dec = decompose_q(g, 4)
        if not isinstance(dec, Case2):
            raise PreconditionError("graph is 2-connected but does not contract to a 3-connected quotient; no embedding is defined")
        cg = dec.contracted
        ct = cut_triple_weighted(cg)
        tail = tailored_embedding(cg.quotient, ct.split, ct.triple, seed=args.seed, size_bound=Fraction(cg.quotient.n))
        placed = place_contracted(cg, tail) or place_contracted(cg, tail, seed=args.seed, jitter=True)
        if placed is None:
            raise InternalError("could not place contracted paths in general position")
        emb = placed[0]
        tailored = True
    else:
        raise PreconditionError("the graph must be 2-connected (no cut node)")
    _emit(render_svg(g, emb, partition, tailored=tailored), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args: argparse.Namespace) -> int:
    g, p = load_instance(args)
    p.check_covers(g)
    cap = resolve_cap(args.cap)
    frontier = best_frontier(g, p, centered=args.centered, cap=cap)
    points = [
        {
            "imbalance": format_rational(pt.imbalance),
            "ratio": format_rational(pt.ratio),
            "V1": sorted(pt.witness.parts[0]),
            "V2": sorted(pt.witness.parts[1]),
        }
        for pt in frontier
    ]
    if args.check is not None:
        c_p, c_s = (Fraction(x) for x in args.check)
        doc = {"check": [format_rational(c_p), format_rational(c_s)], "admits": frontier_admits(frontier, c_p, c_s), "frontier": points}
    else:
        doc = points
    _emit(json.dumps(doc) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "fig1":
        if args.s is None or args.t is None:
            raise UsageError("fig1 needs --s and --t")
        if args.s < 1 or args.t < 0:
            raise UsageError("fig1 needs s >= 1 and t >= 0")
        g, p = gen_fig1(args.s, args.t)
    else:
        if args.n is None:
            raise UsageError(f"{args.kind} needs --n")
        if args.n < 4 or args.n % 2:
            raise UsageError("--n must be even and at least 4")
        g, p = gen_random(args.n, 2 if args.kind == "random2" else 3, args.seed)
    if args.format == "edgelist":
        edges, weights = dumps_edgelist(g, p)
        if args.weights_out:
            with open(args.weights_out, "w", encoding="utf-8") as fh:
                fh.write(weights)
            _emit(edges, args.out)
        else:
            _emit(edges + "# weights\n" + "".join("# " + line + "\n" for line in weights.splitlines()), args.out)
    else:
        _emit(dumps_instance(g, p), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # keep argparse's exit code 2 but a consistent prefix
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"gridcleave: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridcleave", description="Doubly balanced connected graph partitioning.")
    parser.add_argument("--version", action="version", version=f"gridcleave {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("input", help="instance file, or - for stdin")
        sp.add_argument("--format", choices=("json", "edgelist"), default="json")
        sp.add_argument("--weights", help="weights file for --format edgelist (lines 'id value')")
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("partition", help="compute a connected partition")
    add_input(sp)
    sp.add_argument("--mode", choices=("auto", "bcpi2", "bcpi3", "dbcp"), default="auto")
    sp.add_argument("--q", type=int, default=4, help="size-ratio parameter for the separation-pair solver")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--centered", action="store_true", help="use the general-weight bounds around p(V)/2")
    sp.add_argument("--terminals", type=int, nargs="+", help="u v (bcpi2) or u v w (bcpi3)")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("embed", help="render an embedding as SVG")
    add_input(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--with-partition", action="store_true", help="colour the computed partition")
    sp.add_argument("--tailored", action="store_true", help="use the tailored embedding even if a triangle exists")
    sp.add_argument("--centered", action="store_true")
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("oracle", help="exhaustive Pareto frontier")
    add_input(sp)
    sp.add_argument("--centered", action="store_true")
    sp.add_argument("--check", nargs=2, metavar=("C_P", "C_S"), help="report whether some partition meets both bounds")
    sp.add_argument("--cap", type=int, help="node cap for enumeration (default 16 or $GRIDCLEAVE_CAP)")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen", help="generate an instance")
    sp.add_argument("kind", choices=("fig1", "random2", "random3"))
    sp.add_argument("--s", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "edgelist"), default="json")
    sp.add_argument("--weights-out", help="with --format edgelist, write weights to this file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        if getattr(args, "check", None) is not None:
            try:
                [Fraction(x) for x in args.check]
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(f"--check values must be rationals: {exc}") from exc
        return args.func(args)
    except (GraphError, UsageError, json.JSONDecodeError) as exc:
        print(f"gridcleave: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"gridcleave: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CapExceeded as exc:
        print(f"gridcleave: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalError as exc:
        print(f"gridcleave: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
