"""Command line interface: ``graphcode <subcommand> ...``.

Artifacts go to standard output or ``-o``; statistics go to standard error.
Exit codes: 0 success or YES, 1 NO or mismatch, 2 parse error, 3 invariant
violation, 4 unmet precondition, 5 oracle budget exceeded.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import generators as gen
from .core import Bar, Graphcode, Presentation
from .engine import (COMPRESSED, UNCOMPRESSED, BatchReducer, compress, connected_components)
from .errors import (BudgetExceeded, DuplicateBars, InvariantError, ParseError,
                     PreconditionViolated)
from .intervals import decide_graphcode
from .oracle import (are_isomorphic, module_from_graphcode, module_from_presentation,
                     same_invariants)
from .present import minimize, presentation_from_graphcode
from .scc_io import (is_blank, parse_graphcode, parse_presentation, sniff, write_graphcode,
                     write_presentation)

EXIT_OK, EXIT_NO, EXIT_PARSE, EXIT_INVARIANT, EXIT_PRECONDITION, EXIT_BUDGET = range(6)


@dataclass
class RunStats:
    generators: int = 0
    relations: int = 0
    vertices: int = 0
    edges: int = 0
    uncompressed_vertices: int = 0
    components: int = 0
    column_additions: int = 0
    seconds: float = 0.0

    def line(self):
        fields = " ".join(f"{k}={v:.6f}" if isinstance(v, float) else f"{k}={v}"
                          for k, v in asdict(self).items())
        return f"stats {fields}"


# --------------------------------------------------------------------------
# input / output helpers

def _read(path):
    if path == "-":
        return sys.stdin.buffer.read().decode("utf-8"), "<stdin>"
    return Path(path).read_bytes().decode("utf-8"), path


def _load_presentation(path):
    text, src = _read(path)
    if is_blank(text):
        return Presentation()
    return parse_presentation(text, source=src)


def _load_graphcode(path):
    text, src = _read(path)
    if is_blank(text):
        return Graphcode()
    return parse_graphcode(text, source=src).validate()


def _load_any(path):
    """``("presentation" | "graphcode", object)`` by sniffing the header."""
    text, src = _read(path)
    if is_blank(text):
        return "presentation", Presentation()
    kind = sniff(text)
    if kind == "presentation":
        return kind, parse_presentation(text, source=src)
    return kind, parse_graphcode(text, source=src).validate()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _stats(stats: RunStats):
    print(stats.line(), file=sys.stderr)


def _build(p: Presentation, mode):
    red = BatchReducer(p)
    g = red.run(mode)
    return g, red


# --------------------------------------------------------------------------
# subcommands

def cmd_build(args):
    t0 = time.perf_counter()
    p = _load_presentation(args.input)
    g, red = _build(p, UNCOMPRESSED if args.uncompressed else COMPRESSED)
    if args.fully_compress:
        g = compress(g)
    _emit(write_graphcode(g), args.output)
    _stats(RunStats(len(p.generators), len(p.relations), len(g.vertices), len(g.edges),
                    red.uncompressed_vertices, len(connected_components(g)),
                    red.column_additions, time.perf_counter() - t0))
    return EXIT_OK


def cmd_components(args):
    t0 = time.perf_counter()
    g = _load_graphcode(args.input)
    parts = connected_components(g)
    out = Path(args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    for k, part in enumerate(parts):
        (out / f"component_{k}.gc").write_text(write_graphcode(part))
    _stats(RunStats(vertices=len(g.vertices), edges=len(g.edges), components=len(parts),
                    seconds=time.perf_counter() - t0))
    return EXIT_OK


def cmd_present(args):
    t0 = time.perf_counter()
    g = _load_graphcode(args.input)
    p = presentation_from_graphcode(g)
    if args.minimize:
        p = minimize(p)
    _emit(write_presentation(p), args.output)
    _stats(RunStats(len(p.generators), len(p.relations), len(g.vertices), len(g.edges),
                    seconds=time.perf_counter() - t0))
    return EXIT_OK


def format_decision(result) -> str:
    if result:
        lines = ["YES"]
        for iv in sorted(result.intervals, key=lambda iv: iv.slices):
            lines.append("interval")
            lines.extend(f"{h} {b} {d}" for h, b, d in iv.slices)
        return "\n".join(lines) + "\n"
    return f"NO\nheight={result.height} step={result.step}\n"


def cmd_intervals(args):
    t0 = time.perf_counter()
    kind, obj = _load_any(args.input)
    stats = RunStats()
    if kind == "presentation":
        g, red = _build(obj, UNCOMPRESSED)
        stats.generators, stats.relations = len(obj.generators), len(obj.relations)
        stats.column_additions = red.column_additions
        stats.uncompressed_vertices = red.uncompressed_vertices
    else:
        g = obj
    stats.vertices, stats.edges = len(g.vertices), len(g.edges)
    result = decide_graphcode(g)
    _emit(format_decision(result), args.output)
    stats.seconds = time.perf_counter() - t0
    _stats(stats)
    return EXIT_OK if result else EXIT_NO


def extend_graphcode(g: Graphcode, m: int, n: int) -> Graphcode:
    """The same module on the larger grid ``G(m, n)``.

    Bars that never die keep never dying, and the top slice is repeated
    identically on the new heights.
    """
    if m < g.m or n < g.n:
        raise ValueError("cannot shrink a graphcode")
    verts = [Bar(b, m + 1 if d == g.m + 1 else d, h) for b, d, h in g.vertices]
    edges = list(g.edges)
    below = [k for k, v in enumerate(verts) if v.h == g.n]
    for h in range(g.n + 1, n + 1):
        level = []
        for k in below:
            verts.append(Bar(verts[k].b, verts[k].d, h))
            edges.append((k, len(verts) - 1))
            level.append(len(verts) - 1)
        below = level
    return Graphcode(verts, edges, m, n)


def _module(kind, obj, m, n):
    if kind == "presentation":
        return module_from_presentation(Presentation(obj.generators, obj.relations, m, n))
    return module_from_graphcode(extend_graphcode(obj, m, n))


def cmd_oracle_compare(args):
    ka, a = _load_any(args.a)
    kb, b = _load_any(args.b)
    m, n = max(a.m, b.m), max(a.n, b.n)
    A, B = _module(ka, a, m, n), _module(kb, b, m, n)
    dims, ranks = same_invariants(A, B)
    print(f"dimension_function {'equal' if dims else 'differ'}")
    print(f"rank_invariant {'equal' if ranks else 'differ'}")
    ok = dims and ranks
    if args.no_iso:
        print("isomorphic skipped")
    elif ok:
        iso = are_isomorphic(A, B, seed=args.seed)
        print(f"isomorphic {'yes' if iso else 'no'}")
        ok = iso
    else:
        print("isomorphic no")
    return EXIT_OK if ok else EXIT_NO


def cmd_gen(args):
    rng = random.Random(args.seed)
    if args.kind == "presentation":
        text = write_presentation(gen.random_presentation(rng, args.m, args.n, args.max_gens, args.max_rels))
    elif args.kind == "graphcode":
        text = write_graphcode(gen.random_strict_graphcode(rng, args.m, args.n, args.max_bars))
    elif args.kind == "staircase":
        ivs, m, n = gen.random_staircase_sum(rng, args.m, args.n, args.max_intervals)
        eta = gen.staircase_eta(ivs, m, n)
        gen.scramble(eta, rng, args.steps)
        text = write_graphcode(eta.to_graphcode())
    elif args.kind == "blocksum":
        p, _parts = gen.block_sum(rng, args.k, m=args.m, n=args.n,
                                  max_gens=args.max_gens, max_rels=args.max_rels)
        text = write_presentation(p)
    else:
        text = write_presentation(gen.scaling_family(args.size))
    _emit(text, args.output)
    return EXIT_OK


def cmd_stats(args):
    t0 = time.perf_counter()
    kind, obj = _load_any(args.input)
    if kind == "presentation":
        g, red = _build(obj, COMPRESSED)
        stats = RunStats(len(obj.generators), len(obj.relations), len(g.vertices), len(g.edges),
                         red.uncompressed_vertices, len(connected_components(g)),
                         red.column_additions)
    else:
        stats = RunStats(vertices=len(obj.vertices), edges=len(obj.edges),
                         components=len(connected_components(obj)))
    stats.seconds = time.perf_counter() - t0
    _stats(stats)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="graphcode", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def io(p, output_help="output file (default: standard output)"):
        p.add_argument("input", help="input file, or - for standard input")
        p.add_argument("-o", "--output", help=output_help)

    p = sub.add_parser("build", help="presentation -> graphcode")
    io(p)
    p.add_argument("--uncompressed", action="store_true", help="one vertex per bar per height")
    p.add_argument("--fully-compress", action="store_true", help="also remove superfluous vertices")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("components", help="split a graphcode into weak components")
    io(p, "output directory (default: current directory)")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("present", help="graphcode -> presentation")
    io(p)
    p.add_argument("--minimize", action="store_true", help="cancel same-grade pairs")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("intervals", help="decide interval-decomposability")
    io(p)
    p.set_defaults(func=cmd_intervals)

    p = sub.add_parser("oracle", help="brute-force module comparisons")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    c = osub.add_parser("compare", help="compare the modules of two files")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--no-iso", action="store_true", help="skip the isomorphism search")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("gen", help="random or synthetic instances")
    p.add_argument("kind", choices=["presentation", "graphcode", "staircase", "blocksum", "scaling"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("-m", type=int, default=None, help="grid width")
    p.add_argument("-n", type=int, default=None, help="grid height")
    p.add_argument("--max-gens", type=int, default=12)
    p.add_argument("--max-rels", type=int, default=16)
    p.add_argument("--max-bars", type=int, default=4)
    p.add_argument("--max-intervals", type=int, default=6, help="summands for staircase sums")
    p.add_argument("--steps", type=int, default=20, help="scramble steps for staircase sums")
    p.add_argument("-k", type=int, default=3, help="summands for blocksum")
    p.add_argument("--size", type=int, default=500, help="size of the scaling family")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="print run statistics for a file")
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (DuplicateBars, PreconditionViolated) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FileNotFoundError, IsADirectoryError, UnicodeDecodeError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
