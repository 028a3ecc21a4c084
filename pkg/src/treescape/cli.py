"""Command line front end.

treescape build   constructs a move adjacency graph from a tree file
treescape verify  cross-checks the fast builder against all-pairs comparison
treescape bench   times container scaling on random inputs

Exit codes: 0 success, 1 verify mismatch, 2 unreadable or unparseable input,
3 mixed leaf label sets, 4 move/rootedness conflict, 5 verify refused (too
many trees for the quadratic check).
"""

import argparse
import math
import os
import random
import re
import sys
import time

from .afcontainer import AFContainer, Mode, read_snapshot, write_snapshot
from .canonical import decode_tree
from .errors import (
    CanonicalError,
    LabelSetError,
    ModeError,
    NewickError,
    SnapshotError,
)
from .graph import construct_nni_graph, construct_spr_graph, construct_tbr_graph
from .oracle import pairwise_graph, random_tree
from .tree import parse_newick

_TOKEN = re.compile(r"[(),;:\s]|[^(),;:\s]+")


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def _warn(message):
    print(f"warning: {message}", file=sys.stderr)


def _container_mode(mode, rooted):
    if mode == "tbr":
        return Mode.TBR
    return Mode.RSPR if rooted else Mode.USPR


def _load_taxa(path):
    """Name-to-label map from a two-column file; labels must be distinct
    positive integers."""
    table = {}
    used = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2:
                raise NewickError(f"{path}:{lineno}: expected two columns")
            name, value = parts
            try:
                label = int(value)
            except ValueError:
                raise NewickError(f"{path}:{lineno}: label {value!r} is not an integer") from None
            if label <= 0:
                raise NewickError(f"{path}:{lineno}: labels must be positive")
            if name in table:
                raise NewickError(f"{path}:{lineno}: taxon {name!r} repeated")
            if label in used:
                raise NewickError(f"{path}:{lineno}: label {label} repeated")
            table[name] = label
            used.add(label)
    return table


def _translate(line, taxa):
    return "".join(
        str(taxa[tok]) if tok in taxa else tok for tok in _TOKEN.findall(line)
    )


def _read_trees(path, *, rooted, lenient, taxa):
    """Parse a newline-delimited tree file: list of (lineno, Tree)."""
    out = []
    if path == "-":
        lines = sys.stdin.read().splitlines()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if taxa:
            line = _translate(line, taxa)
        try:
            tree = parse_newick(line, rooted=rooted, lenient=lenient)
        except NewickError as exc:
            raise NewickError(f"{path}:{lineno}: {exc}") from None
        out.append((lineno, tree))
    return out


def _construct(mode, trees):
    if mode == "spr":
        return construct_spr_graph(trees)
    if mode == "nni":
        return construct_nni_graph(trees)
    return construct_tbr_graph(trees)


def _write_tsv(path, mode, graph):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# treescape {mode} m={graph.n_vertices}\n")
        for u, v in graph.edges():
            fh.write(f"{u}\t{v}\n")


def _write_dot(path, graph, labeling):
    with open(path, "w", encoding="ascii") as fh:
        fh.write("graph G {\n")
        for v in range(graph.n_vertices):
            fh.write(f'  v{v} [label="{labeling.canonical[v].decode("ascii")}"];\n')
        for u, v in graph.edges():
            fh.write(f"  v{u} -- v{v};\n")
        fh.write("}\n")


def _write_vertices(out_path, linenos, labeling):
    path = os.path.splitext(out_path)[0] + ".vertices.tsv"
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# vertex\tline\tcanonical\n")
        for v, first in enumerate(labeling.first_input):
            canonical = labeling.canonical[v].decode("ascii")
            fh.write(f"{v}\t{linenos[first]}\t{canonical}\n")


def _cmd_build(args):
    if args.mode == "tbr" and args.rooted:
        return _fail(4, "tbr graphs are only defined for unrooted trees")
    taxa = _load_taxa(args.taxa) if args.taxa else None

    linenos = []
    trees = []
    if args.append:
        snap_mode, lines = read_snapshot(args.append)
        if snap_mode is not _container_mode(args.mode, args.rooted):
            return _fail(
                4,
                f"snapshot mode {snap_mode.value} does not fit "
                f"{'rooted' if args.rooted else 'unrooted'} {args.mode}",
            )
        for text in lines:
            linenos.append(0)
            trees.append(decode_tree(text))

    parsed = _read_trees(args.input, rooted=args.rooted, lenient=args.lenient, taxa=taxa)
    if not parsed and not trees:
        _warn(f"{args.input}: no trees")
    for lineno, tree in parsed:
        linenos.append(lineno)
        trees.append(tree)

    graph, labeling = _construct(args.mode, trees)
    for k in labeling.duplicates():
        if linenos[k]:
            first = linenos[labeling.first_input[labeling.vertex_of_input[k]]]
            where = f"line {first}" if first else "the snapshot"
            _warn(f"{args.input}:{linenos[k]}: duplicate of {where}")

    if args.format == "tsv":
        _write_tsv(args.out, args.mode, graph)
    else:
        _write_dot(args.out, graph, labeling)
    _write_vertices(args.out, linenos, labeling)
    if args.snapshot:
        write_snapshot(
            args.snapshot, _container_mode(args.mode, args.rooted), labeling.canonical
        )
    print(f"built {args.mode} graph: m={graph.n_vertices} edges={graph.edge_count}")
    return 0


def _cmd_verify(args):
    if args.mode == "tbr" and args.rooted:
        return _fail(4, "tbr graphs are only defined for unrooted trees")
    taxa = _load_taxa(args.taxa) if args.taxa else None
    parsed = _read_trees(args.input, rooted=args.rooted, lenient=args.lenient, taxa=taxa)
    if len(parsed) > args.max_m:
        return _fail(
            5, f"{len(parsed)} trees exceed --max-m {args.max_m} for the quadratic check"
        )
    trees = [tree for _, tree in parsed]

    graph, labeling = _construct(args.mode, trees)
    if args.mode == "spr":
        move = "rspr" if args.rooted else "uspr"
    else:
        move = args.mode
    slow_graph, slow_canon = pairwise_graph(trees, move)

    if labeling.canonical != slow_canon:
        return _fail(1, "verify mismatch: vertex sets differ")
    fast_edges = set(graph.edges())
    slow_edges = set(slow_graph.edges())
    if fast_edges != slow_edges:
        for edge in sorted(fast_edges - slow_edges):
            print(f"only fast: {edge}", file=sys.stderr)
        for edge in sorted(slow_edges - fast_edges):
            print(f"only pairwise: {edge}", file=sys.stderr)
        return _fail(1, "verify mismatch: edge sets differ")
    print(f"verify ok: m={graph.n_vertices} edges={graph.edge_count}")
    return 0


def _cmd_bench(args):
    if args.mode == "tbr" and args.rooted:
        return _fail(4, "tbr graphs are only defined for unrooted trees")
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        return _fail(2, f"bad --sizes {args.sizes!r}")
    if not sizes or min(sizes) < 4:
        return _fail(2, "--sizes needs integers of at least 4")
    rng = random.Random(args.seed)
    mode = _container_mode(args.mode, args.rooted)
    points = []
    for n in sizes:
        trees = [random_tree(n, rooted=args.rooted, rng=rng) for _ in range(args.m)]
        container = AFContainer(mode)
        t0 = time.perf_counter()
        for tree in trees:
            container.insert(tree)
        t1 = time.perf_counter()
        if args.mode == "nni":
            for tree in trees:
                container.nni_neighbors(tree)
        elif args.mode == "tbr":
            for tree in trees:
                container.tbr_neighbors(tree)
        else:
            for tree in trees:
                container.spr_neighbors(tree)
        t2 = time.perf_counter()
        total = t2 - t0
        points.append((n, total))
        print(
            f"n={n} m={args.m} insert={t1 - t0:.3f}s query={t2 - t1:.3f}s total={total:.3f}s"
        )
    if len(points) > 1:
        xs = [math.log(n) for n, _ in points]
        ys = [math.log(t) for _, t in points]
        mean_x = sum(xs) / len(xs)
        mean_y = sum(ys) / len(ys)
        slope = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / sum(
            (x - mean_x) ** 2 for x in xs
        )
        print(f"exponent={slope:.3f}")
    return 0


def _add_common(sub, *, with_input):
    if with_input:
        sub.add_argument("input", help="newline-delimited Newick tree file, - for stdin")
    sub.add_argument(
        "--mode", required=True, choices=("spr", "nni", "tbr"), help="move family"
    )
    rootedness = sub.add_mutually_exclusive_group(required=True)
    rootedness.add_argument("--rooted", action="store_true", help="trees are rooted")
    rootedness.add_argument(
        "--unrooted", dest="rooted", action="store_false", help="trees are unrooted"
    )
    if with_input:
        strictness = sub.add_mutually_exclusive_group()
        strictness.add_argument(
            "--strict",
            dest="lenient",
            action="store_false",
            default=False,
            help="reject branch lengths and internal labels (default)",
        )
        strictness.add_argument(
            "--lenient", action="store_true", help="skip branch lengths and internal labels"
        )
        sub.add_argument("--taxa", help="two-column taxon-name to integer-label file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="treescape",
        description="SPR, NNI, and TBR adjacency graphs over tree collections",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="construct an adjacency graph")
    _add_common(build, with_input=True)
    build.add_argument("--out", required=True, help="output graph path")
    build.add_argument(
        "--format", choices=("tsv", "dot"), default="tsv", help="output format"
    )
    build.add_argument("--append", metavar="SNAPSHOT", help="start from a saved container")
    build.add_argument(
        "--snapshot", metavar="SNAPSHOT", help="save the resulting container"
    )
    build.set_defaults(run=_cmd_build)

    verify = commands.add_parser(
        "verify", help="compare the indexed build against all-pairs comparison"
    )
    _add_common(verify, with_input=True)
    verify.add_argument(
        "--max-m", type=int, default=200, help="refuse more input trees than this"
    )
    verify.set_defaults(run=_cmd_verify)

    bench = commands.add_parser("bench", help="time container scaling on random trees")
    _add_common(bench, with_input=False)
    bench.add_argument("--seed", type=int, default=0, help="random seed")
    bench.add_argument("--m", type=int, default=200, help="trees per size")
    bench.add_argument("--sizes", default="64,128,256", help="comma-separated leaf counts")
    bench.set_defaults(run=_cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (NewickError, CanonicalError, SnapshotError) as exc:
        return _fail(2, str(exc))
    except LabelSetError as exc:
        return _fail(3, str(exc))
    except ModeError as exc:
        return _fail(4, str(exc))
    except OSError as exc:
        return _fail(2, str(exc))


if __name__ == "__main__":
    sys.exit(main())
