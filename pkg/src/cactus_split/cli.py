"""Command-line interface: count, sample, splittree and oracle subcommands.

Exit codes: 0 success, 2 invalid flags or unreadable input, 3 grammar
problem, 4 resource guard, 5 zero count at the requested size, 6 input is not
a cactus, 7 invalid split tree.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import __version__
from .dot import graph_to_dot, tree_to_dot
from .engine import counts, evaluate
from .errors import (
    GrammarSyntaxError,
    GrammarValidationError,
    IllFoundedError,
    InvalidTreeError,
    NotACactusError,
    ResourceError,
    SemanticsError,
    StructureError,
    ZeroCountError,
)
from .grammar import OmegaSpec, parse_grammar, root_valuation
from .graphs import cycle_lengths, format_edge_list, is_cactus, is_connected, parse_edge_list
from .oracle import GROUPS, burnside_orbits, census, enumerate_structures
from .sampler import (
    RNG_ALGORITHM,
    make_rng,
    sample_labeled_free_rooted,
    sample_plane_rooted,
    structure_to_graph,
)
from .splittree import (
    accessibility,
    cactus_to_split_tree,
    detect_form,
    format_tree,
    parse_tree,
    split_tree_to_cactus,
    validate_cactus_tree,
)
from .templates import FamilySpec, build

EXIT_FLAGS = 2
EXIT_GRAMMAR = 3
EXIT_RESOURCE = 4
EXIT_ZERO = 5
EXIT_NOT_CACTUS = 6
EXIT_INVALID_TREE = 7

INDEXING = "coefficient n counts objects with n vertices (atoms)"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _omega(text: str) -> OmegaSpec:
    try:
        om = OmegaSpec.parse(text)
    except (GrammarSyntaxError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"bad omega {text!r}: {exc}") from exc
    probs = om.problems()
    if probs:
        raise argparse.ArgumentTypeError("; ".join(probs))
    return om


def _yes_no(text: str) -> bool:
    if text.lower() in ("yes", "y", "true", "1"):
        return True
    if text.lower() in ("no", "n", "false", "0"):
        return False
    raise argparse.ArgumentTypeError("expected yes or no")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_FLAGS) from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_family(p: argparse.ArgumentParser, omega_default: str | None = None) -> None:
    p.add_argument("--embedding", choices=("plane", "free"), default="plane")
    p.add_argument("--rooted", action="store_true", help="rooted family (default unrooted)")
    p.add_argument("--labeled", type=_yes_no, default=False, metavar="yes|no")
    p.add_argument("--omega", type=_omega, default=omega_default, metavar="SPEC", help='e.g. "{5}", "{3,5}", ">=3"')


def _family(args) -> FamilySpec:
    if args.omega is None:
        raise CliError("--omega is required", EXIT_FLAGS)
    return FamilySpec(
        args.embedding,
        "rooted" if args.rooted else "unrooted",
        "labeled" if args.labeled else "unlabeled",
        args.omega,
        getattr(args, "form", "template"),
    )


# ---------------------------------------------------------------------------
# count


def cmd_count(args) -> int:
    if args.grammar:
        system = parse_grammar(_read(args.grammar))
        family = f"grammar:{args.grammar}"
    else:
        spec = _family(args)
        system = build(spec)
        family = f"{spec.name} ({spec.form})"
    env = evaluate(system, args.terms)
    seq = counts(env)
    gmin = root_valuation(system)
    meta = {
        "family": family,
        "omega": system.omega.text() if system.omega is not None else None,
        "mode": system.mode,
        "indexing": INDEXING,
        "grammar_min_size": None if gmin == float("inf") else int(gmin),
        "family_min_size": 1,
    }
    if args.format == "json":
        _write(json.dumps({**meta, "counts": seq}, indent=2) + "\n", args.output)
    else:
        lines = [f"# {k}: {v}" for k, v in meta.items()]
        lines.append("n,count")
        lines += [f"{n},{c}" for n, c in enumerate(seq)]
        _write("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args) -> int:
    spec = _family(args)
    if not args.rooted:
        raise CliError("only rooted families can be sampled", EXIT_FLAGS)
    rng = make_rng(args.seed)
    if spec.embedding == "plane" and not args.labeled:
        term = sample_plane_rooted(spec.omega, args.size, rng)
    elif spec.embedding == "free" and args.labeled:
        term = sample_labeled_free_rooted(spec.omega, args.size, rng)
    else:
        raise CliError("sampling supports plane rooted unlabeled and free rooted labeled families", EXIT_FLAGS)
    g = structure_to_graph(term)
    root = term.tag if args.labeled else 0
    meta = {
        "family": spec.name,
        "omega": spec.omega.text(),
        "n": args.size,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "root": root,
        "cycles": len(cycle_lengths(g)),
    }
    if args.format == "dot":
        out = graph_to_dot(g, meta, root=root)
    else:
        out = "".join(f"# {k}: {v}\n" for k, v in meta.items()) + format_edge_list(g)
    _write(out, args.output)
    return 0


# ---------------------------------------------------------------------------
# splittree


def _load_graph(path: str):
    try:
        return parse_edge_list(_read(path))
    except StructureError as exc:
        raise CliError(f"{path}: {exc}", EXIT_FLAGS) from exc


def _load_tree(path: str):
    try:
        return parse_tree(_read(path))
    except StructureError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID_TREE) from exc


def cmd_splittree(args) -> int:
    if args.action == "decompose":
        g = _load_graph(args.input)
        if not is_connected(g):
            raise CliError("input graph is not connected", EXIT_NOT_CACTUS)
        check = is_cactus(g)
        if not check:
            raise CliError(f"input is not a cactus: {check.reason}", EXIT_NOT_CACTUS)
        t = cactus_to_split_tree(g, args.form or "reduced")
        fmt = args.format or "dot"
        if fmt == "dot":
            _write(tree_to_dot(t, {"form": args.form or "reduced"}), args.output)
        elif fmt == "glt":
            _write(format_tree(t), args.output)
        else:
            raise CliError("decompose writes dot or glt", EXIT_FLAGS)
        return 0

    t = _load_tree(args.input)
    if args.action == "validate":
        diags = validate_cactus_tree(t, args.form)
        form = args.form or detect_form(t)
        if diags:
            _write("".join(f"INVALID ({form}): {d}\n" for d in diags), args.output)
            return EXIT_INVALID_TREE
        _write(f"VALID ({form})\n", args.output)
        return 0
    if args.action == "compose":
        g = split_tree_to_cactus(t, args.form)
    else:  # accessibility
        g = accessibility(t)
    fmt = args.format or "edgelist"
    if fmt == "dot":
        _write(graph_to_dot(g), args.output)
    elif fmt == "edgelist":
        _write(format_edge_list(g), args.output)
    else:
        raise CliError(f"{args.action} writes dot or edgelist", EXIT_FLAGS)
    return 0


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    if args.action == "census":
        res = census(args.omega, args.max_n, rooted=args.rooted)
        _write(res.to_csv(), args.output)
    elif args.action == "structures":
        args.labeled = False
        args.form = "simplified" if args.rooted else "template"
        spec = _family(args)
        if not args.rooted:
            raise CliError("structure enumeration needs a rooted family", EXIT_FLAGS)
        system = build(spec)
        rows = ["n,count"]
        rows += [f"{n},{len(enumerate_structures(system, n))}" for n in range(args.max_n + 1)]
        _write("\n".join(rows) + "\n", args.output)
    else:
        if args.m is None or args.q is None:
            raise CliError("burnside needs --m and --q", EXIT_FLAGS)
        _write(f"{burnside_orbits(args.m, args.q, args.group)}\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cactus-split", description="Cactus graph enumeration and split trees.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="print a counting sequence")
    _add_family(c)
    c.add_argument("--form", choices=("template", "simplified"), default="template")
    c.add_argument("--terms", type=_nonneg, default=20, metavar="N", help="compute coefficients 0..N")
    c.add_argument("--grammar", metavar="FILE", help="grammar file (overrides family flags)")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_count)

    s = sub.add_parser("sample", help="draw a uniform random cactus")
    _add_family(s)
    s.add_argument("--size", type=_nonneg, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("dot", "edgelist"), default="edgelist")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sample)

    t = sub.add_parser("splittree", help="split-tree operations")
    t.add_argument("action", choices=("decompose", "compose", "validate", "accessibility"))
    t.add_argument("input", help="edge list (decompose) or tree file; - for stdin")
    t.add_argument("--form", choices=("reduced", "simplified"))
    t.add_argument("--format", choices=("dot", "glt", "edgelist"))
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_splittree)

    o = sub.add_parser("oracle", help="brute-force reference values")
    o.add_argument("action", choices=("census", "structures", "burnside"))
    _add_family(o, omega_default=">=2")
    o.add_argument("--max-n", type=_nonneg, default=6)
    o.add_argument("--m", type=_nonneg)
    o.add_argument("--q", type=_nonneg)
    o.add_argument("--group", choices=GROUPS, default="cyclic")
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (GrammarSyntaxError, GrammarValidationError, IllFoundedError, SemanticsError) as exc:
        print(f"grammar error: {exc}", file=sys.stderr)
        return EXIT_GRAMMAR
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ZeroCountError as exc:
        near = ", ".join(map(str, exc.nearest)) or "none"
        print(f"zero count: {exc}; nearest realizable sizes: {near}", file=sys.stderr)
        return EXIT_ZERO
    except NotACactusError as exc:
        print(f"not a cactus: {exc}", file=sys.stderr)
        return EXIT_NOT_CACTUS
    except InvalidTreeError as exc:
        print(f"invalid split tree: {exc}", file=sys.stderr)
        return EXIT_INVALID_TREE


def data_path(name: str) -> str:
    """Path of a bundled data file such as ``pu5.gram``."""
    return str(resources.files("cactus_split") / "data" / name)


if __name__ == "__main__":
    sys.exit(main())
