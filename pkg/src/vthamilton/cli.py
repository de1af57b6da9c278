"""Command line entry point: census runs, checks of graph6 files, graph generation."""

from __future__ import annotations

import argparse
import logging
import sys

from .census import FAMILIES, CensusConfig, GraphSpec, run_census
from .graph import Graph, GraphError, complement
from .graph6 import to_graph6


def _budget(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"budget must be positive, got {v}")
    return v


def _families(text: str) -> tuple[str, ...]:
    names = tuple(x for x in text.split(",") if x)
    bad = [x for x in names if x not in FAMILIES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown families {bad}; choose from {','.join(FAMILIES)}")
    return names


def _add_budgets(p: argparse.ArgumentParser):
    p.add_argument("--lemma-budget-ms", type=_budget, default=2000)
    p.add_argument("--procedure-budget-ms", type=_budget, default=5000)
    p.add_argument("--oracle-budget-ms", type=_budget, default=10000)
    p.add_argument("--jobs", type=_budget, default=1, help="worker processes")


def build_graph(family: str, params: list[str]) -> Graph:
    """``circulant N S...``, ``kneser N K``, ``cayley GROUP C...`` or ``complement FAMILY ...``."""
    if family == "complement":
        if not params:
            raise GraphError("complement needs an inner family")
        return complement(build_graph(params[0], params[1:]))
    try:
        if family == "circulant":
            n, *steps = map(int, params)
            return GraphSpec("circulant", (n, tuple(sorted(set(steps))))).build()
        if family == "kneser":
            n, k = map(int, params)
            return GraphSpec("kneser", (n, k)).build()
        if family == "cayley":
            name, *conn = params
            return GraphSpec("cayley", (name, tuple(sorted(set(map(int, conn)))))).build()
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad parameters for {family}: {' '.join(params)}") from exc
    raise GraphError(f"unknown family {family!r}")


def cmd_census(args) -> int:
    config = CensusConfig(
        families=args.families,
        max_n=args.max_n,
        lemma_budget_ms=args.lemma_budget_ms,
        procedure_budget_ms=args.procedure_budget_ms,
        oracle_budget_ms=args.oracle_budget_ms,
        jobs=args.jobs,
    )
    result = run_census(config, args.out_dir)
    print(f"{result.generated} specs, {len(result.records)} records, {len(result.filtered)} filtered "
          f"-> {args.out_dir}")
    return 0


def cmd_check(args) -> int:
    config = CensusConfig(
        families=(),
        max_n=args.max_n,
        files=(args.path,),
        lemma_budget_ms=args.lemma_budget_ms,
        procedure_budget_ms=args.procedure_budget_ms,
        oracle_budget_ms=args.oracle_budget_ms,
        jobs=args.jobs,
    )
    result = run_census(config, args.out_dir)
    if args.out_dir is None:
        sys.stdout.write(result.jsonl())
        for line in result.filtered:
            print(f"filtered {line}", file=sys.stderr)
    else:
        print(f"{len(result.records)} records, {len(result.filtered)} filtered -> {args.out_dir}")
    bad = [r.spec_id for r in result.records
           if r.procedure_outcome == "hamilton_cycle_found" and r.oracle_hamiltonicity == "absent"]
    return 1 if bad else 0


def cmd_gen(args) -> int:
    print(to_graph6(build_graph(args.family, args.params)))
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vthamilton",
                                     description="Hamilton cycles in odd-order vertex-transitive graphs")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="generate graphs, run every stage, write reports")
    p.add_argument("--families", type=_families, default=FAMILIES,
                   help=f"comma separated subset of {','.join(FAMILIES)}")
    p.add_argument("--max-n", type=int, default=21)
    p.add_argument("--out-dir", default="census-out")
    _add_budgets(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("check", help="run every stage on the graphs of a graph6 file")
    p.add_argument("path")
    p.add_argument("--max-n", type=int, default=32)
    p.add_argument("--out-dir", default=None, help="write report files instead of printing records")
    _add_budgets(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="print one generated graph in graph6",
                       epilog="examples: gen circulant 15 3 5 | gen kneser 7 2 | "
                              "gen cayley F21 1 2 3 | gen complement circulant 9 1")
    p.add_argument("family", choices=("circulant", "kneser", "cayley", "complement"))
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
