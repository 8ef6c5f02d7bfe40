"""Command-line entry point: ``cecac solve|verify|generate|bench|classify``.

Exit codes: 0 feasible / ok, 1 infeasible / rejected, 2 input error,
3 solver not applicable.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bench
from .generator import GeneratorParams, random_instance
from .io import (
    dumps_instance,
    read_committee,
    read_instance,
    solution_to_dict,
)
from .model import (
    DEFAULT_FPT_CAP,
    SOLVERS,
    CecacError,
    NotApplicable,
    UnknownCandidate,
    check_solution,
    classify_instance,
)
from .constraints import render_constraint
from .reductions import (
    Graph,
    clique_to_cecac_single_attr,
    clique_to_cecac_two_attrs,
    independent_set_to_cecac,
)
from .solve import AUTO, solve

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_NA = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _fail(message: str, code: int = EXIT_INPUT) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    start = time.perf_counter()
    try:
        sol = solve(inst, args.solver, args.fpt_cap)
    except NotApplicable as exc:
        return _fail(f"not applicable: {exc}", EXIT_NA)
    doc = solution_to_dict(sol, (time.perf_counter() - start) * 1000)
    if args.json:
        print(json.dumps(doc))
    elif sol.feasible:
        print(f"feasible  profit={sol.profit}  solver={sol.solver}")
        print("committee: " + " ".join(doc["committee"]))
    else:
        best = "none" if sol.optimum is None else sol.optimum
        print(f"infeasible  best={best}  p={inst.p}  solver={sol.solver}")
    return EXIT_OK if sol.feasible else EXIT_NO


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    committee = read_committee(args.solution)
    try:
        verdict = check_solution(inst, committee)
    except UnknownCandidate as exc:
        return _fail(str(exc))
    if not verdict.size_ok:
        print(f"size mismatch: {len(committee)} members listed, k = {inst.k}")
    for r in verdict.violated:
        print(f"violated: {render_constraint(r)}")
    if not verdict.profit_ok:
        print(f"profit {verdict.profit} below p = {inst.p}")
    if verdict.ok:
        print(f"ok  profit={verdict.profit}")
    return EXIT_OK if verdict.ok else EXIT_NO


_RANDOM_CLASSES = {"tree": GeneratorParams.tree, "chain": GeneratorParams.chain,
                   "fpt": GeneratorParams.fpt}


def cmd_generate(args) -> int:
    if args.mode == "random":
        if args.graph:
            return _fail("--graph is only used by the graph reductions")
        params = _RANDOM_CLASSES[args.cls](m=args.m, l=args.l, d=args.d, k=args.k, seed=args.seed)
        inst = random_instance(params)
    else:
        if not args.graph or args.kprime is None:
            return _fail(f"--mode {args.mode} needs --graph and --kprime")
        graph = Graph.read(args.graph)
        build = {"clique2": clique_to_cecac_two_attrs, "clique1": clique_to_cecac_single_attr,
                 "indset": independent_set_to_cecac}[args.mode]
        inst = build(graph, args.kprime)
    text = dumps_instance(inst)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            return _fail(f"cannot write {args.out}: {exc.strerror}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    text = bench.to_csv(bench.run_suite(args.suite, args.trials, args.seed))
    if args.csv:
        try:
            Path(args.csv).write_text(text)
        except OSError as exc:
            return _fail(f"cannot write {args.csv}: {exc.strerror}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classify(args) -> int:
    inst = read_instance(args.instance)
    desc, tag = classify_instance(inst, args.fpt_cap)
    a, n, length = desc.as_tuple()
    print(json.dumps({"max_attrs_per_candidate": a, "max_attr_occurrence": n,
                      "max_constraint_length": length, "solver": tag}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cecac", description="Committee selection under attribute constraints.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--solver", choices=[AUTO, *SOLVERS], default=AUTO)
    p.add_argument("--json", action="store_true", help="print the solution document")
    p.add_argument("--fpt-cap", type=int, default=DEFAULT_FPT_CAP)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a committee against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a random or reduced instance")
    p.add_argument("--mode", choices=["random", "clique2", "clique1", "indset"], default="random")
    p.add_argument("--graph")
    p.add_argument("--kprime", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--class", dest="cls", choices=sorted(_RANDOM_CLASSES), default="tree")
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--l", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", choices=["dichotomy", "scaling"], default="dichotomy")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("classify", help="report the structural class of an instance")
    p.add_argument("instance")
    p.add_argument("--fpt-cap", type=int, default=DEFAULT_FPT_CAP)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    try:
        return args.func(args)
    except CecacError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
