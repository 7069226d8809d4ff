"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 a search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import combinatorics as comb
from . import generators as gen
from . import oracle
from .core import (
    InvalidInput,
    Partition,
    SizeLimitExceeded,
    count_all,
    enumerate_all,
    from_json,
    is_idempotent,
    make_partition,
    profile,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_blocks(text: str) -> Partition:
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
        if not sizes:
            raise ValueError("no block sizes given")
        return make_partition(sizes)
    except (ValueError, InvalidInput) as exc:
        raise argparse.ArgumentTypeError(f"invalid block list {text!r}: {exc}") from None


def budget_from(args) -> oracle.SearchBudget:
    return oracle.SearchBudget(
        max_closure=args.budget_closure,
        max_subsets=args.budget_subsets,
        time_limit=args.time_limit,
    )


def emit(obj, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
        return
    for key, value in _flatten(obj):
        out.write(f"{key}\t{value}\n")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
        return
    key = prefix.rstrip(".")
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            yield key, ",".join(map(str, obj))
        else:
            for k, v in enumerate(obj):
                yield from _flatten(v, f"{prefix}{k}.")
    else:
        yield key, obj


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def analyze_report(p: Partition) -> dict:
    prof = profile(p)
    ranks = comb.rank_and_idrank(p)
    return {
        "blocks": list(p.block_sizes),
        "m": p.m,
        "n": p.n,
        "uniform": p.is_uniform,
        "profile": {"mu": list(prof.mu), "nu": list(prof.nu)},
        "counts": {"T": count_all(p), "E": comb.idempotent_count(p)},
        "rank": ranks.rank,
        "idrank": ranks.idrank,
        "rho": ranks.rho,
        "mu1_eq_2": ranks.special_mu1_eq_2,
        "migs_count": comb.migs_count(p),
    }


def cmd_analyze(args) -> int:
    emit(analyze_report(args.blocks), args.format)
    return EXIT_OK


def cmd_generators(args) -> int:
    p = args.blocks
    if args.kind == "full":
        gens = gen.full_idempotent_generators(p)
    elif args.kind == "minimal":
        gens = gen.minimal_generating_set(p, gen.default_spec(p))
    else:
        gens = gen.rank_generating_set(p)
    elements = [dict(x.to_json(), idempotent=is_idempotent(x)) for x in gens]
    report = {
        "blocks": list(p.block_sizes),
        "kind": args.kind,
        "size": len(gens),
        "non_idempotent": sum(not e["idempotent"] for e in elements),
        "elements": elements,
    }
    emit(report, args.format)
    return EXIT_OK


def _check(checks: list, name: str, passed: bool, **detail):
    checks.append({"name": name, "passed": bool(passed), **detail})


def run_checks(p: Partition, level: str, budget: oracle.SearchBudget, seed: int, jobs: int = 1) -> list[dict]:
    checks: list[dict] = []
    ranks = comb.rank_and_idrank(p)
    S = oracle.idempotent_generated(p, budget)
    E = oracle.enumerate_idempotents(p, budget)
    _check(checks, "idempotent_count", len(E) == comb.idempotent_count(p),
           formula=comb.idempotent_count(p), enumerated=len(E))

    U = gen.minimal_generating_set(p, gen.default_spec(p))
    V = gen.rank_generating_set(p)
    _check(checks, "minimal_set_size", len(U) == ranks.idrank, size=len(U), idrank=ranks.idrank)
    _check(checks, "minimal_set_idempotent", all(is_idempotent(x) for x in U))
    _check(checks, "minimal_set_generates", oracle.generates(p, U, S, budget))
    _check(checks, "rank_set_size", len(V) == ranks.rank, size=len(V), rank=ranks.rank)
    non_idem = sum(not is_idempotent(x) for x in V)
    _check(checks, "rank_set_non_idempotents", non_idem == (1 if ranks.special_mu1_eq_2 else 0), count=non_idem)
    _check(checks, "rank_set_generates", oracle.generates(p, V, S, budget))
    _check(checks, "full_generators_generate", oracle.generates(p, gen.full_idempotent_generators(p), S, budget))

    alphabet = gen.full_idempotent_generators(p)
    bad = [str(e) for e in E if gen.factorize_idempotent(e, alphabet).evaluate() != e]
    _check(checks, "factorization_round_trip", not bad, idempotents=len(E), failures=bad[:5])

    m = p.m
    fbar_ok = all(
        f.fbar == tuple(range(1, m + 1)) or len(set(f.fbar)) < m for f in S
    )
    _check(checks, "fbar_in_singular_part", fbar_ok)

    if level == "exhaustive":
        idr = oracle.exhaustive_rank(p, True, budget, jobs=jobs)
        rk = oracle.exhaustive_rank(p, False, budget, jobs=jobs)
        _check(checks, "exhaustive_idrank", idr == ranks.idrank, found=idr, formula=ranks.idrank)
        _check(checks, "exhaustive_rank", rk == ranks.rank, found=rk, formula=ranks.rank)
        migs = oracle.exhaustive_migs(p, "raw", budget, jobs=jobs)
        _check(checks, "exhaustive_migs", len(migs) == comb.migs_count(p), found=len(migs),
               formula=comb.migs_count(p))
        rng = random.Random(seed)
        verdicts = [
            oracle.contains_minimal_subset(p, oracle.random_idempotent_generating_set(p, rng, budget), budget)
            for _ in range(5)
        ]
        _check(checks, "contains_minimal_subset", all(verdicts), samples=len(verdicts))
        for size in sorted(set(p.block_sizes)):
            q = gen.uniform_partition_of(p, size)
            inside = {gen.restrict_component(p, size, f) for f in oracle.component_elements(p, size, budget)}
            agree = all((f in inside) == oracle.uniform_membership(q, f)
                        for f in enumerate_all(q, cap=budget.max_closure))
            _check(checks, f"component_membership_size_{size}", agree)
    return checks


def cmd_verify(args) -> int:
    checks = run_checks(args.blocks, args.level, budget_from(args), args.seed, args.jobs)
    passed = all(c["passed"] for c in checks)
    if args.format == "json":
        emit({"blocks": list(args.blocks.block_sizes), "level": args.level, "passed": passed, "checks": checks}, "json")
    else:
        for c in checks:
            print(f"{c['name']}\t{'PASS' if c['passed'] else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_enumerate(args) -> int:
    p, budget = args.blocks, budget_from(args)
    if args.what == "idempotents":
        sys.stdout.write(oracle.enumerate_idempotents(p, budget).to_jsonl())
        return EXIT_OK
    result = oracle.exhaustive_migs(p, args.mode, budget, jobs=args.jobs)
    for s in result:
        print(json.dumps(s.to_json(), separators=(",", ":")))
    meta = {"mode": result.mode, "count": len(result), "size": result.size,
            "assumes_classification": result.assumes_classification, **result.metadata}
    print(json.dumps(meta), file=sys.stderr)
    return EXIT_OK


def cmd_factorize(args) -> int:
    p = args.blocks
    try:
        f = from_json(args.element)
    except (ValueError, InvalidInput) as exc:
        raise UsageError(f"cannot parse element: {exc}") from None
    if f.partition != p:
        raise UsageError(f"element is over {f.partition}, not {p}")
    if not is_idempotent(f):
        raise UsageError(f"{f} is not an idempotent")
    word = gen.factorize_idempotent(f)
    report = {
        "blocks": list(p.block_sizes),
        "word": list(word.letters),
        "length": len(word),
        "letters": [word.alphabet[k].to_json() for k in word.letters],
        "evaluates_to_input": word.evaluate() == f,
    }
    emit(report, args.format)
    return EXIT_OK if report["evaluates_to_input"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--blocks", type=parse_blocks, required=True,
                        help="comma-separated block sizes, e.g. 3,2,1 (sorted automatically)")
    common.add_argument("--format", choices=["json", "tsv"], default="json")
    common.add_argument("--budget-closure", type=int, default=oracle.DEFAULT_BUDGET.max_closure)
    common.add_argument("--budget-subsets", type=int, default=oracle.DEFAULT_BUDGET.max_subsets)
    common.add_argument("--time-limit", type=float, default=None, help="seconds")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="epart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="formula values for a partition")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generators", parents=[common], help="print a generating set")
    p.add_argument("--kind", choices=["full", "minimal", "rank"], default="minimal")
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("verify", parents=[common], help="cross-check formulas against brute force")
    p.add_argument("--level", choices=["fast", "exhaustive"], default="fast")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", parents=[common], help="stream idempotents or minimal generating sets")
    p.add_argument("--what", choices=["idempotents", "migs"], required=True)
    p.add_argument("--mode", choices=["raw", "structured"], default="raw")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("factorize", parents=[common], help="write an idempotent as a word in G1 u G2")
    p.add_argument("--element", required=True, help="transformation as JSON")
    p.set_defaults(func=cmd_factorize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1 or args.budget_closure < 1 or args.budget_subsets < 1:
        parser.error("budgets and --jobs must be positive")
    if args.command == "factorize" and args.element == "-":
        args.element = sys.stdin.read()
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"epart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (oracle.BudgetExceeded, SizeLimitExceeded) as exc:
        print(f"epart: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
