#!/usr/bin python3

import sys
import json
import argparse

from sources.bounds import bounds_report
from sources.constructions import (GENERATORS, construction_formula, generate_sum_tuples,
                                   tuples_to_matchings_F)
from sources.core import encode, load_instance, save_instance, validate_instance
from sources.errors import InstanceFormatError, InternalInvariantError, RainbowSeekError
from sources.finder import find_rainbow_constructive
from sources.logger import Logger
from sources.multilinear import ambient_dimension, rainbow_via_multilinear
from sources.probfield import (behrend_from_base_set, behrend_system, choose_prime, counting_probe,
                               family_report, probabilistic_f_construction, probability_probe,
                               span_suite)
from sources.repro import SUITES, run_suite
from sources.search import (SearchBudget, SearchStatus, StrongStatus, check_strong_property,
                            exact_value_search, find_rainbow)
from sources.utility import animate_search, pretty_print, timer_decorator

import warnings
warnings.filterwarnings("ignore")

logger = Logger("cli.log")

EXIT_OK, EXIT_FOUND, EXIT_INDETERMINATE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3, 4
EXIT_USAGE = 2

def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--seed", type=int, default=default(None), help="random seed, echoed into metadata")
    parser.add_argument("--threads", type=int, default=default(None), help="search worker threads")
    parser.add_argument("--budget-nodes", type=int, default=default(None), help="search node cap")
    parser.add_argument("--budget-ms", type=int, default=default(None), help="search time cap in milliseconds")
    parser.add_argument("--json", action="store_true", default=default(False), help="machine readable output")

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rainbowseek", description="Rainbow matchings in families of hypergraph matchings")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _global_options(p, suppress=True)
        return p

    p = add("generate", "write a construction to an instance file")
    p.add_argument("construction", choices=sorted(GENERATORS) + ["prob-f", "sum-tuple-F"])
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--n", type=int, help="coordinate count for sum-tuple-F")
    p.add_argument("--prime", type=int, help="relaxed field size for prob-f")
    p.add_argument("--behrend-method", default="auto", choices=["auto", "exhaustive", "greedy", "sphere"])
    p.add_argument("--out", help="output file, stdout when omitted")

    p = add("verify", "validate an instance and decide whether it has a rainbow matching")
    p.add_argument("file")
    p.add_argument("--strong", action="store_true", help="also check the strong property")

    p = add("find", "find a rainbow matching")
    p.add_argument("file")
    p.add_argument("--method", default="auto", choices=["auto", "exhaustive", "constructive", "algebraic"])
    p.add_argument("--s", type=int, help="rainbow size for the exhaustive method, defaults to t")

    p = add("exact", "exact maximum family size without a rainbow matching on a small universe")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--partite", action="store_true")
    p.add_argument("--cap", type=int, default=1, help="multiplicity cap per matching")

    p = add("bounds", "exact bounds table")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = add("prob-construct", "random r-partite family over F_P")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prime", type=int)
    group.add_argument("--paper-prime", action="store_true")
    p.add_argument("--behrend-method", default="auto", choices=["auto", "exhaustive", "greedy", "sphere"])
    p.add_argument("--out")

    p = add("probe", "toy-scale checks of the probabilistic construction")
    p.add_argument("kind", choices=["probability", "span", "counting"])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--prime", type=int, default=7)
    p.add_argument("--base-set", help="comma separated base set, otherwise built by --behrend-method")
    p.add_argument("--behrend-method", default="auto", choices=["auto", "exhaustive", "greedy", "sphere"])
    p.add_argument("--tuple-index", type=int, default=0)

    p = add("repro", "run a reproduction suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    return parser

def _budget(args) -> SearchBudget:
    return SearchBudget.default().override(args.budget_nodes, args.budget_ms, args.threads)

def _emit(args, report, text: str = None, color: str = "output"):
    if args.json:
        print(json.dumps(report.jsonify() if hasattr(report, "jsonify") else report, indent=2))
    else:
        pretty_print(text if text is not None else str(report), color=color)

def _write_instance(args, inst, note: str):
    if args.out:
        save_instance(inst, args.out)
    if args.json:
        print(json.dumps({"N": inst.N, "out": args.out, "metadata": inst.metadata}, indent=2))
    elif args.out:
        pretty_print(f"wrote {args.out}: N={inst.N} ({note})", color="success")
    else:
        print(encode(inst), end="")

def cmd_generate(args) -> int:
    if args.construction == "prob-f":
        inst, system = probabilistic_f_construction(args.r, args.t, args.prime, args.behrend_method, args.seed)
        _write_instance(args, inst, f"{family_report(inst)}")
    elif args.construction == "sum-tuple-F":
        n = args.n or args.t * (args.r - 1)
        inst = tuples_to_matchings_F(generate_sum_tuples(args.t, n))
        _write_instance(args, inst, f"sum tuples with n={n}")
    else:
        inst = GENERATORS[args.construction](args.r, args.t)
        formula = construction_formula(args.construction, args.r, args.t)
        _write_instance(args, inst, f"formula N={formula}")
    return EXIT_OK

def cmd_verify(args) -> int:
    inst = load_instance(args.file)
    validation = validate_instance(inst)
    if not validation.ok:
        _emit(args, {"validation": validation.jsonify()}, str(validation), "failure")
        return EXIT_INVALID
    if not args.json:
        animate_search(f"searching N={inst.N} matchings for a rainbow of size {inst.t}")
    outcome = find_rainbow(inst, inst.t, _budget(args))
    result = {"validation": validation.jsonify(), "search": outcome.jsonify()}
    if outcome.status == SearchStatus.FOUND:
        _emit(args, result, f"rainbow matching found: {outcome.certificate}", "failure")
        return EXIT_FOUND
    if outcome.status == SearchStatus.INDETERMINATE:
        _emit(args, result, f"search budget exhausted after {outcome.nodes_visited} nodes", "warning")
        return EXIT_INDETERMINATE
    if not args.strong:
        _emit(args, result, f"no rainbow matching of size {inst.t} among N={inst.N} ({outcome.nodes_visited} nodes)", "success")
        return EXIT_OK
    strong = check_strong_property(inst, _budget(args))
    result["strong"] = strong.jsonify()
    if strong.status == StrongStatus.HOLDS:
        _emit(args, result, f"no rainbow matching and {strong}", "success")
        return EXIT_OK
    if strong.status == StrongStatus.FAILS:
        _emit(args, result, str(strong), "failure")
        return EXIT_FOUND
    _emit(args, result, str(strong), "warning")
    return EXIT_INDETERMINATE

def _auto_method(inst) -> str:
    if inst.N >= (inst.t * inst.r + inst.t) ** inst.r:
        return "constructive"
    if inst.N > (inst.t - 1) * ambient_dimension(inst):
        return "algebraic"
    return "exhaustive"

def cmd_find(args) -> int:
    inst = load_instance(args.file)
    validation = validate_instance(inst)
    if not validation.ok:
        _emit(args, {"validation": validation.jsonify()}, str(validation), "failure")
        return EXIT_INVALID
    method = _auto_method(inst) if args.method == "auto" else args.method
    budget = _budget(args)
    if not args.json:
        animate_search(f"{method} search on N={inst.N}")
    if method == "constructive":
        outcome = find_rainbow_constructive(inst, budget)
    elif method == "algebraic":
        outcome = rainbow_via_multilinear(inst, budget, args.seed)
    else:
        outcome = find_rainbow(inst, args.s or inst.t, budget)
    _emit(args, outcome, str(outcome), "success" if outcome.found else "info")
    return EXIT_OK

def cmd_exact(args) -> int:
    result = exact_value_search(args.r, args.t, args.universe, args.partite, args.cap, _budget(args))
    _emit(args, result.report(), str(result))
    return EXIT_OK

def cmd_bounds(args) -> int:
    _emit(args, bounds_report(args.r, args.t))
    return EXIT_OK

def cmd_prob_construct(args) -> int:
    prime = None if args.paper_prime else args.prime
    if prime is None and not args.json:
        pretty_print(f"admissible prime {choose_prime(args.r, args.t).P}", color="status")
    inst, system = probabilistic_f_construction(args.r, args.t, prime, args.behrend_method, args.seed)
    if args.out:
        save_instance(inst, args.out)
    report = family_report(inst)
    if args.json:
        print(json.dumps({"family": report.jsonify(), "behrend": system.report().jsonify(), "out": args.out}, indent=2))
    else:
        pretty_print(str(system.report()), color="info")
        pretty_print(str(report), color="success")
    return EXIT_OK

def cmd_probe(args) -> int:
    if args.kind == "span":
        report = span_suite(args.t, args.r, args.prime, progress=not args.json)
    elif args.kind == "counting":
        report = counting_probe(args.t, args.r, args.tuple_index, args.prime)
    else:
        if args.base_set:
            system = behrend_from_base_set(args.prime, args.t, [int(a) for a in args.base_set.split(",")])
        else:
            system = behrend_system(args.prime, args.t, args.behrend_method)
        report = probability_probe(args.r, args.t, args.prime, system, args.tuple_index, progress=not args.json)
    _emit(args, report, str(report), "success" if report.passed() else "failure")
    return EXIT_OK if report.passed() else EXIT_FOUND

def cmd_repro(args) -> int:
    runner = run_suite if args.json else timer_decorator(run_suite)
    result = runner(args.suite, progress=not args.json)
    if args.json:
        print(json.dumps(result.jsonify(), indent=2))
    else:
        result.show()
    if not result.all_passed:
        logger.error(f"repro {args.suite} failing: {result.failing()}")
        if not args.json:
            pretty_print(f"failing criteria: {', '.join(result.failing())}", color="failure")
        return 1
    return EXIT_OK

COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "find": cmd_find,
    "exact": cmd_exact,
    "bounds": cmd_bounds,
    "prob-construct": cmd_prob_construct,
    "probe": cmd_probe,
    "repro": cmd_repro,
}

def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logger.info(f"rainbowseek {args.command} {vars(args)}")
    try:
        return COMMANDS[args.command](args)
    except InternalInvariantError:
        raise
    except (OSError, InstanceFormatError) as e:
        logger.error(f"{args.command}: {e}")
        pretty_print(f"cannot read instance: {e}", color="failure")
        return EXIT_IO
    except ValueError as e:
        logger.error(f"{args.command}: {e}")
        pretty_print(f"error: {e}", color="failure")
        return EXIT_USAGE
    except RainbowSeekError as e:
        logger.error(f"{args.command}: {e}")
        pretty_print(f"error: {e}", color="failure")
        return EXIT_USAGE

if __name__ == "__main__":
    sys.exit(main())
