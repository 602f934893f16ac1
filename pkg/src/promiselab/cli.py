"""Command-line entry point.

One verb per invocation: eval, solve, reduce, check, compile, simulate, vv,
campaign, hierarchy.  Formulas are accepted inline (``--in``) or from a file
(``--file``); seeds are mandatory wherever randomness is involved, so
identical invocations produce identical output.  Exit status: 0 success,
1 property violation or FAIL verdict, 2 usage/parse error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys

from .circuits import compile_sigma2, compile_uval2, parse_circuit
from .errors import (
    CapExceeded, LevelMismatch, ParseError, PathCapExceeded, PromiseLabError,
    ShapeError, UnknownRule,
)
from .expr import Family, evaluate, parse_expr, print_expr
from .harness import (
    CAMPAIGNS, emit_hierarchy_dot, full_campaign, render_report,
    verify_hierarchy_witnesses, verify_rule_exhaustive,
)
from .isolation import vv_decide
from .oracles import DEFAULT_PATH_CAP, MACHINES, run_adversarial
from .reductions import DEFAULT_REGISTRY, apply_rule, check_rule
from .semantics import ProblemId, qbf_value, solve

USAGE_ERROR, FAIL, CAP = 2, 1, 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="promiselab",
        description="promise-problem laboratory: evaluate, solve, reduce, compile, simulate")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_input(p, what="family text"):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--in", dest="inline", metavar="TEXT", help=what)
        group.add_argument("--file", dest="path", metavar="FILE", help=f"read {what} from a file")

    p = sub.add_parser("eval", help="evaluate a family at one assignment")
    add_input(p)
    p.add_argument("--assign", required=True,
                   help="per-block bit strings joined by '/', e.g. 10/01")

    p = sub.add_parser("solve", help="exact promise value of a problem on a family")
    add_input(p)
    p.add_argument("--problem", required=True, help="e.g. SAT, UVAL, MAXVAL, USAT2")
    p.add_argument("--cap", type=int, default=None, help="assignment cap override")

    p = sub.add_parser("reduce", help="apply a named reduction transform")
    add_input(p, "family text (or a bit string for pi1_to_uval)")
    p.add_argument("--rule", required=True)

    p = sub.add_parser("check", help="check a rule on one instance or exhaustively")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--in", dest="inline", metavar="TEXT")
    group.add_argument("--file", dest="path", metavar="FILE")
    group.add_argument("--exhaustive-m", dest="exhaustive_m", type=int, metavar="M")
    p.add_argument("--rule", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("compile", help="compile an oracle-gate circuit at a concrete input")
    add_input(p, "circuit text")
    p.add_argument("--target", choices=("sigma2", "uval2"), required=True)
    p.add_argument("--alpha", required=True, help="input bits, e.g. 10")

    p = sub.add_parser("simulate", help="run an oracle machine under the adversary")
    add_input(p)
    p.add_argument("--machine", choices=sorted(MACHINES), required=True)
    p.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP)

    p = sub.add_parser("vv", help="randomized unique-sat decision")
    add_input(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--k-range", default=None, help="override, e.g. 2:4")

    p = sub.add_parser("campaign", help="run verification campaigns")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--suite", action="append", choices=sorted(CAMPAIGNS),
                   help="restrict to named suites (repeatable; default: all)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--counterexamples", metavar="DIR", default=None,
                   help="write replayable counterexample files here on failure")

    p = sub.add_parser("hierarchy", help="emit the verified containment diagram as DOT")
    p.add_argument("--dot-out", default=None, help="output file (default: stdout)")
    p.add_argument("--verify-m", type=int, default=2,
                   help="verify witnesses exhaustively at this width (0 skips)")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _read_text(args) -> str:
    if getattr(args, "inline", None) is not None:
        return args.inline
    with open(args.path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_assignment(text: str) -> tuple[tuple[int, ...], ...]:
    blocks = text.split("/")
    out = []
    for blk in blocks:
        blk = blk.strip()
        if not all(c in "01" for c in blk):
            raise ParseError(f"assignment block {blk!r} is not a bit string")
        out.append(tuple(int(c) for c in blk))
    return tuple(out)


def _parse_k_range(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ParseError(f"--k-range wants lo:hi, got {text!r}") from None


def _run(args, out) -> int:
    if args.verb == "eval":
        f = parse_expr(_read_text(args))
        print(evaluate(f, _parse_assignment(args.assign)), file=out)
        return 0

    if args.verb == "solve":
        f = parse_expr(_read_text(args))
        print(solve(ProblemId.parse(args.problem), f, cap=args.cap), file=out)
        return 0

    if args.verb == "reduce":
        text = _read_text(args)
        rule = DEFAULT_REGISTRY.rule(args.rule)
        instance = text if rule.source is None else parse_expr(text)
        print(print_expr(apply_rule(args.rule, instance)), file=out)
        return 0

    if args.verb == "check":
        if args.exhaustive_m is not None:
            verdict = verify_rule_exhaustive(args.rule, args.exhaustive_m, jobs=args.jobs)
            print(verdict.report_line(), file=out)
            if verdict.counterexample:
                print(verdict.counterexample, file=out)
            return 0 if verdict.ok else FAIL
        rule = DEFAULT_REGISTRY.rule(args.rule)
        text = _read_text(args)
        instance = text if rule.source is None else parse_expr(text)
        result = check_rule(rule, instance)
        print(result, file=out)
        return 0 if result.passed else FAIL

    if args.verb == "compile":
        circuit = parse_circuit(_read_text(args))
        alpha = tuple(int(c) for c in args.alpha.strip())
        if args.target == "sigma2":
            compiled = compile_sigma2(circuit, alpha)
            print(print_expr(compiled.family), file=out)
            print(f"layout x=1..{compiled.x_width} "
                  f"y={compiled.x_width + 1}..{compiled.x_width + compiled.y_width} "
                  f"z-width={compiled.z_width}", file=out)
        else:
            compiled = compile_uval2(circuit, alpha)
            print(print_expr(compiled.family), file=out)
            print(f"layout x=1..{compiled.x_width} u={compiled.u_index} "
                  f"s={compiled.s_range[0]}..{compiled.s_range[1]} "
                  f"t={compiled.t_range[0]}..{compiled.t_range[1]} "
                  f"tails={compiled.s_tail_width}+{compiled.t_tail_width}", file=out)
        return 0

    if args.verb == "simulate":
        f = parse_expr(_read_text(args))
        tree = run_adversarial(args.machine, f, path_cap=args.path_cap)
        for i, transcript in enumerate(tree.transcripts):
            if i:
                print("", file=out)
            print(transcript.dump(), file=out)
        print(f"LEAVES {len(tree.transcripts)} MAX_CALLS {tree.max_calls}", file=out)
        return 0

    if args.verb == "vv":
        f = parse_expr(_read_text(args))
        trials = args.trials if args.trials is not None else 24 * f.widths[0]
        rng = random.Random(args.seed)
        print(vv_decide(f, rng, trials, k_range=_parse_k_range(args.k_range)), file=out)
        return 0

    if args.verb == "campaign":
        verdicts = full_campaign(seed=args.seed, jobs=args.jobs, suites=args.suite)
        print(render_report(verdicts), file=out)
        failures = [v for v in verdicts if not v.ok]
        if failures and args.counterexamples:
            import os
            os.makedirs(args.counterexamples, exist_ok=True)
            for v in failures:
                safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in v.name)
                with open(os.path.join(args.counterexamples, f"counterexample_{safe}.txt"),
                          "w", encoding="utf-8") as fh:
                    fh.write((v.counterexample or "no counterexample recorded") + "\n")
        return 0 if not failures else FAIL

    if args.verb == "hierarchy":
        verified = set()
        if args.verify_m:
            verified, _ = verify_hierarchy_witnesses(m=args.verify_m, jobs=args.jobs)
        text = emit_hierarchy_dot(verified=verified, out=args.dot_out)
        if not args.dot_out:
            print(text, end="", file=out)
        return 0

    raise AssertionError(f"unhandled verb {args.verb}")


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    try:
        return _run(args, out)
    except (CapExceeded, PathCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAP
    except (ParseError, ShapeError, LevelMismatch, UnknownRule, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except PromiseLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    raise SystemExit(main())
