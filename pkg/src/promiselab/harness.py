"""Verification campaigns over every module, plus the hierarchy diagram.

A campaign enumerates instances (exhaustively at small widths, or seeded
randomly), runs the relevant checks through the brute-force semantics, and
aggregates a :class:`Verdict` per check: pass/fail counts, wall time, and a
standalone-replayable first counterexample.  The report format is one line
per check, ``CHECK <name> pass=<n> fail=<n> time=<ms>``.

Seed derivation: every randomized sub-check builds ``random.Random`` from the
master seed by the documented arithmetic ``seed * 1000003 + salt`` so runs
are reproducible and independent of execution order.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .circuits import (
    OracleCircuit, Gate, SatGate, compile_sigma2, compile_uval2,
    eval_circuit, format_circuit, slot_solution_profile, validity_parts,
)
from .errors import CapExceeded, IncompleteRegistry
from .expr import (
    And, Const, Expr, Family, Not, Or, Var, from_truth_table, print_expr,
)
from .faults import KNOWN_FAULTS, inject
from .isolation import (
    default_trials, isolation_frequency, vv_decide, vv_possible_outputs,
)
from .oracles import run_adversarial
from .reductions import (
    DEFAULT_REGISTRY, check_rule, check_uval_intersection, check_val_intersection,
)
from .semantics import (
    ProblemId, ProblemKind, PromiseValue, Quantifier,
    first_block_solution_set, inner_values, qbf_value, solve,
)

__all__ = [
    "Verdict", "enumerate_truth_tables", "enumerate_families",
    "random_family", "random_circuit", "verify_rule_exhaustive",
    "verify_rule_random", "CAMPAIGNS", "full_campaign", "render_report",
    "campaign_rules", "campaign_gadget", "campaign_lifts", "campaign_compiler",
    "campaign_intersections", "campaign_machines", "campaign_vv",
    "campaign_hierarchy", "campaign_mutations",
    "HIERARCHY_NODES", "hierarchy_edges", "emit_hierarchy_dot",
    "duality_automorphism_ok", "verify_hierarchy_witnesses",
]


@dataclass
class Verdict:
    name: str
    passed: int = 0
    failed: int = 0
    time_ms: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, counterexample: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = counterexample

    def report_line(self) -> str:
        return f"CHECK {self.name} pass={self.passed} fail={self.failed} time={self.time_ms}"


class _Timer:
    def __init__(self, verdict: Verdict):
        self.verdict = verdict

    def __enter__(self):
        self.start = time.perf_counter()
        return self.verdict

    def __exit__(self, *exc):
        self.verdict.time_ms = int((time.perf_counter() - self.start) * 1000)


# ---------------------------------------------------------------------------
# instance generation

def enumerate_truth_tables(m: int) -> Iterator[Family]:
    """One canonical family per boolean function of m variables, in
    lexicographic table order.  Refused above m = 4 (2^16 tables)."""
    if m > 4:
        raise CapExceeded(f"2^(2^{m}) truth tables is past the enumeration bound (m <= 4)")
    yield from enumerate_families((m,))


def enumerate_families(widths: Sequence[int]) -> Iterator[Family]:
    """All functions over the given block widths, canonical disjunctive form."""
    widths = tuple(widths)
    total = sum(widths)
    if (1 << total) > 16:
        raise CapExceeded(f"2^(2^{total}) truth tables is past the enumeration bound")
    entries = 1 << total
    for code in range(1 << entries):
        table = [(code >> j) & 1 for j in range(entries)]
        yield from_truth_table(widths, table)


def random_expr(widths: Sequence[int], size_budget: int, rng: random.Random) -> Expr:
    variables = [Var(b, i) for b, w in enumerate(widths, start=1) for i in range(1, w + 1)]

    def leaf() -> Expr:
        if variables and rng.random() < 0.9:
            return rng.choice(variables)
        return Const(rng.randrange(2))

    def go(budget: int) -> Expr:
        if budget <= 1:
            return leaf()
        pick = rng.random()
        if pick < 0.2:
            return Not(go(budget - 1))
        if pick < 0.55:
            split = rng.randint(1, budget - 1)
            return And(go(split), go(budget - split))
        if pick < 0.9:
            split = rng.randint(1, budget - 1)
            return Or(go(split), go(budget - split))
        return leaf()

    return go(size_budget)


def random_family(widths: Sequence[int], size_budget: int, rng: random.Random) -> Family:
    """Seeded recursive sampling over connectives and variables within budget."""
    if size_budget < 1:
        raise CapExceeded("size budget must be >= 1")
    return Family(tuple(widths), random_expr(widths, size_budget, rng))


def random_circuit(rng: random.Random, max_gates: int = 4, input_width: int | None = None,
                   max_sat_gates: int = 1, max_witness: int = 2) -> OracleCircuit:
    """Seeded circuit: at most ``max_gates`` vertices, a bounded number of
    sat gates, gate bodies reading only later vertices."""
    m = input_width if input_width is not None else rng.randint(1, 2)
    q = rng.randint(1, max_gates)
    sat_at = set()
    for _ in range(max_sat_gates):
        if rng.random() < 0.7:
            sat_at.add(rng.randint(1, q))

    def gate_expr(i: int, wit: int) -> Expr:
        atoms = [Var(1, j) for j in range(1, m + 1)]
        atoms += [Var(2, j) for j in range(i + 1, q + 1)]
        atoms += [Var(3, j) for j in range(1, wit + 1)]

        def go(budget: int) -> Expr:
            if budget <= 1:
                return rng.choice(atoms) if atoms and rng.random() < 0.93 else Const(rng.randrange(2))
            pick = rng.random()
            if pick < 0.25:
                return Not(go(budget - 1))
            split = rng.randint(1, budget - 1)
            if pick < 0.65:
                return And(go(split), go(budget - split))
            return Or(go(split), go(budget - split))

        return go(rng.randint(2, 6))

    gates = []
    for i in range(1, q + 1):
        if i in sat_at:
            w = rng.randint(1, max_witness)
            gates.append(SatGate(w, gate_expr(i, w)))
        else:
            gates.append(Gate(gate_expr(i, 0)))
    return OracleCircuit(m, tuple(gates))


# ---------------------------------------------------------------------------
# rule verification

def _rule_shapes(rule_name: str, m: int) -> list[tuple[int, ...]]:
    level = DEFAULT_REGISTRY.rule(rule_name).source.level
    if level == 1:
        return [(m,)]
    shapes = []
    for first in range(1, m + 1):
        shapes.extend(_splits(first, m - first, level - 1))
    return shapes


def _splits(first: int, rest: int, blocks: int) -> list[tuple[int, ...]]:
    """Width tuples (first, w1..w_blocks) whose tail sums to ``rest``."""
    if blocks == 0:
        return [(first,)] if rest == 0 else []
    out = []
    for w in range(rest + 1):
        out.extend((first,) + tail for tail in _splits(w, rest - w, blocks - 1))
    return out


def _check_table_range(rule_name: str, widths: tuple[int, ...], lo: int, hi: int):
    """Worker: check one rule over table codes [lo, hi) for one shape."""
    entries = 1 << sum(widths)
    npass = nfail = 0
    cex = None
    for code in range(lo, hi):
        table = [(code >> j) & 1 for j in range(entries)]
        f = from_truth_table(widths, table)
        result = check_rule(rule_name, f)
        if result.passed:
            npass += 1
        elif cex is None:
            nfail += 1
            cex = _rule_counterexample(rule_name, result)
        else:
            nfail += 1
    return npass, nfail, cex


def _rule_counterexample(rule_name: str, result) -> str:
    return (f"{result}\nreplay: promiselab check --rule {rule_name} "
            f"--in \"{result.instance}\"")


def verify_rule_exhaustive(rule_name: str, m_max: int, jobs: int = 1) -> Verdict:
    """check_rule over every function of total width m_max matching the
    rule's source shape; PASS requires zero failures."""
    if m_max > 4:
        raise CapExceeded("exhaustive rule verification is bounded at m <= 4")
    verdict = Verdict(f"{rule_name}[m={m_max}]")
    with _Timer(verdict):
        for widths in _rule_shapes(rule_name, m_max):
            codes = 1 << (1 << sum(widths))
            if jobs > 1 and codes >= 1 << 8:
                chunk = (codes + jobs - 1) // jobs
                tasks = [(rule_name, widths, lo, min(lo + chunk, codes))
                         for lo in range(0, codes, chunk)]
                try:
                    with ProcessPoolExecutor(max_workers=jobs) as pool:
                        results = list(pool.map(_check_table_range_star, tasks))
                except OSError:
                    results = [_check_table_range(*t) for t in tasks]
                for npass, nfail, cex in results:
                    verdict.passed += npass
                    verdict.failed += nfail
                    if cex and verdict.counterexample is None:
                        verdict.counterexample = cex
            else:
                npass, nfail, cex = _check_table_range(rule_name, widths, 0, codes)
                verdict.passed += npass
                verdict.failed += nfail
                if cex and verdict.counterexample is None:
                    verdict.counterexample = cex
    return verdict


def _check_table_range_star(args):
    return _check_table_range(*args)


def verify_rule_random(rule_name: str, max_widths: Sequence[int], count: int,
                       seed: int, size_budget: int = 12) -> Verdict:
    """check_rule over seeded random families with per-block widths drawn
    from 1..max_widths[k]."""
    rng = random.Random(seed * 1000003 + 17)
    verdict = Verdict(f"{rule_name}[random x{count}]")
    with _Timer(verdict):
        for _ in range(count):
            widths = tuple(rng.randint(1, w) for w in max_widths)
            f = random_family(widths, rng.randint(1, size_budget), rng)
            result = check_rule(rule_name, f)
            verdict.record(result.passed, _rule_counterexample(rule_name, result))
    return verdict


# ---------------------------------------------------------------------------
# campaigns

LEVEL1_RULES = (
    "dual_sat", "dual_maxval", "dual_val", "dual_usat", "dual_uval",
    "sat_to_maxval", "maxval_to_sat", "uval_to_val", "val_to_maxval",
    "uval_to_usat", "usat_to_sat",
)

LIFTABLE_RULES = LEVEL1_RULES + ("maxval_to_uvaln1",)


def campaign_rules(seed: int = 0, jobs: int = 1, nightly: bool = False) -> list[Verdict]:
    """Every transform of the base catalog, exhaustively at total width <= 3
    (single-block sources at m = 1..3, two-block shapes summing to <= 3).
    Nightly mode extends both to total width 4."""
    top = 4 if nightly else 3
    verdicts = []
    for rule in LEVEL1_RULES:
        for m in range(1, top + 1):
            verdicts.append(verify_rule_exhaustive(rule, m, jobs=jobs))
    for m in range(1, top + 1):
        verdicts.append(verify_rule_exhaustive("dual_uvaln", m, jobs=jobs))
    return verdicts


def campaign_gadget(seed: int = 0, jobs: int = 1) -> list[Verdict]:
    """The lex-max gadget at m in {1, 2, 3}: containment, output shape
    m + m(m-1)/2, and uniqueness of the witness on satisfiable sources."""
    verdicts = []
    for m in (1, 2, 3):
        verdicts.append(verify_rule_exhaustive("maxval_to_uvaln1", m, jobs=jobs))
        verdict = Verdict(f"gadget-promise[m={m}]")
        with _Timer(verdict):
            rule = DEFAULT_REGISTRY.rule("maxval_to_uvaln1")
            for f in enumerate_truth_tables(m):
                g = rule(f)
                shape_ok = g.widths == (m, m * (m - 1) // 2)
                sols = _first_block_count(g)
                satisfiable = solve(ProblemId(ProblemKind.SAT), f) is PromiseValue.ONE
                ok = shape_ok and (sols == 1 if satisfiable else sols == 0)
                verdict.record(ok, f"gadget promise violated on {print_expr(f)}: "
                                   f"shape={g.widths} witnesses={sols}")
        verdicts.append(verdict)
    return verdicts


def _first_block_count(f: Family) -> int:
    return len(first_block_solution_set(f))


def campaign_lifts(seed: int = 0, jobs: int = 1,
                   level2_count: int = 500, level3_count: int = 100) -> list[Verdict]:
    """The level-n generalizations: level 2 on seeded random families with
    widths <= (2,2), level 3 spot check with widths <= (2,1,1)."""
    verdicts = []
    for k, rule in enumerate(LIFTABLE_RULES):
        verdicts.append(verify_rule_random(
            f"{rule}@2", (2, 2), level2_count, seed * 1000003 + k))
    for k, rule in enumerate(LIFTABLE_RULES):
        verdicts.append(verify_rule_random(
            f"{rule}@3", (2, 1, 1), level3_count, seed * 1000003 + 100 + k))
    return verdicts


def campaign_compiler(seed: int = 0, jobs: int = 1, count: int = 100) -> list[Verdict]:
    """Seeded circuits, all inputs: the valid vertex assignment is unique,
    the exists/forall compilation matches the circuit, the unique-witness
    compilation has exactly one witness whose first bit matches, both
    embedded conversions are uniquely witnessed for every x, and compiled
    sizes stay within the recorded quadratic bound."""
    rng = random.Random(seed * 1000003 + 31)
    v_valid = Verdict("compiler-valid-unique")
    v_sigma = Verdict("compiler-sigma2")
    v_uval = Verdict("compiler-uval2")
    v_side = Verdict("compiler-side-conditions")
    v_size = Verdict("compiler-size-bound")
    start = time.perf_counter()
    for _ in range(count):
        c = random_circuit(rng)
        text = format_circuit(c)
        for alpha_code in range(1 << c.input_width):
            alpha = tuple((alpha_code >> (c.input_width - 1 - p)) & 1
                          for p in range(c.input_width))
            expected = eval_circuit(c, alpha)
            tag = f"{text!r} alpha={''.join(map(str, alpha))}"

            parts = validity_parts(c, alpha)
            valid = parts.valid_assignments()
            v_valid.record(len(valid) == 1 and valid[0][0] == expected,
                           f"valid assignments {valid} on {tag}")

            sigma = compile_sigma2(c, alpha)
            v_sigma.record(qbf_value(sigma.family, Quantifier.EXISTS) == expected,
                           f"sigma2 value mismatch on {tag}")

            compiled = compile_uval2(c, alpha)
            sols = first_block_solution_set(compiled.family)
            ok = len(sols) == 1 and sols[0][0] == expected
            uv = solve(ProblemId(ProblemKind.UVAL, 2), compiled.family)
            ok = ok and uv is (PromiseValue.ONE if expected else PromiseValue.ZERO)
            v_uval.record(ok, f"uval2 witnesses {sols} on {tag}")

            s_counts, s_bits = slot_solution_profile(compiled.s_condition)
            t_counts, t_bits = slot_solution_profile(compiled.t_condition)
            exists_ok = np.array_equal(
                s_bits, inner_values(parts.exists_family(), Quantifier.EXISTS).astype(int))
            forall_ok = np.array_equal(
                t_bits, inner_values(parts.forall_family(), Quantifier.FORALL).astype(int))
            v_side.record(bool((s_counts == 1).all() and (t_counts == 1).all()
                               and exists_ok and forall_ok),
                          f"side conditions failed on {tag}")

            v_size.record(compiled.compiled_size <= 32 * compiled.source_size ** 2,
                          f"size {compiled.compiled_size} vs source {compiled.source_size} on {tag}")
    elapsed = int((time.perf_counter() - start) * 1000)
    out = [v_valid, v_sigma, v_uval, v_side, v_size]
    for v in out:
        v.time_ms = elapsed // len(out)
    return out


def campaign_intersections(seed: int = 0, jobs: int = 1) -> list[Verdict]:
    """Witness-pair constructions: exhaustive at x-width 1 / y-width 1,
    seeded sample at widths (2, 2)."""
    v_val = Verdict("intersection-val[exhaustive 1,1]")
    v_uval = Verdict("intersection-uval[exhaustive 1,1]")
    with _Timer(v_val), _Timer(v_uval):
        pairs = list(enumerate_families((1, 1)))
        for g in pairs:
            for h in pairs:
                for xbit in (0, 1):
                    tag = f"g={print_expr(g)} h={print_expr(h)} x={xbit}"
                    v_val.record(check_val_intersection(g, h, (xbit,)), tag)
                    v_uval.record(check_uval_intersection(g, h, (xbit,)), tag)
    v_val2 = Verdict("intersection-val[random 2,2]")
    v_uval2 = Verdict("intersection-uval[random 2,2]")
    rng = random.Random(seed * 1000003 + 47)
    with _Timer(v_val2), _Timer(v_uval2):
        for _ in range(200):
            g = random_family((2, 2), rng.randint(1, 12), rng)
            h = random_family((2, 2), rng.randint(1, 12), rng)
            for code in range(4):
                x = ((code >> 1) & 1, code & 1)
                tag = f"g={print_expr(g)} h={print_expr(h)} x={x}"
                v_val2.record(check_val_intersection(g, h, x), tag)
                v_uval2.record(check_uval_intersection(g, h, x), tag)
    return [v_val, v_uval, v_val2, v_uval2]


def campaign_machines(seed: int = 0, jobs: int = 1) -> list[Verdict]:
    """Adversarial runs of the bit-fixing machines, exhaustively at m <= 3:
    every leaf output lies in the source problem's value, every path makes
    exactly m oracle calls, and forced answers match the oracle's value."""
    v_sat = Verdict("machine-sat-via-val[m<=3]")
    v_usat = Verdict("machine-usat-via-uval[promise m<=3]")
    v_calls = Verdict("machine-call-counts")
    v_valid = Verdict("machine-transcript-validity")
    with _Timer(v_sat), _Timer(v_usat), _Timer(v_calls), _Timer(v_valid):
        for m in (1, 2, 3):
            for f in enumerate_truth_tables(m):
                tree = run_adversarial("sat-via-val", f)
                sat_bit = 1 if solve(ProblemId(ProblemKind.SAT), f) is PromiseValue.ONE else 0
                tag = f"sat-via-val on {print_expr(f)}: outputs={sorted(tree.outputs())}"
                v_sat.record(tree.outputs() == {sat_bit}, tag)
                v_calls.record(
                    all(len(t.calls) == m for t in tree.transcripts)
                    and len(tree.transcripts) <= 1 << m,
                    f"path shape wrong on {print_expr(f)}")
                oracle = ProblemId(ProblemKind.VAL)
                v_valid.record(
                    all(c.answer in solve(oracle, c.query)
                        and c.forced == (solve(oracle, c.query) is not PromiseValue.BOTH)
                        for t in tree.transcripts for c in t.calls),
                    f"transcript invalid on {print_expr(f)}")

                usat_value = solve(ProblemId(ProblemKind.USAT), f)
                if usat_value is not PromiseValue.BOTH:
                    tree = run_adversarial("usat-via-uval", f)
                    bit = 1 if usat_value is PromiseValue.ONE else 0
                    v_usat.record(tree.outputs() == {bit},
                                  f"usat-via-uval on {print_expr(f)}: outputs={sorted(tree.outputs())}")
    v_ident = Verdict("machine-identities")
    with _Timer(v_ident):
        for m in (1, 2):
            for f in enumerate_truth_tables(m):
                tree = run_adversarial("sat-identity", f)
                sat = solve(ProblemId(ProblemKind.SAT), f)
                v_ident.record(all(out in sat for out in tree.outputs())
                               and tree.max_calls == 1,
                               f"sat-identity wrong on {print_expr(f)}")
                tree = run_adversarial("usat-identity", f)
                usat = solve(ProblemId(ProblemKind.USAT), f)
                v_ident.record(all(out in usat for out in tree.outputs()),
                               f"usat-identity wrong on {print_expr(f)}")
    return [v_sat, v_usat, v_calls, v_valid, v_ident]


def _vv_seed(master: int, *salts: int) -> int:
    out = master
    for s in salts:
        out = out * 1000003 + s
    return out & 0x7FFFFFFFFFFFFFFF


def campaign_vv(seed: int = 0, jobs: int = 1, n_seeds: int = 200,
                m4_sample: int = 40) -> list[Verdict]:
    """The randomized-isolation suite.

    Soundness: over n_seeds trials per m=2 function, answering 1 always
    coincides with actual satisfiability, and the unsatisfiable function is
    never answered 1 under any adversary.  Completeness: for satisfiable
    functions (all of them at m = 2 and 3, a seeded sample at m = 4), the
    empirical success frequency over n_seeds runs at t = 24m reaches 2/3.
    Isolation: the per-trial exactly-one-solution frequency stays above the
    1/(8m) reference minus three binomial sigmas.
    """
    v_sound = Verdict("vv-soundness[m=2]")
    with _Timer(v_sound):
        for idx, f in enumerate(enumerate_truth_tables(2)):
            satisfiable = solve(ProblemId(ProblemKind.SAT), f) is PromiseValue.ONE
            trials = default_trials(2)
            for s in range(n_seeds):
                rng = random.Random(_vv_seed(seed, 2, idx, s))
                got = vv_decide(f, rng, trials)
                ok = satisfiable if got == 1 else True
                if not satisfiable:
                    outs = vv_possible_outputs(
                        f, random.Random(_vv_seed(seed, 2, idx, s)), trials)
                    ok = ok and outs == frozenset({0})
                v_sound.record(ok, f"soundness broken on {print_expr(f)} seed {s}")

    verdicts = [v_sound]
    for m in (2, 3, 4):
        v_comp = Verdict(f"vv-completeness[m={m}]")
        with _Timer(v_comp):
            families = list(_vv_completeness_families(m, seed, m4_sample))
            trials = default_trials(m)
            for idx, f in enumerate(families):
                hits = 0
                for s in range(n_seeds):
                    rng = random.Random(_vv_seed(seed, m, idx, s))
                    hits += vv_decide(f, rng, trials)
                v_comp.record(hits / n_seeds >= 2 / 3,
                              f"success {hits}/{n_seeds} on {print_expr(f)}")
        verdicts.append(v_comp)

        reference = 1 / (8 * m)
        samples = 2000
        sigma = (reference * (1 - reference) / samples) ** 0.5
        start = time.perf_counter()
        freq = isolation_frequency(
            _single_solution_family(m), random.Random(_vv_seed(seed, m, 999)), samples)
        v_iso = Verdict(f"vv-isolation[m={m} freq={freq:.4f} ref={reference:.4f}]")
        v_iso.time_ms = int((time.perf_counter() - start) * 1000)
        v_iso.record(freq >= reference - 3 * sigma,
                     f"isolation frequency {freq:.4f} below {reference:.4f} - 3 sigma")
        verdicts.append(v_iso)
    return verdicts


def _vv_completeness_families(m: int, seed: int, m4_sample: int) -> Iterator[Family]:
    if m <= 3:
        for f in enumerate_truth_tables(m):
            if solve(ProblemId(ProblemKind.SAT), f) is PromiseValue.ONE:
                yield f
        return
    rng = random.Random(_vv_seed(seed, 4, 424242))
    entries = 1 << m
    seen = set()
    while len(seen) < m4_sample:
        code = rng.randrange(1, 1 << entries)  # nonzero tables are satisfiable
        if code in seen:
            continue
        seen.add(code)
        yield from_truth_table((m,), [(code >> j) & 1 for j in range(entries)])


def _single_solution_family(m: int) -> Family:
    table = [0] * (1 << m)
    table[1] = 1
    return from_truth_table((m,), table)


def campaign_hierarchy(seed: int = 0, jobs: int = 1) -> list[Verdict]:
    """The diagram: every edge witness-tagged, duality reflection is an
    automorphism, and the verified witnesses render solid."""
    verified, rule_verdicts = verify_hierarchy_witnesses(jobs=jobs)
    v = Verdict("hierarchy-diagram")
    with _Timer(v):
        dot = emit_hierarchy_dot(verified=verified)
        v.record(len(HIERARCHY_NODES) == 15, "node count != 15")
        v.record(duality_automorphism_ok(), "duality reflection broken")
        v.record('"UV1" -> "US1" [style=solid' in dot, "verified edge not solid")
        v.record(dot.count("->") == len(hierarchy_edges()), "edge count mismatch")
    return rule_verdicts + [v]


def campaign_mutations(seed: int = 0, jobs: int = 1) -> list[Verdict]:
    """Each documented fault must make at least one targeted check fail."""
    verdicts = []
    targets: dict[str, Callable[[], bool]] = {
        "gadget-drop-row-negation":
            lambda: verify_rule_exhaustive("maxval_to_uvaln1", 2).ok,
        "gadget-skip-last-row":
            lambda: verify_rule_exhaustive("maxval_to_uvaln1", 2).ok,
        "sat-to-maxval-positive-guard":
            lambda: verify_rule_exhaustive("sat_to_maxval", 2).ok,
        "uval-usat-fix-zero":
            lambda: verify_rule_exhaustive("uval_to_usat", 2).ok,
        "machine-skip-final-eval":
            lambda: all(v.ok for v in campaign_machines()),
    }
    assert set(targets) == set(KNOWN_FAULTS)
    for fault, clean_check in targets.items():
        v = Verdict(f"mutation-caught[{fault}]")
        with _Timer(v):
            with inject(fault):
                v.record(not clean_check(), f"fault {fault} was not detected")
        verdicts.append(v)
    return verdicts


CAMPAIGNS: dict[str, Callable[..., list[Verdict]]] = {
    "rules": campaign_rules,
    "gadget": campaign_gadget,
    "lifts": campaign_lifts,
    "compiler": campaign_compiler,
    "intersections": campaign_intersections,
    "machines": campaign_machines,
    "vv": campaign_vv,
    "hierarchy": campaign_hierarchy,
    "mutations": campaign_mutations,
}


def full_campaign(seed: int = 0, jobs: int = 1,
                  suites: Sequence[str] | None = None) -> list[Verdict]:
    verdicts = []
    for name in (suites or CAMPAIGNS):
        verdicts.extend(CAMPAIGNS[name](seed=seed, jobs=jobs))
    return verdicts


def render_report(verdicts: Iterable[Verdict]) -> str:
    return "\n".join(v.report_line() for v in verdicts)


# ---------------------------------------------------------------------------
# the hierarchy diagram

HIERARCHY_NODES: tuple[tuple[str, str], ...] = (
    ("P", "P"),
    ("UV1", "[UVAL]"), ("V1", "[VAL]"),
    ("US1", "[USAT]"), ("UCS1", "[coUSAT]"),
    ("Sigma1", "[SAT]"), ("Pi1", "[coSAT]"),
    ("UDelta2", "P^[USAT]"), ("Delta2", "P^[SAT]"),
    ("UV2", "[UVAL2]"), ("V2", "[VAL2]"),
    ("US2", "[USAT2]"), ("UCS2", "[coUSAT2]"),
    ("Sigma2", "[SAT2]"), ("Pi2", "[coSAT2]"),
)

_DUALITY_SWAP = {
    "US1": "UCS1", "UCS1": "US1", "Sigma1": "Pi1", "Pi1": "Sigma1",
    "US2": "UCS2", "UCS2": "US2", "Sigma2": "Pi2", "Pi2": "Sigma2",
}


@dataclass(frozen=True)
class HierarchyEdge:
    src: str
    dst: str
    kind: str      # "rule" | "composition" | "compiled" | "theorem"
    witness: str


def hierarchy_edges() -> tuple[HierarchyEdge, ...]:
    E = HierarchyEdge
    return (
        E("P", "UV1", "theorem", "first-bit-projection"),
        # the level-1 cube
        E("UV1", "US1", "rule", "uval_to_usat"),
        E("UV1", "V1", "rule", "uval_to_val"),
        E("UV1", "UCS1", "composition", "uval_to_cousat"),
        E("US1", "Sigma1", "rule", "usat_to_sat"),
        E("V1", "Sigma1", "rule", "val_to_maxval"),
        E("V1", "Pi1", "composition", "val_to_minval"),
        E("UCS1", "Pi1", "composition", "cousat_to_cosat"),
        E("US1", "UDelta2", "theorem", "usat-identity-oracle"),
        E("UCS1", "UDelta2", "theorem", "cousat-identity-oracle"),
        E("Sigma1", "Delta2", "theorem", "sat-identity-oracle"),
        E("Pi1", "Delta2", "theorem", "cosat-identity-oracle"),
        E("UDelta2", "Delta2", "theorem", "oracle-weakening"),
        # the compiled climb into level 2
        E("Delta2", "UV2", "compiled", "oracle-circuit-uval2"),
        # the level-2 cube, truncated at the window edge
        E("UV2", "US2", "rule", "uval_to_usat@2"),
        E("UV2", "V2", "rule", "uval_to_val@2"),
        E("UV2", "UCS2", "composition", "uval_to_cousat@2"),
        E("US2", "Sigma2", "rule", "usat_to_sat@2"),
        E("V2", "Sigma2", "rule", "val_to_maxval@2"),
        E("V2", "Pi2", "composition", "val_to_minval@2"),
        E("UCS2", "Pi2", "composition", "cousat_to_cosat@2"),
    )


def duality_automorphism_ok(edges: Sequence[HierarchyEdge] | None = None) -> bool:
    """The diagram must be invariant under the existential/universal swap."""
    edges = edges if edges is not None else hierarchy_edges()
    plain = {(e.src, e.dst) for e in edges}
    swapped = {(_DUALITY_SWAP.get(s, s), _DUALITY_SWAP.get(d, d)) for s, d in plain}
    return plain == swapped


def verify_hierarchy_witnesses(m: int = 2, jobs: int = 1,
                               compiler_count: int = 20) -> tuple[set[str], list[Verdict]]:
    """Run every rule/composition witness exhaustively at width m and a quick
    compiler pass; return the set of witnesses that verified, plus verdicts."""
    verified: set[str] = set()
    verdicts: list[Verdict] = []
    for edge in hierarchy_edges():
        if edge.kind == "rule":
            v = verify_rule_exhaustive(edge.witness, m, jobs=jobs)
        elif edge.kind == "composition":
            alias, _, suffix = edge.witness.partition("@")
            level = int(suffix) if suffix else None
            rule = DEFAULT_REGISTRY.composition(alias, level=level)
            v = _verify_composition(edge.witness, rule, m)
        else:
            continue
        verdicts.append(v)
        if v.ok:
            verified.add(edge.witness)
    compiler_ok = all(v.ok for v in campaign_compiler(seed=7, count=compiler_count))
    if compiler_ok:
        verified.add("oracle-circuit-uval2")
    return verified, verdicts


def _verify_composition(name: str, rule, m: int) -> Verdict:
    verdict = Verdict(f"{name}[m={m}]")
    with _Timer(verdict):
        level = rule.source.level
        shapes = [(m,)] if level == 1 else \
            [s for first in range(1, m + 1) for s in _splits(first, m - first, level - 1)]
        for widths in shapes:
            for f in enumerate_families(widths):
                result = check_rule(rule, f)
                verdict.record(result.passed, str(result))
    return verdict


def emit_hierarchy_dot(verified: Iterable[str] = (), out: str | None = None,
                       _edges: Sequence[HierarchyEdge] | None = None) -> str:
    """DOT text for the diagram; an arrow X -> Y means X is contained in Y.
    Edges whose witness verified in this run are solid, the rest dashed.
    Raises IncompleteRegistry when any edge lacks a witness tag."""
    verified = set(verified)
    edges = _edges if _edges is not None else hierarchy_edges()
    for e in edges:
        if not e.witness:
            raise IncompleteRegistry(f"edge {e.src} -> {e.dst} has no witness tag")
    lines = ["digraph promise_hierarchy {", "  rankdir=LR;"]
    for node, label in HIERARCHY_NODES:
        lines.append(f'  "{node}" [label="{label}"];')
    for e in edges:
        style = "solid" if (e.kind in ("rule", "composition", "compiled")
                            and e.witness in verified) else "dashed"
        lines.append(f'  "{e.src}" -> "{e.dst}" [style={style}, label="{e.witness}"];')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
