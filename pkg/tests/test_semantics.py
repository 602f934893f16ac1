"""Brute-force promise semantics against an independent enumeration oracle."""

import random

import pytest

from conftest import brute_solve, table_families
from promiselab import (
    CapExceeded, LevelMismatch, ProblemId, ProblemKind, PromiseValue,
    dual_value, first_block_solution_set, parse_expr, qbf_value, solve,
)
from promiselab.semantics import Quantifier
from promiselab.harness import random_family

ALL_KINDS = ("SAT", "COSAT", "MAXVAL", "MINVAL", "VAL", "USAT", "COUSAT", "UVAL")


def pid(text):
    return ProblemId.parse(text)


def test_qbf_value_examples():
    assert qbf_value(parse_expr("blocks 1; b1_1 & !b1_1"), Quantifier.EXISTS) == 0
    assert qbf_value(parse_expr("blocks 1,1; b1_1 | b2_1"), Quantifier.EXISTS) == 1
    assert qbf_value(parse_expr("blocks 1,1; b1_1 & b2_1"), Quantifier.EXISTS) == 0


def test_qbf_value_matches_enumeration_oracle():
    from conftest import brute_alternation
    rng = random.Random(31)
    for _ in range(60):
        widths = tuple(rng.randint(0, 2) for _ in range(rng.randint(1, 3)))
        f = random_family(widths, rng.randint(1, 10), rng)
        assert qbf_value(f, Quantifier.EXISTS) == brute_alternation(f, (), True)
        assert qbf_value(f, Quantifier.FORALL) == brute_alternation(f, (), False)


def test_solve_examples():
    assert solve(pid("USAT"), parse_expr("blocks 2; b1_1 | b1_2")) is PromiseValue.BOTH
    assert solve(pid("UVAL"), parse_expr("blocks 2; b1_1 & !b1_2")) is PromiseValue.ONE
    mixed = parse_expr("blocks 2; (!b1_1 & b1_2) | (b1_1 & !b1_2)")
    assert solve(pid("MAXVAL"), mixed) is PromiseValue.ONE
    assert solve(pid("MINVAL"), mixed) is PromiseValue.ZERO
    assert solve(pid("VAL"), parse_expr("blocks 2; b1_1 | b1_2")) is PromiseValue.BOTH


def test_first_block_solution_set_examples():
    assert first_block_solution_set(parse_expr("blocks 2; b1_1 & b1_2")) == [(1, 1)]
    assert first_block_solution_set(parse_expr("blocks 1; 0")) == []
    assert first_block_solution_set(parse_expr("blocks 1,1; b1_1 | b2_1")) == [(1,)]


def test_solution_set_is_lexicographic():
    f = parse_expr("blocks 2; b1_1 | b1_2")
    assert first_block_solution_set(f) == [(0, 1), (1, 0), (1, 1)]


def test_dual_value():
    assert dual_value(PromiseValue.ZERO) is PromiseValue.ONE
    assert dual_value(PromiseValue.ONE) is PromiseValue.ZERO
    assert dual_value(PromiseValue.BOTH) is PromiseValue.BOTH
    for v in PromiseValue:
        assert dual_value(dual_value(v)) is v


def test_level1_solve_matches_enumeration_oracle():
    for m in (1, 2, 3):
        for f in table_families(m):
            for kind in ALL_KINDS:
                assert solve(ProblemId(ProblemKind[kind]), f).bits == brute_solve(kind, f), \
                    f"{kind} differs on {f}"


def test_level2_solve_matches_enumeration_oracle():
    rng = random.Random(23)
    for _ in range(120):
        widths = (rng.randint(1, 2), rng.randint(1, 2))
        f = random_family(widths, rng.randint(1, 10), rng)
        for kind in ALL_KINDS:
            got = solve(ProblemId(ProblemKind[kind], 2), f)
            assert got.bits == brute_solve(kind, f), f"{kind} differs on {f}"


def test_level3_solve_matches_enumeration_oracle():
    rng = random.Random(29)
    for _ in range(60):
        f = random_family((1, 1, 1), rng.randint(1, 8), rng)
        for kind in ("SAT", "COSAT", "MAXVAL", "VAL", "UVAL"):
            got = solve(ProblemId(ProblemKind[kind], 3), f)
            assert got.bits == brute_solve(kind, f)


def test_identity_containment_chains_m3():
    # UVAL >= VAL >= MAXVAL and USAT >= SAT, as subsets of {0,1}
    for f in table_families(3):
        uval = solve(pid("UVAL"), f).bits
        val = solve(pid("VAL"), f).bits
        maxval = solve(pid("MAXVAL"), f).bits
        assert uval >= val >= maxval
        assert solve(pid("USAT"), f).bits >= solve(pid("SAT"), f).bits


def test_sat_cosat_always_singletons():
    for f in table_families(3):
        assert solve(pid("SAT"), f) is not PromiseValue.BOTH
        assert solve(pid("COSAT"), f) is not PromiseValue.BOTH


def test_empty_promise_returns_both():
    unsat = parse_expr("blocks 2; b1_1 & !b1_1")
    for kind in ("MAXVAL", "MINVAL", "VAL", "UVAL"):
        assert solve(pid(kind), unsat) is PromiseValue.BOTH


def test_width_zero_first_block_value_problems_are_unconstrained():
    f = parse_expr("blocks 0,1; b2_1")
    for kind in ("MAXVAL", "MINVAL", "VAL", "UVAL"):
        assert solve(ProblemId(ProblemKind[kind], 2), f) is PromiseValue.BOTH
    # non-projection problems still resolve
    assert solve(ProblemId(ProblemKind.SAT, 2), f) is PromiseValue.ZERO


def test_level_mismatch():
    with pytest.raises(LevelMismatch):
        solve(pid("UVAL2"), parse_expr("blocks 2; b1_1"))
    with pytest.raises(LevelMismatch):
        solve(pid("SAT"), parse_expr("blocks 1,1; b1_1 & b2_1"))


def test_cap_exceeded():
    f = parse_expr("blocks 5; b1_1")
    with pytest.raises(CapExceeded):
        solve(pid("SAT"), f, cap=16)
    assert solve(pid("SAT"), f, cap=32) is PromiseValue.ONE


def test_problem_id_parsing():
    assert pid("UVAL2") == ProblemId(ProblemKind.UVAL, 2)
    assert pid("sat") == ProblemId(ProblemKind.SAT, 1)
    assert str(pid("USAT3")) == "USAT3"
    assert str(pid("VAL")) == "VAL"
    with pytest.raises(LevelMismatch):
        pid("NOPE")
