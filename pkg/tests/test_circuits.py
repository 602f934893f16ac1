"""Oracle-gate circuits: parsing, evaluation, both compilation targets."""

import random

import numpy as np
import pytest

from promiselab import (
    CapExceeded, Family, ParseError, ProblemId, ProblemKind, PromiseValue,
    ShapeError, compile_sigma2, compile_uval2, eval_circuit,
    first_block_solution_set, parse_circuit, solve, validity_parts,
)
from promiselab.circuits import (
    Gate, OracleCircuit, SatGate, format_circuit, slot_solution_profile,
)
from promiselab.expr import Const, Var, fix_first_block_prefix, map_vars, print_expr
from promiselab.harness import random_circuit
from promiselab.reductions import DEFAULT_REGISTRY
from promiselab.semantics import Quantifier, inner_values, qbf_value

IDENTITY = "circuit m=1; x1 = a1"
SAT_ONE_GATE = "circuit m=1; x1 = sat(w=1) a1 & y1"
NESTED = "circuit m=1;\nx1 = !x2\nx2 = sat(w=1) y1 & !y1"


def alphas(m):
    for code in range(1 << m):
        yield tuple((code >> (m - 1 - p)) & 1 for p in range(m))


def test_parse_and_format_round_trip():
    for text in (IDENTITY, SAT_ONE_GATE, NESTED):
        c = parse_circuit(text)
        assert parse_circuit(format_circuit(c)) == c


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_circuit("m=1; x1 = a1")
    with pytest.raises(ParseError):
        parse_circuit("circuit m=1; x1 = a1; x1 = a1")
    with pytest.raises(ParseError):
        parse_circuit("circuit m=1; x2 = a1")  # x1 missing
    with pytest.raises(ParseError):
        parse_circuit("circuit m=1; x1 = b1")  # unknown atom


def test_structure_validation():
    with pytest.raises(ShapeError):
        parse_circuit("circuit m=1; x1 = a2")  # input out of range
    with pytest.raises(ShapeError):
        parse_circuit("circuit m=1; x1 = x1")  # self-reference
    with pytest.raises(ShapeError):
        parse_circuit("circuit m=1;\nx1 = x2\nx2 = x1")  # backward reference
    with pytest.raises(ShapeError):
        parse_circuit("circuit m=1; x1 = y1")  # witness outside sat gate
    with pytest.raises(ShapeError):
        parse_circuit("circuit m=1; x1 = sat(w=1) y2")  # witness too wide


def test_eval_examples():
    ident = parse_circuit(IDENTITY)
    assert eval_circuit(ident, (0,)) == 0
    assert eval_circuit(ident, (1,)) == 1

    sat_gate = parse_circuit(SAT_ONE_GATE)
    assert eval_circuit(sat_gate, (0,)) == 0
    assert eval_circuit(sat_gate, (1,)) == 1

    nested = parse_circuit(NESTED)  # inner gate's body is unsatisfiable
    assert eval_circuit(nested, (0,)) == 1
    assert eval_circuit(nested, (1,)) == 1


def test_eval_cap():
    c = OracleCircuit(1, (SatGate(5, Var(3, 1)),))
    with pytest.raises(CapExceeded):
        eval_circuit(c, (1,), cap=16)


def test_validity_unique_assignment_single_gate():
    c = parse_circuit(IDENTITY)
    parts = validity_parts(c, (1,))
    assert parts.valid_assignments() == [(1,)]
    parts = validity_parts(c, (0,))
    assert parts.valid_assignments() == [(0,)]


def test_validity_unique_assignment_three_ordinary_gates():
    c = parse_circuit("circuit m=2;\nx1 = x2 & x3\nx2 = a1 | x3\nx3 = !a2")
    for alpha in alphas(2):
        valid = validity_parts(c, alpha).valid_assignments()
        assert len(valid) == 1
        assert valid[0][0] == eval_circuit(c, alpha)


def test_validity_unique_assignment_sat_gate():
    c = parse_circuit(SAT_ONE_GATE)
    for alpha in alphas(1):
        valid = validity_parts(c, alpha).valid_assignments()
        assert len(valid) == 1
        assert valid[0][0] == eval_circuit(c, alpha)


def test_compile_sigma2_identity():
    c = parse_circuit(IDENTITY)
    for alpha in alphas(1):
        compiled = compile_sigma2(c, alpha)
        assert qbf_value(compiled.family, Quantifier.EXISTS) == alpha[0]


def test_compile_sigma2_random():
    rng = random.Random(41)
    for _ in range(60):
        c = random_circuit(rng, max_gates=5)
        for alpha in alphas(c.input_width):
            compiled = compile_sigma2(c, alpha)
            assert qbf_value(compiled.family, Quantifier.EXISTS) == eval_circuit(c, alpha)


def test_compile_uval2_identity():
    c = parse_circuit(IDENTITY)
    for alpha in alphas(1):
        compiled = compile_uval2(c, alpha)
        sols = first_block_solution_set(compiled.family)
        assert len(sols) == 1
        assert sols[0][0] == alpha[0]


def test_compile_uval2_sat_gate_circuit():
    c = parse_circuit(SAT_ONE_GATE)
    for alpha in alphas(1):
        compiled = compile_uval2(c, alpha)
        sols = first_block_solution_set(compiled.family)
        assert len(sols) == 1
        assert sols[0][0] == eval_circuit(c, alpha)
        value = solve(ProblemId(ProblemKind.UVAL, 2), compiled.family)
        assert value is not PromiseValue.BOTH


def test_compile_uval2_random_never_violates_promise():
    rng = random.Random(43)
    for _ in range(40):
        c = random_circuit(rng, max_gates=4)
        for alpha in alphas(c.input_width):
            compiled = compile_uval2(c, alpha)
            want = eval_circuit(c, alpha)
            assert solve(ProblemId(ProblemKind.UVAL, 2), compiled.family).bits == {want}
            sols = first_block_solution_set(compiled.family)
            assert len(sols) == 1 and sols[0][0] == want


def test_side_conditions_hold_for_every_x():
    rng = random.Random(47)
    for _ in range(25):
        c = random_circuit(rng, max_gates=4)
        for alpha in alphas(c.input_width):
            parts = validity_parts(c, alpha)
            compiled = compile_uval2(c, alpha)
            s_counts, s_bits = slot_solution_profile(compiled.s_condition)
            t_counts, t_bits = slot_solution_profile(compiled.t_condition)
            assert (s_counts == 1).all() and (t_counts == 1).all()
            assert np.array_equal(
                s_bits, inner_values(parts.exists_family(), Quantifier.EXISTS).astype(int))
            assert np.array_equal(
                t_bits, inner_values(parts.forall_family(), Quantifier.FORALL).astype(int))


def _concretize(part, x, width):
    """Substitute the vertex values into a validity part, leaving its pool as
    a single-block family."""
    body = map_vars(part, lambda v: Const(x[v.index - 1]) if v.block == 1
                    else Var(1, v.index))
    return Family((width,), body)


def test_embedded_conversion_matches_registered_composition():
    # fixing x in the compiled s-condition reproduces, node for node, the
    # registered SAT -> UVAL2 composition applied to the concretized
    # exists-part; dually for the t-condition
    sat_route = DEFAULT_REGISTRY.composition("sat_to_uval2")
    cosat_route = DEFAULT_REGISTRY.composition("cosat_to_uval2")
    rng = random.Random(53)
    for _ in range(15):
        c = random_circuit(rng, max_gates=3)
        for alpha in alphas(c.input_width):
            parts = validity_parts(c, alpha)
            compiled = compile_uval2(c, alpha)
            for x in alphas(c.size):
                f1 = _concretize(parts.exists_part, x, parts.y_width)
                assert fix_first_block_prefix(compiled.s_condition, x) == sat_route(f1)
                f2 = _concretize(parts.forall_part, x, parts.z_width)
                assert fix_first_block_prefix(compiled.t_condition, x) == cosat_route(f2)


def test_compiled_layout_and_determinism():
    c = parse_circuit(SAT_ONE_GATE)
    compiled = compile_uval2(c, (1,))
    q, ks, kt = compiled.x_width, compiled.s_range, compiled.t_range
    assert q == 1 and compiled.u_index == 2
    assert ks == (3, 4) and kt == (5, 6)
    assert compiled.family.widths[0] == 1 + 1 + 2 + 2
    assert compiled.family.widths[1] == compiled.s_tail_width + compiled.t_tail_width
    again = compile_uval2(c, (1,))
    assert print_expr(again.family) == print_expr(compiled.family)


def test_compiled_size_within_quadratic_bound():
    rng = random.Random(61)
    for _ in range(30):
        c = random_circuit(rng, max_gates=4)
        for alpha in alphas(c.input_width):
            compiled = compile_uval2(c, alpha)
            assert compiled.compiled_size <= 32 * compiled.source_size ** 2
