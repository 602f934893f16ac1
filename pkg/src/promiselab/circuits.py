"""Compiling circuits with satisfiability-oracle gates into quantified families.

An :class:`OracleCircuit` computes one output bit from an input word using
ordinary boolean gates plus "sat gates" that report whether some assignment of
their private witness variables satisfies their body.  Vertices are numbered
so that vertex 1 is the output and every gate only reads higher-numbered
vertices, which makes the wiring acyclic by construction.

Two compilations are provided, both per concrete input word:

- :func:`compile_sigma2` produces a 2-block family whose exists/forall value
  equals the circuit output;
- :func:`compile_uval2` produces a 2-block family with a *unique* first-block
  witness under the universal block, whose first bit equals the circuit
  output.  The embedded conversions of the exists- and forall-parts mirror
  the registered composition of the satisfiability-to-maximum transform with
  the lex-max gadget (and its dual), applied with the vertex-value variables
  held free.

Textual format: a header ``circuit m=<int>;`` followed by one definition
``x<i> = <gate>`` per line (newlines and ';' both separate statements), where
a gate is an expression over ``a<j>``/``x<j>`` atoms with ``! & | ( ) 0 1``,
or ``sat(w=<int>) <expr>`` additionally using witness atoms ``y<j>``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CapExceeded, ParseError, ShapeError
from .expr import (
    And, Const, Expr, Family, Not, Or, Var,
    expr_size, family_size, map_vars, _Parser, _tokenize,
)
from .reductions import lexmax_rows, _and_fold
from .semantics import DEFAULT_CAP, Quantifier, inner_values

__all__ = [
    "Gate", "SatGate", "OracleCircuit", "parse_circuit", "eval_circuit",
    "ValidityParts", "validity_parts", "CompiledSigma2", "compile_sigma2",
    "CompiledUval2", "compile_uval2", "circuit_size", "slot_solution_profile",
]

# Gate expressions reuse the family Expr nodes with a fixed convention:
# block 1 = input bits a<j>, block 2 = vertex values x<j>, block 3 = private
# witnesses y<j> (sat gates only).
_ATOM_BLOCKS = {"a": 1, "x": 2, "y": 3}


@dataclass(frozen=True)
class Gate:
    expr: Expr


@dataclass(frozen=True)
class SatGate:
    witness_width: int
    expr: Expr

    def __post_init__(self):
        if self.witness_width < 0:
            raise ShapeError("witness width must be >= 0")


@dataclass(frozen=True)
class OracleCircuit:
    input_width: int
    gates: tuple[Union[Gate, SatGate], ...]  # gates[i-1] defines vertex i; vertex 1 is the output

    def __post_init__(self):
        if self.input_width < 0:
            raise ShapeError("input width must be >= 0")
        if not self.gates:
            raise ShapeError("a circuit needs at least one vertex")
        for i, gate in enumerate(self.gates, start=1):
            self._check_gate(i, gate)

    @property
    def size(self) -> int:
        return len(self.gates)

    def _check_gate(self, i: int, gate) -> None:
        is_sat = isinstance(gate, SatGate)
        w = gate.witness_width if is_sat else 0

        def walk(e: Expr) -> None:
            if isinstance(e, Var):
                if e.block == 1:
                    if e.index > self.input_width:
                        raise ShapeError(f"vertex {i}: input a{e.index} exceeds width {self.input_width}")
                elif e.block == 2:
                    if not i < e.index <= self.size:
                        raise ShapeError(f"vertex {i}: may only read later vertices, got x{e.index}")
                elif e.block == 3:
                    if not is_sat:
                        raise ShapeError(f"vertex {i}: witness y{e.index} outside a sat gate")
                    if e.index > w:
                        raise ShapeError(f"vertex {i}: witness y{e.index} exceeds width {w}")
                else:
                    raise ShapeError(f"vertex {i}: unknown atom block {e.block}")
            elif isinstance(e, Not):
                walk(e.arg)
            elif isinstance(e, (And, Or)):
                walk(e.left)
                walk(e.right)

        walk(gate.expr)


# ---------------------------------------------------------------------------
# parsing

_HEADER_RE = re.compile(r"^circuit\s+m\s*=\s*(\d+)$")
_DEF_RE = re.compile(r"^x(\d+)\s*=\s*(.*)$", re.S)
_SAT_RE = re.compile(r"^sat\s*\(\s*w\s*=\s*(\d+)\s*\)\s*(.*)$", re.S)
_ATOM_RE = re.compile(r"^([axy])(\d+)$")


def _circuit_atom(token) -> Expr:
    kind, text, pos = token
    if kind == "int" and text in ("0", "1"):
        return Const(int(text))
    if kind == "word":
        m = _ATOM_RE.match(text)
        if m:
            return Var(_ATOM_BLOCKS[m.group(1)], int(m.group(2)))
    raise ParseError(f"expected a<j>, x<j>, y<j>, 0, 1 or '(', found {text or 'end of input'!r}", pos)


def _parse_gate_expr(text: str, context: str) -> Expr:
    try:
        p = _Parser(_tokenize(text), _circuit_atom)
        e = p.expr()
        p.expect("eof")
        return e
    except ParseError as exc:
        raise ParseError(f"in {context!r}: {exc.args[0]}") from None


def parse_circuit(text: str) -> OracleCircuit:
    statements = [s.strip() for s in re.split(r"[;\n]", text) if s.strip()]
    if not statements:
        raise ParseError("empty circuit text", 0)
    header = _HEADER_RE.match(statements[0])
    if not header:
        raise ParseError(f"expected 'circuit m=<int>', found {statements[0]!r}", 0)
    input_width = int(header.group(1))

    defs: dict[int, Union[Gate, SatGate]] = {}
    for stmt in statements[1:]:
        m = _DEF_RE.match(stmt)
        if not m:
            raise ParseError(f"expected 'x<i> = <gate>', found {stmt!r}", 0)
        idx = int(m.group(1))
        if idx in defs:
            raise ParseError(f"vertex x{idx} defined twice", 0)
        rhs = m.group(2).strip()
        sat = _SAT_RE.match(rhs)
        if sat:
            defs[idx] = SatGate(int(sat.group(1)), _parse_gate_expr(sat.group(2), stmt))
        else:
            defs[idx] = Gate(_parse_gate_expr(rhs, stmt))

    if not defs:
        raise ParseError("circuit defines no vertices", 0)
    q = max(defs)
    missing = sorted(set(range(1, q + 1)) - set(defs))
    if missing:
        raise ParseError(f"missing definitions for vertices {missing}", 0)
    return OracleCircuit(input_width, tuple(defs[i] for i in range(1, q + 1)))


def _format_gate_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return f"{'axy'[e.block - 1]}{e.index}"
    if isinstance(e, Not):
        return "!" + _format_gate_expr(e.arg)
    op = "&" if isinstance(e, And) else "|"
    return f"({_format_gate_expr(e.left)} {op} {_format_gate_expr(e.right)})"


def format_circuit(c: OracleCircuit) -> str:
    lines = [f"circuit m={c.input_width};"]
    for i, gate in enumerate(c.gates, start=1):
        if isinstance(gate, SatGate):
            lines.append(f"x{i} = sat(w={gate.witness_width}) {_format_gate_expr(gate.expr)}")
        else:
            lines.append(f"x{i} = {_format_gate_expr(gate.expr)}")
    return "\n".join(lines)


def circuit_size(c: OracleCircuit) -> int:
    total = c.input_width + c.size
    for gate in c.gates:
        total += expr_size(gate.expr)
        if isinstance(gate, SatGate):
            total += gate.witness_width
    return total


# ---------------------------------------------------------------------------
# evaluation

def _check_bits(bits, width: int, what: str) -> tuple[int, ...]:
    bits = tuple(int(b) for b in bits)
    if len(bits) != width or any(b not in (0, 1) for b in bits):
        raise ShapeError(f"{what} must be {width} bits, got {bits}")
    return bits


def _eval_gate(e: Expr, alpha, xvals, witness) -> int:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        if e.block == 1:
            return alpha[e.index - 1]
        if e.block == 2:
            return xvals[e.index]
        return witness[e.index - 1]
    if isinstance(e, Not):
        return 1 - _eval_gate(e.arg, alpha, xvals, witness)
    if isinstance(e, And):
        return _eval_gate(e.left, alpha, xvals, witness) and _eval_gate(e.right, alpha, xvals, witness)
    return _eval_gate(e.left, alpha, xvals, witness) or _eval_gate(e.right, alpha, xvals, witness)


def eval_circuit(c: OracleCircuit, alpha, cap: int | None = None) -> int:
    """Topological evaluation; a sat gate reports whether any witness
    assignment satisfies its body (by brute force)."""
    alpha = _check_bits(alpha, c.input_width, "input")
    cap = DEFAULT_CAP if cap is None else cap
    xvals: dict[int, int] = {}
    for i in range(c.size, 0, -1):
        gate = c.gates[i - 1]
        if isinstance(gate, SatGate):
            if 1 << gate.witness_width > cap:
                raise CapExceeded(f"2^{gate.witness_width} witnesses exceed the cap of {cap}")
            xvals[i] = int(any(
                _eval_gate(gate.expr, alpha, xvals, y)
                for y in itertools.product((0, 1), repeat=gate.witness_width)))
        else:
            xvals[i] = _eval_gate(gate.expr, alpha, xvals, None)
    return xvals[1]


# ---------------------------------------------------------------------------
# validity constraints

@dataclass(frozen=True)
class ValidityParts:
    """Constraints pinning the vertex values for a fixed input word.

    ``exists_part`` lives over blocks (x, y-pool): one clause per sat gate
    asserting the gate's set value is witnessed.  ``forall_part`` lives over
    blocks (x, z-pool): both directions of every ordinary gate (z-free) plus
    the refutation direction of every sat gate.  Exactly one x satisfies
    (exists y: exists_part) and (forall z: forall_part).
    """
    x_width: int
    y_width: int
    z_width: int
    exists_part: Expr
    forall_part: Expr
    y_offsets: tuple[tuple[int, int], ...]  # (vertex, offset) per sat gate, vertex order
    z_offsets: tuple[tuple[int, int], ...]

    def exists_family(self) -> Family:
        return Family((self.x_width, self.y_width), self.exists_part)

    def forall_family(self) -> Family:
        return Family((self.x_width, self.z_width), self.forall_part)

    def valid_assignments(self, cap: int | None = None) -> list[tuple[int, ...]]:
        sat_side = inner_values(self.exists_family(), Quantifier.EXISTS, cap=cap)
        taut_side = inner_values(self.forall_family(), Quantifier.FORALL, cap=cap)
        q = self.x_width
        return [tuple((int(j) >> (q - 1 - p)) & 1 for p in range(q))
                for j in np.flatnonzero(sat_side & taut_side)]


def _subst_alpha(e: Expr, alpha, witness_block: int, witness_offset: int) -> Expr:
    """Gate expr -> parts coordinates: inputs become constants, vertices move
    to block 1, witnesses move to the given pool block at the given offset."""
    def sub(v: Var) -> Expr:
        if v.block == 1:
            return Const(alpha[v.index - 1])
        if v.block == 2:
            return Var(1, v.index)
        return Var(witness_block, witness_offset + v.index)
    return map_vars(e, sub)


def validity_parts(c: OracleCircuit, alpha) -> ValidityParts:
    alpha = _check_bits(alpha, c.input_width, "input")
    exists_conjuncts: list[Expr] = []
    forall_conjuncts: list[Expr] = []
    y_offsets = []
    z_offsets = []
    y_at = 0
    z_at = 0
    for i, gate in enumerate(c.gates, start=1):
        xi = Var(1, i)
        if isinstance(gate, SatGate):
            pos = _subst_alpha(gate.expr, alpha, 2, y_at)
            neg = _subst_alpha(gate.expr, alpha, 2, z_at)
            exists_conjuncts.append(Or(Not(xi), pos))
            forall_conjuncts.append(Or(xi, Not(neg)))
            y_offsets.append((i, y_at))
            z_offsets.append((i, z_at))
            y_at += gate.witness_width
            z_at += gate.witness_width
        else:
            a = _subst_alpha(gate.expr, alpha, 2, 0)
            forall_conjuncts.append(Or(Not(xi), a))
            forall_conjuncts.append(Or(xi, Not(a)))
    exists_part = _and_fold(exists_conjuncts) if exists_conjuncts else Const(1)
    forall_part = _and_fold(forall_conjuncts) if forall_conjuncts else Const(1)
    return ValidityParts(c.size, y_at, z_at, exists_part, forall_part,
                         tuple(y_offsets), tuple(z_offsets))


# ---------------------------------------------------------------------------
# compilation targets

@dataclass(frozen=True)
class CompiledSigma2:
    """2-block family over ((x, y); z) whose exists/forall value equals the
    circuit output."""
    family: Family
    x_width: int
    y_width: int
    z_width: int
    source_size: int
    compiled_size: int


def compile_sigma2(c: OracleCircuit, alpha) -> CompiledSigma2:
    parts = validity_parts(c, alpha)
    q, yw, zw = parts.x_width, parts.y_width, parts.z_width
    p1 = map_vars(parts.exists_part, lambda v: Var(1, q + v.index) if v.block == 2 else v)
    p2 = parts.forall_part  # already over (block 1 = x, block 2 = z)
    body = And(And(p1, Var(1, 1)), p2)
    family = Family((q + yw, zw), body)
    return CompiledSigma2(family, q, yw, zw,
                          source_size=circuit_size(c),
                          compiled_size=family_size(family))


@dataclass(frozen=True)
class CompiledUval2:
    """2-block family over (w; tails) with exactly one w under the universal
    tails; its first bit is the circuit output.

    w concatenates, in order: the vertex values x (first bit = output), the
    agreement bit u, the unique witness s of the exists-part conversion, the
    unique witness t of the forall-part conversion.  ``s_condition`` and
    ``t_condition`` are 3-block views (x; slots; tails) of the embedded
    conversions, exposing the per-x uniqueness side conditions.
    """
    family: Family
    x_width: int
    u_index: int
    s_range: tuple[int, int]  # inclusive 1-based positions within block 1
    t_range: tuple[int, int]
    s_tail_width: int
    t_tail_width: int
    s_condition: Family
    t_condition: Family
    source_size: int
    compiled_size: int


def _slot_conversion(x_width: int, width: int, core: Expr, negate_slots: bool) -> Family:
    """UVAL2-ization of a pooled part, x held free.

    Builds (new-slot | pool...) guarded core, then the lex-max rows over the
    slot block with fresh universal tails; optionally complements the slot
    block (the dual route for forall-parts).  Returns a 3-block family
    (x; slots; tails).
    """
    k = width + 1
    tails = k * (k - 1) // 2
    slots = [Var(2, j) for j in range(1, k + 1)]

    def tail_var(i: int, offset: int) -> Var:
        row_start = (i - 1) * k - i * (i - 1) // 2
        return Var(3, row_start + offset + 1)

    guarded = Or(core, Not(Var(2, 1)))
    body = _and_fold([guarded] + lexmax_rows(guarded, slots, tail_var))
    if negate_slots:
        body = map_vars(body, lambda v: Not(v) if v.block == 2 else v)
    return Family((x_width, k, tails), body)


def compile_uval2(c: OracleCircuit, alpha) -> CompiledUval2:
    parts = validity_parts(c, alpha)
    q, yw, zw = parts.x_width, parts.y_width, parts.z_width

    # exists-part: shift the y-pool into slot positions 2.., slot 1 is fresh
    p1s = map_vars(parts.exists_part, lambda v: Var(2, v.index + 1) if v.block == 2 else v)
    s_condition = _slot_conversion(q, yw, p1s, negate_slots=False)

    # forall-part: dual route (negate the core, convert, complement the slots)
    p2t = map_vars(parts.forall_part, lambda v: Var(2, v.index + 1) if v.block == 2 else v)
    t_condition = _slot_conversion(q, zw, Not(p2t), negate_slots=True)

    ks = s_condition.widths[1]
    kt = t_condition.widths[1]
    ms = s_condition.widths[2]
    mt = t_condition.widths[2]

    u = Var(1, q + 1)
    s_base = q + 1
    t_base = q + 1 + ks

    def relocate(offset_slots: int, offset_tails: int):
        def sub(v: Var) -> Expr:
            if v.block == 1:
                return v
            if v.block == 2:
                return Var(1, offset_slots + v.index)
            return Var(2, offset_tails + v.index)
        return sub

    s_final = map_vars(s_condition.body, relocate(s_base, 0))
    t_final = map_vars(t_condition.body, relocate(t_base, ms))

    s1t1 = And(Var(1, s_base + 1), Var(1, t_base + 1))
    u_agrees = And(Or(Not(u), s1t1), Or(u, Not(s1t1)))
    body = _and_fold([u, u_agrees, s_final, t_final])
    family = Family((q + 1 + ks + kt, ms + mt), body)
    return CompiledUval2(
        family=family, x_width=q, u_index=q + 1,
        s_range=(s_base + 1, s_base + ks), t_range=(t_base + 1, t_base + kt),
        s_tail_width=ms, t_tail_width=mt,
        s_condition=s_condition, t_condition=t_condition,
        source_size=circuit_size(c), compiled_size=family_size(family))


def slot_solution_profile(condition: Family, cap: int | None = None):
    """For a 3-block (x; slots; tails) condition family: per x, the number of
    slot choices whose tail-universal body holds, and the first bit of the
    lexicographically greatest such choice (-1 when none).

    Returns (counts, first_bits) as int arrays indexed by x in lex order.
    """
    q, k, tails = condition.widths
    # fold the tails universally across all (x, slots) rows at once
    held = inner_values(condition, Quantifier.FORALL, cap=cap,
                        keep_blocks=2).reshape(1 << q, 1 << k)
    counts = held.sum(axis=1)
    first_bits = np.full(1 << q, -1, dtype=int)
    if k:
        for xi in range(1 << q):
            hits = np.flatnonzero(held[xi])
            if hits.size:
                first_bits[xi] = (int(hits[-1]) >> (k - 1)) & 1
    return counts, first_bits
