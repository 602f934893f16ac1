"""The catalog of strong reductions as executable family transforms.

A :class:`ReductionRule` rewrites a source instance into a target instance so
that the source problem's value contains (or equals) the target problem's
value on the rewritten instance.  Dual rules compare against the complemented
source value instead.  Every rule here is checkable against the brute-force
semantics, and the harness does exactly that, exhaustively at small widths.

Rules touching only block 1 lift to any level: request ``name@n`` from the
registry (bare names default to level 1; ``dual_uvaln`` defaults to level 2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .errors import ShapeError, TypeMismatch, UnknownRule
from .expr import (
    And, Const, Expr, Family, Not, Or, Var,
    add_leading_variable, family_size, fix_first_block_prefix, map_vars,
    negate_block_inputs, negate_output,
)
from .faults import fault_active
from .semantics import ProblemId, ProblemKind, PromiseValue, dual_value, solve

__all__ = [
    "RuleKind", "ReductionRule", "CheckResult", "Registry", "DEFAULT_REGISTRY",
    "apply_rule", "check_rule", "compose_rules", "identity_rule",
    "lexmax_rows", "first_bit_family",
    "build_val_intersection", "build_uval_intersection",
    "check_val_intersection", "check_uval_intersection",
]


class RuleKind(enum.Enum):
    EQUALITY = "equality"
    CONTAINMENT = "containment"


@dataclass(frozen=True)
class ReductionRule:
    name: str
    source: ProblemId | None  # None: source is a raw bit string (first-bit projection)
    target: ProblemId
    transform: Callable
    kind: RuleKind
    dual: bool = False       # compare dual_value(source value) against the target value
    size_coeff: int = 8      # output size must stay <= coeff * input size^2

    def __call__(self, instance):
        return self.transform(instance)


@dataclass(frozen=True)
class CheckResult:
    rule: str
    instance: str
    source_value: PromiseValue
    target_value: PromiseValue
    size_ok: bool
    passed: bool

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.rule} on {self.instance!r}: "
                f"source={self.source_value} target={self.target_value}"
                + ("" if self.size_ok else " [size bound exceeded]"))


# ---------------------------------------------------------------------------
# shared gadget core

def lexmax_rows(body: Expr, slots: Sequence[Var],
                tail_var: Callable[[int, int], Var],
                inner_remap: Callable[[int, Var], Expr] | None = None) -> list[Expr]:
    """Row conjuncts pinning the slot variables to the lexicographically
    greatest satisfying choice of ``body``.

    Row i (1-based) asserts: slot_i is set, or no satisfying choice extends
    the current prefix with slot_i set.  The refuted copy keeps slots < i,
    substitutes 1 at slot i, replaces slots > i by fresh universal tails
    (``tail_var(i, offset)``), and routes every non-slot variable through
    ``inner_remap(i, var)`` when given (identity otherwise).
    """
    k = len(slots)
    slot_pos = {v: p for p, v in enumerate(slots, start=1)}
    rows = []
    last = k - 1 if fault_active("gadget-skip-last-row") else k
    for i in range(1, last + 1):
        def sub(v: Var, i=i) -> Expr:
            p = slot_pos.get(v)
            if p is None:
                return inner_remap(i, v) if inner_remap else v
            if p < i:
                return v
            if p == i:
                return Const(1)
            return tail_var(i, p - i - 1)
        copy = map_vars(body, sub)
        if not fault_active("gadget-drop-row-negation"):
            copy = Not(copy)
        rows.append(Or(slots[i - 1], copy))
    return rows


def _and_fold(conjuncts: Sequence[Expr]) -> Expr:
    out = conjuncts[0]
    for c in conjuncts[1:]:
        out = And(out, c)
    return out


def _lexmax_gadget(f: Family) -> Family:
    """Maximum-value instance -> unique-value instance one level up.

    For a single-block f of width m the output spans blocks (m, m(m-1)/2):
    the body conjoined with one row per position, row i refuting any
    satisfying extension of (x_1..x_{i-1}, 1) via fresh universal tails.
    The unique witness of the output is the lex-max solution of f, so its
    first bit is exactly the source's answer.

    For n-block f the same block-1 surgery applies; row copies additionally
    re-map every inner block j to a fresh per-row group in block j+1, which
    prenexes the refuted inner alternation.  Tails still extend block 2.
    """
    m1 = f.widths[0]
    n = f.level
    inner = f.widths[1:]
    tail_total = m1 * (m1 - 1) // 2

    widths = [m1]
    widths.append((inner[0] if n >= 2 else 0) + tail_total)
    for j in range(3, n + 1):
        widths.append(f.widths[j - 1] + m1 * f.widths[j - 2])
    if n >= 2:
        widths.append(m1 * f.widths[n - 1])

    def tail_var(i: int, offset: int) -> Var:
        base = (inner[0] if n >= 2 else 0)
        row_start = (i - 1) * m1 - i * (i - 1) // 2  # sum of (m1 - r) for r < i
        return Var(2, base + row_start + offset + 1)

    def inner_remap(i: int, v: Var) -> Expr:
        # copy of old block j (>= 2) for row i lives in new block j+1,
        # after that block's own surviving variables
        old_here = f.widths[v.block] if v.block + 1 <= n else 0
        return Var(v.block + 1, old_here + (i - 1) * f.widths[v.block - 1] + v.index)

    slots = [Var(1, i) for i in range(1, m1 + 1)]
    rows = lexmax_rows(f.body, slots, tail_var, inner_remap if n >= 2 else None)
    return Family(tuple(widths), _and_fold([f.body] + rows))


def first_bit_family(x) -> Family:
    """Single-variable family whose unique solution is the input's first bit."""
    bits = _parse_bits(x)
    if not bits:
        raise ShapeError("input string must be nonempty")
    return Family((1,), Var(1, 1) if bits[0] else Not(Var(1, 1)))


def _parse_bits(x) -> tuple[int, ...]:
    if isinstance(x, str):
        x = x.strip()
        if not all(c in "01" for c in x):
            raise ShapeError(f"expected a bit string, got {x!r}")
        return tuple(int(c) for c in x)
    return tuple(int(b) for b in x)


# ---------------------------------------------------------------------------
# the rule catalog

def _require_level(f: Family, level: int, name: str) -> None:
    if f.level != level:
        raise ShapeError(f"rule {name} expects a {level}-block family, got {f.level} blocks")


def _require_width(f: Family, name: str) -> None:
    if f.widths[0] < 1:
        raise ShapeError(f"rule {name} needs a nonempty first block")


def _sat_to_maxval(f: Family) -> Family:
    g = add_leading_variable(f, 1)
    guard = Var(1, 1) if fault_active("sat-to-maxval-positive-guard") else Not(Var(1, 1))
    return Family(g.widths, Or(g.body, guard))


def _maxval_to_sat(f: Family) -> Family:
    _require_width(f, "maxval_to_sat")
    return Family(f.widths, And(f.body, Var(1, 1)))


def _fix_first_bit_keep_block(f: Family, bit: int) -> Family:
    # like fix_first_block_prefix but never drops an emptied first block,
    # so the problem level is preserved
    _require_width(f, "uval_to_usat")
    body = map_vars(f.body, lambda v: Const(bit) if v == Var(1, 1)
                    else (Var(1, v.index - 1) if v.block == 1 else v))
    return Family((f.widths[0] - 1,) + f.widths[1:], body)


def _uval_to_usat(f: Family) -> Family:
    bit = 0 if fault_active("uval-usat-fix-zero") else 1
    return _fix_first_bit_keep_block(f, bit)


def _builders() -> dict[str, tuple[int, Callable[[int], ReductionRule]]]:
    """name -> (default level, builder taking the level)."""
    def entry(name, src_kind, tgt_kind, transform, kind,
              dual=False, tgt_level_shift=0, default_level=1):
        def build(level: int) -> ReductionRule:
            def apply(f: Family):
                _require_level(f, level, name)
                return transform(f)
            return ReductionRule(
                name=name if level == default_level else f"{name}@{level}",
                source=ProblemId(src_kind, level),
                target=ProblemId(tgt_kind, level + tgt_level_shift),
                transform=apply, kind=kind, dual=dual)
        return default_level, build

    neg_out = negate_output
    neg_in = lambda f: negate_block_inputs(f, 1)
    ident = lambda f: f
    EQ, CONT = RuleKind.EQUALITY, RuleKind.CONTAINMENT
    K = ProblemKind
    return {
        "dual_sat": entry("dual_sat", K.SAT, K.COSAT, neg_out, EQ, dual=True),
        "dual_cosat": entry("dual_cosat", K.COSAT, K.SAT, neg_out, EQ, dual=True),
        "dual_maxval": entry("dual_maxval", K.MAXVAL, K.MINVAL, neg_in, EQ, dual=True),
        "dual_minval": entry("dual_minval", K.MINVAL, K.MAXVAL, neg_in, EQ, dual=True),
        "dual_val": entry("dual_val", K.VAL, K.VAL, neg_in, EQ, dual=True),
        "dual_usat": entry("dual_usat", K.USAT, K.COUSAT, neg_out, EQ, dual=True),
        "dual_cousat": entry("dual_cousat", K.COUSAT, K.USAT, neg_out, EQ, dual=True),
        "dual_uval": entry("dual_uval", K.UVAL, K.UVAL, neg_in, EQ, dual=True),
        "dual_uvaln": entry("dual_uvaln", K.UVAL, K.UVAL, neg_in, EQ, dual=True,
                            default_level=2),
        "sat_to_maxval": entry("sat_to_maxval", K.SAT, K.MAXVAL, _sat_to_maxval, EQ),
        "maxval_to_sat": entry("maxval_to_sat", K.MAXVAL, K.SAT, _maxval_to_sat, CONT),
        "uval_to_val": entry("uval_to_val", K.UVAL, K.VAL, ident, CONT),
        "val_to_maxval": entry("val_to_maxval", K.VAL, K.MAXVAL, ident, CONT),
        "uval_to_usat": entry("uval_to_usat", K.UVAL, K.USAT, _uval_to_usat, CONT),
        "usat_to_sat": entry("usat_to_sat", K.USAT, K.SAT, ident, CONT),
        "maxval_to_uvaln1": entry("maxval_to_uvaln1", K.MAXVAL, K.UVAL,
                                  _lexmax_gadget, CONT, tgt_level_shift=1),
    }


# The 13 catalogued transforms (the three extra dual_* names are the same
# dual equalities read in the reverse direction, needed to close compositions).
CATALOG = (
    "dual_sat", "dual_maxval", "dual_val", "dual_usat", "dual_uval", "dual_uvaln",
    "sat_to_maxval", "maxval_to_sat", "uval_to_val", "val_to_maxval",
    "uval_to_usat", "usat_to_sat", "maxval_to_uvaln1",
)

PI1_RULE = ReductionRule(
    name="pi1_to_uval", source=None, target=ProblemId(ProblemKind.UVAL, 1),
    transform=first_bit_family, kind=RuleKind.EQUALITY)


def compose_rules(r1: ReductionRule, r2: ReductionRule) -> ReductionRule:
    """Chain two rules; kinds weaken to containment unless both are equalities,
    dual comparison flags cancel in pairs."""
    if r1.target != r2.source:
        raise TypeMismatch(f"cannot compose {r1.name} ({r1.target}) with {r2.name} ({r2.source})")
    kind = RuleKind.EQUALITY if (r1.kind is RuleKind.EQUALITY and r2.kind is RuleKind.EQUALITY) \
        else RuleKind.CONTAINMENT
    return ReductionRule(
        name=f"{r1.name};{r2.name}",
        source=r1.source, target=r2.target,
        transform=lambda x: r2.transform(r1.transform(x)),
        kind=kind, dual=r1.dual != r2.dual,
        size_coeff=max(r1.size_coeff, r2.size_coeff) ** 2)


def identity_rule(problem: ProblemId) -> ReductionRule:
    return ReductionRule(name=f"identity[{problem}]", source=problem, target=problem,
                         transform=lambda f: f, kind=RuleKind.EQUALITY)


class Registry:
    """Named rules plus recorded composition chains."""

    def __init__(self):
        self._builders = _builders()
        self.compositions: dict[str, tuple[str, ...]] = {}
        for alias, chain in _DEFAULT_COMPOSITIONS.items():
            self.register_composition(alias, chain)

    def rule_names(self) -> list[str]:
        return list(CATALOG) + ["pi1_to_uval"]

    def rule(self, name: str) -> ReductionRule:
        """Look up ``name`` or ``name@level``."""
        base, _, suffix = name.partition("@")
        if base == "pi1_to_uval":
            if suffix:
                raise UnknownRule("pi1_to_uval takes no level")
            return PI1_RULE
        if base not in self._builders:
            raise UnknownRule(f"unknown rule {name!r}")
        default, build = self._builders[base]
        if suffix:
            try:
                level = int(suffix)
            except ValueError:
                raise UnknownRule(f"bad level suffix in {name!r}") from None
            if level < 1:
                raise UnknownRule(f"bad level suffix in {name!r}")
        else:
            level = default
        return build(level)

    def compose(self, *names: str) -> ReductionRule:
        rules = [self.rule(n) for n in names]
        out = rules[0]
        for r in rules[1:]:
            out = compose_rules(out, r)
        return out

    def register_composition(self, alias: str, chain: Sequence[str]) -> None:
        self.compose(*chain)  # validates endpoint chaining
        self.compositions[alias] = tuple(chain)

    def composition(self, alias: str, level: int | None = None) -> ReductionRule:
        """Build a recorded chain, optionally re-based at a level: each link
        is instantiated at the running target level of the link before it
        (so chains that climb a level stay well-typed)."""
        if alias not in self.compositions:
            raise UnknownRule(f"unknown composition {alias!r}")
        chain = self.compositions[alias]
        if level is None:
            return self.compose(*chain)
        rules = []
        current = level
        for name in chain:
            r = self.rule(f"{name.partition('@')[0]}@{current}")
            rules.append(r)
            current = r.target.level
        out = rules[0]
        for r in rules[1:]:
            out = compose_rules(out, r)
        return out


_DEFAULT_COMPOSITIONS = {
    # existential form -> unique-value form, two levels up front
    "sat_to_uval2": ("sat_to_maxval", "maxval_to_uvaln1"),
    # the dual route for the universal form
    "cosat_to_uval2": ("dual_cosat", "sat_to_maxval", "maxval_to_uvaln1", "dual_uvaln"),
    # diagram edges not witnessed by a single rule
    "uval_to_cousat": ("dual_uval", "uval_to_usat", "dual_usat"),
    "val_to_minval": ("dual_val", "val_to_maxval", "dual_maxval"),
    "cousat_to_cosat": ("dual_cousat", "usat_to_sat", "dual_sat"),
    "uval_to_maxval": ("uval_to_val", "val_to_maxval"),
}

DEFAULT_REGISTRY = Registry()


def apply_rule(name: str, instance) -> Family:
    """Transform an instance by the named rule (``Family`` for all rules,
    a bit string for ``pi1_to_uval``)."""
    return DEFAULT_REGISTRY.rule(name)(instance)


def _source_value(rule: ReductionRule, instance, cap=None) -> PromiseValue:
    if rule.source is None:
        bits = _parse_bits(instance)
        if not bits:
            raise ShapeError("input string must be nonempty")
        return PromiseValue.ONE if bits[0] else PromiseValue.ZERO
    return solve(rule.source, instance, cap=cap)


def check_rule(rule, instance, cap=None) -> CheckResult:
    """PASS iff the (possibly complemented) source value contains the target
    value on the transformed instance -- equality for equality rules -- and
    the output stayed within the recorded polynomial size bound."""
    if isinstance(rule, str):
        rule = DEFAULT_REGISTRY.rule(rule)
    src = _source_value(rule, instance, cap=cap)
    if rule.dual:
        src = dual_value(src)
    out = rule.transform(instance)
    tgt = solve(rule.target, out, cap=cap)
    contained = (src == tgt) if rule.kind is RuleKind.EQUALITY else src.bits >= tgt.bits
    in_size = family_size(instance) if isinstance(instance, Family) else max(len(_parse_bits(instance)), 1)
    size_ok = family_size(out) <= rule.size_coeff * max(in_size, 2) ** 2
    text = str(instance) if isinstance(instance, Family) else "".join(map(str, _parse_bits(instance)))
    return CheckResult(rule=rule.name, instance=text, source_value=src,
                       target_value=tgt, size_ok=size_ok, passed=contained and size_ok)


# ---------------------------------------------------------------------------
# intersection witness constructions

def _witness_pair(g: Family, h: Family, x) -> tuple[Family, Family, tuple[int, ...]]:
    if g.level != 2 or h.level != 2:
        raise ShapeError("witnesses must be 2-block families (x-block, y-block)")
    if g.widths != h.widths:
        raise ShapeError(f"witness shapes differ: {g.widths} vs {h.widths}")
    x = _parse_bits(x)
    if len(x) != g.widths[0]:
        raise ShapeError(f"x has {len(x)} bits, x-block width is {g.widths[0]}")
    return g, h, x


def _case_split(g: Family, h: Family, x) -> Family:
    """One-block family over (i, y): value g(x, y) when i = 1, not-h(x, y) when i = 0."""
    g, h, x = _witness_pair(g, h, x)
    gx = add_leading_variable(fix_first_block_prefix(g, x), 1)
    hx = add_leading_variable(fix_first_block_prefix(h, x), 1)
    i = Var(1, 1)
    return Family(gx.widths, Or(And(i, gx.body), And(Not(i), Not(hx.body))))


def build_val_intersection(g: Family, h: Family, x) -> Family:
    """Witness for: a problem reducible to both the existential and the
    universal side is reducible to the any-first-bit problem.  Whenever the
    built family has a solution (i, y), bit i is a sound answer; when it has
    none, both answers are sound."""
    return _case_split(g, h, x)


def build_uval_intersection(g: Family, h: Family, x) -> Family:
    """Same construction, consumed under uniqueness analysis: a unique
    solution (i, y) forces bit i through the unique-witness sides."""
    return _case_split(g, h, x)


def check_val_intersection(g: Family, h: Family, x, cap=None) -> bool:
    """VAL of the case split is contained in {SAT(g_x)} union {coSAT(h_x)}."""
    f = build_val_intersection(g, h, x)
    gx = fix_first_block_prefix(g, _parse_bits(x))
    hx = fix_first_block_prefix(h, _parse_bits(x))
    forced = (solve(ProblemId(ProblemKind.SAT), gx, cap=cap).bits
              | solve(ProblemId(ProblemKind.COSAT), hx, cap=cap).bits)
    return solve(ProblemId(ProblemKind.VAL), f, cap=cap).bits <= forced


def check_uval_intersection(g: Family, h: Family, x, cap=None) -> bool:
    """UVAL of the case split is contained in USAT(g_x) union coUSAT(h_x)."""
    f = build_uval_intersection(g, h, x)
    gx = fix_first_block_prefix(g, _parse_bits(x))
    hx = fix_first_block_prefix(h, _parse_bits(x))
    forced = (solve(ProblemId(ProblemKind.USAT), gx, cap=cap).bits
              | solve(ProblemId(ProblemKind.COUSAT), hx, cap=cap).bits)
    return solve(ProblemId(ProblemKind.UVAL), f, cap=cap).bits <= forced
