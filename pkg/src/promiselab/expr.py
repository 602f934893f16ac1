"""Expression IR for boolean functions over ordered blocks of bit variables.

A :class:`Family` is a boolean function ``f: {0,1}^m1 x ... x {0,1}^mn -> {0,1}``
given as an expression tree over variables ``b<block>_<index>`` (both 1-based).
Assignments are ordered lexicographically with the very first variable most
significant, so at width 2 the order is 00 < 01 < 10 < 11.

Textual grammar (whitespace insignificant, precedence ! > & > |)::

    family := "blocks" width ("," width)* ";" expr
    expr   := term ("|" term)*
    term   := factor ("&" factor)*
    factor := "!" factor | "(" expr ")" | "0" | "1" | "b" INT "_" INT

All values are immutable and safe to share between workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import ParseError, ShapeError, WidthError

__all__ = [
    "Const", "Var", "Not", "And", "Or", "Expr", "Family", "Assignment",
    "parse_expr", "print_expr", "evaluate", "fix_first_block_prefix",
    "negate_output", "negate_block_inputs", "add_leading_variable",
    "from_truth_table", "truth_table", "expr_size", "family_size",
    "map_vars", "all_assignments", "assignment_from_index",
]


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ShapeError(f"constant must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    block: int
    index: int

    def __post_init__(self):
        if self.block < 1 or self.index < 1:
            raise ShapeError(f"variable reference b{self.block}_{self.index} must be 1-based")


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Not, And, Or]

# One bit sequence per block, lengths matching Family.widths exactly.
Assignment = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Family:
    widths: tuple[int, ...]
    body: Expr

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        if len(self.widths) < 1:
            raise ShapeError("a family needs at least one block")
        if any(w < 0 for w in self.widths):
            raise ShapeError(f"negative block width in {self.widths}")
        _check_vars(self.body, self.widths)

    @property
    def level(self) -> int:
        return len(self.widths)

    @property
    def total_width(self) -> int:
        return sum(self.widths)

    def __str__(self) -> str:
        return print_expr(self)


def _check_vars(e: Expr, widths: Sequence[int]) -> None:
    if isinstance(e, Var):
        if e.block > len(widths) or e.index > widths[e.block - 1]:
            raise WidthError(
                f"variable b{e.block}_{e.index} out of range for block widths {tuple(widths)}")
    elif isinstance(e, Not):
        _check_vars(e.arg, widths)
    elif isinstance(e, (And, Or)):
        _check_vars(e.left, widths)
        _check_vars(e.right, widths)


# ---------------------------------------------------------------------------
# parsing / printing

_TOKEN_RE = re.compile(r"\s*(?:(b\d+_\d+)|(\d+)|([A-Za-z_]\w*)|([|&!();,]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, position) triples; kinds: var, int, word, sym."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        var, num, word, sym = m.groups()
        start = m.end() - len(m.group().lstrip())
        if var:
            tokens.append(("var", var, start))
        elif num:
            tokens.append(("int", num, start))
        elif word:
            tokens.append(("word", word, start))
        else:
            tokens.append(("sym", sym, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token stream.

    ``atom`` is a hook turning a leaf token into an Expr, so the same
    precedence machinery serves both the family grammar and the circuit
    gate grammar (which has different variable atoms).
    """

    def __init__(self, tokens, atom: Callable[[tuple[str, str, int]], Expr]):
        self.tokens = tokens
        self.i = 0
        self.atom = atom

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind, text=None):
        t = self.next()
        if t[0] != kind or (text is not None and t[1] != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[:2] == ("sym", "|"):
            self.next()
            e = Or(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[:2] == ("sym", "&"):
            self.next()
            e = And(e, self.factor())
        return e

    def factor(self) -> Expr:
        t = self.peek()
        if t[:2] == ("sym", "!"):
            self.next()
            return Not(self.factor())
        if t[:2] == ("sym", "("):
            self.next()
            e = self.expr()
            self.expect("sym", ")")
            return e
        return self.atom(self.next())


def _family_atom(token) -> Expr:
    kind, text, pos = token
    if kind == "int":
        if text in ("0", "1"):
            return Const(int(text))
        raise ParseError(f"only constants 0 and 1 are allowed, found {text!r}", pos)
    if kind == "var":
        block, index = text[1:].split("_")
        return Var(int(block), int(index))
    raise ParseError(f"expected a variable, constant or '(', found {text or 'end of input'!r}", pos)


def parse_expr(text: str) -> Family:
    """Parse the textual family format into a :class:`Family`.

    Raises :class:`ParseError` with a position on malformed input and
    :class:`WidthError` when a variable exceeds its declared block width.
    """
    tokens = _tokenize(text)
    p = _Parser(tokens, _family_atom)
    p.expect("word", "blocks")
    widths = [int(p.expect("int")[1])]
    while p.peek()[:2] == ("sym", ","):
        p.next()
        widths.append(int(p.expect("int")[1]))
    p.expect("sym", ";")
    body = p.expr()
    p.expect("eof")
    try:
        return Family(tuple(widths), body)
    except WidthError:
        # re-walk to find the offending token position
        for kind, tok, pos in tokens:
            if kind == "var":
                b, i = (int(s) for s in tok[1:].split("_"))
                if b > len(widths) or i > widths[b - 1]:
                    raise WidthError(
                        f"variable {tok} out of range for block widths {tuple(widths)}", pos)
        raise


def _print(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return f"b{e.block}_{e.index}"
    if isinstance(e, Not):
        return "!" + _print(e.arg)
    op = "&" if isinstance(e, And) else "|"
    return f"({_print(e.left)} {op} {_print(e.right)})"


def print_expr(f: Family) -> str:
    """Canonical text; ``parse_expr(print_expr(f))`` is structurally identical to f."""
    return f"blocks {','.join(str(w) for w in f.widths)}; {_print(f.body)}"


# ---------------------------------------------------------------------------
# evaluation

def _normalize(f: Family, a) -> Assignment:
    a = tuple(tuple(int(b) for b in blk) for blk in a)
    if tuple(len(blk) for blk in a) != f.widths:
        raise ShapeError(f"assignment shape {tuple(len(b) for b in a)} does not match widths {f.widths}")
    if any(b not in (0, 1) for blk in a for b in blk):
        raise ShapeError("assignment bits must be 0 or 1")
    return a


def evaluate(f: Family, a) -> int:
    """Evaluate the family at one assignment (a sequence of per-block bit sequences)."""
    a = _normalize(f, a)

    def go(e: Expr) -> int:
        if isinstance(e, Const):
            return e.value
        if isinstance(e, Var):
            return a[e.block - 1][e.index - 1]
        if isinstance(e, Not):
            return 1 - go(e.arg)
        if isinstance(e, And):
            return go(e.left) and go(e.right)
        return go(e.left) or go(e.right)

    return go(f.body)


@lru_cache(maxsize=4096)
def _var_pattern(total: int, position: int) -> np.ndarray:
    pattern = np.tile(np.repeat(np.array([False, True]), 1 << (total - 1 - position)),
                      1 << position)
    pattern.setflags(write=False)
    return pattern


def truth_table(f: Family) -> np.ndarray:
    """Vector of f's values over all 2^total assignments, in lexicographic order.

    Entry j is f at the assignment whose concatenated bits spell j in binary,
    first variable most significant.
    """
    total = f.total_width
    n_rows = 1 << total
    offsets = [0]
    for w in f.widths:
        offsets.append(offsets[-1] + w)

    def go(e: Expr) -> np.ndarray:
        if isinstance(e, Const):
            return np.full(n_rows, bool(e.value))
        if isinstance(e, Var):
            return _var_pattern(total, offsets[e.block - 1] + e.index - 1)
        if isinstance(e, Not):
            return ~go(e.arg)
        if isinstance(e, And):
            return go(e.left) & go(e.right)
        return go(e.left) | go(e.right)

    return go(f.body)


def all_assignments(widths: Sequence[int]) -> Iterable[Assignment]:
    """All assignments for the given block widths, in lexicographic order."""
    total = sum(widths)
    for j in range(1 << total):
        yield assignment_from_index(widths, j)


def assignment_from_index(widths: Sequence[int], j: int) -> Assignment:
    total = sum(widths)
    bits = [(j >> (total - 1 - p)) & 1 for p in range(total)]
    out = []
    at = 0
    for w in widths:
        out.append(tuple(bits[at:at + w]))
        at += w
    return tuple(out)


# ---------------------------------------------------------------------------
# structural transforms

def map_vars(e: Expr, fn: Callable[[Var], Expr]) -> Expr:
    """Rebuild an expression replacing every variable leaf via ``fn``."""
    if isinstance(e, Var):
        return fn(e)
    if isinstance(e, Not):
        return Not(map_vars(e.arg, fn))
    if isinstance(e, And):
        return And(map_vars(e.left, fn), map_vars(e.right, fn))
    if isinstance(e, Or):
        return Or(map_vars(e.left, fn), map_vars(e.right, fn))
    return e


def fix_first_block_prefix(f: Family, bits: Sequence[int]) -> Family:
    """Substitute the leading ``len(bits)`` variables of block 1 by constants.

    The first block shrinks accordingly and its remaining variables are
    reindexed.  A fully fixed first block is dropped when other blocks remain,
    and kept at width 0 for single-block families.
    """
    bits = tuple(int(b) for b in bits)
    k = len(bits)
    m1 = f.widths[0]
    if k > m1:
        raise ShapeError(f"cannot fix {k} bits of a width-{m1} block")
    drop = (k == m1 and f.level > 1)

    def sub(v: Var) -> Expr:
        if v.block == 1:
            if v.index <= k:
                return Const(bits[v.index - 1])
            return Var(1, v.index - k)
        return Var(v.block - 1, v.index) if drop else v

    widths = f.widths[1:] if drop else (m1 - k,) + f.widths[1:]
    return Family(widths, map_vars(f.body, sub))


def negate_output(f: Family) -> Family:
    """Flip the function's value on every assignment."""
    return Family(f.widths, Not(f.body))


def negate_block_inputs(f: Family, block: int) -> Family:
    """Substitute every variable of one block by its negation.

    Evaluating the result at ``a`` equals evaluating f at ``a`` with that
    block's bits flipped; applying twice is evaluation-equivalent to identity.
    """
    if not 1 <= block <= f.level:
        raise IndexError(f"block {block} out of range for {f.level} blocks")
    return Family(f.widths, map_vars(f.body, lambda v: Not(v) if v.block == block else v))


def add_leading_variable(f: Family, block: int) -> Family:
    """Grow one block by a fresh, unused leading variable; old indices shift by +1."""
    if not 1 <= block <= f.level:
        raise IndexError(f"block {block} out of range for {f.level} blocks")
    widths = tuple(w + 1 if k == block - 1 else w for k, w in enumerate(f.widths))
    return Family(widths, map_vars(
        f.body, lambda v: Var(v.block, v.index + 1) if v.block == block else v))


def from_truth_table(widths: Sequence[int], table: Sequence[int]) -> Family:
    """Canonical disjunctive-form family reproducing the given value vector.

    ``table`` must list 2^total bits in lexicographic assignment order.
    """
    widths = tuple(int(w) for w in widths)
    total = sum(widths)
    table = [int(b) for b in table]
    if len(table) != 1 << total:
        raise ShapeError(f"table length {len(table)} != 2^{total}")
    if any(b not in (0, 1) for b in table):
        raise ShapeError("table entries must be 0 or 1")
    if total == 0:
        return Family(widths, Const(table[0]))

    positions = []  # (block, index) in msb-first order
    for bnum, w in enumerate(widths, start=1):
        positions.extend((bnum, i) for i in range(1, w + 1))

    minterms = []
    for j, bit in enumerate(table):
        if not bit:
            continue
        lits: list[Expr] = []
        for p, (bnum, idx) in enumerate(positions):
            v = Var(bnum, idx)
            lits.append(v if (j >> (total - 1 - p)) & 1 else Not(v))
        term = lits[0]
        for lit in lits[1:]:
            term = And(term, lit)
        minterms.append(term)
    if not minterms:
        return Family(widths, Const(0))
    body = minterms[0]
    for term in minterms[1:]:
        body = Or(body, term)
    return Family(widths, body)


def expr_size(e: Expr) -> int:
    """Node count of an expression tree."""
    if isinstance(e, Not):
        return 1 + expr_size(e.arg)
    if isinstance(e, (And, Or)):
        return 1 + expr_size(e.left) + expr_size(e.right)
    return 1


def family_size(f: Family) -> int:
    """Size measure used by the polynomial-growth assertions on transforms."""
    return expr_size(f.body) + f.total_width + f.level
