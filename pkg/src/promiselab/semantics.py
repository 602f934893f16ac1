"""Exact brute-force semantics for the promise problems at every level.

Every problem value is an element of the three-point lattice
{ZERO, ONE, BOTH}: the nonempty subsets of {0,1}.  BOTH means the promise
failed and either answer is valid.  All solvers enumerate assignments
exhaustively (vectorized over numpy bool tables); exceeding the enumeration
cap is an error, never an approximation, because this module is the oracle
every other module is checked against.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, LevelMismatch
from .expr import Family, truth_table

__all__ = [
    "PromiseValue", "ProblemKind", "ProblemId", "Quantifier",
    "DEFAULT_CAP", "dual_value", "qbf_value", "first_block_solution_set",
    "solve", "inner_values", "value_of_bits",
]

# Total-assignment budget: solving is refused (CapExceeded) beyond this.
DEFAULT_CAP = 1 << 22


class PromiseValue(enum.Enum):
    ZERO = frozenset({0})
    ONE = frozenset({1})
    BOTH = frozenset({0, 1})

    @property
    def bits(self) -> frozenset[int]:
        return self.value

    def __contains__(self, bit: int) -> bool:
        return bit in self.value

    def __ge__(self, other: "PromiseValue") -> bool:
        return self.bits >= other.bits

    def __str__(self) -> str:
        return self.name


_FROM_BITS = {v.value: v for v in PromiseValue}


def value_of_bits(bits) -> PromiseValue:
    return _FROM_BITS[frozenset(int(b) for b in bits)]


def dual_value(v: PromiseValue) -> PromiseValue:
    """Complement both elements: ZERO <-> ONE, BOTH -> BOTH.  An involution."""
    return value_of_bits({1 - b for b in v.bits})


class ProblemKind(enum.Enum):
    SAT = "SAT"
    COSAT = "COSAT"
    MAXVAL = "MAXVAL"
    MINVAL = "MINVAL"
    VAL = "VAL"
    USAT = "USAT"
    COUSAT = "COUSAT"
    UVAL = "UVAL"


_PROBLEM_RE = re.compile(r"^([A-Z]+?)(\d+)?$")


@dataclass(frozen=True)
class ProblemId:
    kind: ProblemKind
    level: int = 1

    def __post_init__(self):
        if self.level < 1:
            raise LevelMismatch(f"problem level must be >= 1, got {self.level}")

    @classmethod
    def parse(cls, text: str) -> "ProblemId":
        m = _PROBLEM_RE.match(text.strip().upper())
        if not m or m.group(1) not in ProblemKind.__members__:
            names = ", ".join(k.name for k in ProblemKind)
            raise LevelMismatch(f"unknown problem {text!r}; expected one of {names} "
                                f"with an optional level suffix (e.g. UVAL2)")
        return cls(ProblemKind[m.group(1)], int(m.group(2) or 1))

    def __str__(self) -> str:
        return self.kind.value + (str(self.level) if self.level != 1 else "")


class Quantifier(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"

    @property
    def flipped(self) -> "Quantifier":
        return Quantifier.FORALL if self is Quantifier.EXISTS else Quantifier.EXISTS


def _check_cap(f: Family, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if 1 << f.total_width > cap:
        raise CapExceeded(
            f"2^{f.total_width} assignments exceed the cap of {cap} "
            f"(raise the cap explicitly to allow this)")


def _fold(table: np.ndarray, widths, quants) -> np.ndarray:
    """Collapse trailing blocks innermost-first under the given quantifiers."""
    arr = table
    for w, q in zip(reversed(widths), reversed(quants)):
        arr = arr.reshape(-1, 1 << w)
        arr = arr.any(axis=1) if q is Quantifier.EXISTS else arr.all(axis=1)
    return arr


def _alternation(start: Quantifier, n: int) -> list[Quantifier]:
    quants = []
    q = start
    for _ in range(n):
        quants.append(q)
        q = q.flipped
    return quants


def qbf_value(f: Family, start_quantifier: Quantifier, cap: int | None = None) -> int:
    """Alternating-quantifier value of f, starting with the given quantifier
    on block 1 and alternating across blocks; the fully fixed body is the base case."""
    _check_cap(f, cap)
    quants = _alternation(start_quantifier, f.level)
    return int(_fold(truth_table(f), f.widths, quants)[0])


def inner_values(f: Family, start: Quantifier, cap: int | None = None,
                 keep_blocks: int = 1) -> np.ndarray:
    """Bool vector over the first ``keep_blocks`` blocks of the alternating
    value of the remaining blocks, ``start`` quantifying the first folded one.
    With nothing left to fold this is the raw value table."""
    _check_cap(f, cap)
    table = truth_table(f)
    if f.level <= keep_blocks:
        return table
    quants = _alternation(start, f.level - keep_blocks)
    return _fold(table, f.widths[keep_blocks:], quants)


def _inner_indicator(f: Family, start: Quantifier, cap: int | None) -> np.ndarray:
    return inner_values(f, start, cap=cap)


def first_block_solution_set(f: Family, cap: int | None = None) -> list[tuple[int, ...]]:
    """The set of first-block values whose remaining alternation (starting with
    a universal block 2) holds, in lexicographic order."""
    ind = _inner_indicator(f, Quantifier.FORALL, cap)
    m1 = f.widths[0]
    return [tuple((int(j) >> (m1 - 1 - p)) & 1 for p in range(m1))
            for j in np.flatnonzero(ind)]


def _first_bit_value(indices: np.ndarray, m1: int) -> PromiseValue:
    # indices of solutions within 2^m1; first bit is the top bit
    if m1 == 0:
        # no first bit exists; the defining value set is empty, so the
        # promise cannot constrain the answer
        return PromiseValue.BOTH
    half = 1 << (m1 - 1)
    bits = set()
    if (indices < half).any():
        bits.add(0)
    if (indices >= half).any():
        bits.add(1)
    return value_of_bits(bits)


def solve(p: ProblemId, f: Family, cap: int | None = None) -> PromiseValue:
    """Exact promise value of problem ``p`` on family ``f``.

    The first-block solution set S = {x | inner alternation of f_x holds}
    drives SAT/MAXVAL/MINVAL/VAL/USAT/UVAL; COSAT and COUSAT are driven by the
    complement count of the dual inner alternation, per their definitions.
    """
    if p.level != f.level:
        raise LevelMismatch(f"problem {p} needs a {p.level}-block family, got {f.level} blocks")
    kind = p.kind
    m1 = f.widths[0]

    if kind in (ProblemKind.COSAT, ProblemKind.COUSAT):
        ind = _inner_indicator(f, Quantifier.EXISTS, cap)
        holds_everywhere = bool(ind.all())
        if kind is ProblemKind.COSAT:
            return PromiseValue.ONE if holds_everywhere else PromiseValue.ZERO
        n_failures = int(ind.size - np.count_nonzero(ind))
        if n_failures > 1:
            return PromiseValue.BOTH
        return PromiseValue.ONE if holds_everywhere else PromiseValue.ZERO

    ind = _inner_indicator(f, Quantifier.FORALL, cap)
    solutions = np.flatnonzero(ind)
    count = solutions.size

    if kind is ProblemKind.SAT:
        return PromiseValue.ONE if count else PromiseValue.ZERO
    if kind is ProblemKind.USAT:
        if count > 1:
            return PromiseValue.BOTH
        return PromiseValue.ONE if count else PromiseValue.ZERO
    if kind is ProblemKind.MAXVAL:
        if count == 0:
            return PromiseValue.BOTH
        return _first_bit_value(solutions[-1:], m1)
    if kind is ProblemKind.MINVAL:
        if count == 0:
            return PromiseValue.BOTH
        return _first_bit_value(solutions[:1], m1)
    if kind is ProblemKind.VAL:
        if count == 0:
            return PromiseValue.BOTH
        return _first_bit_value(solutions, m1)
    if kind is ProblemKind.UVAL:
        if count != 1:
            return PromiseValue.BOTH
        return _first_bit_value(solutions, m1)
    raise AssertionError(f"unhandled problem kind {kind}")
