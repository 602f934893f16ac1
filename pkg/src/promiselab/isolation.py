"""Randomized reduction of satisfiability to unique-satisfiability.

Each trial conjoins the input function with a random affine constraint system
over the two-element field (k rows of m coefficient bits plus an offset bit,
k drawn uniformly from {2, ..., m+1}).  With noticeable probability the
constraints cut a nonempty solution set down to exactly one solution, at
which point the unique-sat oracle is *forced* to answer 1.  Answering 1 is
sound unconditionally: any query with a solution came from a satisfiable
input.  The adversary resolves promise-violating queries; the pessimistic
default answers 0 (worst case for completeness, harmless for soundness).

Everything is driven by an explicit seeded generator; identical seeds give
identical trial streams bit for bit.  Draw order per trial: k (when not
pinned), then row coefficients row by row, each row followed by its offset.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ShapeError
from .expr import And, Const, Expr, Family, Not, Or, Var
from .semantics import ProblemId, ProblemKind, PromiseValue, solve

__all__ = [
    "HashConstraint", "sample_hash", "conjoin_hash",
    "vv_decide", "vv_possible_outputs", "default_trials", "isolation_frequency",
]


@dataclass(frozen=True)
class HashConstraint:
    rows: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.offsets):
            raise ShapeError("need one offset per row")
        if not self.rows:
            raise ShapeError("need at least one row")
        m = len(self.rows[0])
        if any(len(r) != m for r in self.rows):
            raise ShapeError("rows must share one width")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])


def sample_hash(m: int, k: int, rng: random.Random) -> HashConstraint:
    """Uniform independent coefficient and offset bits; 1 <= k <= m+1."""
    if not 1 <= k <= m + 1:
        raise ShapeError(f"k must be in 1..{m + 1}, got {k}")
    rows = []
    offsets = []
    for _ in range(k):
        rows.append(tuple(rng.randrange(2) for _ in range(m)))
        offsets.append(rng.randrange(2))
    return HashConstraint(tuple(rows), tuple(offsets))


def _xor(a: Expr, b: Expr) -> Expr:
    return And(Or(a, b), Not(And(a, b)))


def _parity(lits: list[Expr]) -> Expr:
    """Balanced exclusive-or tree; empty parity is the constant 0."""
    if not lits:
        return Const(0)
    while len(lits) > 1:
        lits = [_xor(lits[i], lits[i + 1]) if i + 1 < len(lits) else lits[i]
                for i in range(0, len(lits), 2)]
    return lits[0]


def conjoin_hash(f: Family, hc: HashConstraint) -> Family:
    """Conjoin one parity constraint per row: selected bits must xor to the
    row's offset.  Solutions of the result are f's solutions inside the
    affine subspace."""
    if f.level != 1:
        raise ShapeError("hash conjunction takes single-block families")
    if f.widths[0] != hc.m:
        raise ShapeError(f"constraint width {hc.m} != family width {f.widths[0]}")
    body = f.body
    for row, offset in zip(hc.rows, hc.offsets):
        lits = [Var(1, j + 1) for j, bit in enumerate(row) if bit]
        parity = _parity(lits)
        body = And(body, parity if offset else Not(parity))
    return Family(f.widths, body)


def default_trials(m: int) -> int:
    """Trial count targeting failure probability (1 - 1/(8m))^t < 1/3."""
    return 24 * m


def _k_bounds(m: int, k_range) -> tuple[int, int]:
    lo, hi = k_range if k_range else (2, m + 1)
    if not 1 <= lo <= hi <= m + 1:
        raise ShapeError(f"k range {lo}..{hi} outside 1..{m + 1}")
    return lo, hi


def _trial_query(f: Family, rng: random.Random, lo: int, hi: int) -> Family:
    k = rng.randint(lo, hi)
    return conjoin_hash(f, sample_hash(f.widths[0], k, rng))


def vv_decide(f: Family, rng: random.Random, trials: int,
              k_range: tuple[int, int] | None = None,
              cap: int | None = None) -> int:
    """Answer 1 as soon as any trial's unique-sat query is forced to 1,
    else 0 after all trials.  The adversary answers 0 on promise-violating
    queries (the pessimistic resolution)."""
    if f.level != 1 or f.widths[0] < 1:
        raise ShapeError("decision takes a single nonempty block")
    lo, hi = _k_bounds(f.widths[0], k_range)
    usat = ProblemId(ProblemKind.USAT)
    for _ in range(trials):
        q = _trial_query(f, rng, lo, hi)
        if solve(usat, q, cap=cap) is PromiseValue.ONE:
            return 1
    return 0


def vv_possible_outputs(f: Family, rng: random.Random, trials: int,
                        k_range: tuple[int, int] | None = None,
                        cap: int | None = None) -> frozenset[int]:
    """Every output some adversary can steer the decision to.

    Trials are independent, so the full answer tree collapses to: 1 is
    achievable iff some trial's oracle value contains 1, and 0 is achievable
    iff every trial's value contains 0.
    """
    if f.level != 1 or f.widths[0] < 1:
        raise ShapeError("decision takes a single nonempty block")
    lo, hi = _k_bounds(f.widths[0], k_range)
    usat = ProblemId(ProblemKind.USAT)
    one_reachable = False
    zero_reachable = True
    for _ in range(trials):
        v = solve(usat, _trial_query(f, rng, lo, hi), cap=cap)
        if 1 in v:
            one_reachable = True
        if 0 not in v:
            zero_reachable = False
    outputs = set()
    if one_reachable:
        outputs.add(1)
    if zero_reachable:
        outputs.add(0)
    return frozenset(outputs)


def isolation_frequency(f: Family, rng: random.Random, samples: int,
                        k_range: tuple[int, int] | None = None,
                        cap: int | None = None) -> float:
    """Fraction of trial queries with exactly one solution (measured, not
    assumed; compare against the 1/(8m) reference)."""
    if f.level != 1 or f.widths[0] < 1:
        raise ShapeError("isolation measurement takes a single nonempty block")
    lo, hi = _k_bounds(f.widths[0], k_range)
    usat = ProblemId(ProblemKind.USAT)
    hits = 0
    for _ in range(samples):
        if solve(usat, _trial_query(f, rng, lo, hi), cap=cap) is PromiseValue.ONE:
            hits += 1
    return hits / samples
