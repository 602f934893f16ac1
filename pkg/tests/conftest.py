"""Shared pure-Python enumeration oracles.

These deliberately avoid the package's vectorized truth-table path: they walk
assignments with itertools and evaluate expression trees by direct recursion,
so every derived expectation in the tests is computed twice through disjoint
code.
"""

from __future__ import annotations

from itertools import product

from promiselab import Family
from promiselab.expr import And, Const, Not, Or, Var


def ev(expr, blocks) -> int:
    """Independent recursive evaluator over per-block bit tuples."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return blocks[expr.block - 1][expr.index - 1]
    if isinstance(expr, Not):
        return 1 - ev(expr.arg, blocks)
    if isinstance(expr, And):
        return ev(expr.left, blocks) and ev(expr.right, blocks)
    if isinstance(expr, Or):
        return ev(expr.left, blocks) or ev(expr.right, blocks)
    raise TypeError(expr)


def block_values(width: int):
    return list(product((0, 1), repeat=width))


def brute_alternation(f: Family, fixed: tuple, start_exists: bool) -> int:
    """Alternating value over the blocks not yet fixed."""
    k = len(fixed)
    if k == len(f.widths):
        return ev(f.body, fixed)
    results = [brute_alternation(f, fixed + (x,), not start_exists)
               for x in block_values(f.widths[k])]
    return int(any(results)) if start_exists else int(all(results))


def brute_solution_set(f: Family) -> list[tuple[int, ...]]:
    """{x over block 1 | the remaining alternation, starting universal, holds}."""
    out = []
    for x in block_values(f.widths[0]):
        if brute_alternation(f, (x,), start_exists=False):
            out.append(x)
    return out


def brute_complement_set(f: Family) -> list[tuple[int, ...]]:
    """{x over block 1 | the remaining alternation, starting existential, fails}."""
    out = []
    for x in block_values(f.widths[0]):
        if not brute_alternation(f, (x,), start_exists=True):
            out.append(x)
    return out


def brute_solve(kind: str, f: Family) -> frozenset[int]:
    """Loop-based promise values, as bit sets."""
    m1 = f.widths[0]
    if kind == "SAT":
        return frozenset({1} if brute_solution_set(f) else {0})
    if kind == "COSAT":
        return frozenset({1} if not brute_complement_set(f) else {0})
    if kind == "USAT":
        sols = brute_solution_set(f)
        if len(sols) > 1:
            return frozenset({0, 1})
        return frozenset({1} if sols else {0})
    if kind == "COUSAT":
        bad = brute_complement_set(f)
        if len(bad) > 1:
            return frozenset({0, 1})
        return frozenset({1} if not bad else {0})
    sols = brute_solution_set(f)
    if kind == "MAXVAL":
        if not sols or m1 == 0:
            return frozenset({0, 1})
        return frozenset({max(sols)[0]})
    if kind == "MINVAL":
        if not sols or m1 == 0:
            return frozenset({0, 1})
        return frozenset({min(sols)[0]})
    if kind == "VAL":
        if not sols or m1 == 0:
            return frozenset({0, 1})
        return frozenset(x[0] for x in sols)
    if kind == "UVAL":
        if len(sols) != 1 or m1 == 0:
            return frozenset({0, 1})
        return frozenset({sols[0][0]})
    raise ValueError(kind)


def table_families(m: int):
    """All single-block families of width m, via the package constructor."""
    from promiselab import from_truth_table
    for code in range(1 << (1 << m)):
        yield from_truth_table((m,), [(code >> j) & 1 for j in range(1 << m)])
