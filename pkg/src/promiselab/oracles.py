"""Oracle machines run against adversarially resolved promise oracles.

A machine is a generator: it yields query families and receives answer bits,
finally returning its output bit.  The runner solves every query exactly;
whenever the value is BOTH (the query violates the oracle's promise) the
adversary gets to choose, so the runner explores *both* answers and records
every leaf.  A machine is correct for a problem when every leaf's output is a
member of the problem's value on the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import PathCapExceeded, ShapeError
from .expr import Family, evaluate, fix_first_block_prefix, print_expr
from .faults import fault_active
from .semantics import ProblemId, ProblemKind, PromiseValue, solve

__all__ = [
    "OracleCall", "Transcript", "AdversaryTree", "MachineSpec",
    "MACHINES", "run_adversarial",
    "machine_sat_via_val", "machine_usat_via_uval",
    "machine_sat_identity", "machine_usat_identity",
]

DEFAULT_PATH_CAP = 4096


@dataclass(frozen=True)
class OracleCall:
    query: Family
    answer: int
    forced: bool  # the oracle's value was a singleton


@dataclass(frozen=True)
class Transcript:
    calls: tuple[OracleCall, ...]
    output: int

    def dump(self) -> str:
        lines = [f"Q {print_expr(c.query)} -> {c.answer} [{'forced' if c.forced else 'free'}]"
                 for c in self.calls]
        lines.append(f"OUT {self.output}")
        return "\n".join(lines)


@dataclass(frozen=True)
class AdversaryTree:
    transcripts: tuple[Transcript, ...]  # leaves in answer-0-first depth-first order
    max_calls: int

    @property
    def leaf_outputs(self) -> tuple[int, ...]:
        return tuple(t.output for t in self.transcripts)

    def outputs(self) -> frozenset[int]:
        return frozenset(self.leaf_outputs)


@dataclass(frozen=True)
class MachineSpec:
    name: str
    run: Callable[[Family], Iterator[Family]]
    oracle_kind: ProblemKind
    oracle_level: Callable[[Family], int]
    validate: Callable[[Family], None]


def _one_block(f: Family) -> None:
    if f.level != 1:
        raise ShapeError("this machine takes single-block families")


def machine_sat_via_val(f: Family):
    """Bit-fixing search with an any-first-bit oracle: query the oracle for
    each successive bit of a putative solution, fix it, and finally evaluate
    the original function on the assembled assignment."""
    bits = []
    g = f
    for _ in range(f.widths[0]):
        b = yield g
        bits.append(b)
        g = fix_first_block_prefix(g, (b,))
    if fault_active("machine-skip-final-eval"):
        return bits[-1] if bits else 0
    return evaluate(f, (tuple(bits),))


def machine_usat_via_uval(f: Family):
    """Same bit-fixing search against a unique-first-bit oracle."""
    bits = []
    g = f
    for _ in range(f.widths[0]):
        b = yield g
        bits.append(b)
        g = fix_first_block_prefix(g, (b,))
    if fault_active("machine-skip-final-eval"):
        return bits[-1] if bits else 0
    return evaluate(f, (tuple(bits),))


def machine_sat_identity(f: Family):
    """One oracle call on the input itself; returns the answer unchanged."""
    b = yield f
    return b


def machine_usat_identity(f: Family):
    b = yield f
    return b


MACHINES: dict[str, MachineSpec] = {
    "sat-via-val": MachineSpec("sat-via-val", machine_sat_via_val,
                               ProblemKind.VAL, lambda f: 1, _one_block),
    "usat-via-uval": MachineSpec("usat-via-uval", machine_usat_via_uval,
                                 ProblemKind.UVAL, lambda f: 1, _one_block),
    "sat-identity": MachineSpec("sat-identity", machine_sat_identity,
                                ProblemKind.SAT, lambda f: f.level, lambda f: None),
    "usat-identity": MachineSpec("usat-identity", machine_usat_identity,
                                 ProblemKind.USAT, lambda f: f.level, lambda f: None),
}


def run_adversarial(machine: str | MachineSpec, input: Family,
                    oracle: ProblemId | None = None,
                    path_cap: int = DEFAULT_PATH_CAP,
                    cap: int | None = None) -> AdversaryTree:
    """Explore every adversarial resolution of the machine's oracle answers.

    Forced answers (singleton oracle values) are followed directly; BOTH
    values branch into both answers.  Raises PathCapExceeded when the leaf
    count would pass ``path_cap``.
    """
    spec = MACHINES[machine] if isinstance(machine, str) else machine
    spec.validate(input)
    if path_cap < 1:
        raise PathCapExceeded("path cap must be >= 1")
    problem = oracle or ProblemId(spec.oracle_kind, spec.oracle_level(input))

    leaves: list[Transcript] = []
    max_calls = 0

    def explore(prefix: tuple[int, ...]) -> None:
        nonlocal max_calls
        gen = spec.run(input)
        calls: list[OracleCall] = []
        try:
            query = next(gen)
            while True:
                value = solve(problem, query, cap=cap)
                j = len(calls)
                if j < len(prefix):
                    answer = prefix[j]
                    if answer not in value:
                        raise AssertionError("replayed answer left the oracle's value")
                elif value is PromiseValue.BOTH:
                    replay = tuple(c.answer for c in calls)
                    explore(replay + (0,))
                    explore(replay + (1,))
                    gen.close()
                    return
                else:
                    answer = 0 if 0 in value else 1
                calls.append(OracleCall(query, answer, value is not PromiseValue.BOTH))
                query = gen.send(answer)
        except StopIteration as stop:
            if len(leaves) >= path_cap:
                raise PathCapExceeded(f"more than {path_cap} adversarial paths") from None
            leaves.append(Transcript(tuple(calls), int(stop.value)))
            max_calls = max(max_calls, len(calls))

    explore(())
    return AdversaryTree(tuple(leaves), max_calls)
