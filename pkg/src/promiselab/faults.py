"""Deliberate single-site faults for sensitivity testing.

Each name below switches one documented wrong turn inside a gadget or oracle
machine.  The verification campaigns must catch every one of them; a fault
that slips through exhaustive checking means the checks are too weak.

Known faults:

- ``gadget-drop-row-negation``: the lex-max gadget emits its row copies
  un-negated, so rows assert satisfiability instead of refuting it.
- ``gadget-skip-last-row``: the gadget omits the final (tail-free) row,
  leaving the last bit of the witness unconstrained.
- ``sat-to-maxval-positive-guard``: the satisfiability-to-maximum transform
  guards with the new variable instead of its negation.
- ``machine-skip-final-eval``: the bit-fixing machine returns its last oracle
  answer without evaluating the assembled assignment.
- ``uval-usat-fix-zero``: the unique-value-to-unique-sat transform pins the
  first bit to 0 instead of 1.
"""

from __future__ import annotations

from contextlib import contextmanager

KNOWN_FAULTS = frozenset({
    "gadget-drop-row-negation",
    "gadget-skip-last-row",
    "sat-to-maxval-positive-guard",
    "machine-skip-final-eval",
    "uval-usat-fix-zero",
})

_active: set[str] = set()


def fault_active(name: str) -> bool:
    return name in _active


@contextmanager
def inject(name: str):
    """Enable one named fault for the duration of the with-block."""
    if name not in KNOWN_FAULTS:
        raise ValueError(f"unknown fault {name!r}; known: {sorted(KNOWN_FAULTS)}")
    _active.add(name)
    try:
        yield
    finally:
        _active.discard(name)
